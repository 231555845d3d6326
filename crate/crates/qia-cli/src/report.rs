//! Report types shared by the experiment drivers.
//!
//! Every bound that appears in a report names its formula and inputs next
//! to its value; claimed figures (when a published number exists for the
//! same quantity) ride along and are never overwritten by computed ones.

use serde::Serialize;

/// One named quantity: formula, inputs, computed value, optional claim.
#[derive(Debug, Clone, Serialize)]
pub struct BoundEntry {
    pub name: String,
    pub formula: String,
    pub inputs: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub claimed: Option<f64>,
}

impl BoundEntry {
    pub fn new(name: &str, formula: &str, inputs: String, value: f64) -> Self {
        BoundEntry {
            name: name.into(),
            formula: formula.into(),
            inputs,
            value,
            claimed: None,
        }
    }

    pub fn with_claim(mut self, claimed: f64) -> Self {
        self.claimed = Some(claimed);
        self
    }
}

/// Exact information accounting attached to classical runs at small n.
#[derive(Debug, Clone, Serialize)]
pub struct ImaxAccounting {
    pub declared_width: u32,
    pub imax_unsmoothed: f64,
    pub mutual_information: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub experiment: String,
    pub n: u32,
    pub t: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strategy: Option<String>,
    pub trials: u64,
    pub seed: u64,
    pub accept_rate: f64,
    pub std_error: f64,
    pub entries: Vec<BoundEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub imax_accounting: Option<ImaxAccounting>,
    /// Whether the empirical rate satisfied its governing analytic bound
    /// within 3 standard errors.
    pub bound_satisfied: bool,
}

impl BoundReport {
    pub fn entry(&self, name: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "experiment: {}  n={} t={} trials={} seed={}\n",
            self.experiment, self.n, self.t, self.trials, self.seed
        ));
        if let Some(g) = self.gamma {
            out.push_str(&format!("gamma: {g}\n"));
        }
        if let Some(s) = &self.strategy {
            out.push_str(&format!("strategy: {s}\n"));
        }
        out.push_str(&format!(
            "accept rate: {} +- {} (SE)\n",
            format_sig(self.accept_rate, 6),
            format_sig(self.std_error, 3)
        ));
        for e in &self.entries {
            out.push_str(&format!(
                "  {:<28} = {:<14} [{} @ {}]",
                e.name,
                format_sig(e.value, 6),
                e.formula,
                e.inputs
            ));
            if let Some(c) = e.claimed {
                out.push_str(&format!("  claimed: {c}"));
            }
            out.push('\n');
        }
        if let Some(acc) = &self.imax_accounting {
            out.push_str(&format!(
                "  memory accounting: declared {} bits, I_max^0 = {}, I = {}\n",
                acc.declared_width,
                format_sig(acc.imax_unsmoothed, 6),
                format_sig(acc.mutual_information, 6)
            ));
        }
        out.push_str(&format!(
            "bound satisfied within 3 SE: {}\n",
            if self.bound_satisfied { "yes" } else { "NO" }
        ));
        out
    }
}

/// Six significant digits, plain decimal, '.' separator, no locale.
pub fn format_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (sig as i32 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}
