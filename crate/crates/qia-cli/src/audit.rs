//! Audit of the headline parameter arithmetic.
//!
//! The published parameter set claims a 0-vs-100-bit separation at
//! n = 1.1697×10⁴ with δ = 1/12 and γ = 0.01. Each audit line evaluates one
//! formula at its stated inputs and prints the computed value next to the
//! claimed one. Mismatches are flagged, never corrected: the completeness
//! figure 0.903 matches n = 1.1697×10⁴, while the 100-bit soundness
//! threshold only comes out at n = 1.1697×10⁵ — the audit shows both
//! evaluations side by side and leaves the discrepancy standing.

use serde::Serialize;

use crate::report::format_sig;

pub const HEADLINE_N: f64 = 1.1697e4;
pub const HEADLINE_DELTA: f64 = 1.0 / 12.0;
pub const HEADLINE_EPSILON: f64 = 0.02;

#[derive(Debug, Clone, Serialize)]
pub struct AuditLine {
    pub name: String,
    pub formula: String,
    pub inputs: String,
    pub computed: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub claimed: Option<f64>,
    /// None when there is nothing to compare against.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matches_claim: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl AuditLine {
    fn new(name: &str, formula: &str, inputs: String, computed: f64) -> Self {
        AuditLine {
            name: name.into(),
            formula: formula.into(),
            inputs,
            computed,
            claimed: None,
            matches_claim: None,
            note: None,
        }
    }

    fn claim(mut self, claimed: f64, tolerance: f64) -> Self {
        self.claimed = Some(claimed);
        self.matches_claim = Some((self.computed - claimed).abs() <= tolerance);
        self
    }

    fn note(mut self, note: &str) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Soundness information threshold: 2ε²n/ln2 − 4·log₂(1/δ) − log₂log₂(1/δ) − 19.
pub fn soundness_info_threshold(epsilon: f64, n: f64, delta: f64) -> f64 {
    let log_inv_delta = (1.0 / delta).log2();
    2.0 * epsilon * epsilon * n / std::f64::consts::LN_2
        - 4.0 * log_inv_delta
        - log_inv_delta.log2()
        - 19.0
}

pub fn audit_parameters() -> Vec<AuditLine> {
    let mut lines = Vec::new();

    // 72 delta^2 at delta = 1/12 is exactly 1/2 (72/144, a dyadic rational,
    // so the f64 computation is exact too)
    let cap = 72.0 * HEADLINE_DELTA * HEADLINE_DELTA;
    lines.push(
        AuditLine::new(
            "soundness_cap",
            "72 delta^2",
            "delta=1/12".to_string(),
            cap,
        )
        .claim(0.5, 0.0),
    );

    // completeness at the headline n
    let completeness = 1.0 - (-2.0 * HEADLINE_N / 1e4).exp();
    lines.push(
        AuditLine::new(
            "quantum_completeness",
            "1 - exp(-2n/10^4)",
            format!("n={HEADLINE_N}"),
            completeness,
        )
        // the published figure truncates 0.90361 to three decimals
        .claim(0.903, 1e-3)
        .note("gamma = 0.01 noise; formula is the Chernoff bound at margin gamma"),
    );

    // the soundness threshold at the stated inputs...
    let at_stated = soundness_info_threshold(HEADLINE_EPSILON, HEADLINE_N, HEADLINE_DELTA);
    lines.push(
        AuditLine::new(
            "soundness_info_threshold",
            "2 eps^2 n / ln2 - 4 log2(1/delta) - log2 log2(1/delta) - 19",
            format!("eps={HEADLINE_EPSILON}, n={HEADLINE_N}, delta=1/12"),
            at_stated,
        )
        .claim(100.0, 0.5)
        .note(
            "FLAGGED: the claimed 100-bit cap does not come out at the stated n; \
             both evaluations are shown and neither is corrected",
        ),
    );

    // ...and at ten times that n, where the claim does come out
    let at_10x = soundness_info_threshold(HEADLINE_EPSILON, HEADLINE_N * 10.0, HEADLINE_DELTA);
    lines.push(
        AuditLine::new(
            "soundness_info_threshold_10x",
            "2 eps^2 n / ln2 - 4 log2(1/delta) - log2 log2(1/delta) - 19",
            format!("eps={HEADLINE_EPSILON}, n={}, delta=1/12", HEADLINE_N * 10.0),
            at_10x,
        )
        .claim(100.0, 0.5)
        .note("the headline figure matches at this n; the 0.903 success figure matches the other"),
    );

    // the asymptotic parameterization: delta = 2^{-n/((ln2) 10^4)} and the
    // threshold 4n/((ln2) 10^4) - log2 log2(1/delta) - 19, evaluated at n = 10^5
    let n = 1e5;
    let log_inv_delta = n / (std::f64::consts::LN_2 * 1e4); // log2(1/delta)
    let asymptotic = 4.0 * n / (std::f64::consts::LN_2 * 1e4) - log_inv_delta.log2() - 19.0;
    lines.push(
        AuditLine::new(
            "asymptotic_threshold_1e5",
            "4n/((ln2) 10^4) - log2 log2(1/delta) - 19, delta = 2^{-n/((ln2) 10^4)}",
            format!("n={n}"),
            asymptotic,
        )
        .note("self-calibrating delta; no claimed figure to compare"),
    );

    // the realized threshold margin: t = ceil(0.83 n) overshoots the stated
    // eps = 0.02 slightly because (1+sqrt(5))/4 = 0.809017 and the ceiling
    let n_int = HEADLINE_N as u32;
    let t = qia_core::GameSpec::with_standard_threshold(n_int).unwrap().t();
    let eps_realized = crate::experiments::margin_epsilon(n_int, t);
    lines.push(
        AuditLine::new(
            "realized_margin",
            "ceil(0.83 n)/n - (1+sqrt(5))/4",
            format!("n={n_int}, t={t}"),
            eps_realized,
        )
        .claim(HEADLINE_EPSILON, 2e-3)
        .note("the integer ceiling makes the realized margin slightly larger than 0.02"),
    );

    lines
}

pub fn render_audit(lines: &[AuditLine]) -> String {
    let mut out = String::new();
    out.push_str("parameter audit (computed values never overwrite claimed ones)\n");
    for line in lines {
        let claim = match (line.claimed, line.matches_claim) {
            (Some(c), Some(true)) => format!("  claimed {c} (agrees)"),
            (Some(c), Some(false)) => format!("  claimed {c} (MISMATCH)"),
            _ => String::new(),
        };
        out.push_str(&format!(
            "  {:<32} = {:<12} [{} @ {}]{}\n",
            line.name,
            format_sig(line.computed, 6),
            line.formula,
            line.inputs,
            claim
        ));
        if let Some(note) = &line.note {
            out.push_str(&format!("      note: {note}\n"));
        }
    }
    out
}
