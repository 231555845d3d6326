//! Information measures on finite classical joint distributions.
//!
//! Three quantities on a joint p(x, m):
//!
//! * `mutual_information` — the familiar H(X) + H(M) − H(XM), in bits.
//! * `imax_smoothed` — smoothed max-information I_max^γ: the smallest c such
//!   that, after discarding at most a γ trace-distance budget of mass, every
//!   cell is dominated by 2^c · p_X(x)·p_M(m). Computed exactly by sorting
//!   cells by their joint-to-product ratio and water-filling the mass budget
//!   from the highest ratio down.
//! * `ispec_smoothed` — smoothed spectrum max-information I_s^γ: the smallest
//!   c such that the p-mass of cells whose ratio exceeds 2^c is at most γ.
//!   A quantile of the log-ratio distribution.
//!
//! Smoothing removes mass and never re-adds it: clipping a cell to its cap
//! is the removal-optimal move, and re-adding mass elsewhere cannot lower
//! the maximum ratio. The trace-distance budget therefore buys 2γ of
//! removable mass (½‖p − p'‖₁ ≤ γ with p' ≤ p pointwise). Forcing p' to stay
//! normalized spends the budget twice (remove, then re-add under the cap),
//! which is `imax_smoothed_normalized`; the two readings differ by exactly a
//! factor of two in γ. Values are floored at 0 throughout: a budget that
//! swallows all excess yields 0, not −∞. Logs are base 2.

use rand::Rng;

use crate::error::{Error, Result};

const NORM_TOL: f64 = 1e-9;

/// Trace-distance (or mass-quantile) budget γ ∈ [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothingBudget {
    gamma: f64,
}

impl SmoothingBudget {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::InvalidParam(format!(
                "smoothing budget must lie in [0,1], got {gamma}"
            )));
        }
        Ok(SmoothingBudget { gamma })
    }

    pub const ZERO: SmoothingBudget = SmoothingBudget { gamma: 0.0 };

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// A nonnegative matrix p(x, m) with total mass in (0, 1].
///
/// Subnormalized matrices are representable (they arise as smoothed
/// variants), but the measures below insist on exact normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    p: Vec<f64>, // row-major, p[x * nm + m]
    nx: usize,
    nm: usize,
}

impl JointDistribution {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::InvalidParam("joint distribution is empty".into()));
        }
        let nm = rows[0].len();
        let mut p = Vec::with_capacity(rows.len() * nm);
        for row in &rows {
            if row.len() != nm {
                return Err(Error::InvalidParam("ragged probability matrix".into()));
            }
            for &v in row {
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidParam(format!("invalid cell mass {v}")));
                }
                p.push(v);
            }
        }
        let joint = JointDistribution {
            p,
            nx: rows.len(),
            nm,
        };
        let mass = joint.total_mass();
        if mass <= 0.0 || mass > 1.0 + NORM_TOL {
            return Err(Error::InvalidParam(format!(
                "total mass {mass} outside (0, 1]"
            )));
        }
        Ok(joint)
    }

    /// Product of two marginals (always a valid, zero-information joint).
    pub fn product(px: &[f64], pm: &[f64]) -> Result<Self> {
        let rows = px
            .iter()
            .map(|&a| pm.iter().map(|&b| a * b).collect())
            .collect();
        JointDistribution::new(rows)
    }

    /// A random joint for property sweeps: uniform cell weights, a `sparsity`
    /// fraction of cells forced to zero, then normalized.
    pub fn random<R: Rng + ?Sized>(nx: usize, nm: usize, sparsity: f64, rng: &mut R) -> Self {
        let mut rows = vec![vec![0.0; nm]; nx];
        loop {
            let mut mass = 0.0;
            for row in rows.iter_mut() {
                for cell in row.iter_mut() {
                    let v: f64 = rng.random();
                    *cell = if rng.random::<f64>() < sparsity { 0.0 } else { v };
                    mass += *cell;
                }
            }
            if mass > 0.0 {
                for row in rows.iter_mut() {
                    for cell in row.iter_mut() {
                        *cell /= mass;
                    }
                }
                return JointDistribution::new(rows).expect("normalized by construction");
            }
        }
    }

    /// Parses the plain-text fixture format: one row per x, whitespace
    /// separated cell masses; blank lines and `#` comments ignored.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row: Vec<f64> = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<f64>()
                        .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))
                })
                .collect::<Result<_>>()?;
            rows.push(row);
        }
        JointDistribution::new(rows)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for x in 0..self.nx {
            let row: Vec<String> = (0..self.nm).map(|m| format!("{}", self.cell(x, m))).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.nx, self.nm)
    }

    pub fn cell(&self, x: usize, m: usize) -> f64 {
        self.p[x * self.nm + m]
    }

    pub fn total_mass(&self) -> f64 {
        self.p.iter().sum()
    }

    /// Row sums p_X(x).
    pub fn marginal_x(&self) -> Vec<f64> {
        (0..self.nx)
            .map(|x| (0..self.nm).map(|m| self.cell(x, m)).sum())
            .collect()
    }

    /// Column sums p_M(m).
    pub fn marginal_m(&self) -> Vec<f64> {
        (0..self.nm)
            .map(|m| (0..self.nx).map(|x| self.cell(x, m)).sum())
            .collect()
    }

    fn require_normalized(&self) -> Result<()> {
        let mass = self.total_mass();
        if (mass - 1.0).abs() > NORM_TOL {
            return Err(Error::Unnormalized { mass });
        }
        Ok(())
    }

    /// Cells with positive joint mass as (joint, product-of-marginals, ratio),
    /// against the marginals of this distribution.
    fn support_cells(&self) -> Vec<Cell> {
        let px = self.marginal_x();
        let pm = self.marginal_m();
        let mut cells = Vec::new();
        for x in 0..self.nx {
            for m in 0..self.nm {
                let joint = self.cell(x, m);
                if joint > 0.0 {
                    let prod = px[x] * pm[m];
                    // joint <= min(p_X, p_M), so a positive cell cannot sit on
                    // a zero marginal
                    assert!(prod > 0.0, "positive cell with zero marginal");
                    cells.push(Cell {
                        joint,
                        prod,
                        ratio: joint / prod,
                    });
                }
            }
        }
        cells
    }
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    joint: f64,
    prod: f64,
    ratio: f64,
}

fn entropy_bits(dist: &[f64]) -> f64 {
    dist.iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| -v * v.log2())
        .sum()
}

/// Mutual information I(X:M) = H(X) + H(M) − H(XM), in bits.
pub fn mutual_information(p: &JointDistribution) -> Result<f64> {
    p.require_normalized()?;
    let h_x = entropy_bits(&p.marginal_x());
    let h_m = entropy_bits(&p.marginal_m());
    let h_xm = entropy_bits(&p.p);
    Ok(h_x + h_m - h_xm)
}

/// Smoothed max-information I_max^γ(X:M) in bits, by exact water-filling.
///
/// Finds the minimal cap T ≥ 1 whose excess mass
/// Σ max(0, p(x,m) − T·p_X(x)p_M(m)) fits in the removal budget 2γ, and
/// returns log₂ T. The marginals are those of the *original* p.
pub fn imax_smoothed(p: &JointDistribution, budget: SmoothingBudget) -> Result<f64> {
    p.require_normalized()?;
    let cap = min_cap_for_removal(&p.support_cells(), 2.0 * budget.gamma());
    Ok(cap.max(1.0).log2())
}

/// The normalized-smoothing reading of I_max^γ: the perturbed joint must
/// remain a probability distribution, so removed mass is re-added under the
/// cap and the budget buys only γ of removal. Equals `imax_smoothed` at γ/2.
pub fn imax_smoothed_normalized(p: &JointDistribution, budget: SmoothingBudget) -> Result<f64> {
    p.require_normalized()?;
    // Re-adding r mass within the cap is always possible once T >= 1
    // (total cap mass T >= 1 >= remaining mass), and costs another r of
    // trace distance, so the removable mass is gamma, not 2*gamma.
    let cap = min_cap_for_removal(&p.support_cells(), budget.gamma());
    Ok(cap.max(1.0).log2())
}

/// Minimal cap T such that clipping every cell to T·prod removes at most
/// `removal_budget` of joint mass. Walks cells sorted by ratio, highest
/// first; in the segment below the k-th distinct ratio the excess is
/// linear in T, so the crossing point is exact.
fn min_cap_for_removal(cells: &[Cell], removal_budget: f64) -> f64 {
    let mut sorted: Vec<&Cell> = cells.iter().collect();
    sorted.sort_by(|a, b| b.ratio.partial_cmp(&a.ratio).expect("finite ratios"));

    let mut joint_above = 0.0;
    let mut prod_above = 0.0;
    for (k, cell) in sorted.iter().enumerate() {
        joint_above += cell.joint;
        prod_above += cell.prod;
        let next_ratio = sorted.get(k + 1).map_or(0.0, |c| c.ratio);
        // excess(T) = joint_above − T·prod_above for T in [next_ratio, ratio_k]
        let crossing = (joint_above - removal_budget) / prod_above;
        if crossing >= next_ratio {
            return crossing.max(0.0);
        }
        // otherwise excess(next_ratio) is still within budget; keep lowering T
    }
    0.0 // the whole distribution fits in the budget
}

/// Smoothed spectrum max-information I_s^γ(X:M) in bits: the γ-quantile of
/// the log-ratio spectrum. With γ = 0 this is the max log-ratio over the
/// support.
pub fn ispec_smoothed(p: &JointDistribution, budget: SmoothingBudget) -> Result<f64> {
    p.require_normalized()?;
    let mut cells = p.support_cells();
    cells.sort_by(|a, b| b.ratio.partial_cmp(&a.ratio).expect("finite ratios"));

    let gamma = budget.gamma();
    let mut mass_at_or_above = 0.0;
    let mut i = 0;
    while i < cells.len() {
        let ratio = cells[i].ratio;
        // one quantile level = all cells sharing this exact ratio
        while i < cells.len() && cells[i].ratio == ratio {
            mass_at_or_above += cells[i].joint;
            i += 1;
        }
        if mass_at_or_above > gamma {
            // mass strictly above this ratio is <= gamma, so c = log2(ratio)
            // satisfies the constraint and nothing smaller does
            return Ok(ratio.log2().max(0.0));
        }
    }
    Ok(0.0) // budget covers the entire spectrum
}

/// Independent check of `imax_smoothed`: bisect on the cap exponent c with
/// an explicit feasibility test that constructs the clipped matrix
/// p'(x,m) = min(p(x,m), 2^c·p_X p_M) and measures ½‖p − p'‖₁ directly.
/// Deliberately shares no code with the water-filling path.
pub fn imax_oracle(p: &JointDistribution, budget: SmoothingBudget) -> Result<f64> {
    const CELL_LIMIT: usize = 64;
    let (nx, nm) = p.dims();
    if nx * nm > CELL_LIMIT {
        return Err(Error::AlphabetTooLarge {
            cells: nx * nm,
            limit: CELL_LIMIT,
        });
    }
    p.require_normalized()?;

    let px = p.marginal_x();
    let pm = p.marginal_m();
    let gamma = budget.gamma();

    let feasible = |c: f64| -> bool {
        let cap = c.exp2();
        let mut l1 = 0.0;
        for x in 0..nx {
            for m in 0..nm {
                let original = p.cell(x, m);
                let clipped = original.min(cap * px[x] * pm[m]);
                l1 += (original - clipped).abs();
            }
        }
        0.5 * l1 <= gamma
    };

    if feasible(0.0) {
        return Ok(0.0);
    }
    // upper bound: the unsmoothed max ratio is always feasible
    let mut hi = p
        .support_cells()
        .iter()
        .map(|c| c.ratio)
        .fold(1.0_f64, f64::max)
        .log2()
        + 1e-9;
    let mut lo = 0.0;
    for _ in 0..90 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Whether the spectrum/max-information relation
/// I_s^{18γ²} ≤ I_max^γ + log₂((8+γ²)/γ²) + 2 holds for this joint.
/// Requires 0 < γ ≤ 1/√12. The spectrum budget 18γ² may exceed 1; it is
/// clamped, which only loosens the left-hand side toward 0.
pub fn ispec_imax_relation_holds(p: &JointDistribution, gamma: f64) -> Result<bool> {
    let max_gamma = 1.0 / 12.0_f64.sqrt();
    if !(gamma > 0.0 && gamma <= max_gamma) {
        return Err(Error::InvalidParam(format!(
            "relation requires 0 < gamma <= 1/sqrt(12) = {max_gamma:.6}, got {gamma}"
        )));
    }
    let spectrum_budget = SmoothingBudget::new((18.0 * gamma * gamma).min(1.0))?;
    let lhs = ispec_smoothed(p, spectrum_budget)?;
    let g2 = gamma * gamma;
    let rhs = imax_smoothed(p, SmoothingBudget::new(gamma)?)? + ((8.0 + g2) / g2).log2() + 2.0;
    Ok(lhs <= rhs + 1e-9)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;

    fn budget(g: f64) -> SmoothingBudget {
        SmoothingBudget::new(g).unwrap()
    }

    /// p(00) = p(11) = 1/2: one perfectly correlated uniform bit pair.
    fn correlated_pair() -> JointDistribution {
        JointDistribution::new(vec![vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap()
    }

    fn uniform_product(nx: usize, nm: usize) -> JointDistribution {
        let v = 1.0 / (nx * nm) as f64;
        JointDistribution::new(vec![vec![v; nm]; nx]).unwrap()
    }

    /// Uniform X over n bits with M = the first c bits of X.
    fn prefix_leak_joint(n: u32, c: u32) -> JointDistribution {
        let nx = 1usize << n;
        let nm = 1usize << c;
        let mut rows = vec![vec![0.0; nm]; nx];
        for (x, row) in rows.iter_mut().enumerate() {
            row[x >> (n - c)] = 1.0 / nx as f64;
        }
        JointDistribution::new(rows).unwrap()
    }

    #[test]
    fn mutual_information_examples() {
        assert!(mutual_information(&uniform_product(2, 2)).unwrap().abs() < 1e-12);
        assert!((mutual_information(&correlated_pair()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mutual_information_matches_direct_summation() {
        let p = JointDistribution::new(vec![
            vec![0.5, 1.0 / 6.0],
            vec![1.0 / 6.0, 1.0 / 6.0],
        ])
        .unwrap();
        // independent route: -sum p log p for each of the three entropies
        let h = |v: &[f64]| -> f64 { v.iter().filter(|&&q| q > 0.0).map(|q| -q * q.log2()).sum() };
        let direct = h(&[2.0 / 3.0, 1.0 / 3.0]) + h(&[2.0 / 3.0, 1.0 / 3.0])
            - h(&[0.5, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0]);
        let got = mutual_information(&p).unwrap();
        assert!((got - direct).abs() < 1e-12);
        assert!((got - 0.0441104177484013).abs() < 1e-12);
    }

    #[test]
    fn measures_reject_unnormalized_input() {
        let half = JointDistribution::new(vec![vec![0.25, 0.25]]).unwrap();
        assert!(matches!(
            mutual_information(&half),
            Err(Error::Unnormalized { .. })
        ));
        assert!(imax_smoothed(&half, SmoothingBudget::ZERO).is_err());
        assert!(ispec_smoothed(&half, SmoothingBudget::ZERO).is_err());
    }

    #[test]
    fn independent_variables_have_zero_information() {
        let mut rng = stream_rng(5, 0);
        for _ in 0..20 {
            let px: Vec<f64> = {
                let raw: Vec<f64> = (0..4).map(|_| rng.random::<f64>() + 0.01).collect();
                let s: f64 = raw.iter().sum();
                raw.iter().map(|v| v / s).collect()
            };
            let pm: Vec<f64> = {
                let raw: Vec<f64> = (0..3).map(|_| rng.random::<f64>() + 0.01).collect();
                let s: f64 = raw.iter().sum();
                raw.iter().map(|v| v / s).collect()
            };
            let p = JointDistribution::product(&px, &pm).unwrap();
            for g in [0.0, 0.1, 0.5] {
                assert!(imax_smoothed(&p, budget(g)).unwrap().abs() < 1e-9);
                assert!(ispec_smoothed(&p, budget(g)).unwrap().abs() < 1e-9);
            }
            assert!(mutual_information(&p).unwrap().abs() < 1e-9);
        }
    }

    #[test]
    fn correlated_pair_imax_values() {
        let p = correlated_pair();
        // gamma = 0: max ratio (1/2)/(1/4) = 2
        assert!((imax_smoothed(&p, SmoothingBudget::ZERO).unwrap() - 1.0).abs() < 1e-12);
        // excess above ratio 1 is 1/2, so gamma = 1/4 removes it all
        assert!(imax_smoothed(&p, budget(0.25)).unwrap().abs() < 1e-12);
        // halfway budget: removing 2*gamma = 1/4 leaves cap T with
        // excess(T) = 2*(1/2 - T/4) = 1/4, i.e. T = 3/2
        let half = imax_smoothed(&p, budget(0.125)).unwrap();
        assert!((half - 1.5_f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn correlated_pair_ispec_values() {
        let p = correlated_pair();
        assert!((ispec_smoothed(&p, SmoothingBudget::ZERO).unwrap() - 1.0).abs() < 1e-12);
        // the whole spectrum has mass 1, so a unit budget floors to 0
        assert!(ispec_smoothed(&p, budget(1.0)).unwrap().abs() < 1e-12);
        // below the full diagonal mass the quantile stays at the top level
        assert!((ispec_smoothed(&p, budget(0.99)).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn prefix_leak_law_is_exact() {
        for n in 1..=8u32 {
            for c in 1..=n.min(6) {
                let p = prefix_leak_joint(n, c);
                let v = imax_smoothed(&p, SmoothingBudget::ZERO).unwrap();
                assert_eq!(v, c as f64, "n={n} c={c}");
            }
        }
    }

    #[test]
    fn oracle_agrees_with_waterfill() {
        let mut rng = stream_rng(17, 0);
        for trial in 0..100 {
            let nx = 2 + (trial % 3);
            let nm = 2 + (trial % 2) * 2;
            let p = JointDistribution::random(nx, nm, 0.2, &mut rng);
            for g in [0.0, 0.05, 0.1, 0.25] {
                let fast = imax_smoothed(&p, budget(g)).unwrap();
                let slow = imax_oracle(&p, budget(g)).unwrap();
                assert!(
                    (fast - slow).abs() <= 2.0_f64.powi(-30),
                    "trial {trial} gamma {g}: waterfill {fast} vs oracle {slow}"
                );
            }
        }
    }

    #[test]
    fn oracle_agrees_on_correlated_pair() {
        let p = correlated_pair();
        for g in [0.0, 0.125, 0.25] {
            let fast = imax_smoothed(&p, budget(g)).unwrap();
            let slow = imax_oracle(&p, budget(g)).unwrap();
            assert!((fast - slow).abs() <= 2.0_f64.powi(-30), "gamma {g}");
        }
    }

    #[test]
    fn oracle_refuses_large_alphabets() {
        let p = uniform_product(9, 8);
        assert!(matches!(
            imax_oracle(&p, SmoothingBudget::ZERO),
            Err(Error::AlphabetTooLarge { .. })
        ));
    }

    #[test]
    fn smoothing_is_monotone_in_budget() {
        let mut rng = stream_rng(23, 1);
        for _ in 0..50 {
            let p = JointDistribution::random(4, 4, 0.25, &mut rng);
            let budgets = [0.0, 0.01, 0.05, 0.1, 0.2, 0.5, 1.0];
            for w in budgets.windows(2) {
                let (g1, g2) = (w[0], w[1]);
                assert!(
                    imax_smoothed(&p, budget(g1)).unwrap()
                        >= imax_smoothed(&p, budget(g2)).unwrap() - 1e-12
                );
                assert!(
                    ispec_smoothed(&p, budget(g1)).unwrap()
                        >= ispec_smoothed(&p, budget(g2)).unwrap() - 1e-12
                );
            }
        }
    }

    #[test]
    fn mutual_information_below_unsmoothed_imax() {
        let mut rng = stream_rng(29, 2);
        for _ in 0..50 {
            let p = JointDistribution::random(3, 5, 0.3, &mut rng);
            let mi = mutual_information(&p).unwrap();
            let imax = imax_smoothed(&p, SmoothingBudget::ZERO).unwrap();
            assert!(mi <= imax + 1e-9);
        }
    }

    #[test]
    fn zero_law_both_directions() {
        // products give 0 everywhere (covered above); conversely, a zero
        // unsmoothed imax forces the joint to be the product of marginals
        let mut rng = stream_rng(31, 3);
        for _ in 0..50 {
            let p = JointDistribution::random(3, 3, 0.2, &mut rng);
            let imax = imax_smoothed(&p, SmoothingBudget::ZERO).unwrap();
            let px = p.marginal_x();
            let pm = p.marginal_m();
            let is_product = (0..3)
                .all(|x| (0..3).all(|m| (p.cell(x, m) - px[x] * pm[m]).abs() < 1e-12));
            if imax.abs() < 1e-12 {
                assert!(is_product);
            }
            if is_product {
                assert!(imax.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn relation_examples() {
        assert!(ispec_imax_relation_holds(&uniform_product(2, 2), 0.1).unwrap());
        assert!(ispec_imax_relation_holds(&correlated_pair(), 0.25).unwrap());
    }

    #[test]
    fn relation_randomized_sweep() {
        let mut rng = stream_rng(37, 4);
        for trial in 0..200 {
            let nx = 2 + trial % 7;
            let nm = 2 + (trial / 7) % 7;
            let p = JointDistribution::random(nx, nm, 0.3, &mut rng);
            for g in [0.05, 0.1, 0.28] {
                assert!(ispec_imax_relation_holds(&p, g).unwrap());
            }
        }
    }

    #[test]
    fn relation_rejects_gamma_out_of_range() {
        let p = correlated_pair();
        assert!(ispec_imax_relation_holds(&p, 0.0).is_err());
        assert!(ispec_imax_relation_holds(&p, 0.3).is_err());
    }

    #[test]
    fn normalized_reading_doubles_the_budget() {
        let mut rng = stream_rng(41, 5);
        for _ in 0..30 {
            let p = JointDistribution::random(4, 3, 0.2, &mut rng);
            for g in [0.0, 0.05, 0.2, 0.4] {
                let sub = imax_smoothed(&p, budget(g)).unwrap();
                let norm = imax_smoothed_normalized(&p, budget(g)).unwrap();
                let sub_half = imax_smoothed(&p, budget(g / 2.0)).unwrap();
                assert!((norm - sub_half).abs() < 1e-12);
                // the two readings bracket each other within a factor 2 in gamma
                assert!(sub <= norm + 1e-12);
            }
        }
    }

    #[test]
    fn text_format_round_trip() {
        let p = JointDistribution::new(vec![vec![0.5, 0.125], vec![0.25, 0.125]]).unwrap();
        let reparsed = JointDistribution::parse_text(&p.to_text()).unwrap();
        assert_eq!(p, reparsed);
        let with_comments = "# fixture\n0.5 0.125\n\n0.25 0.125\n";
        assert_eq!(JointDistribution::parse_text(with_comments).unwrap(), p);
        assert!(JointDistribution::parse_text("0.5 oops\n").is_err());
    }
}
