//! Exact binomial tails in log space.
//!
//! Accept rates of i.i.d.-per-copy provers are binomial tails, so they can
//! be computed exactly instead of estimated. Terms are summed as
//! exp(log C(n,k) + k·log p + (n−k)·log(1−p)) after factoring out the
//! largest exponent.

/// Pr[Bin(n, p) >= t].
pub fn binomial_tail_geq(n: u64, t: u64, p: f64) -> f64 {
    assert!((0.0..=1.0).contains(&p), "p must be a probability");
    if t == 0 {
        return 1.0;
    }
    if t > n {
        return 0.0;
    }
    if p == 0.0 {
        return 0.0; // t >= 1 here
    }
    if p == 1.0 {
        return 1.0;
    }

    let ln_fact = ln_factorials(n);
    let ln_p = p.ln();
    let ln_q = (-p).ln_1p(); // ln(1-p), stable for small p

    let mut log_terms = Vec::with_capacity((n - t + 1) as usize);
    let mut max_log = f64::NEG_INFINITY;
    for k in t..=n {
        let lt = ln_fact[n as usize] - ln_fact[k as usize] - ln_fact[(n - k) as usize]
            + k as f64 * ln_p
            + (n - k) as f64 * ln_q;
        if lt > max_log {
            max_log = lt;
        }
        log_terms.push(lt);
    }
    let sum: f64 = log_terms.iter().map(|&lt| (lt - max_log).exp()).sum();
    (max_log.exp() * sum).clamp(0.0, 1.0)
}

/// ln(k!) for k = 0..=n.
fn ln_factorials(n: u64) -> Vec<f64> {
    let mut v = Vec::with_capacity(n as usize + 1);
    v.push(0.0);
    let mut acc = 0.0;
    for k in 1..=n {
        acc += (k as f64).ln();
        v.push(acc);
    }
    v
}
