//! Property tests over randomized instances.

use proptest::prelude::*;

use qia_core::bits::Bitstring;
use qia_core::game::{chernoff_bound, chsh_predicate, win_count, win_count_encoded};
use qia_core::info::{
    imax_oracle, imax_smoothed, ispec_imax_relation_holds, ispec_smoothed, mutual_information,
    JointDistribution, SmoothingBudget,
};

fn joint_strategy(nx: usize, nm: usize) -> impl Strategy<Value = JointDistribution> {
    proptest::collection::vec(0.0f64..1.0, nx * nm).prop_filter_map("all-zero", move |cells| {
        let mass: f64 = cells.iter().sum();
        if mass <= 0.0 {
            return None;
        }
        let rows: Vec<Vec<f64>> = cells
            .chunks(nm)
            .map(|row| row.iter().map(|v| v / mass).collect())
            .collect();
        JointDistribution::new(rows).ok()
    })
}

proptest! {
    #[test]
    fn win_count_is_sum_of_predicates(
        bits in proptest::collection::vec(0u8..2, 4 * 16),
    ) {
        let n = 16;
        let strs: Vec<Bitstring> = bits
            .chunks(n)
            .map(|c| Bitstring::from_bits(c).unwrap())
            .collect();
        let direct: u32 = (0..n)
            .map(|i| chsh_predicate(strs[0].bit(i), strs[1].bit(i), strs[2].bit(i), strs[3].bit(i)) as u32)
            .sum();
        prop_assert_eq!(win_count(&strs[0], &strs[1], &strs[2], &strs[3]).unwrap(), direct);
        prop_assert_eq!(
            win_count_encoded(n as u32, strs[0].to_uint(), strs[1].to_uint(), strs[2].to_uint(), strs[3].to_uint()),
            direct
        );
    }

    #[test]
    fn smoothing_budget_orders_measures(p in joint_strategy(4, 4), g1 in 0.0f64..1.0, g2 in 0.0f64..1.0) {
        let (lo, hi) = if g1 <= g2 { (g1, g2) } else { (g2, g1) };
        let lo = SmoothingBudget::new(lo).unwrap();
        let hi = SmoothingBudget::new(hi).unwrap();
        prop_assert!(imax_smoothed(&p, lo).unwrap() >= imax_smoothed(&p, hi).unwrap() - 1e-12);
        prop_assert!(ispec_smoothed(&p, lo).unwrap() >= ispec_smoothed(&p, hi).unwrap() - 1e-12);
    }

    #[test]
    fn mutual_information_at_most_imax(p in joint_strategy(3, 5)) {
        prop_assert!(
            mutual_information(&p).unwrap()
                <= imax_smoothed(&p, SmoothingBudget::ZERO).unwrap() + 1e-9
        );
    }

    #[test]
    fn waterfill_matches_oracle(p in joint_strategy(4, 4), g in 0.0f64..0.5) {
        let budget = SmoothingBudget::new(g).unwrap();
        let fast = imax_smoothed(&p, budget).unwrap();
        let slow = imax_oracle(&p, budget).unwrap();
        prop_assert!((fast - slow).abs() <= 2.0_f64.powi(-30), "{} vs {}", fast, slow);
    }

    #[test]
    fn spectrum_relation_always_holds(p in joint_strategy(5, 3), g in 0.01f64..0.288) {
        prop_assert!(ispec_imax_relation_holds(&p, g).unwrap());
    }

    #[test]
    fn chernoff_stays_in_unit_interval(n in 1u64..100_000, d in 0.0f64..1.0, g in 0.0f64..1.0) {
        let b = chernoff_bound(n, d, g);
        prop_assert!((0.0..=1.0).contains(&b));
    }
}
