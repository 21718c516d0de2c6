//! The full tensor-pullback range of the module invariant.

use std::time::Instant;

use kucomm_core::multisym::mu_pullback_oracle;

#[test]
fn mu_pullback_matches_formula_through_weight_6() {
    let start = Instant::now();
    for total in 5..=6u32 {
        for a in 0..=total {
            let b = total - a;
            let rank = total as usize;
            let r = mu_pullback_oracle(a, b, rank, rank).unwrap();
            assert!(r.hypothesis_met);
            assert_eq!(r.computed, r.formula, "z({a},{b}) at ranks ({rank},{rank})");
        }
    }
    println!("weights 5..6 verified in {:?}", start.elapsed());
}
