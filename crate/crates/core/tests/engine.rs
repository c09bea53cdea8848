use approx::assert_abs_diff_eq;
use macfcs_core::{GaussianSystem, VariableSet};
use proptest::prelude::*;

const LATENTS: usize = 6;
const NAMES: [&str; 5] = ["A", "B", "C", "D", "E"];

fn system() -> impl Strategy<Value = GaussianSystem> {
    prop::collection::vec(prop::collection::vec(-2.0..2.0f64, LATENTS), NAMES.len()).prop_map(
        |rows| {
            let mut sys = GaussianSystem::new(LATENTS);
            for (name, row) in NAMES.iter().zip(rows) {
                sys.add(name, row).unwrap();
            }
            sys
        },
    )
}

fn set(sys: &GaussianSystem, names: &[&str]) -> VariableSet {
    sys.set(names).unwrap()
}

/// `I(A;B|C) = h(A,C) + h(B,C) - h(A,B,C) - h(C)` through the
/// covariance route.
fn mi_via_entropies(sys: &GaussianSystem, a: &[&str], b: &[&str], c: &[&str]) -> f64 {
    let h = |names: Vec<&str>| {
        if names.is_empty() {
            0.0
        } else {
            sys.diff_entropy(&set(sys, &names)).unwrap()
        }
    };
    h([a, c].concat()) + h([b, c].concat()) - h([a, b, c].concat()) - h(c.to_vec())
}

proptest! {
    #[test]
    fn chain_rule(sys in system()) {
        let i = |a: &[&str], b: &[&str], c: &[&str]| sys.mutual_info(&set(&sys, a), &set(&sys, b), &set(&sys, c)).unwrap();
        let whole = i(&["A", "B"], &["C", "D"], &["E"]);
        let split = i(&["A"], &["C", "D"], &["E"]) + i(&["B"], &["C", "D"], &["A", "E"]);
        prop_assert!((whole - split).abs() <= 1e-9, "{whole} vs {split}");
    }

    #[test]
    fn symmetry(sys in system()) {
        let ab = sys.mutual_info(&set(&sys, &["A", "B"]), &set(&sys, &["C"]), &set(&sys, &["D"])).unwrap();
        let ba = sys.mutual_info(&set(&sys, &["C"]), &set(&sys, &["A", "B"]), &set(&sys, &["D"])).unwrap();
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn matches_covariance_route(sys in system()) {
        let direct = sys.mutual_info_by_name(&["A"], &["B", "C"], &["D"]).unwrap();
        let via = mi_via_entropies(&sys, &["A"], &["B", "C"], &["D"]);
        prop_assert!((direct - via).abs() <= 1e-8, "{direct} vs {via}");
        prop_assert!(direct >= 0.0);
    }

    #[test]
    fn independent_conditioning_changes_nothing(rows in prop::collection::vec(prop::collection::vec(-2.0..2.0f64, 4), 3), w in 0.1..3.0f64) {
        // A, B, C live on the first four latents; D only on the fifth.
        let mut sys = GaussianSystem::new(5);
        for (name, mut row) in ["A", "B", "C"].into_iter().zip(rows) {
            row.push(0.0);
            sys.add(name, row).unwrap();
        }
        sys.add("D", vec![0.0, 0.0, 0.0, 0.0, w]).unwrap();
        let plain = sys.mutual_info_by_name(&["A"], &["B"], &["C"]).unwrap();
        let extra = sys.mutual_info_by_name(&["A"], &["B"], &["C", "D"]).unwrap();
        prop_assert!((plain - extra).abs() <= 1e-12);
    }

    #[test]
    fn conditioning_on_the_input_kills_information(p in 0.01..100.0f64, n in 0.01..10.0f64) {
        let mut sys = GaussianSystem::new(3);
        sys.add("X", vec![p.sqrt(), 0.0, 0.0]).unwrap();
        sys.add("Z", vec![0.0, n.sqrt(), 0.0]).unwrap();
        sys.add("Y", vec![p.sqrt(), n.sqrt(), 0.0]).unwrap();
        prop_assert_eq!(sys.mutual_info_by_name(&["Y"], &["Z"], &["X", "Y"]).is_err(), true);
        let mi = sys.mutual_info_by_name(&["X"], &["Y"], &[]).unwrap();
        prop_assert!((mi - 0.5 * (1.0 + p / n).log2()).abs() <= 1e-9);
    }
}

#[test]
fn entropy_of_a_scaled_variable() {
    let mut sys = GaussianSystem::new(1);
    sys.add("X", vec![2.0]).unwrap();
    let h = sys.diff_entropy(&set(&sys, &["X"])).unwrap();
    // ½log₂(2πe·4)
    assert_abs_diff_eq!(
        h,
        0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E * 4.0).log2(),
        epsilon = 1e-12
    );
}
