use squarescope_core::curve::random_generic_curve;
use squarescope_core::envelope::{antidiagonal_winding, trace_quadrant_components};
use squarescope_core::{count_by_type, ClosedCurve, SignField};

fn seeded(seed: u64) -> ClosedCurve {
    random_generic_curve(seed, 2 + (seed % 5) as usize, 0.1 + 0.05 * (seed % 3) as f64).unwrap()
}

#[test]
fn winding_parity_matches_zeros_in_a() {
    for seed in 0..10 {
        let c = seeded(seed);
        let f = SignField::new(&c);
        let w = antidiagonal_winding(&c, &f, 1024).unwrap();
        let (counts, out) = count_by_type(&c, &f, 512, 1e-8).unwrap();
        println!("seed {seed}: winding {w}, zeros in A {}, counts {counts:?}", out.zeros_in_region_a());
        assert!(out.failures.is_empty());
        assert_eq!(w.rem_euclid(2) as usize, out.zeros_in_region_a() % 2, "seed {seed}");
    }
}

#[test]
fn seeded_curves_have_no_spanning_component() {
    for seed in 0..5 {
        let c = seeded(seed);
        let f = SignField::new(&c);
        let comps = trace_quadrant_components(&c, &f, 256, 1e-8).unwrap();
        assert!(comps.iter().all(|p| !p.spanning), "seed {seed}");
    }
}
