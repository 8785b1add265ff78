mod common;
mod reference;

use num_complex::Complex64;
use proptest::prelude::*;

use fsifeti::bem::{assemble_influence, FluxDofMap, QuadratureOrders};
use fsifeti::fem::{simply_supported_frequency, BeamProperties};

use common::{beam_frequencies, square};

#[test]
fn bessel_functions_match_frozen_table() {
    let err = common::bessel_max_error();
    assert!(err <= 1e-10, "largest error {err:e}");
}

#[test]
fn square_influence_matrices_match_frozen_values() {
    let mesh = square(1.0);
    let (h, g) = assemble_influence(&mesh, 1.0, &FluxDofMap::nodal(&mesh), QuadratureOrders::default()).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            let (hr, hi) = reference::SQUARE_H_K1[i][j];
            let (gr, gi) = reference::SQUARE_G0_K1[i][j];
            assert!((h[(i, j)] - Complex64::new(hr, hi)).norm() <= 1e-8, "H[{i}][{j}] = {}", h[(i, j)]);
            assert!((g[(i, j)] - Complex64::new(gr, gi)).norm() <= 1e-8, "G0[{i}][{j}] = {}", g[(i, j)]);
        }
    }
}

#[test]
fn influence_matrices_match_adaptive_quadrature() {
    for (mesh, k) in common::oracle_cases() {
        let (eh, eg) = common::influence_max_error(&mesh, k);
        assert!(eh <= 1e-8 && eg <= 1e-8, "k = {k}: H error {eh:e}, G0 error {eg:e}");
    }
}

#[test]
fn laplace_limit_row_sums_vanish() {
    for (w, ht, density) in common::LAPLACE_RECTANGLES {
        let s = common::laplace_max_row_sum(w, ht, density);
        assert!(s <= 1e-3, "{w} x {ht}: {s:e}");
    }
}

#[test]
fn beam_eigenfrequencies_match_analytic() {
    let props = BeamProperties::steel_wall();
    let f = beam_frequencies(64);
    for mode in 1..=3 {
        let exact = simply_supported_frequency(&props, 10.0, mode);
        let rel = (f[mode - 1] - exact).abs() / exact;
        assert!(rel <= 0.01, "mode {mode}: {} Hz vs {exact} Hz", f[mode - 1]);
    }
    assert!((simply_supported_frequency(&props, 10.0, 1) - 12.83).abs() < 0.01);
}

#[test]
fn beam_eigenfrequency_converges_at_cubic_rate() {
    let props = BeamProperties::steel_wall();
    let exact = simply_supported_frequency(&props, 10.0, 1);
    let errs: Vec<f64> = [2, 4, 8].iter().map(|&n| (beam_frequencies(n)[0] - exact).abs()).collect();
    for w in errs.windows(2) {
        assert!(w[0] / w[1] > 8.0, "error ratio {} ({:?})", w[0] / w[1], errs);
    }
}

fn frame_strategy() -> impl Strategy<Value = (usize, usize, Vec<f64>)> {
    (2usize..9).prop_flat_map(|m| (m + 1..m + 12).prop_flat_map(move |n| (Just(n), Just(m), prop::collection::vec(-1.0f64..1.0, n * m))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projector_algebra((n, m, vals) in frame_strategy()) {
        let (pl, idem, sym) = common::projector_errors(n, m, &vals);
        prop_assert!(pl <= 1e-12, "PL != 0: {pl:e}");
        prop_assert!(idem <= 1e-12, "P^2 != P: {idem:e}");
        prop_assert!(sym <= 1e-12, "P^T != P: {sym:e}");
    }
}
