mod common;

use common::{brute_periodic_hurwitz, c, catalan, random_points};
use num_complex::Complex64;
use proptest::prelude::*;
use zlab_core::complex::{format_complex, parse_complex};
use zlab_core::zeta::{
    eval_hurwitz_zeta, eval_periodic_hurwitz, eval_riemann_zeta, EvalControls, HurwitzParameter, PeriodicSequence,
    ShiftedGrid, ZetaError,
};

fn ctl() -> EvalControls {
    EvalControls::default()
}

fn alpha(x: f64) -> HurwitzParameter {
    HurwitzParameter::new(x).unwrap()
}

#[test]
fn riemann_known_values() {
    let pi = std::f64::consts::PI;
    let cases = [
        (c(2.0, 0.0), c(pi * pi / 6.0, 0.0)),
        (c(4.0, 0.0), c(pi.powi(4) / 90.0, 0.0)),
        (c(3.0, 0.0), c(1.202_056_903_159_594_3, 0.0)),
        (c(0.5, 0.0), c(-1.460_354_508_809_586_8, 0.0)),
        (c(0.0, 0.0), c(-0.5, 0.0)),
        (c(-0.5, 0.0), c(-0.207_886_224_977_354_6, 0.0)),
    ];
    for (s, want) in cases {
        let got = eval_riemann_zeta(s, &ctl()).unwrap();
        assert!((got - want).norm() < 1e-11, "zeta({s}) = {got}, want {want}");
    }
}

#[test]
fn first_nontrivial_zeros() {
    for t in [14.134_725_141_734_693, 21.022_039_638_771_555, 25.010_857_580_145_69] {
        let z = eval_riemann_zeta(c(0.5, t), &ctl()).unwrap();
        assert!(z.norm() < 1e-10, "|zeta(1/2 + {t}i)| = {}", z.norm());
    }
}

#[test]
fn catalan_from_periodic_coefficients() {
    let b = PeriodicSequence::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)]).unwrap();
    let got = eval_periodic_hurwitz(c(2.0, 0.0), &alpha(1.0), &b, &ctl()).unwrap();
    let want = catalan();
    assert!((got.re - want).abs() < 1e-12 && got.im.abs() < 1e-14, "{got} vs {want}");
}

#[test]
fn hurwitz_matches_direct_summation() {
    let points = random_points(7, 12, (2.0, 4.0), (-10.0, 10.0));
    for (i, s) in points.into_iter().enumerate() {
        let a = [0.1, 0.37, 1.0 / std::f64::consts::PI, 0.99][i % 4];
        let (want, bound) = brute_periodic_hurwitz(s, a, &[c(1.0, 0.0)], 1_000_000);
        assert!(bound < 1e-10);
        let got = eval_hurwitz_zeta(s, &alpha(a), &ctl()).unwrap();
        assert!((got - want).norm() <= 1e-9, "s = {s}, alpha = {a}: {got} vs {want}");
    }
}

#[test]
fn periodic_hurwitz_matches_direct_summation() {
    let seqs = [
        vec![c(1.0, 0.0), c(-1.0, 0.0)],
        vec![c(0.5, 0.5), c(0.0, 0.0), c(-2.0, 1.0)],
        vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0), c(5.0, 0.0)],
    ];
    let points = random_points(11, 9, (2.0, 3.5), (-8.0, 8.0));
    for (i, s) in points.into_iter().enumerate() {
        let b = &seqs[i % seqs.len()];
        let a = 1.0 / std::f64::consts::E;
        let (want, bound) = brute_periodic_hurwitz(s, a, b, 1_000_000);
        assert!(bound < 1e-9, "oracle bound {bound}");
        let seq = PeriodicSequence::new(b.clone()).unwrap();
        let got = eval_periodic_hurwitz(s, &alpha(a), &seq, &ctl()).unwrap();
        assert!((got - want).norm() <= 1e-9, "s = {s}: {got} vs {want}");
    }
}

#[test]
fn pole_and_half_plane_are_rejected() {
    assert!(matches!(eval_riemann_zeta(c(1.0, 0.0), &ctl()), Err(ZetaError::PoleAtOne(_))));
    assert!(matches!(eval_riemann_zeta(c(-1.5, 0.0), &ctl()), Err(ZetaError::UnsupportedRegion(_))));
    assert!(HurwitzParameter::new(0.0).is_err());
    assert!(HurwitzParameter::new(1.5).is_err());
    // A zero-mean sequence has no pole.
    let b = PeriodicSequence::new(vec![c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
    let v = eval_periodic_hurwitz(c(1.0, 0.0), &alpha(1.0), &b, &ctl()).unwrap();
    assert!((v.re - std::f64::consts::LN_2).abs() < 1e-12);
}

#[test]
fn shifted_grid_matches_pointwise() {
    let series = zlab_core::zeta::PeriodicHurwitz::new(
        HurwitzParameter::preset("1/pi").unwrap(),
        PeriodicSequence::new(vec![c(1.0, 0.0), c(0.0, 2.0)]).unwrap(),
    );
    let pts: Vec<Complex64> = (0..8).map(|j| c(0.7 + 0.02 * j as f64, -0.05 + 0.01 * j as f64)).collect();
    let grid = ShiftedGrid::new(series.clone(), pts.clone(), ctl(), 500.0).unwrap();
    for tau in [0.0, 3.25, 120.5, 499.0] {
        let values = grid.eval_at(tau).unwrap();
        for (s, v) in pts.iter().zip(values) {
            let direct = series.eval(s + c(0.0, tau), &ctl()).unwrap();
            assert!((v - direct).norm() < 1e-10, "tau {tau}, s {s}");
        }
    }
}

fn small_complex() -> impl Strategy<Value = Complex64> {
    (-3.0f64..3.0, -3.0f64..3.0).prop_map(|(a, b)| c(a, b))
}

fn strip_point() -> impl Strategy<Value = Complex64> {
    (0.55f64..3.0, -40.0f64..40.0).prop_map(|(a, b)| c(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn periodic_is_linear_in_the_sequence(
        s in strip_point(),
        a in 0.05f64..1.0,
        b1 in prop::collection::vec(small_complex(), 3),
        b2 in prop::collection::vec(small_complex(), 3),
        w in small_complex(),
    ) {
        prop_assume!((s - 1.0).norm() > 0.05);
        let p = alpha(a);
        let mix: Vec<Complex64> = b1.iter().zip(&b2).map(|(x, y)| w * x + y).collect();
        let f = |v: &[Complex64]| eval_periodic_hurwitz(s, &p, &PeriodicSequence::new(v.to_vec()).unwrap(), &ctl()).unwrap();
        let lhs = f(&mix);
        let rhs = w * f(&b1) + f(&b2);
        prop_assert!((lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()));
    }

    #[test]
    fn conjugate_symmetry(s in strip_point(), a in 0.05f64..=1.0) {
        prop_assume!((s - 1.0).norm() > 0.05);
        let p = alpha(a);
        let z = eval_hurwitz_zeta(s, &p, &ctl()).unwrap();
        let w = eval_hurwitz_zeta(s.conj(), &p, &ctl()).unwrap();
        prop_assert!((z.conj() - w).norm() <= 1e-11 * (1.0 + z.norm()));
    }

    #[test]
    fn alternating_series_is_eta(s in strip_point()) {
        prop_assume!((s - 1.0).norm() > 0.05);
        let b = PeriodicSequence::new(vec![c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let eta = eval_periodic_hurwitz(s, &alpha(1.0), &b, &ctl()).unwrap();
        let z = eval_riemann_zeta(s, &ctl()).unwrap();
        let want = (1.0 - (c(1.0, 0.0) - s).exp2()) * z;
        prop_assert!((eta - want).norm() <= 1e-10 * (1.0 + z.norm()));
    }

    #[test]
    fn non_minimal_periods_are_rejected(b in prop::collection::vec(small_complex(), 1..4)) {
        prop_assert!(PeriodicSequence::new([b.clone(), b.clone()].concat()).is_err());
        let r = PeriodicSequence::reduced([b.clone(), b].concat()).unwrap();
        prop_assert!(PeriodicSequence::new(r.values().to_vec()).is_ok());
    }

    #[test]
    fn complex_literals_round_trip(re in proptest::num::f64::NORMAL, im in proptest::num::f64::NORMAL) {
        let z = c(re, im);
        prop_assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
    }
}
