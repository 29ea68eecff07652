use std::f64::consts::PI;

use bwm_lab::algebra::{kron, matexp, residual, CMatrix, Tolerance, C64};
use bwm_lab::chain::{additive_ybe_residual, multiplicative_ybe_residual, SpectralKind};
use bwm_lab::entropy::{bound_check, entropy, l1_norm, reduced_probs};
use bwm_lab::params::{BwmaParams, Case};
use bwm_lab::topo::build_rep;
use bwm_lab::wigner::{big_d, big_d_exp, labels, little_d, ybe_phi, ybe_residual, HalfInt, WignerSpec};
use proptest::prelude::*;

fn cmatrix(rows: usize, cols: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), rows * cols)
        .prop_map(move |v| CMatrix::from_fn(rows, cols, |i, j| C64::new(v[i * cols + j].0, v[i * cols + j].1)))
}

/// `(j, m)` with `2j` in 1..=6.
fn spin_pair() -> impl Strategy<Value = (HalfInt, HalfInt)> {
    (1..=6i32).prop_flat_map(|tj| (Just(HalfInt(tj)), (0..=tj).prop_map(move |k| HalfInt(tj - 2 * k))))
}

fn spin() -> impl Strategy<Value = HalfInt> {
    (1..=6i32).prop_map(HalfInt)
}

fn d_real(j: HalfInt, theta: f64) -> CMatrix {
    big_d(&WignerSpec { j: j.value(), theta, phi: 0.0 }).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_is_associative(a in cmatrix(2, 2), b in cmatrix(3, 2), c in cmatrix(2, 3)) {
        let left = kron(&kron(&a, &b), &c);
        let right = kron(&a, &kron(&b, &c));
        prop_assert!(residual(&left, &right).unwrap() < 1e-14);
    }

    #[test]
    fn kron_mixed_product(a in cmatrix(2, 2), b in cmatrix(3, 3), c in cmatrix(2, 2), d in cmatrix(3, 3)) {
        let left = &kron(&a, &b) * &kron(&c, &d);
        let right = kron(&(&a * &c), &(&b * &d));
        prop_assert!(residual(&left, &right).unwrap() < 1e-13);
    }

    #[test]
    fn little_d_is_orthogonal(j in spin(), theta in -2.0 * PI..2.0 * PI) {
        let d = d_real(j, theta);
        prop_assert!(d.unitarity_deviation() < 1e-12);
        for z in d.to_pairs().iter().flatten() {
            prop_assert!(z[1] == 0.0);
        }
    }

    #[test]
    fn little_d_composes(j in spin(), a in -PI..PI, b in -PI..PI) {
        let prod = &d_real(j, a) * &d_real(j, b);
        prop_assert!(residual(&prod, &d_real(j, a + b)).unwrap() < 1e-12);
    }

    #[test]
    fn big_d_matches_exponential(j in (1..=5i32).prop_map(HalfInt), theta in -PI..PI, phi in -PI..PI) {
        let spec = WignerSpec { j: j.value(), theta, phi };
        prop_assert!(residual(&big_d(&spec).unwrap(), &big_d_exp(&spec).unwrap()).unwrap() < 1e-10);
    }

    #[test]
    fn column_is_normalized((j, m) in spin_pair(), theta in 0.0..PI) {
        let p = reduced_probs(j, m, theta).unwrap();
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(entropy(&p).unwrap() >= 0.0);
    }

    #[test]
    fn entropy_bound_holds((j, m) in spin_pair(), theta in 0.0..PI) {
        prop_assert!(bound_check(j, m, theta).unwrap() >= -1e-12);
    }

    #[test]
    fn entropy_and_l1_are_even((j, m) in spin_pair(), theta in 0.0..PI) {
        let s = |t: f64| entropy(&reduced_probs(j, m, t).unwrap()).unwrap();
        prop_assert!((s(theta) - s(-theta)).abs() < 1e-12);
        prop_assert!((l1_norm(j, m, theta).unwrap() - l1_norm(j, m, -theta).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn little_d_symmetry((j, m) in spin_pair(), theta in -PI..PI) {
        // d_{m'm}(-theta) = d_{mm'}(theta)
        for mr in labels(j) {
            let a = little_d(j, mr, m, -theta).unwrap();
            let b = little_d(j, m, mr, theta).unwrap();
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn loop_value_identity(t in -1.0..1.0f64, m in -4..=4i32) {
        prop_assume!(t.abs() > 1e-3);
        let q = C64::new(t.exp(), 0.0);
        let p = BwmaParams::from_q(q, m, Case::Hermitian).unwrap();
        // (d - 1) W = sigma^-1 - sigma
        let lhs = (p.d - 1.0) * p.w;
        let rhs = p.sigma.inv() - p.sigma;
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
        prop_assert!((p.w - (q - q.inv())).norm() < 1e-12);
    }

    #[test]
    fn hermitian_relations_hold(q in 0.6..1.8f64) {
        prop_assume!((q - 1.0).abs() > 1e-3);
        let p = BwmaParams::from_q(C64::new(q, 0.0), -2, Case::Hermitian).unwrap();
        let rep = build_rep(&p).unwrap();
        prop_assert!(rep.check(Tolerance::default()).unwrap().max_residual() < 1e-9);
        prop_assert!(rep.a.hermitian_deviation() < 1e-12 && rep.b.hermitian_deviation() < 1e-10);
    }

    #[test]
    fn unitary_relations_hold(angle in PI / 12.0..PI / 5.0) {
        let p = BwmaParams::from_q(C64::from_polar(1.0, angle), -2, Case::Unitary).unwrap();
        let rep = build_rep(&p).unwrap();
        prop_assert!(rep.check(Tolerance::default()).unwrap().max_residual() < 1e-9);
        prop_assert!(rep.a.unitarity_deviation() < 1e-10 && rep.b.unitarity_deviation() < 1e-10);
    }

    #[test]
    fn spectral_ybe_holds(q in 1.05..1.8f64, x in 0.3..3.0f64, y in 0.3..3.0f64) {
        let p = BwmaParams::from_q(C64::new(q, 0.0), -2, Case::Hermitian).unwrap();
        let rep = build_rep(&p).unwrap();
        for kind in [SpectralKind::TypeA, SpectralKind::TypeB] {
            prop_assert!(multiplicative_ybe_residual(&rep, kind, C64::new(x, 0.0), C64::new(y, 0.0)) < 1e-9);
        }
    }

    #[test]
    fn rational_ybe_at_half(u in -0.4..0.9f64, v in -0.4..0.9f64) {
        prop_assert!(additive_ybe_residual(u, v, -0.5).unwrap() < 1e-10);
    }

    #[test]
    fn d_function_ybe(j in (1..=3i32).prop_map(HalfInt), t1 in 0.3..3.0f64, t2 in 0.3..3.0f64, t3 in 0.3..3.0f64) {
        if ybe_phi(t1, t2, t3).unwrap().is_some() {
            prop_assert!(ybe_residual(j, t1, t2, t3).unwrap() < 1e-10);
        }
    }

    #[test]
    fn matexp_of_anti_hermitian_is_unitary(a in cmatrix(3, 3)) {
        let k = &a - &a.dagger();
        prop_assert!(matexp(&k).unwrap().unitarity_deviation() < 1e-12);
    }
}
