//! Wigner d- and D-functions, the D-function form of the Yang-Baxter
//! relation, and the comparison with the 3x3 topological representation.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::{c, matexp, r, residual, CMatrix, Tolerance, C64, I};
use crate::error::{Error, Result};
use crate::params::{BwmaParams, Case, RelationReport};
use crate::topo::{build_rep, q1_limit_rep, standardize};

/// A half-integer stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt(pub i32);

impl HalfInt {
    pub fn from_f64(x: f64) -> Option<Self> {
        let twice = (2.0 * x).round();
        ((2.0 * x - twice).abs() < 1e-12).then_some(HalfInt(twice as i32))
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn twice(self) -> i32 {
        self.0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    /// Accepts `3/2`, `-1/2`, `1`, `0.5`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a half-integer: {s:?}"));
        if let Some((num, den)) = s.split_once('/') {
            let num: i32 = num.trim().parse().map_err(|_| bad())?;
            match den.trim() {
                "1" => Ok(HalfInt(2 * num)),
                "2" => Ok(HalfInt(num)),
                _ => Err(bad()),
            }
        } else {
            let x: f64 = s.parse().map_err(|_| bad())?;
            if !x.is_finite() {
                return Err(bad());
            }
            HalfInt::from_f64(x).ok_or_else(bad)
        }
    }
}

pub const MAX_TWICE_J: i32 = 24;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct WignerSpec {
    pub j: f64,
    pub theta: f64,
    pub phi: f64,
}

fn check_labels(j: HalfInt, m_row: HalfInt, m_col: HalfInt) -> Result<()> {
    let err = || Error::Spin { j: j.to_string(), m_row: m_row.to_string(), m_col: m_col.to_string() };
    if j.0 < 0 {
        return Err(err());
    }
    if j.0 > MAX_TWICE_J {
        return Err(Error::SpinTooLarge(j.to_string()));
    }
    for m in [m_row, m_col] {
        if m.0.abs() > j.0 || (j.0 - m.0) % 2 != 0 {
            return Err(err());
        }
    }
    Ok(())
}

const FACT: [f64; 50] = {
    let mut t = [1.0; 50];
    let mut i = 1;
    while i < 50 {
        t[i] = t[i - 1] * i as f64;
        i += 1;
    }
    t
};

/// Summation terms `(coefficient, cos exponent, sin exponent)` of the
/// factorial formula for `d^j_{m'm}(theta)` in powers of `cos(theta/2)` and
/// `sin(theta/2)`.
fn terms(j: HalfInt, m_row: HalfInt, m_col: HalfInt) -> Vec<(f64, i32, i32)> {
    let jm_row_p = ((j.0 + m_row.0) / 2) as usize;
    let jm_row_m = ((j.0 - m_row.0) / 2) as usize;
    let jm_col_p = ((j.0 + m_col.0) / 2) as usize;
    let jm_col_m = ((j.0 - m_col.0) / 2) as usize;
    let pref = (FACT[jm_row_p] * FACT[jm_row_m] * FACT[jm_col_p] * FACT[jm_col_m]).sqrt();
    let diff = (m_row.0 - m_col.0) / 2; // m' - m
    let mut out = Vec::new();
    let kmin = 0.max(-diff);
    let kmax = (jm_col_p as i32).min(jm_row_m as i32);
    for k in kmin..=kmax {
        let a = jm_col_p as i32 - k;
        let b = jm_row_m as i32 - k;
        let cdiff = k + diff;
        if a < 0 || b < 0 || cdiff < 0 {
            continue;
        }
        let sign = if (k + diff).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let coef = sign * pref / (FACT[a as usize] * FACT[k as usize] * FACT[b as usize] * FACT[cdiff as usize]);
        let cos_pow = j.0 - diff - 2 * k;
        let sin_pow = 2 * k + diff;
        out.push((coef, cos_pow, sin_pow));
    }
    out
}

/// Wigner small-d `d^j_{m'm}(theta)`, with `d^1_{00} = cos(theta)` and
/// `d^1_{10} = -sin(theta)/sqrt(2)`.
pub fn little_d(j: HalfInt, m_row: HalfInt, m_col: HalfInt, theta: f64) -> Result<f64> {
    check_labels(j, m_row, m_col)?;
    let (cs, sn) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    Ok(terms(j, m_row, m_col).iter().map(|&(k, a, b)| k * cs.powi(a) * sn.powi(b)).sum())
}

/// Analytic `d/dtheta` of [`little_d`].
pub fn little_d_deriv(j: HalfInt, m_row: HalfInt, m_col: HalfInt, theta: f64) -> Result<f64> {
    check_labels(j, m_row, m_col)?;
    let (cs, sn) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    Ok(terms(j, m_row, m_col)
        .iter()
        .map(|&(k, a, b)| {
            let mut v = 0.0;
            if a > 0 {
                v -= a as f64 * cs.powi(a - 1) * sn.powi(b + 1);
            }
            if b > 0 {
                v += b as f64 * cs.powi(a + 1) * sn.powi(b - 1);
            }
            0.5 * k * v
        })
        .sum())
}

/// Magnetic labels `j, j-1, ..., -j`.
pub fn labels(j: HalfInt) -> Vec<HalfInt> {
    (0..=j.0).map(|i| HalfInt(j.0 - 2 * i)).collect()
}

fn spec_j(spec: &WignerSpec) -> Result<HalfInt> {
    let j = HalfInt::from_f64(spec.j).ok_or_else(|| Error::Parse(format!("j = {} is not a half-integer", spec.j)))?;
    if j.0 < 1 {
        return Err(Error::Spin { j: j.to_string(), m_row: "-".into(), m_col: "-".into() });
    }
    if j.0 > MAX_TWICE_J {
        return Err(Error::SpinTooLarge(j.to_string()));
    }
    Ok(j)
}

/// `D^j_{m'm}(theta, phi) = e^{-i(m'-m) phi} d^j_{m'm}(theta)`, rows and
/// columns ordered `m = j .. -j`.
pub fn big_d(spec: &WignerSpec) -> Result<CMatrix> {
    let j = spec_j(spec)?;
    let ls = labels(j);
    let n = ls.len();
    let mut out = CMatrix::zeros(n, n);
    for (a, &mr) in ls.iter().enumerate() {
        for (b, &mc) in ls.iter().enumerate() {
            let phase = C64::from_polar(1.0, -(mr.value() - mc.value()) * spec.phi);
            out.set(a, b, phase * little_d(j, mr, mc, spec.theta)?);
        }
    }
    Ok(out)
}

/// Raising operator `J_+` in the `m = j .. -j` basis.
pub fn j_plus(j: HalfInt) -> CMatrix {
    let ls = labels(j);
    let jj = j.value();
    let n = ls.len();
    let mut out = CMatrix::zeros(n, n);
    for b in 1..n {
        let m = ls[b].value();
        out.set(b - 1, b, r((jj * (jj + 1.0) - m * (m + 1.0)).sqrt()));
    }
    out
}

/// `exp(xi J_+ - xi* J_-)` with `xi = -(theta/2) e^{-i phi}`; an independent
/// route to [`big_d`].
pub fn big_d_exp(spec: &WignerSpec) -> Result<CMatrix> {
    let j = spec_j(spec)?;
    let jp = j_plus(j);
    let jm = jp.dagger();
    let xi = C64::from_polar(-spec.theta / 2.0, -spec.phi);
    matexp(&(&(&jp * xi) - &(&jm * xi.conj())))
}

fn d_mat(j: HalfInt, theta: f64, phi: f64) -> CMatrix {
    big_d(&WignerSpec { j: j.value(), theta, phi }).expect("validated j")
}

/// `cos(phi)` required by the D-function Yang-Baxter relation, written as
/// `(s1 c2 c3 + c1 c2 s3 - c1 s2 c3) / (2 s1 s2 s3) - 1/2` with
/// `s_i = sin(theta_i/2)`, `c_i = cos(theta_i/2)`; this is the tangent form
/// multiplied through by the cosines.
pub fn ybe_cos_phi(t1: f64, t2: f64, t3: f64) -> Result<f64> {
    let (s1, s2, s3) = ((t1 / 2.0).sin(), (t2 / 2.0).sin(), (t3 / 2.0).sin());
    let (c1, c2, c3) = ((t1 / 2.0).cos(), (t2 / 2.0).cos(), (t3 / 2.0).cos());
    for (t, s) in [(t1, s1), (t2, s2), (t3, s3)] {
        if s.abs() < 1e-12 {
            return Err(Error::TangentPole(t));
        }
    }
    Ok(0.5 * ((s1 * c2 * c3 + c1 * c2 * s3 - c1 * s2 * c3) / (s1 * s2 * s3) - 1.0))
}

/// `phi` solving the relation, or `None` when `|cos phi| > 1`.
pub fn ybe_phi(t1: f64, t2: f64, t3: f64) -> Result<Option<f64>> {
    let v = ybe_cos_phi(t1, t2, t3)?;
    if v.abs() <= 1.0 + 1e-12 {
        Ok(Some(v.clamp(-1.0, 1.0).acos()))
    } else {
        Ok(None)
    }
}

fn phi_or_err(t1: f64, t2: f64, t3: f64) -> Result<f64> {
    match ybe_phi(t1, t2, t3)? {
        Some(p) => Ok(p),
        None => Err(Error::PhiUndefined { cos_phi: ybe_cos_phi(t1, t2, t3)? }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum YbeOrdering {
    /// `D(t1,0) D(t2,phi) D(t3,0) = D(t3,phi) D(t2,0) D(t1,phi)`
    InnerPhase,
    /// `D(t1,phi) D(t2,0) D(t3,phi) = D(t3,0) D(t2,phi) D(t1,0)`
    OuterPhase,
}

/// Absolute Frobenius residual of the D-function relation with an explicit `phi`.
pub fn ybe_residual_with(j: HalfInt, t: [f64; 3], phi: f64, ordering: YbeOrdering) -> Result<f64> {
    spec_j(&WignerSpec { j: j.value(), theta: 0.0, phi: 0.0 })?;
    let (pl, pr) = match ordering {
        YbeOrdering::InnerPhase => ((0.0, phi, 0.0), (phi, 0.0, phi)),
        YbeOrdering::OuterPhase => ((phi, 0.0, phi), (0.0, phi, 0.0)),
    };
    let lhs = &(&d_mat(j, t[0], pl.0) * &d_mat(j, t[1], pl.1)) * &d_mat(j, t[2], pl.2);
    let rhs = &(&d_mat(j, t[2], pr.0) * &d_mat(j, t[1], pr.1)) * &d_mat(j, t[0], pr.2);
    Ok((&lhs - &rhs).norm())
}

/// Residual of `A(t1) B(t2) A(t3) = B(t3) A(t2) B(t1)` with `A(t) = D(t, 0)`,
/// `B(t) = D(t, phi)` and `phi` from [`ybe_phi`].
pub fn ybe_residual(j: HalfInt, t1: f64, t2: f64, t3: f64) -> Result<f64> {
    let phi = phi_or_err(t1, t2, t3)?;
    ybe_residual_with(j, [t1, t2, t3], phi, YbeOrdering::InnerPhase)
}

/// Braid relation residual `|ABA - BAB|` at equal angles.
pub fn braid_residual(j: HalfInt, theta: f64) -> Result<f64> {
    ybe_residual(j, theta, theta, theta)
}

/// `theta(x) = arccos((1 - x) / sqrt(2 (1 + x^2)))`.
pub fn x_to_theta(x: f64) -> f64 {
    ((1.0 - x) / (2.0 * (1.0 + x * x)).sqrt()).clamp(-1.0, 1.0).acos()
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct XYbe {
    pub thetas: [f64; 3],
    pub phi: f64,
    pub residual: f64,
}

/// The relation `A(x) B(xy) A(y) = B(y) A(xy) B(x)` with angles
/// `(theta(x), theta(xy), theta(y))` and `phi` recomputed for the triple.
pub fn ybe_x(j: HalfInt, x: f64, y: f64) -> Result<XYbe> {
    let thetas = [x_to_theta(x), x_to_theta(x * y), x_to_theta(y)];
    let phi = phi_or_err(thetas[0], thetas[1], thetas[2])?;
    let residual = ybe_residual_with(j, thetas, phi, YbeOrdering::InnerPhase)?;
    Ok(XYbe { thetas, phi, residual })
}

/// The basis change relating `D^1` to the topological representation.
pub fn v_matrix() -> CMatrix {
    let h = FRAC_1_SQRT_2;
    CMatrix::from_rows(&[
        vec![r(0.5), r(h), r(0.5)],
        vec![c(0.0, h), r(0.0), c(0.0, -h)],
        vec![r(-0.5), r(h), r(-0.5)],
    ])
}

/// The diagonal gauge `diag(1, i, -1)`.
pub fn gauge() -> CMatrix {
    CMatrix::diag(&[r(1.0), I, r(-1.0)])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CorrType {
    I,
    II,
}

fn conj_v(v: &CMatrix, m: &CMatrix) -> CMatrix {
    &(&v.dagger() * m) * v
}

/// Braid angle used for the type-I comparison. With `+2 pi/3` the
/// V-conjugated D-function is the complex conjugate of the gauged limit `B`.
pub const TYPE_I_PHI: f64 = -2.0 * PI / 3.0;
/// Braid angle used for the type-II comparison.
pub const TYPE_II_PHI: f64 = -PI / 2.0;

/// Printed gauged limit matrix for type I.
pub fn type_i_b() -> CMatrix {
    let s6 = 6f64.sqrt();
    &CMatrix::from_rows(&[
        vec![r(1.0), c(0.0, s6), r(-3.0)],
        vec![c(0.0, -s6), r(2.0), c(0.0, -s6)],
        vec![r(-3.0), c(0.0, s6), r(1.0)],
    ]) * -0.25
}

/// Printed type-II matrices: `(A, B)` after gauging, and the ungauged `B`.
pub fn type_ii_printed() -> (CMatrix, CMatrix, CMatrix) {
    let h = FRAC_1_SQRT_2;
    let a = CMatrix::diag(&[c(0.0, -1.0), r(1.0), I]);
    let b = CMatrix::from_real_rows(&[vec![0.5, -h, 0.5], vec![h, 0.0, -h], vec![0.5, h, 0.5]]);
    let raw = &CMatrix::from_rows(&[
        vec![r(-0.5), c(0.0, h), r(0.5)],
        vec![c(0.0, h), r(0.0), c(0.0, h)],
        vec![r(0.5), c(0.0, h), r(-0.5)],
    ]) * -1.0;
    (a, b, raw)
}

/// Checks the correspondence between `V^dagger D^1 V` and the topological
/// representation for type I (`theta = pi`) or type II (`theta = pi/2`).
pub fn type_corr_check(kind: CorrType) -> Result<RelationReport> {
    let tol = Tolerance { abs: 1e-10, rel: 0.0 };
    let v = v_matrix();
    let mut rep = RelationReport::new();
    let dev = v.unitarity_deviation();
    rep.push("V unitary", dev, dev < 1e-12);
    let one = HalfInt(2);
    match kind {
        CorrType::I => {
            let a_d = conj_v(&v, &d_mat(one, PI, 0.0));
            rep.push_eq("V^+ D(pi, 0) V = -diag(1,-1,1)", &a_d, &CMatrix::real_diag(&[-1.0, 1.0, -1.0]), tol);
            let lim = q1_limit_rep(-3)?;
            rep.push_eq("limit A (s=-3) = -diag(1,-1,1)", &lim.a, &CMatrix::real_diag(&[-1.0, 1.0, -1.0]), tol);
            let s6 = 6f64.sqrt();
            let b_lim = &CMatrix::from_real_rows(&[vec![1.0, -s6, 3.0], vec![-s6, 2.0, s6], vec![3.0, s6, 1.0]]) * -0.25;
            rep.push_eq("limit B (s=-3) = printed limit matrix", &lim.b, &b_lim, tol);
            let gauged = standardize(&lim, &gauge())?;
            rep.push_eq("gauged limit B = printed gauged matrix", &gauged.b, &type_i_b(), tol);
            rep.push_eq("gauged limit A = V^+ D(pi, 0) V", &gauged.a, &a_d, tol);
            for theta in [PI, -PI] {
                let b_d = conj_v(&v, &d_mat(one, theta, TYPE_I_PHI));
                let name = if theta > 0.0 { "pi" } else { "-pi" };
                rep.push_eq(format!("V^+ D({name}, -2pi/3) V = gauged limit B"), &b_d, &gauged.b, tol);
            }
        }
        CorrType::II => {
            let (a_p, b_p, raw_p) = type_ii_printed();
            let a_d = conj_v(&v, &d_mat(one, PI / 2.0, 0.0));
            rep.push_eq("V^+ D(pi/2, 0) V = diag(-i,1,i)", &a_d, &a_p, tol);
            let b_d = conj_v(&v, &d_mat(one, PI / 2.0, TYPE_II_PHI));
            rep.push_eq("V^+ D(pi/2, -pi/2) V = printed B", &b_d, &b_p, tol);
            let l1 = C64::from_polar(1.0, PI / 4.0);
            let topo = build_rep(&BwmaParams::new(l1, -l1, Case::Unitary)?)?;
            let dev = topo.a.unitarity_deviation().max(topo.b.unitarity_deviation());
            rep.push("topological A, B unitary", dev, dev < 1e-10);
            let (a_n, b_n) = topo.phase_normalized();
            rep.push_eq("normalized topological A = diag(-i,1,i)", &a_n, &a_p, tol);
            rep.push_eq("normalized topological B = printed ungauged B", &b_n, &raw_p, tol);
            let g = gauge();
            let gd = g.dagger();
            let a_g = &(&g * &a_n) * &gd;
            let b_g = &(&g * &b_n) * &gd;
            rep.push_eq("gauged normalized A = V^+ D(pi/2, 0) V", &a_g, &a_d, tol);
            rep.push_eq("gauged normalized B = V^+ D(pi/2, -pi/2) V", &b_g, &b_d, tol);
        }
    }
    Ok(rep)
}

/// Residual of `V^dagger D(theta, phi) V` against a target, for reporting
/// the alternative sign choices.
pub fn conjugated_residual(theta: f64, phi: f64, target: &CMatrix) -> Result<f64> {
    residual(&conj_v(&v_matrix(), &d_mat(HalfInt(2), theta, phi)), target)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(s: &str) -> HalfInt {
        s.parse().unwrap()
    }

    #[test]
    fn parse_half_integers() {
        assert_eq!(h("3/2"), HalfInt(3));
        assert_eq!(h("-1/2"), HalfInt(-1));
        assert_eq!(h("1"), HalfInt(2));
        assert_eq!(h("0.5"), HalfInt(1));
        assert_eq!(h("4/1"), HalfInt(8));
        assert!("1/3".parse::<HalfInt>().is_err());
        assert!("0.3".parse::<HalfInt>().is_err());
        assert!("x".parse::<HalfInt>().is_err());
        assert_eq!(HalfInt(3).to_string(), "3/2");
        assert_eq!(HalfInt(-4).to_string(), "-2");
    }

    #[test]
    fn spin_one_entries() {
        let t: f64 = 0.83;
        assert!((little_d(h("1"), h("0"), h("0"), t).unwrap() - t.cos()).abs() < 1e-15);
        assert!((little_d(h("1"), h("1"), h("0"), t).unwrap() + t.sin() / 2f64.sqrt()).abs() < 1e-15);
        assert!((little_d(h("1"), h("1"), h("1"), t).unwrap() - (1.0 + t.cos()) / 2.0).abs() < 1e-15);
        assert!((little_d(h("1/2"), h("1/2"), h("-1/2"), t).unwrap() + (t / 2.0).sin()).abs() < 1e-15);
    }

    #[test]
    fn special_angles() {
        for j2 in 1..=8 {
            let j = HalfInt(j2);
            for &mr in &labels(j) {
                for &mc in &labels(j) {
                    let d0 = little_d(j, mr, mc, 0.0).unwrap();
                    assert!((d0 - if mr == mc { 1.0 } else { 0.0 }).abs() < 1e-14);
                    let dpi = little_d(j, mr, mc, PI).unwrap();
                    let sign = if ((j.0 + mr.0) / 2) % 2 == 0 { 1.0 } else { -1.0 };
                    let want = if mr.0 == -mc.0 { sign } else { 0.0 };
                    assert!((dpi - want).abs() < 1e-14, "j={j} m'={mr} m={mc}");
                }
            }
        }
    }

    #[test]
    fn invalid_labels() {
        assert!(little_d(h("1"), h("1/2"), h("0"), 0.1).is_err());
        assert!(little_d(h("1"), h("2"), h("0"), 0.1).is_err());
        assert!(matches!(little_d(HalfInt(26), HalfInt(0), HalfInt(0), 0.1), Err(Error::SpinTooLarge(_))));
        assert!(big_d(&WignerSpec { j: 0.3, theta: 0.0, phi: 0.0 }).is_err());
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let hstep = 1e-6;
        for j2 in 1..=6 {
            let j = HalfInt(j2);
            for &mr in &labels(j) {
                for &mc in &labels(j) {
                    for t in [0.3, 1.1, PI / 2.0, 2.7] {
                        let num = (little_d(j, mr, mc, t + hstep).unwrap() - little_d(j, mr, mc, t - hstep).unwrap()) / (2.0 * hstep);
                        assert!((num - little_d_deriv(j, mr, mc, t).unwrap()).abs() < 1e-8);
                    }
                }
            }
        }
    }

    #[test]
    fn printed_spin_one_matrix() {
        // Spin-1 D-matrix in closed form with phases e^{-i(m'-m) phi}.
        let (t, p): (f64, f64) = (1.1, 0.4);
        let (ct, st) = (t.cos(), t.sin());
        let s2 = 2f64.sqrt();
        let e = |k: f64| C64::from_polar(1.0, -k * p);
        let want = CMatrix::from_rows(&[
            vec![r((1.0 + ct) / 2.0), e(1.0) * (-st / s2), e(2.0) * ((1.0 - ct) / 2.0)],
            vec![e(-1.0) * (st / s2), r(ct), e(1.0) * (-st / s2)],
            vec![e(-2.0) * ((1.0 - ct) / 2.0), e(-1.0) * (st / s2), r((1.0 + ct) / 2.0)],
        ]);
        let got = big_d(&WignerSpec { j: 1.0, theta: t, phi: p }).unwrap();
        assert!(residual(&got, &want).unwrap() < 1e-15);
    }

    #[test]
    fn exponential_route_agrees() {
        for j2 in 1..=3 {
            for (t, p) in [(0.4, 0.0), (PI / 2.0, 1.3), (2.9, -0.7), (PI, 2.0 * PI / 3.0)] {
                let spec = WignerSpec { j: j2 as f64 / 2.0, theta: t, phi: p };
                assert!(residual(&big_d(&spec).unwrap(), &big_d_exp(&spec).unwrap()).unwrap() < 1e-10);
            }
        }
    }

    #[test]
    fn composition_and_unitarity() {
        for j2 in 1..=8 {
            let j = HalfInt(j2);
            let a = d_mat(j, 0.7, 0.3);
            assert!(a.unitarity_deviation() < 1e-12);
            let ab = &a * &d_mat(j, 1.1, 0.3);
            assert!(residual(&ab, &d_mat(j, 1.8, 0.3)).unwrap() < 1e-10);
        }
    }

    #[test]
    fn phi_examples() {
        let t = 2.0 * PI / 3.0;
        let v = ybe_cos_phi(t, t, t).unwrap();
        assert!((v - t.cos() / (1.0 - t.cos())).abs() < 1e-14);
        assert!((v + 1.0 / 3.0).abs() < 1e-14);
        assert!((ybe_phi(PI, PI, PI).unwrap().unwrap() - 2.0 * PI / 3.0).abs() < 1e-12);
        assert!((ybe_phi(PI / 2.0, PI / 2.0, PI / 2.0).unwrap().unwrap() - PI / 2.0).abs() < 1e-12);
        assert_eq!(ybe_phi(PI / 6.0, PI / 6.0, PI / 6.0).unwrap(), None);
        assert!(matches!(ybe_phi(0.0, 1.0, 1.0), Err(Error::TangentPole(_))));
        // Tangent form away from the poles.
        let (a, b, cc) = (0.9, 1.4, 2.1);
        let tn = |x: f64| (x / 2.0).tan();
        let tangent = 0.5 * ((tn(a) + tn(cc) - tn(b)) / (tn(a) * tn(b) * tn(cc)) - 1.0);
        assert!((ybe_cos_phi(a, b, cc).unwrap() - tangent).abs() < 1e-13);
    }

    #[test]
    fn ybe_examples() {
        let t = 2.0 * PI / 3.0;
        assert!(ybe_residual(h("1"), t, t, t).unwrap() < 1e-10);
        assert!(braid_residual(h("1/2"), PI / 2.0).unwrap() < 1e-12);
        for j in ["1/2", "1", "3/2"] {
            for (a, b, cc) in [(1.2, 1.5, 1.9), (2.0, 2.4, 1.7)] {
                if let Some(phi) = ybe_phi(a, b, cc).unwrap() {
                    for ord in [YbeOrdering::InnerPhase, YbeOrdering::OuterPhase] {
                        assert!(ybe_residual_with(h(j), [a, b, cc], phi, ord).unwrap() < 1e-10);
                    }
                }
            }
        }
        // Wrong phi: the relation breaks.
        assert!(ybe_residual_with(h("1"), [t, t, t], 0.3, YbeOrdering::InnerPhase).unwrap() > 1e-3);
    }

    #[test]
    fn x_parameterization() {
        assert!((x_to_theta(1.0) - PI / 2.0).abs() < 1e-15);
        assert!((x_to_theta(0.0) - PI / 4.0).abs() < 1e-15);
        assert!((x_to_theta(1e9) - 3.0 * PI / 4.0).abs() < 1e-8);
        let res = ybe_x(h("1"), 1.0, 1.0).unwrap();
        assert!((res.phi - PI / 2.0).abs() < 1e-12 && res.residual < 1e-10);
    }

    #[test]
    fn correspondences() {
        let one = type_corr_check(CorrType::I).unwrap();
        assert!(one.overall_pass, "{}", one.to_json());
        let two = type_corr_check(CorrType::II).unwrap();
        assert!(two.overall_pass, "{}", two.to_json());
    }

    #[test]
    fn positive_braid_angle_gives_conjugate() {
        let lim = standardize(&q1_limit_rep(-3).unwrap(), &gauge()).unwrap();
        assert!(conjugated_residual(-PI, 2.0 * PI / 3.0, &lim.b).unwrap() > 0.1);
        assert!(conjugated_residual(-PI, 2.0 * PI / 3.0, &lim.b.conj()).unwrap() < 1e-10);
    }
}
