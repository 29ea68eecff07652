//! BWM algebra parameters, the projector built from a braid matrix, and the
//! relation checker.

use serde::Serialize;

use crate::algebra::{r, residual, CMatrix, Tolerance, C64};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    Hermitian,
    Unitary,
}

/// Eigenvalue data `(lambda1, lambda2 = -1/lambda1, sigma)` with derived `W`
/// and loop value `d`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BwmaParams {
    pub lambda1: C64,
    pub lambda2: C64,
    pub sigma: C64,
    pub w: C64,
    pub d: C64,
    pub case: Case,
    pub q: Option<C64>,
    pub m_power: Option<i32>,
}

const DEGENERATE: f64 = 1e-12;

impl BwmaParams {
    pub fn new(lambda1: C64, sigma: C64, case: Case) -> Result<Self> {
        if lambda1.norm() == 0.0 {
            return Err(Error::ZeroParameter("lambda1"));
        }
        if sigma.norm() == 0.0 {
            return Err(Error::ZeroParameter("sigma"));
        }
        if case == Case::Unitary && ((lambda1.norm() - 1.0).abs() > 1e-12 || (sigma.norm() - 1.0).abs() > 1e-12) {
            return Err(Error::NotUnitaryParams { l1_abs: lambda1.norm(), sigma_abs: sigma.norm() });
        }
        let lambda2 = -lambda1.inv();
        let w = lambda1 + lambda2;
        if w.norm() < DEGENERATE {
            return Err(Error::DegenerateW { lambda1: format!("{lambda1}") });
        }
        let d = 1.0 + (sigma.inv() - sigma) / w;
        Ok(Self { lambda1, lambda2, sigma, w, d, case, q: None, m_power: None })
    }

    /// `lambda1 = q`, `sigma = q^m`. Evaluated through `q = e^t` so that
    /// `W = 2 sinh t` and `d = 1 - sinh(mt)/sinh(t)` stay accurate near `q = 1`.
    pub fn from_q(q: C64, m: i32, case: Case) -> Result<Self> {
        if q.norm() == 0.0 {
            return Err(Error::ZeroParameter("q"));
        }
        let t = q.ln();
        let sigma = (t * m as f64).exp();
        let mut p = Self::new(q, sigma, case)?;
        let sh = t.sinh();
        p.w = sh * 2.0;
        p.d = 1.0 - (t * m as f64).sinh() / sh;
        p.q = Some(q);
        p.m_power = Some(m);
        Ok(p)
    }

    /// Parameters with prescribed `W` and `d`, bypassing the `W != 0` check.
    /// Used for the extrapolated q = 1 representation, where `W = 0` but the
    /// loop value is finite.
    pub(crate) fn limit(lambda1: C64, sigma: C64, d: C64, case: Case, m: i32) -> Self {
        let lambda2 = -lambda1.inv();
        Self {
            lambda1,
            lambda2,
            sigma,
            w: lambda1 + lambda2,
            d,
            case,
            q: Some(r(1.0)),
            m_power: Some(m),
        }
    }

    /// Loop value `1 - [m]_q`, when the parameters were built from `(q, m)`.
    pub fn q_number_loop(&self) -> Option<C64> {
        let (q, m) = (self.q?, self.m_power?);
        let t = q.ln();
        Some(1.0 - (t * m as f64).sinh() / t.sinh())
    }
}

/// Projector from a braid matrix: `E = (sigma W)^{-1} (I + W S - S^2)`.
pub fn e_from_s(s: &CMatrix, p: &BwmaParams) -> Result<CMatrix> {
    if !s.is_square() {
        return Err(Error::NotSquare { op: "e_from_s", rows: s.rows(), cols: s.cols() });
    }
    s.inverse()?;
    let n = s.rows();
    let inner = &(&CMatrix::identity(n) + &(s * p.w)) - &(s * s);
    Ok(&inner * (p.sigma * p.w).inv())
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationEntry {
    pub id: String,
    pub residual: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RelationReport {
    #[serde(rename = "relations")]
    pub entries: Vec<RelationEntry>,
    pub overall_pass: bool,
}

impl RelationReport {
    pub fn new() -> Self {
        Self { entries: Vec::new(), overall_pass: true }
    }

    /// Records `lhs = rhs`, with pass decided by `tol` on the absolute
    /// difference against `|rhs|`.
    pub fn push_eq(&mut self, id: impl Into<String>, lhs: &CMatrix, rhs: &CMatrix, tol: Tolerance) {
        let (res, pass) = match residual(lhs, rhs) {
            Ok(res) => (res, tol.matrices_agree(lhs, rhs) && res.is_finite()),
            Err(_) => (f64::INFINITY, false),
        };
        self.push(id, res, pass);
    }

    pub fn push(&mut self, id: impl Into<String>, residual: f64, pass: bool) {
        self.overall_pass &= pass;
        self.entries.push(RelationEntry { id: id.into(), residual, pass });
    }

    pub fn extend(&mut self, prefix: &str, other: RelationReport) {
        for e in other.entries {
            self.push(format!("{prefix}{}", e.id), e.residual, e.pass);
        }
    }

    pub fn max_residual(&self) -> f64 {
        self.entries.iter().map(|e| e.residual).fold(0.0, f64::max)
    }

    pub fn failures(&self) -> Vec<&RelationEntry> {
        self.entries.iter().filter(|e| !e.pass).collect()
    }

    pub fn get(&self, id: &str) -> Option<&RelationEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Checks the BWM relation list on `(S1, S2, E1, E2)` = `(s12, s23, e12, e23)`.
///
/// Each relation and its mirror (indices 1 and 2 exchanged) gets its own id.
pub fn check_bwma(
    s12: &CMatrix,
    s23: &CMatrix,
    e12: &CMatrix,
    e23: &CMatrix,
    p: &BwmaParams,
    tol: Tolerance,
) -> Result<RelationReport> {
    let n = s12.rows();
    for m in [s12, s23, e12, e23] {
        if m.shape() != (n, n) {
            return Err(Error::Shape { op: "check_bwma", left: s12.shape(), right: m.shape() });
        }
    }
    let s1i = s12.inverse()?;
    let s2i = s23.inverse()?;
    let id = CMatrix::identity(n);
    let (s1, s2, e1, e2) = (s12, s23, e12, e23);
    let mut rep = RelationReport::new();
    let mul3 = |a: &CMatrix, b: &CMatrix, c: &CMatrix| &(a * b) * c;

    rep.push_eq("braid: S1 S2 S1 = S2 S1 S2", &mul3(s1, s2, s1), &mul3(s2, s1, s2), tol);

    rep.push_eq("tl: E1 E2 E1 = E1", &mul3(e1, e2, e1), e1, tol);
    rep.push_eq("tl: E2 E1 E2 = E2", &mul3(e2, e1, e2), e2, tol);
    rep.push_eq("loop: E1 E1 = d E1", &(e1 * e1), &(e1 * p.d), tol);
    rep.push_eq("loop: E2 E2 = d E2", &(e2 * e2), &(e2 * p.d), tol);

    for (name, s, e) in [("1", s1, e1), ("2", s2, e2)] {
        rep.push_eq(format!("absorb: S{name} E{name} = sigma E{name}"), &(s * e), &(e * p.sigma), tol);
        rep.push_eq(format!("absorb: E{name} S{name} = sigma E{name}"), &(e * s), &(e * p.sigma), tol);
    }

    rep.push_eq("skein: S1 - S1^-1 = W (I - E1)", &(s1 - &s1i), &(&(&id - e1) * p.w), tol);
    rep.push_eq("skein: S2 - S2^-1 = W (I - E2)", &(s2 - &s2i), &(&(&id - e2) * p.w), tol);

    rep.push_eq("tangle: E1 S2 S1 = S2 S1 E2", &mul3(e1, s2, s1), &mul3(s2, s1, e2), tol);
    rep.push_eq("tangle: E2 S1 S2 = S1 S2 E1", &mul3(e2, s1, s2), &mul3(s1, s2, e1), tol);
    rep.push_eq("tangle: E1 S2 S1 = E1 E2", &mul3(e1, s2, s1), &(e1 * e2), tol);
    rep.push_eq("tangle: E2 S1 S2 = E2 E1", &mul3(e2, s1, s2), &(e2 * e1), tol);

    rep.push_eq("conj: S2 E1 S2 = S1^-1 E2 S1^-1", &mul3(s2, e1, s2), &mul3(&s1i, e2, &s1i), tol);
    rep.push_eq("conj: S1 E2 S1 = S2^-1 E1 S2^-1", &mul3(s1, e2, s1), &mul3(&s2i, e1, &s2i), tol);

    rep.push_eq("mixed: E2 E1 S2 = E2 S1^-1", &mul3(e2, e1, s2), &(e2 * &s1i), tol);
    rep.push_eq("mixed: E1 E2 S1 = E1 S2^-1", &mul3(e1, e2, s1), &(e1 * &s2i), tol);
    rep.push_eq("mixed: S1 E2 E1 = S2^-1 E1", &mul3(s1, e2, e1), &(&s2i * e1), tol);
    rep.push_eq("mixed: S2 E1 E2 = S1^-1 E2", &mul3(s2, e1, e2), &(&s1i * e2), tol);

    let si = p.sigma.inv();
    rep.push_eq("sandwich: E1 S2 E1 = sigma^-1 E1", &mul3(e1, s2, e1), &(e1 * si), tol);
    rep.push_eq("sandwich: E2 S1 E2 = sigma^-1 E2", &mul3(e2, s1, e2), &(e2 * si), tol);

    Ok(rep)
}
