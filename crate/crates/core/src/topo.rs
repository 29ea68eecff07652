//! Three-dimensional topological-basis representation of the BWM algebra.
//!
//! Diagram order is always (tcross, Uu, tsep). Basis vectors are
//! `e_i = f_i (tcross + lambda_i Uu + beta_i tsep)` for i = 1, 2 and
//! `e_3 = tsep / d`.

use serde::Serialize;

use crate::algebra::{r, CMatrix, Tolerance, C64};
use crate::error::{Error, Result};
use crate::params::{check_bwma, BwmaParams, Case, RelationReport};

/// Gram form of the three diagrams.
///
/// Hermitian case: a symmetric bilinear form. Unitary case: a sesquilinear
/// form `<x|y> = x^dagger G y`.
pub fn gram_matrix(p: &BwmaParams) -> CMatrix {
    let (s, d, w) = (p.sigma, p.d, p.w);
    let si = s.inv();
    match p.case {
        Case::Hermitian => CMatrix::from_rows(&[
            vec![d * ((si - s) * w + d), s * d, si * d],
            vec![s * d, d * d, d],
            vec![si * d, d, d * d],
        ]),
        Case::Unitary => CMatrix::from_rows(&[
            vec![d * d, si * d, s * d],
            vec![s * d, d * d, d],
            vec![si * d, d, d * d],
        ]),
    }
}

fn pairing(case: Case, g: &CMatrix, x: &[C64; 3], y: &[C64; 3]) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..3 {
        let xi = match case {
            Case::Hermitian => x[i],
            Case::Unitary => x[i].conj(),
        };
        for j in 0..3 {
            acc += xi * g.get(i, j) * y[j];
        }
    }
    acc
}

#[derive(Clone, Debug, Serialize)]
pub struct TopoCoeffs {
    pub alpha: [C64; 2],
    pub beta: [C64; 2],
    pub f: [C64; 2],
    pub gram: CMatrix,
}

impl TopoCoeffs {
    /// Normalized coefficient vectors of `e_1, e_2, e_3` over the diagrams.
    pub fn vectors(&self, d: C64) -> [[C64; 3]; 3] {
        let v = |i: usize| [self.f[i], self.f[i] * self.alpha[i], self.f[i] * self.beta[i]];
        [v(0), v(1), [r(0.0), r(0.0), d.inv()]]
    }

    /// Matrix of pairings `<e_mu|e_nu>`; the identity for a valid basis.
    pub fn overlaps(&self, p: &BwmaParams) -> CMatrix {
        let v = self.vectors(p.d);
        CMatrix::from_fn(3, 3, |i, j| pairing(p.case, &self.gram, &v[i], &v[j]))
    }
}

/// Coefficients `alpha_i = lambda_i`, `beta_i = -(sigma^-1 + lambda_i)/d` and
/// the normalizers `f_i = <c_i|c_i>^{-1/2}`.
pub fn topo_coeffs(p: &BwmaParams) -> Result<TopoCoeffs> {
    if p.d.norm() < 1e-12 {
        return Err(Error::VanishingLoop);
    }
    let gram = gram_matrix(p);
    let lambdas = [p.lambda1, p.lambda2];
    let beta = lambdas.map(|l| -(p.sigma.inv() + l) / p.d);
    let mut f = [r(0.0); 2];
    for i in 0..2 {
        let cv = [r(1.0), lambdas[i], beta[i]];
        let norm = pairing(p.case, &gram, &cv, &cv);
        let degenerate = norm.norm() < 1e-12
            || !norm.re.is_finite()
            || (p.case == Case::Unitary && (norm.re <= 0.0 || norm.im.abs() > 1e-9 * norm.norm()));
        if degenerate {
            return Err(Error::Normalizer {
                index: i + 1,
                lambda: format!("{}", lambdas[i]),
                norm: format!("{norm}"),
            });
        }
        f[i] = match p.case {
            Case::Hermitian => norm.sqrt().inv(),
            Case::Unitary => r(norm.re.sqrt().recip()),
        };
    }
    let coeffs = TopoCoeffs { alpha: lambdas, beta, f, gram };
    let deviation = (&coeffs.overlaps(p) - &CMatrix::identity(3)).norm();
    if !(deviation < 1e-8) {
        return Err(Error::NotOrthogonal { deviation });
    }
    Ok(coeffs)
}

#[derive(Clone, Debug, Serialize)]
pub struct TopoRep {
    #[serde(rename = "A")]
    pub a: CMatrix,
    #[serde(rename = "B")]
    pub b: CMatrix,
    #[serde(rename = "E_A")]
    pub e_a: CMatrix,
    #[serde(rename = "E_B")]
    pub e_b: CMatrix,
    pub params: BwmaParams,
    pub coeffs: TopoCoeffs,
    pub report: RelationReport,
}

impl TopoRep {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("rep serializes")
    }

    pub fn check(&self, tol: Tolerance) -> Result<RelationReport> {
        check_bwma(&self.a, &self.b, &self.e_a, &self.e_b, &self.params, tol)
    }

    /// `(A, B)` rescaled by `1/lambda2 = -lambda1`, which moves the
    /// `lambda2` eigenvalue to 1. No longer a BWM representation in general,
    /// but still satisfies the braid relation.
    pub fn phase_normalized(&self) -> (CMatrix, CMatrix) {
        let s = -self.params.lambda1;
        (&self.a * s, &self.b * s)
    }
}

fn closed_form(p: &BwmaParams, f: [C64; 2]) -> Result<(CMatrix, CMatrix, CMatrix, CMatrix)> {
    let (l1, s, d) = (p.lambda1, p.sigma, p.d);
    let l = l1 + l1.inv();
    if l.norm() < 1e-12 {
        return Err(Error::VanishingTrace);
    }
    let (f1, f2) = (f[0], f[1]);
    let pre = (d * l).inv();
    let a = CMatrix::diag(&[l1, p.lambda2, s]);
    let e_a = CMatrix::diag(&[r(0.0), r(0.0), d]);
    let e_b = &CMatrix::from_rows(&[
        vec![(f1 * f1 * l).inv(), -(l * f1 * f2).inv(), f1.inv()],
        vec![-(l * f1 * f2).inv(), (f2 * f2 * l).inv(), -f2.inv()],
        vec![f1.inv(), -f2.inv(), l],
    ]) * pre;
    let off = (1.0 - s / l1 - l1 * s * d) * f2 / f1;
    let b = &CMatrix::from_rows(&[
        vec![(s * (d - 1.0) - l1.inv()) / l1, off, (l1 * f1).inv()],
        vec![off, l1 * (s * (d - 1.0) + l1), l1 / f2],
        vec![(l1 * f1).inv(), l1 / f2, l / s],
    ]) * pre;
    Ok((a, b, e_a, e_b))
}

/// Builds `(A, B, E_A, E_B)` and runs the relation suite, without rejecting
/// a failing result. The report is stored on the returned value.
pub fn assemble(p: &BwmaParams) -> Result<TopoRep> {
    let coeffs = topo_coeffs(p)?;
    let (a, b, e_a, e_b) = closed_form(p, coeffs.f)?;
    let report = check_bwma(&a, &b, &e_a, &e_b, p, Tolerance::default())?;
    Ok(TopoRep { a, b, e_a, e_b, params: p.clone(), coeffs, report })
}

/// Like [`assemble`], but fails unless every relation holds.
pub fn build_rep(p: &BwmaParams) -> Result<TopoRep> {
    let rep = assemble(p)?;
    gate(rep)
}

fn gate(rep: TopoRep) -> Result<TopoRep> {
    if rep.report.overall_pass {
        Ok(rep)
    } else {
        let failed: Vec<String> = rep.report.failures().iter().map(|e| format!("{} ({:.2e})", e.id, e.residual)).collect();
        Err(Error::RelationGate { failed: failed.join("; ") })
    }
}

/// Conjugates all four matrices by a unitary diagonal gauge: `X -> G X G^dagger`.
pub fn standardize(rep: &TopoRep, gauge: &CMatrix) -> Result<TopoRep> {
    if gauge.shape() != (3, 3) {
        return Err(Error::BadGauge);
    }
    let off_diag: f64 = (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).filter(|(i, j)| i != j).map(|(i, j)| gauge.get(i, j).norm()).sum();
    if off_diag > 1e-12 || gauge.unitarity_deviation() > 1e-12 {
        return Err(Error::BadGauge);
    }
    let gd = gauge.dagger();
    let conj = |x: &CMatrix| &(gauge * x) * &gd;
    let mut out = rep.clone();
    out.a = conj(&rep.a);
    out.b = conj(&rep.b);
    out.e_a = conj(&rep.e_a);
    out.e_b = conj(&rep.e_b);
    out.report = out.check(Tolerance::default())?;
    gate(out)
}

const LIMIT_STEPS: [f64; 3] = [1e-4, 5e-5, 2.5e-5];

/// Hermitian representation at `q -> 1` with `sigma = q^m`, obtained by
/// Richardson extrapolation along `q = 1 + eps`.
///
/// Returned in the normalization where `A = -diag(1, -1, 1)`; this is the
/// representation with `lambda1 = sigma = -1`, `W = 0` and `d = 1 - m`.
pub fn q1_limit_rep(m: i32) -> Result<TopoRep> {
    let samples: Vec<TopoRep> = LIMIT_STEPS
        .iter()
        .map(|&eps| BwmaParams::from_q(r(1.0 + eps), m, Case::Hermitian).and_then(|p| assemble(&p)))
        .collect::<Result<_>>()?;
    // Steps halve, so first-order Richardson is 2 f(h/2) - f(h).
    let first = |pick: &dyn Fn(&TopoRep) -> &CMatrix, i: usize| &(pick(&samples[i + 1]) * 2.0) - pick(&samples[i]);
    let mut spread: f64 = 0.0;
    let mut extrapolate = |pick: &dyn Fn(&TopoRep) -> &CMatrix| {
        let (r0, r1) = (first(pick, 0), first(pick, 1));
        let r2 = &(&(&r1 * 4.0) - &r0) * (1.0 / 3.0);
        // Last tableau correction is the error estimate.
        spread = spread.max((&r2 - &r1).norm());
        r2
    };
    let b = extrapolate(&|t| &t.b);
    let e_b = extrapolate(&|t| &t.e_b);
    let e_a = extrapolate(&|t| &t.e_a);
    let a = extrapolate(&|t| &t.a);
    if !(spread < 1e-8) || !b.is_finite() || !e_b.is_finite() {
        return Err(Error::DivergentLimit { spread });
    }
    let d = r(e_a.get(2, 2).re);
    let params = BwmaParams::limit(r(-1.0), r(-1.0), d, Case::Hermitian, m);
    let coeffs = TopoCoeffs {
        alpha: [r(1.0), r(-1.0)],
        beta: samples[2].coeffs.beta,
        f: samples[2].coeffs.f,
        gram: gram_matrix(&BwmaParams::limit(r(1.0), r(1.0), d, Case::Hermitian, m)),
    };
    let (a, b) = (-&a, -&b);
    let report = check_bwma(&a, &b, &e_a, &e_b, &params, Tolerance::default())?;
    gate(TopoRep { a, b, e_a, e_b, params, coeffs, report })
}

/// Closed forms of `E_B` and `B` for the standard Hermitian family
/// `lambda1 = q`, `sigma = q^-2`, `d = 1 + q + 1/q`.
pub fn standard_closed_form(q: f64) -> (CMatrix, CMatrix) {
    let d = 1.0 + q + 1.0 / q;
    let rt = (d * d - d - 1.0).sqrt();
    let sd = d.sqrt();
    let e_b = CMatrix::from_real_rows(&[
        vec![(d * d - d - 1.0) / d, -rt / sd, rt / d],
        vec![-rt / sd, 1.0, -1.0 / sd],
        vec![rt / d, -1.0 / sd, 1.0 / d],
    ]);
    let b12 = -q.powi(-2) * rt / (sd * (d - 1.0));
    let b13 = rt / (d * q);
    let b23 = q / sd;
    let b = CMatrix::from_real_rows(&[
        vec![q.powi(-4) / (d * (d - 1.0)), b12, b13],
        vec![b12, (d - 2.0) / (d - 1.0), b23],
        vec![b13, b23, q * q / d],
    ]);
    (e_b, b)
}

/// The printed normalizer formulas (exponent +1/2), one per case.
pub fn printed_normalizers(p: &BwmaParams) -> [C64; 2] {
    let (s, d) = (p.sigma, p.d);
    [p.lambda1, p.lambda2].map(|l| match p.case {
        Case::Hermitian => (d * (l * l + 1.0) * (-(s.inv() + l) / (l * d) + s / l + d)).sqrt(),
        Case::Unitary => ((d - 1.0) * (l + l.inv()) * (s + l * d + l.inv())).sqrt(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalizerComparison {
    pub index: usize,
    pub gram_f: C64,
    pub printed: C64,
    /// `printed * gram_f`; modulus 1 when the printed value is `1/f`.
    pub product: C64,
}

pub fn normalizer_report(p: &BwmaParams) -> Result<Vec<NormalizerComparison>> {
    let coeffs = topo_coeffs(p)?;
    let printed = printed_normalizers(p);
    Ok((0..2)
        .map(|i| NormalizerComparison { index: i + 1, gram_f: coeffs.f[i], printed: printed[i], product: printed[i] * coeffs.f[i] })
        .collect())
}

/// The unitary-case `B` exactly as printed (no overall prefactor).
pub fn printed_unitary_b(p: &BwmaParams, f: [C64; 2]) -> CMatrix {
    let (l1, s, d) = (p.lambda1, p.sigma, p.d);
    let (f1, f2) = (f[0], f[1]);
    CMatrix::from_rows(&[
        vec![(s * (d - 1.0) - l1.inv()) / l1, (1.0 - s / l1 - l1 * s * d) * f2 / f1, (l1 * f1).inv()],
        vec![-(1.0 + l1 * s + s * d / l1) * f1 / f2, l1 * (s * (d - 1.0) + l1), l1 / f2],
        vec![(l1 * f1.conj()).inv(), -l1 / f2.conj(), (l1 + l1.inv()) / s],
    ])
}

/// The unitary-case `E_B` exactly as printed.
pub fn printed_unitary_e_b(p: &BwmaParams, f: [C64; 2]) -> CMatrix {
    let l = p.lambda1 + p.lambda1.inv();
    let (f1, f2) = (f[0], f[1]);
    &CMatrix::from_rows(&[
        vec![r(f1.norm_sqr().recip()) / (l * l), -l / (f1 * f2.conj()), (l * f1).inv()],
        vec![-l / (f1.conj() * f2), r(f2.norm_sqr().recip()) / (l * l), -(l * f2).inv()],
        vec![l / f1.conj(), -(l * f2.conj()).inv(), r(1.0)],
    ]) * p.d.inv()
}

/// Relation suite on the printed unitary matrices, for comparison with the
/// working construction.
pub fn printed_unitary_report(p: &BwmaParams) -> Result<RelationReport> {
    let coeffs = topo_coeffs(p)?;
    let a = CMatrix::diag(&[p.lambda1, p.lambda2, p.sigma]);
    let e_a = CMatrix::diag(&[r(0.0), r(0.0), p.d]);
    let b = printed_unitary_b(p, coeffs.f);
    let e_b = printed_unitary_e_b(p, coeffs.f);
    let mut rep = check_bwma(&a, &b, &e_a, &e_b, p, Tolerance::default())?;
    let dev = b.unitarity_deviation();
    rep.push("unitary: B B^dagger = I", dev, dev < 1e-10);
    Ok(rep)
}
