//! Spin-1 chain: exchange and cup/cap operators, the Heisenberg identity,
//! spectral-parameter R-matrices, and the four-site singlet sector.
//!
//! Single-site basis order is (|1>, |0>, |-1>); site 1 is the leftmost
//! tensor factor.

use serde::Serialize;

use crate::algebra::{c, check_pair, eig_hermitian, embed_pair, embed_site, kron, r, residual, CMatrix, ChainOperator, Tolerance, C64};
use crate::error::{Error, Result};
use crate::params::RelationReport;
use crate::topo::TopoRep;

/// Index of magnetic quantum number `m` in the single-site basis.
fn idx(m: i32) -> usize {
    (1 - m) as usize
}

fn ket2(m1: i32, m2: i32) -> usize {
    3 * idx(m1) + idx(m2)
}

#[derive(Clone, Debug)]
pub struct SpinOps {
    pub s_plus: CMatrix,
    pub s_minus: CMatrix,
    pub s3: CMatrix,
    pub sx: CMatrix,
    pub sy: CMatrix,
}

impl SpinOps {
    pub fn spin_one() -> Self {
        let s2 = 2f64.sqrt();
        let s_plus = CMatrix::from_real_rows(&[vec![0.0, s2, 0.0], vec![0.0, 0.0, s2], vec![0.0, 0.0, 0.0]]);
        let s_minus = s_plus.transpose();
        let s3 = CMatrix::real_diag(&[1.0, 0.0, -1.0]);
        let sx = &(&s_plus + &s_minus) * 0.5;
        let sy = &(&s_plus - &s_minus) * c(0.0, -0.5);
        Self { s_plus, s_minus, s3, sx, sy }
    }

    /// `S_k . S_l` on an `n`-site chain.
    pub fn dot(&self, k: usize, l: usize, n: usize) -> Result<CMatrix> {
        check_pair(k, l, n)?;
        let mut acc = CMatrix::zeros(3usize.pow(n as u32), 3usize.pow(n as u32));
        for op in [&self.sx, &self.sy, &self.s3] {
            acc = &acc + &(&embed_site(op, k, n)? * &embed_site(op, l, n)?);
        }
        Ok(acc)
    }

    /// Component `a` (0 = x, 1 = y, 2 = z) of the total spin.
    pub fn total(&self, a: usize, n: usize) -> Result<CMatrix> {
        let op = [&self.sx, &self.sy, &self.s3][a];
        let mut acc = CMatrix::zeros(3usize.pow(n as u32), 3usize.pow(n as u32));
        for k in 1..=n {
            acc = &acc + &embed_site(op, k, n)?;
        }
        Ok(acc)
    }
}

/// Two-site exchange operator assembled from its nine ket-bra terms.
pub fn exchange9() -> CMatrix {
    let mut t = CMatrix::zeros(9, 9);
    let terms = [
        ((1, 1), (1, 1)),
        ((-1, -1), (-1, -1)),
        ((0, 0), (0, 0)),
        ((1, 0), (0, 1)),
        ((0, 1), (1, 0)),
        ((0, -1), (-1, 0)),
        ((-1, 0), (0, -1)),
        ((1, -1), (-1, 1)),
        ((-1, 1), (1, -1)),
    ];
    for ((a, b), (cc, d)) in terms {
        t.set(ket2(a, b), ket2(cc, d), r(1.0));
    }
    t
}

/// The seven-term variant of the exchange operator, which drops the
/// `|1,-1> <-> |-1,1>` terms. Kept only to show it is not the exchange.
pub fn seven_term_exchange() -> CMatrix {
    let mut t = exchange9();
    t.set(ket2(1, -1), ket2(-1, 1), r(0.0));
    t.set(ket2(-1, 1), ket2(1, -1), r(0.0));
    t
}

/// `|w> = |1,-1> + |-1,1> + e^{i phi} |0,0>` on two sites.
pub fn cup_vector(phi: f64) -> CMatrix {
    let mut w = CMatrix::zeros(9, 1);
    w.set(ket2(1, -1), 0, r(1.0));
    w.set(ket2(-1, 1), 0, r(1.0));
    w.set(ket2(0, 0), 0, C64::from_polar(1.0, phi));
    w
}

/// `M = |w><w|` on two sites.
pub fn cup_cap9(phi: f64) -> CMatrix {
    let w = cup_vector(phi);
    &w * &w.dagger()
}

pub fn t_op(k: usize, l: usize, n: usize) -> Result<ChainOperator> {
    Ok(ChainOperator::new(n, embed_pair(&exchange9(), k, l, n)?, format!("T_{{{k},{l}}}")))
}

pub fn m_op(k: usize, l: usize, n: usize, phi: f64) -> Result<ChainOperator> {
    Ok(ChainOperator::new(n, embed_pair(&cup_cap9(phi), k, l, n)?, format!("M_{{{k},{l}}}")))
}

/// `T - M(phi)` on pair `(k, l)`.
fn exchange_minus_cup(k: usize, l: usize, n: usize, phi: f64) -> Result<CMatrix> {
    Ok(&t_op(k, l, n)?.matrix - &m_op(k, l, n, phi)?.matrix)
}

/// Checks `T_kl - M_kl(phi) = S_k . S_l` on every pair of an `n`-site chain.
pub fn heisenberg_check_phi(n: usize, phi: f64) -> Result<RelationReport> {
    if n < 2 {
        return Err(Error::ChainLength { n, reason: "need at least two sites" });
    }
    let spins = SpinOps::spin_one();
    let mut rep = RelationReport::new();
    for k in 1..n {
        for l in k + 1..=n {
            let lhs = exchange_minus_cup(k, l, n, phi)?;
            let rhs = spins.dot(k, l, n)?;
            let res = residual(&lhs, &rhs)?;
            rep.push(format!("T_{{{k},{l}}} - M_{{{k},{l}}} = S_{k}.S_{l}"), res, res < 1e-12);
        }
    }
    Ok(rep)
}

pub fn heisenberg_check(n: usize) -> Result<RelationReport> {
    heisenberg_check_phi(n, std::f64::consts::PI)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Generator {
    A,
    B,
}

/// Spectral-parameter braid matrix
/// `R(x) = (x-1)(x-x_a) S + W x (x-1) E - W x (x-x_a) I`,
/// with `x_a = -q/sigma` (type a) or `x_b = 1/(q sigma)` (type b), built on
/// `(A, E_A)` or `(B, E_B)`.
pub fn r_check_matrix(x: C64, kind: SpectralKind, rep: &TopoRep, gen: Generator) -> CMatrix {
    let (s, e) = match gen {
        Generator::A => (&rep.a, &rep.e_a),
        Generator::B => (&rep.b, &rep.e_b),
    };
    let xa = kind.pole(rep);
    let w = rep.params.w;
    let id = CMatrix::identity(s.rows());
    &(&(s * ((x - 1.0) * (x - xa))) + &(e * (w * x * (x - 1.0)))) - &(&id * (w * x * (x - xa)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SpectralKind {
    TypeA,
    TypeB,
}

impl SpectralKind {
    pub fn pole(self, rep: &TopoRep) -> C64 {
        let (q, s) = (rep.params.lambda1, rep.params.sigma);
        match self {
            SpectralKind::TypeA => -q / s,
            SpectralKind::TypeB => (q * s).inv(),
        }
    }
}

/// Normalized type-b form `I - ((x-1)/(W x)) S - ((x-1)/(x-x_b)) E`.
pub fn r_check_normalized_b(x: C64, rep: &TopoRep, gen: Generator) -> CMatrix {
    let (s, e) = match gen {
        Generator::A => (&rep.a, &rep.e_a),
        Generator::B => (&rep.b, &rep.e_b),
    };
    let xb = SpectralKind::TypeB.pole(rep);
    let w = rep.params.w;
    let id = CMatrix::identity(s.rows());
    &(&id - &(s * ((x - 1.0) / (w * x)))) - &(e * ((x - 1.0) / (x - xb)))
}

/// Residual of `R_A(x) R_B(xy) R_A(y) = R_B(y) R_A(xy) R_B(x)`.
pub fn multiplicative_ybe_residual(rep: &TopoRep, kind: SpectralKind, x: C64, y: C64) -> f64 {
    let ra = |z| r_check_matrix(z, kind, rep, Generator::A);
    let rb = |z| r_check_matrix(z, kind, rep, Generator::B);
    let lhs = &(&ra(x) * &rb(x * y)) * &ra(y);
    let rhs = &(&rb(y) * &ra(x * y)) * &rb(x);
    residual(&lhs, &rhs).expect("same shape")
}

/// Rational limit `R(u) = I + u T - (u/(u - beta)) M` on two sites.
pub fn rational_r(u: f64, beta: f64, t: &CMatrix, m_mat: &CMatrix) -> Result<CMatrix> {
    if (u - beta).abs() < 1e-14 {
        return Err(Error::Pole(beta));
    }
    if t.shape() != m_mat.shape() || !t.is_square() {
        return Err(Error::Shape { op: "rational_r", left: t.shape(), right: m_mat.shape() });
    }
    let id = CMatrix::identity(t.rows());
    Ok(&(&id + &(t * u)) - &(m_mat * (u / (u - beta))))
}

/// Residual of the additive Yang-Baxter equation
/// `R12(u) R23(u+v) R12(v) = R23(v) R12(u+v) R23(u)` on three sites, using
/// `T` and `M(pi)`.
pub fn additive_ybe_residual(u: f64, v: f64, beta: f64) -> Result<f64> {
    let t = exchange9();
    let m = cup_cap9(std::f64::consts::PI);
    let id3 = CMatrix::identity(3);
    let r12 = |z: f64| rational_r(z, beta, &t, &m).map(|x| kron(&x, &id3));
    let r23 = |z: f64| rational_r(z, beta, &t, &m).map(|x| kron(&id3, &x));
    let lhs = &(&r12(u)? * &r23(u + v)?) * &r12(v)?;
    let rhs = &(&r23(v)? * &r12(u + v)?) * &r23(u)?;
    residual(&lhs, &rhs)
}

/// Periodic chain `H = J sum_k (T_{k,k+1} - M_{k,k+1}(pi))`.
pub fn build_hamiltonian(n: usize, j: f64) -> Result<ChainOperator> {
    build_hamiltonian_phi(n, j, std::f64::consts::PI)
}

pub fn build_hamiltonian_phi(n: usize, j: f64, phi: f64) -> Result<ChainOperator> {
    if !(3..=6).contains(&n) {
        return Err(Error::ChainLength { n, reason: "periodic chain needs 3 to 6 sites" });
    }
    let dim = 3usize.pow(n as u32);
    let mut h = CMatrix::zeros(dim, dim);
    for k in 1..=n {
        let l = k % n + 1;
        h = &h + &exchange_minus_cup(k.min(l), k.max(l), n, phi)?;
    }
    Ok(ChainOperator::new(n, &h * j, format!("H(J={j})")))
}

/// Total spin squared `2n I + 2 sum_{i<j} (T_ij - M_ij(phi))`.
pub fn total_spin_sq(n: usize, phi: f64) -> Result<CMatrix> {
    let dim = 3usize.pow(n as u32);
    let mut acc = &CMatrix::identity(dim) * (2.0 * n as f64);
    for k in 1..n {
        for l in k + 1..=n {
            acc = &acc + &(&exchange_minus_cup(k, l, n, phi)? * 2.0);
        }
    }
    Ok(acc)
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainSpectrum {
    pub eigenvalues: Vec<f64>,
    pub singlet_eigenvalues: Vec<f64>,
    #[serde(skip)]
    pub singlet_vectors: CMatrix,
    /// Eigenvalue of `T_{1,3} - M_{1,3}` (equal to that of `T_{2,4} - M_{2,4}`)
    /// on each singlet eigenvector.
    pub mu_values: Vec<f64>,
    /// Eigenvalue of the sum over both next-nearest pairs.
    pub mu_pair_sum: Vec<f64>,
    /// `|(T13 - M13) g - (T24 - M24) g|` per eigenvector.
    pub pair_asymmetry: Vec<f64>,
    /// `|S^2 g|` per eigenvector.
    pub s2_norms: Vec<f64>,
    /// `2 (n + E/J + 2 mu)`: the total-spin value reassembled from energy and mu.
    pub s2_reconstruction: Vec<f64>,
}

const SINGLET_CUT: f64 = 1e-8;

/// Singlet sector of a periodic Hamiltonian built with `M(pi)`.
pub fn singlet_spectrum(h: &ChainOperator) -> Result<ChainSpectrum> {
    singlet_spectrum_phi(h, std::f64::consts::PI)
}

pub fn singlet_spectrum_phi(h: &ChainOperator, phi: f64) -> Result<ChainSpectrum> {
    let n = h.n_sites;
    if n != 4 {
        return Err(Error::ChainLength { n, reason: "singlet analysis is for four sites" });
    }
    let tol = Tolerance::default();
    let (eigenvalues, _) = eig_hermitian(&h.matrix, tol)?;
    let s2 = total_spin_sq(n, phi)?;
    let (s2_vals, s2_vecs) = eig_hermitian(&s2, tol)?;
    let null: Vec<usize> = (0..s2_vals.len()).filter(|&i| s2_vals[i].abs() < SINGLET_CUT).collect();
    if null.len() != 3 {
        return Err(Error::SingletDimension(null.len()));
    }
    let p = CMatrix::hstack(&null.iter().map(|&i| s2_vecs.col(i)).collect::<Vec<_>>());
    let hs = &(&p.dagger() * &h.matrix) * &p;
    let (singlet_eigenvalues, u) = eig_hermitian(&hs, tol)?;
    let g = &p * &u;
    let x13 = exchange_minus_cup(1, 3, n, phi)?;
    let x24 = exchange_minus_cup(2, 4, n, phi)?;
    let mut mu_values = Vec::new();
    let mut mu_pair_sum = Vec::new();
    let mut pair_asymmetry = Vec::new();
    let mut s2_norms = Vec::new();
    for k in 0..3 {
        let gk = g.col(k);
        let a = &x13 * &gk;
        let b = &x24 * &gk;
        let m13 = gk.inner_product(&a).re;
        let m24 = gk.inner_product(&b).re;
        mu_values.push(0.5 * (m13 + m24));
        mu_pair_sum.push(m13 + m24);
        pair_asymmetry.push((&a - &b).norm());
        s2_norms.push((&s2 * &gk).norm());
    }
    let j = coupling(h);
    let s2_reconstruction = (0..3)
        .map(|k| {
            let e_over_j = if j != 0.0 { singlet_eigenvalues[k] / j } else { f64::NAN };
            2.0 * (n as f64 + e_over_j + 2.0 * mu_values[k])
        })
        .collect();
    Ok(ChainSpectrum { eigenvalues, singlet_eigenvalues, singlet_vectors: g, mu_values, mu_pair_sum, pair_asymmetry, s2_norms, s2_reconstruction })
}

/// Recovers `J` from `H = J sum (T - M)`: the all-up state has energy `n J`.
fn coupling(h: &ChainOperator) -> f64 {
    h.matrix.get(0, 0).re / h.n_sites as f64
}

/// Diagram vectors `(tcross, Uu, tsep)` on four sites at `q = 1`:
/// cups on (1,3)(2,4), (1,4)(2,3) and (1,2)(3,4).
pub fn diagram_vectors_q1() -> Result<[CMatrix; 3]> {
    Ok([pair_state(&[(1, 3), (2, 4)])?, pair_state(&[(1, 4), (2, 3)])?, pair_state(&[(1, 2), (3, 4)])?])
}

/// `|w>_{ab} |w>_{cd}` built entry by entry.
fn pair_state(pairs: &[(usize, usize); 2]) -> Result<CMatrix> {
    let w = cup_vector(std::f64::consts::PI);
    let mut out = CMatrix::zeros(81, 1);
    for x in 0..81 {
        let digit = |site: usize| (x / 3usize.pow((4 - site) as u32)) % 3;
        let amp1 = w.get(3 * digit(pairs[0].0) + digit(pairs[0].1), 0);
        let amp2 = w.get(3 * digit(pairs[1].0) + digit(pairs[1].1), 0);
        out.set(x, 0, amp1 * amp2);
    }
    Ok(out)
}

/// Topological basis on four spin-1 sites at `q = 1` (loop value 3).
///
/// `e_3` is the (1,2)(3,4) cup state over 3. `e_1`, `e_2` span the rest of the
/// singlet sector and are the `+1` / `-1` eigenvectors of `T_{1,2}`. Phases are
/// fixed by a positive overlap with the crossing diagram (1,3)(2,4); `e_3` has
/// no overlap freedom and keeps its sign.
pub fn topo_vectors_q1() -> Result<[CMatrix; 3]> {
    let [tcross, _, tsep] = diagram_vectors_q1()?;
    let e3 = &tsep * (1.0 / 3.0);
    let s2 = total_spin_sq(4, std::f64::consts::PI)?;
    let (vals, vecs) = eig_hermitian(&s2, Tolerance::default())?;
    let null: Vec<CMatrix> = (0..vals.len()).filter(|&i| vals[i].abs() < SINGLET_CUT).map(|i| vecs.col(i)).collect();
    if null.len() != 3 {
        return Err(Error::SingletDimension(null.len()));
    }
    // Orthonormal complement of e3 inside the singlet space.
    let mut basis: Vec<CMatrix> = Vec::new();
    for v in &null {
        let mut x = v - &(&e3 * e3.inner_product(v));
        for b in &basis {
            x = &x - &(b * b.inner_product(&x));
        }
        let nrm = x.norm();
        if nrm > 1e-6 {
            basis.push(&x * (1.0 / nrm));
        }
    }
    if basis.len() != 2 {
        return Err(Error::SingletDimension(basis.len() + 1));
    }
    let t12 = t_op(1, 2, 4)?.matrix;
    let q = CMatrix::hstack(&basis);
    let t_small = &(&q.dagger() * &t12) * &q;
    let (_, u) = eig_hermitian(&t_small, Tolerance::default())?;
    // Ascending order: column 0 is the -1 eigenvector, column 1 the +1.
    let mut e1 = &q * &u.col(1);
    let mut e2 = &q * &u.col(0);
    for e in [&mut e1, &mut e2] {
        let ov = tcross.inner_product(e);
        if ov.norm() > 1e-12 {
            *e = &*e * (ov.conj() / ov.norm());
        }
    }
    Ok([e1, e2, e3])
}

#[derive(Clone, Debug, Serialize)]
pub struct CoefficientRow {
    pub entry: String,
    pub computed: f64,
    pub tabulated: f64,
    pub abs_diff: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BasisTableReport {
    pub rows: Vec<CoefficientRow>,
    /// Eigenvalues of the Hamiltonian (J = 1) restricted to the basis.
    pub projected_eigenvalues: Vec<f64>,
    /// Largest imaginary part over all compared matrix elements.
    pub max_imag: f64,
}

impl BasisTableReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn mismatches(&self, tol: f64) -> Vec<&CoefficientRow> {
        self.rows.iter().filter(|r| r.abs_diff > tol).collect()
    }
}

/// Matrix `<e_mu|Op|e_nu>` in the q = 1 topological basis.
pub fn project(op: &CMatrix, e: &[CMatrix; 3]) -> CMatrix {
    CMatrix::from_fn(3, 3, |i, j| e[i].inner_product(&(op * &e[j])))
}

/// Reference tables, in the basis order (e1, e2, e3). Column nu holds the
/// coefficients of Op|e_nu>.
fn reference_tables() -> Vec<(&'static str, [[f64; 3]; 3])> {
    let (s3, s5, s15) = (3f64.sqrt(), 5f64.sqrt(), 15f64.sqrt());
    let t23 = [
        [1.0 / 6.0, -s15 / 6.0, 2.0 * s5 / 6.0],
        [-s15 / 6.0, 3.0 / 6.0, 2.0 * s3 / 6.0],
        [2.0 * s5 / 6.0, 2.0 * s3 / 6.0, 2.0 / 6.0],
    ];
    let m23 = [[5.0 / 3.0, -s15 / 3.0, s5 / 3.0], [-s15 / 3.0, 1.0, -s3 / 3.0], [s5 / 3.0, -s3 / 3.0, 1.0 / 3.0]];
    let t12 = [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]];
    let m12 = [[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 3.0]];
    let h = [[-1.0, s15 / 3.0, 0.0], [s15 / 3.0, -3.0, 4.0 / s3], [0.0, 4.0 / s3, -4.0]];
    vec![("T12", t12), ("M12", m12), ("T34", t12), ("M34", m12), ("T23", t23), ("M23", m23), ("T14", t23), ("M14", m23), ("H", h)]
}

/// Compares the basis matrix elements of T, M and H (J = 1) with the
/// tabulated coefficients. Differences are reported, never raised.
pub fn basis_table_report() -> Result<BasisTableReport> {
    let e = topo_vectors_q1()?;
    let pi = std::f64::consts::PI;
    let op = |name: &str| -> Result<CMatrix> {
        Ok(match name {
            "T12" => t_op(1, 2, 4)?.matrix,
            "M12" => m_op(1, 2, 4, pi)?.matrix,
            "T34" => t_op(3, 4, 4)?.matrix,
            "M34" => m_op(3, 4, 4, pi)?.matrix,
            "T23" => t_op(2, 3, 4)?.matrix,
            "M23" => m_op(2, 3, 4, pi)?.matrix,
            "T14" => t_op(1, 4, 4)?.matrix,
            "M14" => m_op(1, 4, 4, pi)?.matrix,
            "H" => build_hamiltonian(4, 1.0)?.matrix,
            _ => unreachable!(),
        })
    };
    let mut rows = Vec::new();
    let mut max_imag: f64 = 0.0;
    for (name, table) in reference_tables() {
        let proj = project(&op(name)?, &e);
        for i in 0..3 {
            for j in 0..3 {
                let z = proj.get(i, j);
                max_imag = max_imag.max(z.im.abs());
                rows.push(CoefficientRow {
                    entry: format!("<e{}|{name}|e{}>", i + 1, j + 1),
                    computed: z.re,
                    tabulated: table[i][j],
                    abs_diff: (z.re - table[i][j]).abs(),
                });
            }
        }
    }
    // Normalizers of e1 and e2 over the diagrams, against 1/(2 sqrt 3).
    let [tc, uu, ts] = diagram_vectors_q1()?;
    let f_ref = 1.0 / (2.0 * 3f64.sqrt());
    let e1_dir = &(&tc + &uu) - &(&ts * (2.0 / 3.0));
    let e2_dir = &tc - &uu;
    for (k, dir) in [(1, e1_dir), (2, e2_dir)] {
        let f = 1.0 / dir.norm();
        rows.push(CoefficientRow { entry: format!("f{k}"), computed: f, tabulated: f_ref, abs_diff: (f - f_ref).abs() });
    }
    let hp = project(&build_hamiltonian(4, 1.0)?.matrix, &e);
    let (projected_eigenvalues, _) = eig_hermitian(&hp, Tolerance::default())?;
    Ok(BasisTableReport { rows, projected_eigenvalues, max_imag })
}
