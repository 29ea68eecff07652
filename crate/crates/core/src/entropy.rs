//! Entanglement entropy and L1-norm of a d-function column, and the scan
//! that locates and matches their extrema in theta.

use std::f64::consts::PI;
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::wigner::{labels, little_d, little_d_deriv, HalfInt};

/// `p_{m'} = |d^j_{m'm}(theta)|^2`, ordered `m' = j .. -j`.
pub fn reduced_probs(j: HalfInt, m: HalfInt, theta: f64) -> Result<Vec<f64>> {
    labels(j).into_iter().map(|mr| little_d(j, mr, m, theta).map(|d| d * d)).collect()
}

/// Shannon entropy in bits, `0 log 0 = 0`.
pub fn entropy(p: &[f64]) -> Result<f64> {
    if p.iter().any(|&x| !(x >= -1e-15) || !x.is_finite()) {
        return Err(Error::Distribution("negative or non-finite entry".into()));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::Distribution(format!("sums to {total}")));
    }
    Ok(p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum::<f64>().max(0.0))
}

/// `f = sum_{m'} |d^j_{m'm}(theta)|`.
pub fn l1_norm(j: HalfInt, m: HalfInt, theta: f64) -> Result<f64> {
    labels(j).into_iter().map(|mr| little_d(j, mr, m, theta).map(f64::abs)).sum()
}

fn column_entropy(j: HalfInt, m: HalfInt, theta: f64) -> Result<f64> {
    entropy(&reduced_probs(j, m, theta)?)
}

/// `2 log2 f - S`; nonnegative up to rounding.
pub fn bound_check(j: HalfInt, m: HalfInt, theta: f64) -> Result<f64> {
    Ok(2.0 * l1_norm(j, m, theta)?.log2() - column_entropy(j, m, theta)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanRecord {
    pub theta: f64,
    pub entropy: f64,
    pub l1: f64,
    pub d_entropy: f64,
    pub d_l1: f64,
    pub bound_gap: f64,
    /// A column entry changes sign within `theta +- h`.
    pub l1_kink: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Min,
    Max,
}

#[derive(Clone, Debug, Serialize)]
pub struct Extremum {
    pub theta: f64,
    pub kind: Kind,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CommonExtremum {
    pub theta_entropy: f64,
    pub theta_l1: f64,
    pub entropy_kind: Kind,
    pub l1_kind: Kind,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtremumReport {
    pub j: String,
    pub m: String,
    pub entropy_extrema: Vec<Extremum>,
    pub l1_extrema: Vec<Extremum>,
    pub common_extrema: Vec<CommonExtremum>,
    pub entropy_only: Vec<Extremum>,
    pub l1_only: Vec<Extremum>,
    /// Set when `m = 0`: the common-extremum guarantee does not apply.
    pub m_zero: bool,
    pub grid_step: f64,
    pub min_bound_gap: f64,
    pub max_normalization_error: f64,
}

impl ExtremumReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// A common extremum within `tol` of `theta`.
    pub fn common_near(&self, theta: f64, tol: f64) -> Option<&CommonExtremum> {
        self.common_extrema.iter().find(|c| (c.theta_entropy - theta).abs() <= tol && (c.theta_l1 - theta).abs() <= tol)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Scan {
    pub records: Vec<ScanRecord>,
    pub report: ExtremumReport,
}

/// `i pi / n` for `i = 1..=n`.
pub fn default_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|i| i as f64 * PI / n as f64).collect()
}

pub const DEFAULT_POINTS: usize = 2001;
pub const DEFAULT_STEP: f64 = 1e-4;

fn column(j: HalfInt, m: HalfInt, theta: f64) -> Result<Vec<f64>> {
    labels(j).into_iter().map(|mr| little_d(j, mr, m, theta)).collect()
}

fn sign_changes(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).any(|(x, y)| x * y < 0.0)
}

fn make_record(j: HalfInt, m: HalfInt, theta: f64, h: f64) -> Result<ScanRecord> {
    let s = column_entropy(j, m, theta)?;
    let f = l1_norm(j, m, theta)?;
    let d_entropy = (column_entropy(j, m, theta + h)? - column_entropy(j, m, theta - h)?) / (2.0 * h);
    let (lo, mid, hi) = (column(j, m, theta - h)?, column(j, m, theta)?, column(j, m, theta + h)?);
    let left_kink = sign_changes(&lo, &mid);
    let right_kink = sign_changes(&mid, &hi);
    let f_lo = l1_norm(j, m, theta - h)?;
    let f_hi = l1_norm(j, m, theta + h)?;
    let d_l1 = if left_kink && !right_kink {
        (f_hi - f) / h
    } else if right_kink && !left_kink {
        (f - f_lo) / h
    } else {
        (f_hi - f_lo) / (2.0 * h)
    };
    Ok(ScanRecord { theta, entropy: s, l1: f, d_entropy, d_l1, bound_gap: 2.0 * f.log2() - s, l1_kink: left_kink || right_kink })
}

/// Derivative values below this are treated as zero when tracking signs.
const FLAT: f64 = 1e-9;

fn locate(
    records: &[ScanRecord],
    value: impl Fn(&ScanRecord) -> f64,
    deriv: impl Fn(&ScanRecord) -> f64,
    kink: impl Fn(&ScanRecord) -> bool,
) -> Vec<Extremum> {
    let mut out = Vec::new();
    // Sign of the last non-flat derivative and where it was seen.
    let mut last: Option<(usize, f64)> = None;
    for (i, rec) in records.iter().enumerate() {
        let d = deriv(rec);
        if d.abs() <= FLAT {
            continue;
        }
        if let Some((k, dk)) = last {
            if dk.signum() != d.signum() {
                let kind = if dk < 0.0 { Kind::Min } else { Kind::Max };
                // Grid point where the extreme value is attained.
                let best = (k..=i)
                    .min_by(|&a, &b| {
                        let (va, vb) = (value(&records[a]), value(&records[b]));
                        match kind {
                            Kind::Min => va.total_cmp(&vb),
                            Kind::Max => vb.total_cmp(&va),
                        }
                    })
                    .unwrap_or(k);
                let (t0, t1) = (records[k].theta, rec.theta);
                let theta = if (k..=i).any(|n| kink(&records[n])) {
                    records[best].theta
                } else if i == k + 1 {
                    t0 + (t1 - t0) * dk / (dk - d)
                } else {
                    0.5 * (records[k + 1].theta + records[i - 1].theta)
                };
                let confirmed = second_difference(records, best, &value).is_none_or(|dd| match kind {
                    Kind::Min => dd >= -1e-12,
                    Kind::Max => dd <= 1e-12,
                });
                if confirmed {
                    out.push(Extremum { theta, kind, value: value(&records[best]) });
                }
            }
        }
        last = Some((i, d));
    }
    // Right endpoint at pi: both functions are symmetric about pi, so the
    // endpoint is an extremum; classify by the approach from the left.
    if let (Some(end), Some(prev)) = (records.last(), records.iter().rev().nth(1)) {
        if (end.theta - PI).abs() < 1e-12 {
            let kind = if value(end) <= value(prev) { Kind::Min } else { Kind::Max };
            out.push(Extremum { theta: end.theta, kind, value: value(end) });
        }
    }
    out
}

fn second_difference(records: &[ScanRecord], i: usize, value: &impl Fn(&ScanRecord) -> f64) -> Option<f64> {
    if i == 0 || i + 1 >= records.len() {
        return None;
    }
    Some(value(&records[i + 1]) - 2.0 * value(&records[i]) + value(&records[i - 1]))
}

/// Scans `theta_grid`, estimating derivatives with step `h`, and matches the
/// extrema of S and f within two grid steps.
pub fn scan(j: HalfInt, m: HalfInt, theta_grid: &[f64], h: f64) -> Result<Scan> {
    if theta_grid.len() < 100 {
        return Err(Error::GridTooCoarse(theta_grid.len()));
    }
    little_d(j, m, m, 0.0)?;
    let records: Vec<ScanRecord> = theta_grid.iter().map(|&t| make_record(j, m, t, h)).collect::<Result<_>>()?;
    let step = theta_grid.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max);
    let entropy_extrema = locate(&records, |r| r.entropy, |r| r.d_entropy, |_| false);
    let l1_extrema = locate(&records, |r| r.l1, |r| r.d_l1, |r| r.l1_kink);
    let tol = 2.0 * step;
    let mut used = vec![false; l1_extrema.len()];
    let mut common_extrema = Vec::new();
    let mut entropy_only = Vec::new();
    for e in &entropy_extrema {
        let hit = l1_extrema
            .iter()
            .enumerate()
            .filter(|(k, f)| !used[*k] && (f.theta - e.theta).abs() <= tol)
            .min_by(|a, b| (a.1.theta - e.theta).abs().total_cmp(&(b.1.theta - e.theta).abs()));
        match hit {
            Some((k, f)) => {
                used[k] = true;
                common_extrema.push(CommonExtremum { theta_entropy: e.theta, theta_l1: f.theta, entropy_kind: e.kind, l1_kind: f.kind });
            }
            None => entropy_only.push(e.clone()),
        }
    }
    let l1_only = l1_extrema.iter().zip(&used).filter(|(_, &u)| !u).map(|(f, _)| f.clone()).collect();
    let min_bound_gap = records.iter().map(|r| r.bound_gap).fold(f64::INFINITY, f64::min);
    let max_normalization_error = theta_grid
        .iter()
        .map(|&t| reduced_probs(j, m, t).map(|p| (p.iter().sum::<f64>() - 1.0).abs()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let report = ExtremumReport {
        j: j.to_string(),
        m: m.to_string(),
        entropy_extrema,
        l1_extrema,
        common_extrema,
        entropy_only,
        l1_only,
        m_zero: m.0 == 0,
        grid_step: step,
        min_bound_gap,
        max_normalization_error,
    };
    Ok(Scan { records, report })
}

/// Writes the scan as CSV, 12 significant digits per value.
pub fn write_csv(records: &[ScanRecord], mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "theta,entropy,l1,d_entropy,d_l1,bound_gap")?;
    for r in records {
        let row = [r.theta, r.entropy, r.l1, r.d_entropy, r.d_l1, r.bound_gap].map(|x| format!("{x:.11e}"));
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct PiHalfReport {
    pub d_entropy: f64,
    /// `d^j_{0m}(pi/2) * d'^j_{0m}(pi/2)`, present for integer `j`.
    pub product: Option<f64>,
    pub pass: bool,
}

/// Stationarity of S at `theta = pi/2`.
pub fn pi_half_derivative_check(j: HalfInt, m: HalfInt) -> Result<PiHalfReport> {
    if m.0 == 0 {
        return Err(Error::MZero);
    }
    let h = DEFAULT_STEP;
    let t = PI / 2.0;
    let d_entropy = (column_entropy(j, m, t + h)? - column_entropy(j, m, t - h)?) / (2.0 * h);
    let product = if j.0 % 2 == 0 {
        let zero = HalfInt(0);
        Some(little_d(j, zero, m, t)? * little_d_deriv(j, zero, m, t)?)
    } else {
        None
    };
    let pass = d_entropy.abs() < 1e-6 && product.is_none_or(|p| p.abs() < 1e-10);
    Ok(PiHalfReport { d_entropy, product, pass })
}
