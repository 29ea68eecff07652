//! Command-line front end. Exit codes: 0 when every check passes, 1 when a
//! quantitative check fails, 2 for usage and domain errors.

use std::ffi::OsString;
use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::algebra::{fmt_c, CMatrix, Tolerance, C64};
use crate::chain::{basis_table_report, build_hamiltonian_phi, heisenberg_check_phi, singlet_spectrum_phi, ChainSpectrum};
use crate::entropy::{self, Kind};
use crate::error::{Error, Result};
use crate::params::{BwmaParams, Case, RelationReport};
use crate::topo::assemble;
use crate::wigner::{big_d, big_d_exp, labels, ybe_cos_phi, ybe_phi, ybe_residual_with, ybe_x, HalfInt, WignerSpec, YbeOrdering};

pub const DEFAULT_SEED: u64 = 20_011_993;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "bwm-lab", version, about = "BWM algebra, spin-1 chain and Wigner D-function checks")]
pub struct Cli {
    #[command(flatten)]
    pub config: CliConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct CliConfig {
    /// Absolute tolerance
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub abs: f64,
    /// Relative tolerance
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub rel: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    pub format: Format,
    /// Seed for random parameter draws
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Output directory (for `scan`, a path ending in .csv names the file)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Pretty,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    Hermitian,
    Unitary,
}

impl From<CaseArg> for Case {
    fn from(c: CaseArg) -> Self {
        match c {
            CaseArg::Hermitian => Case::Hermitian,
            CaseArg::Unitary => Case::Unitary,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build the 3x3 representation and run the relation suite
    Verify {
        #[arg(long, value_enum)]
        case: CaseArg,
        /// 1.2, 0.9+0.1i, e^{i*pi/8}, exp(i*pi/8) or `random`
        #[arg(long, value_parser = parse_q_arg, allow_hyphen_values = true)]
        q: QArg,
        /// Exponent in sigma = q^m
        #[arg(long, default_value_t = -2, allow_hyphen_values = true)]
        m: i32,
        /// Number of draws when q is random
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Four-site periodic chain: identity check, singlet spectrum, basis table
    Chain {
        #[arg(long, default_value = "pi", value_parser = parse_angle_arg, allow_hyphen_values = true)]
        phi: f64,
        #[arg(long = "J", default_value_t = 1.0, allow_hyphen_values = true)]
        j: f64,
    },
    /// Entropy and L1-norm scan over (0, pi]
    Scan {
        #[arg(long, value_parser = parse_half_arg, allow_hyphen_values = true)]
        j: HalfInt,
        #[arg(long, value_parser = parse_half_arg, allow_hyphen_values = true)]
        m: HalfInt,
        #[arg(long, default_value_t = entropy::DEFAULT_POINTS)]
        points: usize,
        /// Step for central differences
        #[arg(long, default_value_t = entropy::DEFAULT_STEP)]
        h: f64,
    },
    /// Yang-Baxter relation of D-functions
    #[command(group(ArgGroup::new("input").required(true).args(["theta", "x"])))]
    Ybe {
        #[arg(long, value_parser = parse_half_arg)]
        j: HalfInt,
        #[arg(long, num_args = 3, value_parser = parse_angle_arg, allow_hyphen_values = true)]
        theta: Option<Vec<f64>>,
        #[arg(long, requires = "y", allow_hyphen_values = true)]
        x: Option<f64>,
        #[arg(long, requires = "x", allow_hyphen_values = true)]
        y: Option<f64>,
    },
    /// Print D^j(theta, phi)
    Wigner {
        #[arg(long, value_parser = parse_half_arg, allow_hyphen_values = true)]
        j: HalfInt,
        #[arg(long, value_parser = parse_angle_arg, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value = "0", value_parser = parse_angle_arg, allow_hyphen_values = true)]
        phi: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QArg {
    Random,
    Value(C64),
}

/// Angles: `pi/2`, `2pi/3`, `-pi`, `0.5*pi`, `π/4` or a plain decimal.
pub fn parse_angle(s: &str) -> Result<f64> {
    let t: String = s.replace('π', "pi").to_lowercase().chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("not an angle: {s:?}"));
    let value = match t.find("pi") {
        None => t.parse::<f64>().map_err(|_| bad())?,
        Some(pos) => {
            let coef = &t[..pos];
            let coef = coef.strip_suffix('*').unwrap_or(coef);
            let k = match coef {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().map_err(|_| bad())?,
            };
            let rest = &t[pos + 2..];
            let den = if rest.is_empty() { 1.0 } else { rest.strip_prefix('/').ok_or_else(bad)?.parse::<f64>().map_err(|_| bad())? };
            if den == 0.0 {
                return Err(bad());
            }
            k * PI / den
        }
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

/// `q`: `random`, a complex literal (`1.2`, `0.3-0.8i`), or an exponential
/// `e^{i*pi/8}`, `e^(i pi/8)`, `exp(i*pi/8)`, `e^{0.2}`.
pub fn parse_q(s: &str) -> Result<QArg> {
    let t: String = s.to_lowercase().chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("not a value for q: {s:?}"));
    if t == "random" {
        return Ok(QArg::Random);
    }
    let exponent = if let Some(rest) = t.strip_prefix("e^") {
        Some(
            rest.strip_prefix('{')
                .and_then(|r| r.strip_suffix('}'))
                .or_else(|| rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')))
                .unwrap_or(rest),
        )
    } else if let Some(rest) = t.strip_prefix("exp(") {
        Some(rest.strip_suffix(')').ok_or_else(bad)?)
    } else {
        None
    };
    let q = match exponent {
        Some(e) => {
            let (sign, e) = match e.strip_prefix('-') {
                Some(r) => (-1.0, r),
                None => (1.0, e.strip_prefix('+').unwrap_or(e)),
            };
            let imag = e.strip_prefix("i*").or_else(|| e.strip_suffix("*i")).or_else(|| e.strip_prefix('i'));
            match imag {
                Some(angle) => C64::from_polar(1.0, sign * parse_angle(angle).map_err(|_| bad())?),
                None => C64::new((sign * parse_angle(e).map_err(|_| bad())?).exp(), 0.0),
            }
        }
        None => t.parse::<C64>().map_err(|_| bad())?,
    };
    if !(q.re.is_finite() && q.im.is_finite()) || q.norm() == 0.0 {
        return Err(bad());
    }
    Ok(QArg::Value(q))
}

fn parse_angle_arg(s: &str) -> std::result::Result<f64, String> {
    parse_angle(s).map_err(|e| e.to_string())
}

fn parse_q_arg(s: &str) -> std::result::Result<QArg, String> {
    parse_q(s).map_err(|e| e.to_string())
}

fn parse_half_arg(s: &str) -> std::result::Result<HalfInt, String> {
    s.parse::<HalfInt>().map_err(|e| e.to_string())
}

/// Parses `args` (including the program name), runs the command, and returns
/// the exit code. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_PASS
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli, out) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAIL,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

/// Runs a parsed command; `Ok(false)` means a check failed.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<bool> {
    let cfg = &cli.config;
    let tol = Tolerance::new(cfg.abs, cfg.rel)?;
    match &cli.command {
        Command::Verify { case, q, m, count } => cmd_verify(cfg, tol, (*case).into(), *q, *m, *count, out),
        Command::Chain { phi, j } => cmd_chain(cfg, tol, *phi, *j, out),
        Command::Scan { j, m, points, h } => cmd_scan(cfg, *j, *m, *points, *h, out),
        Command::Ybe { j, theta, x, y } => {
            let input = match (theta, x, y) {
                (Some(t), _, _) => YbeInput::Theta([t[0], t[1], t[2]]),
                (None, Some(x), Some(y)) => YbeInput::Xy(*x, *y),
                _ => return Err(Error::Parse("ybe needs --theta or --x/--y".into())),
            };
            cmd_ybe(cfg, tol, *j, input, out)
        }
        Command::Wigner { j, theta, phi } => cmd_wigner(cfg, tol, *j, *theta, *phi, out),
    }
}

fn write_artifact(cfg: &CliConfig, name: &str, contents: &str) -> Result<()> {
    if let Some(dir) = &cfg.out {
        fs::create_dir_all(dir)?;
        fs::write(dir.join(name), contents)?;
    }
    Ok(())
}

fn mark(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn draw_q(rng: &mut ChaCha8Rng, case: Case) -> C64 {
    match case {
        Case::Hermitian => C64::new(rng.gen_range(0.6..1.8), 0.0),
        Case::Unitary => C64::from_polar(1.0, rng.gen_range(PI / 12.0..PI / 5.0)),
    }
}

fn cmd_verify(cfg: &CliConfig, tol: Tolerance, case: Case, q: QArg, m: i32, count: usize, out: &mut dyn Write) -> Result<bool> {
    let qs: Vec<C64> = match q {
        QArg::Value(v) => {
            if count != 1 {
                return Err(Error::Parse("--count applies only to --q random".into()));
            }
            vec![v]
        }
        QArg::Random => {
            if count == 0 {
                return Err(Error::Parse("--count must be positive".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            (0..count).map(|_| draw_q(&mut rng, case)).collect()
        }
    };
    let mut runs = Vec::new();
    for q in qs {
        let p = BwmaParams::from_q(q, m, case)?;
        let rep = assemble(&p)?;
        let mut report = rep.check(tol)?;
        if case == Case::Unitary {
            let mut extra = RelationReport::new();
            for (name, mat) in [("A", &rep.a), ("B", &rep.b)] {
                let dev = mat.unitarity_deviation();
                extra.push(format!("unitary: {name}"), dev, dev <= tol.abs);
            }
            report.extend("", extra);
        }
        runs.push((p, report));
    }
    let all_pass = runs.iter().all(|(_, r)| r.overall_pass);
    let doc = json!({
        "case": case,
        "m": m,
        "seed": cfg.seed,
        "tolerance": {"abs": tol.abs, "rel": tol.rel},
        "runs": runs.iter().map(|(p, r)| json!({"params": p, "relations": r.entries, "overall_pass": r.overall_pass})).collect::<Vec<_>>(),
        "overall_pass": all_pass,
    });
    let doc = serde_json::to_string_pretty(&doc).expect("json");
    write_artifact(cfg, "verify.json", &doc)?;
    match cfg.format {
        Format::Json => writeln!(out, "{doc}")?,
        Format::Csv => {
            writeln!(out, "q_re,q_im,relation,residual,pass")?;
            for (p, r) in &runs {
                let q = p.q.unwrap_or(p.lambda1);
                for e in &r.entries {
                    writeln!(out, "{:.11e},{:.11e},\"{}\",{:.3e},{}", q.re, q.im, e.id, e.residual, e.pass)?;
                }
            }
        }
        Format::Pretty => {
            for (p, r) in &runs {
                let q = p.q.unwrap_or(p.lambda1);
                writeln!(out, "q = {} (m = {m}, {case:?}): W = {}, d = {}", fmt_c(q).trim(), fmt_c(p.w).trim(), fmt_c(p.d).trim())?;
                for e in &r.entries {
                    writeln!(out, "  {}  {:9.2e}  {}", mark(e.pass), e.residual, e.id)?;
                }
                writeln!(out, "  max residual {:.2e}: {}", r.max_residual(), mark(r.overall_pass))?;
            }
            writeln!(out, "overall: {}", mark(all_pass))?;
        }
    }
    Ok(all_pass)
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

fn values_agree(tol: Tolerance, got: &[f64], want: &[f64]) -> bool {
    got.len() == want.len() && got.iter().zip(want).all(|(a, b)| tol.accepts((a - b).abs(), b.abs()))
}

fn cmd_chain(cfg: &CliConfig, tol: Tolerance, phi: f64, coupling: f64, out: &mut dyn Write) -> Result<bool> {
    let identity = heisenberg_check_phi(4, phi)?;
    let h = build_hamiltonian_phi(4, coupling, phi)?;
    let expected = sorted(vec![-6.0 * coupling, -2.0 * coupling, 0.0]);
    // Away from phi = pi the singlet sector need not be three-dimensional;
    // that is a failed check, not a usage error.
    let spectrum: std::result::Result<ChainSpectrum, String> = match singlet_spectrum_phi(&h, phi) {
        Ok(s) => Ok(s),
        Err(Error::SingletDimension(k)) => Err(format!("singlet sector has dimension {k}, expected 3")),
        Err(e) => return Err(e),
    };
    let spectrum_pass = match &spectrum {
        Ok(s) => values_agree(tol, &sorted(s.singlet_eigenvalues.clone()), &expected) && s.s2_norms.iter().all(|&x| x <= tol.abs),
        Err(_) => false,
    };
    let table = basis_table_report()?;
    let projected_pass = values_agree(tol, &sorted(table.projected_eigenvalues.clone()), &[-6.0, -2.0, 0.0]);
    let all_pass = identity.overall_pass && spectrum_pass && projected_pass;

    let doc = json!({
        "phi": phi,
        "J": coupling,
        "heisenberg_identity": identity,
        "singlet": match &spectrum { Ok(s) => json!(s), Err(msg) => json!({"error": msg}) },
        "expected_singlet_eigenvalues": expected,
        "basis_table": table,
        "overall_pass": all_pass,
    });
    let doc = serde_json::to_string_pretty(&doc).expect("json");
    write_artifact(cfg, "chain.json", &doc)?;
    match cfg.format {
        Format::Json => writeln!(out, "{doc}")?,
        Format::Csv => {
            writeln!(out, "entry,computed,tabulated,abs_diff")?;
            for row in &table.rows {
                writeln!(out, "{},{:.11e},{:.11e},{:.3e}", row.entry, row.computed, row.tabulated, row.abs_diff)?;
            }
        }
        Format::Pretty => {
            writeln!(out, "T - M(phi) = S.S on all pairs of 4 sites, phi = {phi:.6}: {}", mark(identity.overall_pass))?;
            for e in &identity.entries {
                writeln!(out, "  {}  {:9.2e}  {}", mark(e.pass), e.residual, e.id)?;
            }
            match &spectrum {
                Ok(s) => {
                    writeln!(out, "singlet eigenvalues (J = {coupling}): {:?}, expected {:?}: {}", s.singlet_eigenvalues, expected, mark(spectrum_pass))?;
                    writeln!(out, "  mu per next-nearest pair: {:?}", s.mu_values)?;
                    writeln!(out, "  mu summed over both pairs: {:?}", s.mu_pair_sum)?;
                    writeln!(out, "  |S^2 g|: {:?}", s.s2_norms)?;
                }
                Err(msg) => writeln!(out, "singlet sector: {msg}: FAIL")?,
            }
            writeln!(out, "topological basis (q = 1) coefficient table:")?;
            writeln!(out, "  {:<10} {:>14} {:>14} {:>10}", "entry", "computed", "tabulated", "|diff|")?;
            for row in &table.rows {
                let flag = if row.abs_diff > 1e-9 { "  <- differs" } else { "" };
                writeln!(out, "  {:<10} {:>14.9} {:>14.9} {:>10.2e}{flag}", row.entry, row.computed, row.tabulated, row.abs_diff)?;
            }
            writeln!(out, "  projected eigenvalues: {:?}: {}", table.projected_eigenvalues, mark(projected_pass))?;
            writeln!(out, "overall: {}", mark(all_pass))?;
        }
    }
    Ok(all_pass)
}

fn scan_path(cfg: &CliConfig, j: HalfInt, m: HalfInt) -> Option<PathBuf> {
    let dir = cfg.out.as_ref()?;
    if dir.extension().is_some_and(|e| e == "csv") {
        return Some(dir.clone());
    }
    let tag = |x: HalfInt| x.to_string().replace('/', "_");
    Some(dir.join(format!("scan_j{}_m{}.csv", tag(j), tag(m))))
}

fn angle_label(theta: f64) -> String {
    for (den, name) in [(1.0, "pi"), (2.0, "pi/2"), (3.0, "pi/3"), (4.0, "pi/4"), (6.0, "pi/6")] {
        for k in 1..=6 {
            let v = k as f64 * PI / den;
            if (theta - v).abs() < 1e-9 {
                return if k == 1 { format!(" ({name})") } else { format!(" ({k}{name})") };
            }
        }
    }
    String::new()
}

fn kind_str(k: Kind) -> &'static str {
    match k {
        Kind::Min => "min",
        Kind::Max => "max",
    }
}

fn cmd_scan(cfg: &CliConfig, j: HalfInt, m: HalfInt, points: usize, h: f64, out: &mut dyn Write) -> Result<bool> {
    if !(h > 0.0 && h < 0.1) {
        return Err(Error::Parse(format!("difference step {h} outside (0, 0.1)")));
    }
    let grid = entropy::default_grid(points);
    let scan = entropy::scan(j, m, &grid, h)?;
    let rep = &scan.report;
    let step = rep.grid_step;
    let pi_half = if m.0 != 0 { Some(entropy::pi_half_derivative_check(j, m)?) } else { None };
    let bound_pass = rep.min_bound_gap >= -1e-12;
    let norm_pass = rep.max_normalization_error <= 1e-12;
    let common_pass = rep.m_zero || (rep.common_near(PI / 2.0, 2.0 * step).is_some() && rep.common_near(PI, 2.0 * step).is_some());
    let all_pass = bound_pass && norm_pass && common_pass && pi_half.as_ref().is_none_or(|p| p.pass);

    if let Some(path) = scan_path(cfg, j, m) {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent)?;
        }
        entropy::write_csv(&scan.records, fs::File::create(&path)?)?;
    }
    let doc = json!({"report": rep, "pi_half": pi_half, "overall_pass": all_pass});
    match cfg.format {
        Format::Csv if cfg.out.is_none() => entropy::write_csv(&scan.records, &mut *out)?,
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json"))?,
        _ => write_scan_summary(out, j, m, points, rep, pi_half.as_ref(), all_pass, scan_path(cfg, j, m).as_deref())?,
    }
    Ok(all_pass)
}

#[allow(clippy::too_many_arguments)]
fn write_scan_summary(
    out: &mut dyn Write,
    j: HalfInt,
    m: HalfInt,
    points: usize,
    rep: &entropy::ExtremumReport,
    pi_half: Option<&entropy::PiHalfReport>,
    all_pass: bool,
    path: Option<&Path>,
) -> Result<()> {
    writeln!(out, "j = {j}, m = {m}: {points} points, step {:.3e}", rep.grid_step)?;
    if rep.m_zero {
        writeln!(out, "m=0: common-extremum guarantee does not apply")?;
    }
    writeln!(out, "common extrema of S and f:")?;
    for c in &rep.common_extrema {
        writeln!(out, "  theta = {:.6}{}: S {}, f {}", c.theta_entropy, angle_label(c.theta_entropy), kind_str(c.entropy_kind), kind_str(c.l1_kind))?;
    }
    for (label, list) in [("S only", &rep.entropy_only), ("f only", &rep.l1_only)] {
        writeln!(out, "{label}: {} extrema", list.len())?;
        for e in list {
            writeln!(out, "  theta = {:.6}{}: {} ({:.9})", e.theta, angle_label(e.theta), kind_str(e.kind), e.value)?;
        }
    }
    writeln!(out, "min bound gap 2 log2 f - S: {:.3e}", rep.min_bound_gap)?;
    writeln!(out, "max normalization error: {:.3e}", rep.max_normalization_error)?;
    if let Some(p) = pi_half {
        write!(out, "dS/dtheta at pi/2: {:.3e}", p.d_entropy)?;
        if let Some(prod) = p.product {
            write!(out, ", d_0m d'_0m: {prod:.3e}")?;
        }
        writeln!(out)?;
    }
    if let Some(path) = path {
        writeln!(out, "wrote {}", path.display())?;
    }
    writeln!(out, "overall: {}", mark(all_pass))?;
    Ok(())
}

#[derive(Clone, Copy, Debug)]
pub enum YbeInput {
    Theta([f64; 3]),
    Xy(f64, f64),
}

fn cmd_ybe(cfg: &CliConfig, tol: Tolerance, j: HalfInt, input: YbeInput, out: &mut dyn Write) -> Result<bool> {
    let (thetas, phi, residual) = match input {
        YbeInput::Theta(t) => {
            let phi = ybe_phi(t[0], t[1], t[2])?.ok_or(Error::PhiUndefined { cos_phi: ybe_cos_phi(t[0], t[1], t[2])? })?;
            (t, phi, ybe_residual_with(j, t, phi, YbeOrdering::InnerPhase)?)
        }
        YbeInput::Xy(x, y) => {
            let r = ybe_x(j, x, y)?;
            (r.thetas, r.phi, r.residual)
        }
    };
    let pass = residual <= tol.abs;
    let doc = json!({"j": j.to_string(), "thetas": thetas, "phi": phi, "residual": residual, "pass": pass});
    let doc = serde_json::to_string_pretty(&doc).expect("json");
    write_artifact(cfg, "ybe.json", &doc)?;
    match cfg.format {
        Format::Json => writeln!(out, "{doc}")?,
        Format::Csv => {
            writeln!(out, "j,theta1,theta2,theta3,phi,residual,pass")?;
            writeln!(out, "{j},{:.11e},{:.11e},{:.11e},{phi:.11e},{residual:.3e},{pass}", thetas[0], thetas[1], thetas[2])?;
        }
        Format::Pretty => {
            writeln!(out, "j = {j}, theta = ({:.9}, {:.9}, {:.9})", thetas[0], thetas[1], thetas[2])?;
            writeln!(out, "phi = {phi:.12}")?;
            writeln!(out, "residual = {residual:.3e}: {}", mark(pass))?;
        }
    }
    Ok(pass)
}

fn cmd_wigner(cfg: &CliConfig, tol: Tolerance, j: HalfInt, theta: f64, phi: f64, out: &mut dyn Write) -> Result<bool> {
    let spec = WignerSpec { j: j.value(), theta, phi };
    let d = big_d(&spec)?;
    let unitarity = d.unitarity_deviation();
    // The exponential oracle is limited to small dimensions.
    let oracle = if j.0 < 8 { Some((&big_d_exp(&spec)? - &d).norm()) } else { None };
    let pass = unitarity <= tol.abs && oracle.is_none_or(|r| tol.accepts(r, d.norm()));
    let lab: Vec<String> = labels(j).iter().map(|x| x.to_string()).collect();
    let doc = json!({
        "j": j.to_string(), "theta": theta, "phi": phi, "labels": lab, "matrix": d,
        "unitarity_deviation": unitarity, "exp_oracle_residual": oracle, "pass": pass,
    });
    let doc = serde_json::to_string_pretty(&doc).expect("json");
    write_artifact(cfg, "wigner.json", &doc)?;
    match cfg.format {
        Format::Json => writeln!(out, "{doc}")?,
        Format::Csv => write_matrix_csv(out, &lab, &d)?,
        Format::Pretty => {
            writeln!(out, "D^{j}(theta = {theta:.9}, phi = {phi:.9}), rows and columns m = {}", lab.join(", "))?;
            write!(out, "{d}")?;
            write!(out, "unitarity deviation {unitarity:.2e}")?;
            if let Some(r) = oracle {
                write!(out, ", exponential oracle residual {r:.2e}")?;
            }
            writeln!(out, ": {}", mark(pass))?;
        }
    }
    Ok(pass)
}

fn write_matrix_csv(out: &mut dyn Write, lab: &[String], d: &CMatrix) -> Result<()> {
    writeln!(out, "m_row,m_col,re,im")?;
    for (i, mr) in lab.iter().enumerate() {
        for (k, mc) in lab.iter().enumerate() {
            let z = d.get(i, k);
            // Adding 0.0 turns -0.0 into 0.0.
            writeln!(out, "{mr},{mc},{:.11e},{:.11e}", z.re + 0.0, z.im + 0.0)?;
        }
    }
    Ok(())
}
