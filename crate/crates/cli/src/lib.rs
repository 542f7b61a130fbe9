//! `junction` command-line driver.

pub mod config;
pub mod error;
pub mod svg;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use junction_analysis::{
    blowup_samples, fit_log, fit_power, merge_ab, richardson, sweep, AsymptoticFit, FitKind, SweepTable,
};
use junction_core::combinatorics::constants;
use junction_core::exact_spectra::{
    ab_expansion, disk_spectrum, half_square_limit_spectrum, square_spectrum, vanishing_data_square, ExactDomain,
    HalfProblem, Normalization,
};
use junction_core::profiles::{phi, psi, CartesianPoint, ProfileId};
use junction_core::special_functions::bessel_zero;
use junction_core::CoreError;
use junction_fem::{solve_mixed, BoundarySpec, Domain, MeshParams, Variant, DEFAULT_TOL};

pub use error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "junction", version, about = "Spectral asymptotics of mixed Dirichlet-Neumann and Aharonov-Bohm eigenvalues")]
struct Cli {
    /// Flat key = value file of flag defaults; flags on the command line win
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form constants for vanishing orders 1..=k-max (CSV)
    Constants(ConstantsArgs),
    /// Zeros of Bessel functions J_n (CSV)
    Bessel(BesselArgs),
    /// Exact Dirichlet eigenvalues of the square or the disk (JSON)
    Exact(ExactArgs),
    /// Leading-order expansion of an Aharonov-Bohm eigenvalue (JSON)
    Expand(ExpandArgs),
    /// Finite-element eigenvalues of one mixed problem (CSV)
    Solve(SolveArgs),
    /// Eigenvalues over a list of window sizes (CSV)
    Sweep(SweepArgs),
    /// Power or log fit of a sweep column (JSON)
    Fit(FitArgs),
    /// Aharonov-Bohm spectrum from both half problems, with predictions (CSV)
    Ab(AbArgs),
    /// Limit blow-up profile on a grid of the upper half-plane (CSV)
    Profile(ProfileArgs),
    /// Rescaled eigenfunction against its blow-up profile (JSON)
    Blowup(BlowupArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DomainArg {
    Square,
    Disk,
}

impl DomainArg {
    fn half(self) -> Domain {
        match self {
            DomainArg::Square => Domain::HalfSquare,
            DomainArg::Disk => Domain::HalfDisk,
        }
    }

    fn exact(self) -> ExactDomain {
        match self {
            DomainArg::Square => ExactDomain::Square,
            DomainArg::Disk => ExactDomain::Disk,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VariantArg {
    Dnd,
    Ndn,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Dnd => Variant::Dnd,
            VariantArg::Ndn => Variant::Ndn,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Power,
    Log,
}

#[derive(Debug, Clone, Copy, Args)]
struct MeshArgs {
    /// Target element size away from the window ends
    #[arg(long, default_value_t = 0.02)]
    h: f64,
    /// Halvings of the element size toward the window ends
    #[arg(long, default_value_t = 8)]
    grading: u32,
    /// Relative eigenpair residual tolerance
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

impl MeshArgs {
    fn params(&self) -> Result<MeshParams> {
        if !(self.tol > 0.0 && self.tol < 1e-2) {
            return Err(CliError::Validation(format!("--tol must lie in (0, 1e-2), got {}", self.tol)));
        }
        Ok(MeshParams::new(self.h, self.grading))
    }
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
struct ConstantsArgs {
    /// Largest vanishing order
    #[arg(long, default_value_t = 8)]
    k_max: u32,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
struct BesselArgs {
    /// Largest order n
    #[arg(long, default_value_t = 3)]
    n_max: u32,
    /// Number of zeros per order
    #[arg(long, default_value_t = 3)]
    k_max: u32,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
struct ExactArgs {
    #[arg(long, value_enum)]
    domain: DomainArg,
    /// Number of eigenvalues, with multiplicity
    #[arg(long, default_value_t = 10)]
    count: usize,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
struct ExpandArgs {
    #[arg(long, value_enum)]
    domain: DomainArg,
    /// 1-based index in the Aharonov-Bohm spectrum
    #[arg(long)]
    index: usize,
    /// Also evaluate the expansion at this window size
    #[arg(long)]
    eps: Option<f64>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
struct SolveArgs {
    #[arg(long, value_enum, default_value = "square")]
    domain: DomainArg,
    #[arg(long, value_enum)]
    variant: VariantArg,
    /// Half-width of the window on the bottom edge
    #[arg(long)]
    eps: f64,
    #[arg(long, default_value_t = 4)]
    count: usize,
    #[command(flatten)]
    mesh: MeshArgs,
    /// Write this eigenvector (1-based) as nodal CSV to --vector-out
    #[arg(long, default_value_t = 1)]
    vector: usize,
    #[arg(long, value_name = "FILE")]
    vector_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
struct SweepArgs {
    #[arg(long, value_enum, default_value = "square")]
    domain: DomainArg,
    #[arg(long, value_enum)]
    variant: VariantArg,
    /// Comma-separated, strictly monotone window sizes
    #[arg(long)]
    eps_list: String,
    #[arg(long, default_value_t = 2)]
    count: usize,
    #[command(flatten)]
    mesh: MeshArgs,
    /// Also solve with h/2 and report the Richardson combination
    #[arg(long)]
    richardson: bool,
    /// Output CSV (stdout when absent)
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Log-log plot of |lambda0 - lambda| with a power fit; needs --lambda0
    #[arg(long, value_name = "FILE")]
    svg: Option<PathBuf>,
    /// Exact limit of the plotted eigenvalue
    #[arg(long)]
    lambda0: Option<f64>,
    /// Column plotted by --svg
    #[arg(long, default_value_t = 1)]
    index: usize,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
struct FitArgs {
    /// Sweep CSV
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    #[arg(long, default_value_t = 1)]
    index: usize,
    /// Exact limit of the eigenvalue
    #[arg(long)]
    lambda0: f64,
    #[arg(long, value_enum, default_value = "power")]
    kind: KindArg,
    #[arg(long, value_name = "FILE")]
    svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
struct AbArgs {
    #[arg(long, value_enum)]
    domain: DomainArg,
    #[arg(long)]
    eps_list: String,
    /// Aharonov-Bohm eigenvalues kept per window size
    #[arg(long, default_value_t = 4)]
    count: usize,
    #[command(flatten)]
    mesh: MeshArgs,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
struct ProfileArgs {
    /// Vanishing order
    #[arg(long)]
    k: u32,
    /// Grid points per axis
    #[arg(long, default_value_t = 41)]
    samples: usize,
    /// Grid covers [-R, R] x [0, R]
    #[arg(long, default_value_t = 2.0)]
    radius: f64,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
struct BlowupArgs {
    #[arg(long)]
    eps: f64,
    /// Radius of the sampled half-disk, in blown-up units
    #[arg(long = "R", alias = "radius", default_value_t = 2.0)]
    radius: f64,
    /// Radius of the disks around (+-1, 0) left out of the comparison
    #[arg(long, default_value_t = 0.2)]
    exclusion: f64,
    /// Square eigenfunction u_{m,n}; n must be even
    #[arg(long, default_value_t = 1)]
    m: u32,
    #[arg(long, default_value_t = 2)]
    n: u32,
    #[command(flatten)]
    mesh: MeshArgs,
    /// Sample table CSV
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run(args: Vec<OsString>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match try_run(args, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            e.exit_code()
        }
    }
}

fn try_run(args: Vec<OsString>, out: &mut dyn Write) -> Result<()> {
    let args = config::expand(args)?;
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            write!(out, "{e}")?;
            return Ok(());
        }
        Err(e) => return Err(CliError::Usage(e.to_string().trim_start_matches("error: ").trim_end().to_string())),
    };
    match cli.command {
        Command::Constants(a) => cmd_constants(a, out),
        Command::Bessel(a) => cmd_bessel(a, out),
        Command::Exact(a) => cmd_exact(a, out),
        Command::Expand(a) => cmd_expand(a, out),
        Command::Solve(a) => cmd_solve(a, out),
        Command::Sweep(a) => cmd_sweep(a, out),
        Command::Fit(a) => cmd_fit(a, out),
        Command::Ab(a) => cmd_ab(a, out),
        Command::Profile(a) => cmd_profile(a, out),
        Command::Blowup(a) => cmd_blowup(a, out),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn parse_eps_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Validation(format!("--eps-list entry {:?} is not a number", t.trim())))
        })
        .collect()
}

/// Shortest round-trip decimal, in exponent form for very small or large magnitudes.
fn num(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

fn half_name(h: HalfProblem) -> &'static str {
    match h {
        HalfProblem::Dnd => "dnd",
        HalfProblem::Ndn => "ndn",
    }
}

fn cmd_constants(a: ConstantsArgs, out: &mut dyn Write) -> Result<()> {
    if a.k_max == 0 {
        return Err(CliError::Validation("--k-max must be at least 1".into()));
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["k", "sum_s", "kappa_lead", "c_k", "frak_m", "frak_m_prime", "junction_integral"])?;
    for k in 1..=a.k_max {
        let c = constants(k)?;
        w.write_record([
            k.to_string(),
            c.sum_s.to_string(),
            num(c.kappa_lead.to_f64()),
            num(c.c_k.to_f64()),
            num(c.frak_m.to_f64()),
            num(c.frak_m_prime.to_f64()),
            num(c.junction_integral.to_f64()),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_bessel(a: BesselArgs, out: &mut dyn Write) -> Result<()> {
    if a.k_max == 0 {
        return Err(CliError::Validation("--k-max must be at least 1".into()));
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "k", "zero", "residual"])?;
    for n in 0..=a.n_max {
        for k in 1..=a.k_max {
            let z = bessel_zero(n, k)?;
            w.write_record([n.to_string(), k.to_string(), num(z.value), num(z.residual)])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn cmd_exact(a: ExactArgs, out: &mut dyn Write) -> Result<()> {
    let (entries, labels) = match a.domain {
        DomainArg::Square => (square_spectrum(a.count)?, ["m", "n"]),
        DomainArg::Disk => (disk_spectrum(a.count)?, ["n", "k"]),
    };
    let list: Vec<_> = entries
        .iter()
        .enumerate()
        .map(|(i, e)| {
            json!({
                "index": i + 1,
                "value": e.value,
                labels[0]: e.label.0,
                labels[1]: e.label.1,
                "parity": e.parity,
                "multiplicity": e.multiplicity,
                "source": "closed-form",
            })
        })
        .collect();
    serde_json::to_writer_pretty(&mut *out, &json!({ "domain": a.domain.exact(), "eigenvalues": list }))?;
    writeln!(out)?;
    Ok(())
}

fn cmd_expand(a: ExpandArgs, out: &mut dyn Write) -> Result<()> {
    let (half, e) = ab_expansion(a.domain.exact(), a.index)?;
    let mut v = json!({
        "domain": a.domain.exact(),
        "index": a.index,
        "half_problem": half,
        "lambda0": e.lambda0,
        "kind": e.kind,
        "coefficient": e.coefficient,
        "exponent": e.exponent,
        "source": "closed-form",
    });
    if let Some(eps) = a.eps {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(CliError::Validation(format!("--eps must lie in (0, 1), got {eps}")));
        }
        v["eps"] = json!(eps);
        v["prediction"] = json!(e.evaluate(eps));
    }
    serde_json::to_writer_pretty(&mut *out, &v)?;
    writeln!(out)?;
    Ok(())
}

fn cmd_solve(a: SolveArgs, out: &mut dyn Write) -> Result<()> {
    let params = a.mesh.params()?;
    let sol = solve_mixed(a.domain.half(), BoundarySpec::new(a.variant.into(), a.eps), a.count, params, a.mesh.tol, None)?;
    if let Some(path) = &a.vector_out {
        if a.vector == 0 || a.vector > sol.pairs.len() {
            return Err(CliError::Validation(format!("--vector must lie in 1..={}", sol.pairs.len())));
        }
        write_file(path, &sol.eigenvector_csv(a.vector - 1))?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["index", "lambda", "residual", "n_dof"])?;
    for (i, p) in sol.pairs.iter().enumerate() {
        w.write_record([(i + 1).to_string(), num(p.lambda), num(p.residual), p.vector.len().to_string()])?;
    }
    w.flush()?;
    Ok(())
}

fn run_sweep(
    domain: Domain,
    variant: Variant,
    eps: &[f64],
    count: usize,
    mesh: MeshArgs,
    refine: bool,
) -> Result<(SweepTable, Vec<(f64, String)>)> {
    let params = mesh.params()?;
    let coarse = sweep(domain, variant, eps, count, params, mesh.tol)?;
    if !refine {
        return Ok((coarse.table, coarse.failures));
    }
    let fine = sweep(domain, variant, eps, count, MeshParams::new(mesh.h / 2.0, mesh.grading), mesh.tol)?;
    let mut failures = coarse.failures;
    failures.extend(fine.failures);
    if !failures.is_empty() {
        return Ok((fine.table, failures));
    }
    Ok((richardson(&coarse.table, &fine.table, 2)?, failures))
}

fn report_failures(failures: &[(f64, String)]) -> Result<()> {
    if failures.is_empty() {
        return Ok(());
    }
    let lines: Vec<String> = failures.iter().map(|(e, m)| format!("epsilon {e}: {m}")).collect();
    Err(CliError::Numerical(lines.join("; ")))
}

fn power_plot(table: &SweepTable, index: usize, lambda0: f64, fit: &AsymptoticFit) -> String {
    let pts: Vec<(f64, f64)> =
        table.column(index).into_iter().filter(|c| c.0 > 0.0).map(|(e, l)| (e, (lambda0 - l).abs())).collect();
    let (c, p) = (fit.coefficient_fit.abs(), fit.exponent_fit);
    let curve = move |e: f64| c * e.powf(p);
    let title = format!("index {index}: exponent {p:.3}, coefficient {:.4}", fit.coefficient_extrapolated);
    svg::loglog(&title, "epsilon", "|lambda0 - lambda|", &pts, Some(&curve))
}

fn log_plot(table: &SweepTable, index: usize, lambda0: f64, fit: &AsymptoticFit) -> String {
    let pts: Vec<(f64, f64)> =
        table.column(index).into_iter().filter(|c| c.0 > 0.0 && c.0 < 1.0).map(|(e, l)| (e, l - lambda0)).collect();
    let b = fit.coefficient_extrapolated;
    let curve = move |e: f64| b / e.ln().abs();
    let title = format!("index {index}: b {:.4}, through-origin {b:.4}", fit.coefficient_fit);
    svg::loglog(&title, "epsilon", "lambda - lambda0", &pts, Some(&curve))
}

fn cmd_sweep(a: SweepArgs, out: &mut dyn Write) -> Result<()> {
    let eps = parse_eps_list(&a.eps_list)?;
    if a.svg.is_some() && a.lambda0.is_none() {
        return Err(CliError::Validation("--svg needs --lambda0".into()));
    }
    let (table, failures) = run_sweep(a.domain.half(), a.variant.into(), &eps, a.count, a.mesh, a.richardson)?;
    match &a.out {
        Some(path) => table.write_csv(create(path)?)?,
        None => table.write_csv(&mut *out)?,
    }
    report_failures(&failures)?;
    if let (Some(path), Some(lambda0)) = (&a.svg, a.lambda0) {
        let fit = fit_power(&table, a.index, lambda0)?;
        write_file(path, &power_plot(&table, a.index, lambda0, &fit))?;
    }
    Ok(())
}

fn cmd_fit(a: FitArgs, out: &mut dyn Write) -> Result<()> {
    let file = File::open(&a.input).map_err(|e| CliError::Io(format!("{}: {e}", a.input.display())))?;
    let table = SweepTable::read_csv(file)?;
    let fit = match a.kind {
        KindArg::Power => fit_power(&table, a.index, a.lambda0)?,
        KindArg::Log => fit_log(&table, a.index, a.lambda0)?,
    };
    if let Some(path) = &a.svg {
        let plot = match fit.kind {
            FitKind::Power => power_plot(&table, a.index, a.lambda0, &fit),
            FitKind::Log => log_plot(&table, a.index, a.lambda0, &fit),
        };
        write_file(path, &plot)?;
    }
    serde_json::to_writer_pretty(&mut *out, &fit)?;
    writeln!(out)?;
    Ok(())
}

fn cmd_ab(a: AbArgs, out: &mut dyn Write) -> Result<()> {
    let eps = parse_eps_list(&a.eps_list)?;
    if a.count == 0 {
        return Err(CliError::Validation("--count must be positive".into()));
    }
    let domain = a.domain.half();
    let (dnd, f1) = run_sweep(domain, Variant::Dnd, &eps, a.count, a.mesh, false)?;
    let (ndn, f2) = run_sweep(domain, Variant::Ndn, &eps, a.count, a.mesh, false)?;
    report_failures(&[f1, f2].concat())?;
    let merged = merge_ab(&dnd, &ndn)?;
    let mut w = csv::Writer::from_writer(BufWriter::new(match &a.out {
        Some(path) => Box::new(create(path)?) as Box<dyn Write>,
        None => Box::new(&mut *out),
    }));
    w.write_record(["epsilon", "index", "lambda", "residual", "half_problem", "prediction", "difference"])?;
    for row in merged.rows().iter().filter(|r| r.index <= a.count) {
        let predicted = match ab_expansion(a.domain.exact(), row.index) {
            Ok((half, e)) => Some((half, e.evaluate(row.epsilon))),
            Err(CoreError::NotCovered(_)) => None,
            Err(e) => return Err(e.into()),
        };
        let (half, pred, diff) = match predicted {
            Some((h, p)) if row.epsilon > 0.0 => (half_name(h).to_string(), num(p), num(row.lambda - p)),
            Some((h, _)) => (half_name(h).to_string(), String::new(), String::new()),
            None => (String::new(), String::new(), String::new()),
        };
        w.write_record([
            num(row.epsilon),
            row.index.to_string(),
            num(row.lambda),
            num(row.residual),
            half,
            pred,
            diff,
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_profile(a: ProfileArgs, out: &mut dyn Write) -> Result<()> {
    if !(2..=2000).contains(&a.samples) {
        return Err(CliError::Validation(format!("--samples must lie in 2..=2000, got {}", a.samples)));
    }
    if !(a.radius > 0.0 && a.radius.is_finite()) {
        return Err(CliError::Validation(format!("--radius must be positive, got {}", a.radius)));
    }
    let k = ProfileId::new(a.k)?;
    let sink: Box<dyn Write> = match &a.out {
        Some(path) => Box::new(create(path)?),
        None => Box::new(&mut *out),
    };
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["x1", "x2", "psi", "w", "phi"])?;
    let n = a.samples - 1;
    for j in 0..=n {
        let x2 = a.radius * j as f64 / n as f64;
        for i in 0..=n {
            let x1 = a.radius * (2.0 * i as f64 / n as f64 - 1.0);
            let x = CartesianPoint::new(x1, x2);
            let (p, f) = (psi(k, x), phi(k, x));
            w.write_record([num(x1), num(x2), num(p), num(f - p), num(f)])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `cos(m x)` for odd `m`, `sin(m x)` for even `m`.
fn square_factor(m: u32, x: f64) -> f64 {
    if m % 2 == 1 {
        (m as f64 * x).cos()
    } else {
        (m as f64 * x).sin()
    }
}

fn cmd_blowup(a: BlowupArgs, out: &mut dyn Write) -> Result<()> {
    if a.m == 0 || a.n == 0 || a.n % 2 == 1 {
        return Err(CliError::Validation(format!(
            "u_{{{},{}}} is not a DND eigenfunction: need m >= 1 and even n >= 2",
            a.m, a.n
        )));
    }
    let lambda0 = (a.m * a.m + a.n * a.n) as f64;
    let limit = half_square_limit_spectrum(HalfProblem::Dnd, 200)?;
    let position = limit
        .iter()
        .position(|e| e.label == (a.m, a.n))
        .ok_or_else(|| CliError::Validation(format!("u_{{{},{}}} is beyond the supported range", a.m, a.n)))?;
    if limit.iter().filter(|e| e.value == lambda0).count() > 1 {
        return Err(CliError::Validation(format!("eigenvalue {lambda0} is not simple in the DND problem")));
    }
    let data = vanishing_data_square(a.m, a.n, Normalization::HalfDomain)?;
    let params = a.mesh.params()?;
    let (m, n) = (a.m, a.n);
    let reference = move |_: usize, p: [f64; 2]| square_factor(m, p[0]) * square_factor(n, p[1]);
    let sol = solve_mixed(
        Domain::HalfSquare,
        BoundarySpec::new(Variant::Dnd, a.eps),
        position + 1,
        params,
        a.mesh.tol,
        Some(&reference),
    )?;
    let samples = blowup_samples(&sol, position, a.eps, &data, a.radius, a.exclusion)?;
    let num: f64 = samples.iter().map(|s| (s.rescaled - s.profile).powi(2)).sum();
    let den: f64 = samples.iter().map(|s| s.profile * s.profile).sum();
    if den == 0.0 {
        return Err(CliError::Validation("every sample lies inside the exclusion disks".into()));
    }
    if let Some(path) = &a.out {
        let mut w = csv::Writer::from_writer(create(path)?);
        for s in &samples {
            w.serialize(s)?;
        }
        w.flush()?;
    }
    let v = json!({
        "m": a.m,
        "n": a.n,
        "epsilon": a.eps,
        "lambda": sol.pairs[position].lambda,
        "k": data.k,
        "beta": data.beta,
        "samples": samples.len(),
        "relative_rms": (num / den).sqrt(),
    });
    serde_json::to_writer_pretty(&mut *out, &v)?;
    writeln!(out)?;
    Ok(())
}
