//! `zlab`: command-line driver for zeta-function shift experiments.
//!
//! Exit codes: 0 success, 2 malformed input or I/O failure, 3 failed
//! mathematical precondition, 4 structurally invalid Matsumoto spec,
//! 1 internal consistency failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use zlab_core::complex::{format_complex, format_real, parse_complex, ScalarLiteral};
use zlab_core::density::DensityCurve;
use zlab_core::lab::{
    density_csv, density_curve_from_records, plot_csv, read_joint_scan_csv, read_scan_csv, run_joint_scan,
    run_scan, sha256_hex, Experiment, HurwitzCache, LabError, RawTarget, RunManifest,
};
use zlab_core::matsumoto::{euler_product_eval, strip_eval, MatsumotoSpec, SteudingReport};
use zlab_core::targets::{polynomial_target, TargetKind, DEFAULT_DEGREE};
use zlab_core::zeta::{EvalControls, HurwitzParameter, PeriodicHurwitz, PeriodicSequence};

#[derive(Parser)]
#[command(name = "zlab", version, about = "Zeta-function evaluation and vertical-shift density experiments")]
struct Cli {
    /// More log output (-v info, -vv debug). RUST_LOG overrides.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a zeta-function at one or more points.
    Eval(EvalArgs),
    /// Scan vertical shifts for an experiment config and estimate D_T(eps).
    Scan(ScanArgs),
    /// Joint scan over the [joint] block of an experiment config.
    JointScan(ScanArgs),
    /// Density curve from a stored scan CSV.
    DensityCurve(DensityArgs),
    /// Audit the class conditions of a Matsumoto spec.
    Diagnose(DiagnoseArgs),
    /// Least-squares polynomial target from samples.
    Approx(ApproxArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Selector {
    Riemann,
    Hurwitz,
    PeriodicHurwitz,
    Matsumoto,
}

#[derive(clap::Args)]
struct EvalArgs {
    selector: Selector,
    /// Complex literals such as 2, 0.5+14i, -1-2i.
    #[arg(required = true, allow_hyphen_values = true)]
    points: Vec<String>,
    /// Hurwitz parameter: preset (1/pi, 1/e, log2) or a number in (0, 1].
    #[arg(long, default_value = "1")]
    alpha: String,
    /// Comma-separated periodic sequence b_0,...,b_{k-1}.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    sequence: String,
    /// Matsumoto spec file or preset (riemann, dirichlet-mod4, zero).
    #[arg(long)]
    spec: Option<String>,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = 10_000_000)]
    max_terms: usize,
    /// Prime cap for Euler products.
    #[arg(long, default_value_t = 100_000)]
    prime_cap: u64,
    /// Also write eval.csv and a manifest into this directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct ScanArgs {
    config: PathBuf,
    /// Worker threads; results do not depend on this.
    #[arg(long)]
    threads: Option<usize>,
    /// Output directory (default: output_dir from the config).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct DensityArgs {
    /// Scan CSV (tau,d1,d2) or joint scan CSV (tau,d_phi,d_j_l,...).
    csv: PathBuf,
    /// Comma-separated, strictly increasing thresholds.
    #[arg(long, required = true)]
    epsilon: String,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(clap::Args)]
struct DiagnoseArgs {
    /// Spec file or preset name.
    spec: String,
    /// Also write diagnose.txt, diagnose.csv and a manifest here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SampleFunction {
    Riemann,
    Hurwitz,
    Exp,
}

#[derive(clap::Args)]
struct ApproxArgs {
    /// CSV with header re,im,value_re,value_im.
    #[arg(long, conflicts_with = "function")]
    samples: Option<PathBuf>,
    /// Sample this function on a circle instead.
    #[arg(long, requires = "center")]
    function: Option<SampleFunction>,
    #[arg(long, allow_hyphen_values = true)]
    center: Option<String>,
    #[arg(long, default_value_t = 0.05)]
    radius: f64,
    #[arg(long, default_value_t = 64)]
    points: usize,
    #[arg(long, default_value = "1")]
    alpha: String,
    #[arg(long, default_value_t = DEFAULT_DEGREE)]
    degree: usize,
    /// Also write approx.toml and a manifest here.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
    let result = match cli.command {
        Command::Eval(a) => cmd_eval(a),
        Command::Scan(a) => cmd_scan(a),
        Command::JointScan(a) => cmd_joint_scan(a),
        Command::DensityCurve(a) => cmd_density_curve(a),
        Command::Diagnose(a) => cmd_diagnose(a),
        Command::Approx(a) => cmd_approx(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn threads(requested: Option<usize>) -> usize {
    requested
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

fn parse_list(text: &str, what: &str) -> Result<Vec<Complex64>, LabError> {
    text.split(',')
        .map(|t| parse_complex(t).map_err(|e| LabError::input(format!("{what}: {e}"))))
        .collect()
}

fn parse_reals(text: &str, what: &str) -> Result<Vec<f64>, LabError> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| LabError::input(format!("{what}: bad number {t:?}")))
        })
        .collect()
}

fn load_spec(arg: &str) -> Result<MatsumotoSpec, LabError> {
    let path = Path::new(arg);
    if path.is_file() {
        return Ok(MatsumotoSpec::load(path)?);
    }
    MatsumotoSpec::preset(arg)
        .ok_or_else(|| LabError::input(format!("{arg:?} is neither a spec file nor a preset")))
}

/// Writes files plus manifest; returns the "wrote ..." lines for the caller
/// to print once everything is on disk.
fn write_outputs(dir: &Path, mut manifest: RunManifest, name: &str, files: &[(String, String)]) -> Result<String, LabError> {
    let path = manifest.write_all(dir, name, files)?;
    let mut lines = String::new();
    for (f, _) in files {
        let _ = writeln!(lines, "wrote {}", dir.join(f).display());
    }
    let _ = writeln!(lines, "wrote {}", path.display());
    Ok(lines)
}

fn cmd_eval(a: EvalArgs) -> Result<(), LabError> {
    let ctl = EvalControls::new(a.tol, a.max_terms)?;
    let points = a
        .points
        .iter()
        .map(|p| Ok((p.as_str(), parse_complex(p).map_err(|e| LabError::input(e.to_string()))?)))
        .collect::<Result<Vec<_>, LabError>>()?;
    let series = match a.selector {
        Selector::Riemann => Some(PeriodicHurwitz::riemann()),
        Selector::Hurwitz => Some(PeriodicHurwitz::new(
            HurwitzParameter::parse(&a.alpha)?,
            PeriodicSequence::constant(Complex64::new(1.0, 0.0)),
        )),
        Selector::PeriodicHurwitz => Some(PeriodicHurwitz::new(
            HurwitzParameter::parse(&a.alpha)?,
            PeriodicSequence::new(parse_list(&a.sequence, "sequence")?)?,
        )),
        Selector::Matsumoto => None,
    };
    let spec = match (a.selector, &a.spec) {
        (Selector::Matsumoto, Some(s)) => Some(load_spec(s)?),
        (Selector::Matsumoto, None) => return Err(LabError::input("matsumoto needs --spec")),
        _ => None,
    };
    let cache = HurwitzCache::from_env();
    let mut table = String::from("s_re,s_im,value_re,value_im,error_bound\n");
    for (text, s) in points {
        let fail = |e: LabError| LabError::input(format!("evaluation at s = {text} failed: {e}"));
        let (value, bound) = if let Some(series) = &series {
            let compute = || series.eval(s, &ctl).map_err(LabError::from);
            let v = match &cache {
                Some(c) => {
                    let key = HurwitzCache::key(s, series.alpha().value(), series.sequence().values(), ctl.abs_tol);
                    c.get_or_insert_with(&key, compute)
                }
                None => compute(),
            }
            .map_err(fail)?;
            (v, ctl.abs_tol)
        } else {
            let spec = spec.as_ref().expect("spec loaded");
            if spec.strip_function().is_ok() && s.re > 0.5 {
                (strip_eval(spec, s, &ctl).map_err(|e| fail(e.into()))?, ctl.abs_tol)
            } else {
                let v = euler_product_eval(spec, s, a.prime_cap).map_err(|e| fail(e.into()))?;
                (v.value, v.tail_bound)
            }
        };
        let _ = writeln!(
            table,
            "{},{},{},{},{}",
            format_real(s.re),
            format_real(s.im),
            format_real(value.re),
            format_real(value.im),
            format_real(bound)
        );
    }
    let mut written = String::new();
    if let Some(dir) = a.out {
        let canonical = format!(
            "eval;selector={};alpha={};sequence={};spec={:?};tol={};points={}",
            a.selector.to_possible_value().expect("named").get_name(),
            a.alpha,
            a.sequence,
            a.spec,
            a.tol,
            a.points.join(" ")
        );
        let mut m = RunManifest::new("eval", sha256_hex(canonical.as_bytes()));
        m.evaluator_tolerance = Some(a.tol);
        written = write_outputs(&dir, m, "eval_manifest.json", &[("eval.csv".into(), table.clone())])?;
    }
    print!("{table}{written}");
    Ok(())
}

fn print_curve(curve: &DensityCurve, confirmed: Option<&[(usize, usize)]>) {
    println!("epsilon                  density                  uncertainty");
    for (i, p) in curve.points.iter().enumerate() {
        let extra = confirmed
            .map(|c| format!("  ({} of {} intervals confirmed at mesh/4)", c[i].1, c[i].0))
            .unwrap_or_default();
        println!(
            "{:<24} {:<24} {}{extra}",
            format_real(p.epsilon),
            format_real(p.density),
            format_real(p.uncertainty)
        );
    }
}

fn cmd_scan(a: ScanArgs) -> Result<(), LabError> {
    let exp = Experiment::load(&a.config)?;
    let out = a.out.unwrap_or_else(|| exp.output_dir.clone());
    let art = run_scan(&exp, threads(a.threads))?;
    let written = write_outputs(&out, art.manifest.clone(), "manifest.json", &art.files())?;
    println!(
        "{} records over tau in [{}, {}], delta {}",
        art.records.len(),
        exp.scan.start,
        exp.scan.start + exp.scan.t_max,
        exp.scan.delta
    );
    println!(
        "best shift: tau = {}, d1 = {}, d2 = {}",
        format_real(art.best.tau),
        format_real(art.best.d1),
        format_real(art.best.d2)
    );
    let confirmed: Vec<(usize, usize)> = art.confirmations.iter().map(|c| (c.intervals, c.confirmed)).collect();
    print_curve(&art.curve, Some(&confirmed));
    for note in &art.manifest.notes {
        println!("note: {note}");
    }
    print!("{written}");
    Ok(())
}

fn cmd_joint_scan(a: ScanArgs) -> Result<(), LabError> {
    let exp = Experiment::load(&a.config)?;
    let out = a.out.unwrap_or_else(|| exp.output_dir.clone());
    let art = run_joint_scan(&exp, threads(a.threads))?;
    let written = write_outputs(&out, art.manifest.clone(), "joint_manifest.json", &art.files())?;
    println!("{} records, {} distance fields per record", art.records.len(), art.labels.len() + 1);
    println!(
        "best shift: tau = {}, d_phi = {}, max = {}",
        format_real(art.best.tau),
        format_real(art.best.d_phi),
        format_real(art.best.d.iter().copied().fold(art.best.d_phi, f64::max))
    );
    let confirmed: Vec<(usize, usize)> = art.confirmations.iter().map(|c| (c.intervals, c.confirmed)).collect();
    print_curve(&art.curve, Some(&confirmed));
    for note in &art.manifest.notes {
        println!("note: {note}");
    }
    print!("{written}");
    Ok(())
}

fn cmd_density_curve(a: DensityArgs) -> Result<(), LabError> {
    let text = std::fs::read_to_string(&a.csv).map_err(|e| LabError::input(format!("{}: {e}", a.csv.display())))?;
    let eps = parse_reals(&a.epsilon, "epsilon")?;
    let curve = if text.starts_with("tau,d_phi") {
        density_curve_from_records(&read_joint_scan_csv(&text)?.1, eps.clone())?
    } else {
        density_curve_from_records(&read_scan_csv(&text)?, eps.clone())?
    };
    let digest = sha256_hex(format!("{}\n{}", sha256_hex(text.as_bytes()), a.epsilon).as_bytes());
    let mut m = RunManifest::new("density-curve", digest);
    m.resolution_delta = Some(curve.resolution);
    m.notes.push(format!(
        "crossings located by linear interpolation between stored records; resolution limit {}",
        curve.resolution
    ));
    let written = write_outputs(
        &a.out,
        m,
        "curve_manifest.json",
        &[
            ("curve.csv".into(), density_csv(&curve)),
            ("curve_plot.csv".into(), plot_csv(&curve)),
        ],
    )?;
    print_curve(&curve, None);
    print!("{written}");
    Ok(())
}

fn cmd_diagnose(a: DiagnoseArgs) -> Result<(), LabError> {
    let spec = load_spec(&a.spec)?;
    let report = SteudingReport::run(&spec)?;
    let text = report.to_text();
    let mut written = String::new();
    if let Some(dir) = a.out {
        let m = RunManifest::new("diagnose", sha256_hex(spec.to_toml_string().as_bytes()));
        written = write_outputs(
            &dir,
            m,
            "diagnose_manifest.json",
            &[("diagnose.txt".into(), text.clone()), ("diagnose.csv".into(), report.to_csv())],
        )?;
    }
    print!("{text}{written}");
    Ok(())
}

fn read_samples(path: &Path) -> Result<Vec<(Complex64, Complex64)>, LabError> {
    let text = std::fs::read_to_string(path).map_err(|e| LabError::input(format!("{}: {e}", path.display())))?;
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("re,im,value_re,value_im") {
        return Err(LabError::input("CSV schema mismatch: expected header re,im,value_re,value_im"));
    }
    lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let v = parse_reals(l, "sample")?;
            if v.len() != 4 {
                return Err(LabError::input(format!("CSV schema mismatch: row {l:?}")));
            }
            Ok((Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3])))
        })
        .collect()
}

fn cmd_approx(a: ApproxArgs) -> Result<(), LabError> {
    let samples = match (&a.samples, a.function) {
        (Some(path), None) => read_samples(path)?,
        (None, Some(f)) => {
            let center = parse_complex(a.center.as_deref().unwrap_or_default())
                .map_err(|e| LabError::input(e.to_string()))?;
            if a.radius.is_nan() || a.radius <= 0.0 || a.points < 2 {
                return Err(LabError::input("need a positive radius and at least 2 points"));
            }
            let ctl = EvalControls::default();
            let series = match f {
                SampleFunction::Riemann => Some(PeriodicHurwitz::riemann()),
                SampleFunction::Hurwitz => Some(PeriodicHurwitz::new(
                    HurwitzParameter::parse(&a.alpha)?,
                    PeriodicSequence::constant(Complex64::new(1.0, 0.0)),
                )),
                SampleFunction::Exp => None,
            };
            (0..a.points)
                .map(|i| {
                    let theta = 2.0 * std::f64::consts::PI * i as f64 / a.points as f64;
                    let s = center + Complex64::from_polar(a.radius, theta);
                    let v = match &series {
                        Some(z) => z.eval(s, &ctl)?,
                        None => s.exp(),
                    };
                    Ok((s, v))
                })
                .collect::<Result<Vec<_>, LabError>>()?
        }
        _ => return Err(LabError::input("give exactly one of --samples or --function")),
    };
    let fit = polynomial_target(&samples, a.degree)?;
    let TargetKind::Polynomial { coeffs, center, scale } = fit.target.kind() else {
        unreachable!("least squares yields a polynomial");
    };
    let raw = RawTarget::Polynomial {
        coefficients: coeffs.iter().map(|&c| ScalarLiteral::from_complex(c)).collect(),
        center: Some(ScalarLiteral::Text(format_complex(*center))),
        scale: Some(*scale),
    };
    let body = toml::to_string(&raw).map_err(|e| LabError::input(e.to_string()))?;
    let text = format!(
        "# least-squares degree {} on {} samples\n# max residual {}\n# condition estimate {}\n{body}",
        a.degree,
        samples.len(),
        format_real(fit.max_residual),
        format_real(fit.condition)
    );
    let mut written = String::new();
    if let Some(dir) = a.out {
        let m = RunManifest::new("approx", sha256_hex(text.as_bytes()));
        written = write_outputs(&dir, m, "approx_manifest.json", &[("approx.toml".into(), text.clone())])?;
    }
    print!("{text}{written}");
    Ok(())
}
