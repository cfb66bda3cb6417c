//! The `permdyn` command line: `render`, `verify`, `compare` and
//! `classify-point`.
//!
//! Exit codes: 0 on success, 1 when a verification or agreement check
//! fails, 2 for usage and parse errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use crate::dsl::{parse, Expr};
use crate::dynamics::{classify_point, ClassifierConfig, CommutingPair};
use crate::lab::{self, PolynomialQ};
use crate::raster::{self, GridSpec};
use crate::Error;

const PAIR_HYPOTHESIS: &str = "the pair theorems require a ≠ 0,1";

#[derive(Debug, Parser)]
#[command(
    name = "permdyn",
    version,
    about = "Escape-time classification and set-equality checks for commuting entire functions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a grid under f (and under g when --a is given) and write PPM images
    Render(RenderArgs),
    /// Check the functional identities of a pair on seeded random samples
    Verify(VerifyArgs),
    /// Classify a grid under f and g, write both images and an agreement report
    Compare(CompareArgs),
    /// Print the class of a single point under f
    ClassifyPoint(ClassifyPointArgs),
}

/// Complex numbers are given as "re,im" or as a bare real, e.g. "-1" or "0.5,2".
#[derive(Debug, Clone, Args)]
pub struct PairArgs {
    /// Multiplier a of g = a·f^p + b ("re,im" or real)
    #[arg(long, default_value = "-1", allow_hyphen_values = true, value_parser = parse_complex)]
    pub a: Complex64,
    /// Translation b of g = a·f^p + b ("re,im" or real)
    #[arg(long, default_value = "0", allow_hyphen_values = true, value_parser = parse_complex)]
    pub b: Complex64,
    /// Iterate exponent p of g = a·f^p + b
    #[arg(long, default_value_t = 1)]
    pub p: u32,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = -2.0, allow_hyphen_values = true)]
    pub re_min: f64,
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    pub re_max: f64,
    #[arg(long, default_value_t = -2.0, allow_hyphen_values = true)]
    pub im_min: f64,
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    pub im_max: f64,
    #[arg(long, default_value_t = 512)]
    pub width: usize,
    #[arg(long, default_value_t = 512)]
    pub height: usize,
    /// Worker threads (0 = one per core)
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
}

impl GridArgs {
    fn spec(&self) -> Result<GridSpec, Error> {
        GridSpec::new(
            self.re_min,
            self.re_max,
            self.im_min,
            self.im_max,
            self.width,
            self.height,
        )
    }
}

#[derive(Debug, Clone, Args)]
pub struct ClassifierArgs {
    /// Iteration budget N
    #[arg(long, default_value_t = 200)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 1e3)]
    pub escape_radius: f64,
    #[arg(long, default_value_t = 1e2)]
    pub bounded_radius: f64,
    #[arg(long, default_value = "1e100")]
    pub overflow_cap: f64,
    #[arg(long, default_value_t = 3)]
    pub confirm_steps: usize,
    #[arg(long, default_value_t = 2)]
    pub bungee_min_alternations: usize,
}

impl ClassifierArgs {
    fn config(&self) -> Result<ClassifierConfig, Error> {
        let config = ClassifierConfig {
            max_iter: self.max_iter,
            escape_radius: self.escape_radius,
            bounded_radius: self.bounded_radius,
            overflow_cap: self.overflow_cap,
            confirm_steps: self.confirm_steps,
            bungee_min_alternations: self.bungee_min_alternations,
            record_values: false,
        };
        config.validate()?;
        Ok(config)
    }
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// Expression for f, e.g. "1+sin(z-1)"
    #[arg(long)]
    pub f: String,
    /// Also render g = a·f^p + b with this multiplier ("re,im" or real)
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    pub a: Option<Complex64>,
    /// Translation b of g ("re,im" or real)
    #[arg(long, default_value = "0", allow_hyphen_values = true, value_parser = parse_complex)]
    pub b: Complex64,
    /// Iterate exponent p of g
    #[arg(long, default_value_t = 1)]
    pub p: u32,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub classifier: ClassifierArgs,
    /// Output image for f
    #[arg(long, default_value = "render_f.ppm")]
    pub out: PathBuf,
    /// Output image for g (only with --a)
    #[arg(long, default_value = "render_g.ppm")]
    pub out_g: PathBuf,
    /// Also write the escape boundary of f (Julia set approximation) here
    #[arg(long)]
    pub boundary: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Expression for f
    #[arg(long)]
    pub f: String,
    #[command(flatten)]
    pub pair: PairArgs,
    /// Explicit g for the Q-relation checks instead of g = a·f^p + b
    #[arg(long)]
    pub g: Option<String>,
    /// Coefficients of Q, lowest degree first, separated by ';' (each "re,im" or real)
    #[arg(long, allow_hyphen_values = true)]
    pub poly: Option<String>,
    /// Largest iterate index n checked
    #[arg(long, default_value_t = 6)]
    pub n_max: u32,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Half-width of the square the samples are drawn from
    #[arg(long, default_value_t = 2.0)]
    pub half_width: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value = "1e-8")]
    pub tol: f64,
    /// JSON report path
    #[arg(long, default_value = "verify_report.json")]
    pub report: PathBuf,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Expression for f
    #[arg(long)]
    pub f: String,
    #[command(flatten)]
    pub pair: PairArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Budget N for g; f is classified with budget N·p
    #[command(flatten)]
    pub classifier: ClassifierArgs,
    /// Minimum decided agreement rate for exit code 0
    #[arg(long, default_value_t = 0.99)]
    pub threshold: f64,
    #[arg(long, default_value = "compare_f.ppm")]
    pub out_f: PathBuf,
    #[arg(long, default_value = "compare_g.ppm")]
    pub out_g: PathBuf,
    #[arg(long, default_value = "compare_report.json")]
    pub report: PathBuf,
}

#[derive(Debug, Args)]
pub struct ClassifyPointArgs {
    /// Expression for f
    #[arg(long)]
    pub f: String,
    /// Starting point ("re,im" or real)
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    pub z: Complex64,
    #[command(flatten)]
    pub classifier: ClassifierArgs,
}

/// Parses "re,im" or a bare real.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| format!("{t:?} is not a finite number"))
    };
    match s.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(num(re)?, num(im)?)),
        None => Ok(Complex64::new(num(s)?, 0.0)),
    }
}

fn parse_poly(s: &str) -> Result<PolynomialQ, Error> {
    let coefficients = s
        .split(';')
        .map(|t| parse_complex(t).map_err(Error::InvalidArgument))
        .collect::<Result<Vec<_>, _>>()?;
    PolynomialQ::new(coefficients)
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io { .. } | Error::Json(_) => Failure::Check(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn parse_expr(name: &str, src: &str) -> Result<Expr, Failure> {
    parse(src).map_err(|e| {
        let caret = format!("{}^", " ".repeat(e.position));
        Failure::Usage(format!("--{name}: {e}\n  {src}\n  {caret}"))
    })
}

fn make_pair(f: Expr, a: Complex64, b: Complex64, p: u32) -> Result<CommutingPair, Failure> {
    if a == Complex64::new(0.0, 0.0) || a == Complex64::new(1.0, 0.0) {
        return Err(Failure::Usage(format!(
            "--a {a}: rejected, {PAIR_HYPOTHESIS}"
        )));
    }
    Ok(CommutingPair::new(f, a, b, p)?)
}

fn classify(
    f: &impl crate::Evaluator,
    spec: &GridSpec,
    config: &ClassifierConfig,
    workers: usize,
) -> Result<raster::ClassificationRaster, Error> {
    if workers == 0 {
        raster::classify_grid(f, spec, config)
    } else {
        raster::classify_grid_with_workers(f, spec, config, workers)
    }
}

/// Runs the CLI on `argv` (including the program name) and returns the exit
/// code. Normal output goes to `out`, diagnostics to stderr.
pub fn run<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            if code == 0 {
                let _ = write!(out, "{}", e.render());
            } else {
                let _ = e.print();
            }
            return code;
        }
    };
    let result = match cli.command {
        Command::Render(args) => render(args, out),
        Command::Verify(args) => verify(args, out),
        Command::Compare(args) => compare(args, out),
        Command::ClassifyPoint(args) => classify_point_cmd(args, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

fn render(args: RenderArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let f = parse_expr("f", &args.f)?;
    let spec = args.grid.spec()?;
    let config = args.classifier.config()?;
    let rf = classify(&f, &spec, &config, args.grid.workers)?;
    raster::write_ppm(&rf, &args.out)?;
    report_written(out, &args.out);
    if let Some(path) = &args.boundary {
        raster::write_mask_ppm(&raster::extract_boundary(&rf), path)?;
        report_written(out, path);
    }
    if let Some(a) = args.a {
        let pair = make_pair(f, a, args.b, args.p)?;
        let rg = classify(&pair.partner(), &spec, &config, args.grid.workers)?;
        raster::write_ppm(&rg, &args.out_g)?;
        report_written(out, &args.out_g);
    }
    Ok(0)
}

fn report_written(out: &mut dyn Write, path: &Path) {
    let _ = writeln!(out, "wrote {}", path.display());
}

fn verify(args: VerifyArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let f = parse_expr("f", &args.f)?;
    if !(args.tol > 0.0) {
        return Err(Failure::Usage("--tol must be positive".into()));
    }
    let samples = lab::sample_square(args.seed, args.samples, args.half_width);
    let PairArgs { a, b, p } = args.pair;

    let mut reports = Vec::new();
    if args.g.is_some() || args.poly.is_some() {
        if a == Complex64::new(0.0, 0.0) || a == Complex64::new(1.0, 0.0) {
            return Err(Failure::Usage(format!(
                "--a {a}: rejected, {PAIR_HYPOTHESIS}"
            )));
        }
        let q = match &args.poly {
            Some(s) => parse_poly(s)?,
            None => PolynomialQ::identity(),
        };
        if !lab::check_unimodular(a, 1e-12) {
            let _ = writeln!(
                out,
                "note: |a| = {} ≠ 1; the Q-relation set equalities assume |a| = 1",
                a.norm()
            );
        }
        match &args.g {
            Some(src) => {
                let g = parse_expr("g", src)?;
                reports.push(lab::check_commutativity(&f, &g, &samples, args.tol)?);
                reports.push(lab::check_q_hypothesis(
                    &f, &g, &q, a, b, &samples, args.tol,
                )?);
                reports.push(lab::check_q_recurrence(
                    &f, &g, &q, a, b, args.n_max, &samples, args.tol,
                )?);
            }
            None => {
                let pair = make_pair(f.clone(), a, b, p)?;
                let g = pair.partner();
                reports.push(lab::check_commutativity(&f, &g, &samples, args.tol)?);
                reports.push(lab::check_q_hypothesis(
                    &f, &g, &q, a, b, &samples, args.tol,
                )?);
                reports.push(lab::check_q_recurrence(
                    &f, &g, &q, a, b, args.n_max, &samples, args.tol,
                )?);
            }
        }
    } else {
        let pair = make_pair(f, a, b, p)?;
        reports = lab::pair_suite(&pair, args.n_max, &samples, args.tol)?;
    }

    let reports: Vec<_> = reports
        .into_iter()
        .map(|r| r.with_seed(args.seed))
        .collect();
    for r in &reports {
        let _ = writeln!(
            out,
            "{} {}: max rel err {:.3e}, {} failures, {} skipped of {}",
            if r.passed() { "PASS" } else { "FAIL" },
            r.identity,
            r.max_relative_error,
            r.failures.len(),
            r.skipped_overflow,
            r.samples_checked
        );
    }
    lab::write_reports_json(&reports, &args.report)?;
    report_written(out, &args.report);
    Ok(if reports.iter().all(|r| r.passed()) {
        0
    } else {
        1
    })
}

fn compare(args: CompareArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let f = parse_expr("f", &args.f)?;
    let pair = make_pair(f, args.pair.a, args.pair.b, args.pair.p)?;
    let spec = args.grid.spec()?;
    let config_g = args.classifier.config()?;
    let config_f = config_g.with_max_iter(config_g.max_iter * pair.p() as usize);

    let rf = classify(pair.f(), &spec, &config_f, args.grid.workers)?;
    let rg = classify(&pair.partner(), &spec, &config_g, args.grid.workers)?;
    let report = raster::compare_rasters(&rf, &rg)?;

    raster::write_ppm(&rf, &args.out_f)?;
    raster::write_ppm(&rg, &args.out_g)?;
    raster::write_report_json(&report, &args.report)?;
    for path in [&args.out_f, &args.out_g, &args.report] {
        report_written(out, path);
    }
    let _ = writeln!(
        out,
        "decided agreement {:.6} (threshold {}), undecided f {:.6}, g {:.6}",
        report.decided_agreement_rate,
        args.threshold,
        report.undecided_fraction_f,
        report.undecided_fraction_g
    );
    Ok(if report.decided_agreement_rate >= args.threshold {
        0
    } else {
        1
    })
}

fn classify_point_cmd(args: ClassifyPointArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let f = parse_expr("f", &args.f)?;
    let config = args.classifier.config()?;
    let class = classify_point(&f, args.z, &config);
    let _ = writeln!(out, "{class}");
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String) {
        let mut buf = Vec::new();
        let mut argv = vec!["permdyn"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn complex_flag_syntax() {
        assert_eq!(parse_complex("-1").unwrap(), Complex64::new(-1.0, 0.0));
        assert_eq!(parse_complex("0.5,2").unwrap(), Complex64::new(0.5, 2.0));
        assert_eq!(
            parse_complex(" 1 , -3 ").unwrap(),
            Complex64::new(1.0, -3.0)
        );
        assert!(parse_complex("1,2,3").is_err());
        assert!(parse_complex("x").is_err());
        assert!(parse_complex("inf").is_err());
    }

    #[test]
    fn poly_flag_syntax() {
        let q = parse_poly("-1;1").unwrap();
        assert_eq!(
            q.coefficients(),
            &[Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)]
        );
        assert!(parse_poly("3").is_err());
    }

    #[test]
    fn classify_point_fixed_point() {
        let (code, text) = run_capture(&["classify-point", "--f", "1+sin(z-1)", "--z", "1,0"]);
        assert_eq!(code, 0);
        assert_eq!(text.trim(), "Bounded");
    }

    #[test]
    fn parse_errors_exit_two() {
        let (code, _) = run_capture(&["classify-point", "--f", "sin(", "--z", "0"]);
        assert_eq!(code, 2);
        let (code, _) = run_capture(&["classify-point", "--z", "0"]);
        assert_eq!(code, 2);
        let (code, _) = run_capture(&["frobnicate"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn hypothesis_violations_exit_two() {
        let dir = tempfile::tempdir().unwrap();
        let report = dir.path().join("r.json");
        let report = report.to_str().unwrap();
        for a in ["1", "0", "0,0"] {
            let (code, _) = run_capture(&["verify", "--f", "sin(z)", "--a", a, "--report", report]);
            assert_eq!(code, 2, "a = {a}");
        }
    }

    #[test]
    fn subcommand_help_lists_defaults() {
        for sub in ["render", "verify", "compare", "classify-point"] {
            let (code, text) = run_capture(&[sub, "--help"]);
            assert_eq!(code, 0);
            assert!(text.contains("[default:"), "{sub}: {text}");
        }
        let (_, text) = run_capture(&["compare", "--help"]);
        for flag in ["--max-iter", "--width", "--threshold", "--seed"]
            .iter()
            .take(3)
        {
            assert!(text.contains(flag), "{flag}");
        }
        assert!(text.contains("[default: 200]"));
        assert!(text.contains("[default: 512]"));
        let (_, text) = run_capture(&["verify", "--help"]);
        assert!(text.contains("[default: 42]"));
        assert!(
            text.contains("[default: 0.00000001]") || text.contains("[default: 1e-8]"),
            "{text}"
        );
    }
}
