//! Randomized numerical checks of the identities linking `f`, its partner
//! `g = a·f^p + b` and the affine map `P(z) = az + b`.
//!
//! Every check compares two routes to the same value and reports the
//! relative error `|x − y| / (1 + max(|x|, |y|))` per sample. Samples where
//! any intermediate is non-finite or larger than [`MAGNITUDE_LIMIT`] are
//! counted as skipped: at that scale the argument of a trigonometric factor
//! has lost all absolute precision and the comparison says nothing.

use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::CommutingPair;
use crate::{Error, Evaluator, Result};

/// Magnitude beyond which a sample is skipped instead of compared.
pub const MAGNITUDE_LIMIT: f64 = 1e8;

/// `count` points drawn uniformly from `[−half_width, half_width]²` with a
/// fixed-seed ChaCha generator.
pub fn sample_square(seed: u64, count: usize, half_width: f64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            Complex64::new(
                rng.gen_range(-half_width..=half_width),
                rng.gen_range(-half_width..=half_width),
            )
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    /// Position of the sample in the input slice.
    pub index: usize,
    pub point: Complex64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub identity: String,
    pub samples_checked: usize,
    pub max_relative_error: f64,
    /// Samples whose error exceeded the tolerance, in sample order.
    pub failures: Vec<Failure>,
    pub skipped_overflow: usize,
    pub tolerance: f64,
    pub seed: Option<u64>,
}

#[derive(Serialize)]
struct FailureJson {
    re: f64,
    im: f64,
    error: f64,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    identity: &'a str,
    samples_checked: usize,
    max_relative_error: f64,
    failures: Vec<FailureJson>,
    skipped_overflow: usize,
    tolerance: f64,
    seed: Option<u64>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn passes(&self) -> usize {
        self.samples_checked - self.failures.len() - self.skipped_overflow
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn to_json(&self) -> serde_json::Value {
        let doc = ReportJson {
            identity: &self.identity,
            samples_checked: self.samples_checked,
            max_relative_error: self.max_relative_error,
            failures: self
                .failures
                .iter()
                .map(|f| FailureJson {
                    re: f.point.re,
                    im: f.point.im,
                    error: f.error,
                })
                .collect(),
            skipped_overflow: self.skipped_overflow,
            tolerance: self.tolerance,
            seed: self.seed,
        };
        serde_json::to_value(doc).expect("report serializes")
    }
}

/// Writes a list of reports as a JSON array.
pub fn write_reports_json(reports: &[IdentityReport], path: &Path) -> Result<()> {
    let doc: Vec<_> = reports.iter().map(IdentityReport::to_json).collect();
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn usable(w: Complex64) -> bool {
    w.is_finite() && w.norm() <= MAGNITUDE_LIMIT
}

/// Relative error normalized by `1 + max(|x|, |y|)`.
pub fn relative_error(x: Complex64, y: Complex64) -> f64 {
    (x - y).norm() / (1.0 + x.norm().max(y.norm()))
}

enum Outcome {
    Compared(f64),
    Skipped,
}

fn compare_all(values: &[Complex64]) -> Option<()> {
    values.iter().all(|&w| usable(w)).then_some(())
}

fn run_check<F>(identity: String, samples: &[Complex64], tol: f64, per_sample: F) -> IdentityReport
where
    F: Fn(Complex64) -> Outcome + Sync,
{
    let outcomes: Vec<Outcome> = samples.par_iter().map(|&z| per_sample(z)).collect();

    let mut report = IdentityReport {
        identity,
        samples_checked: samples.len(),
        max_relative_error: 0.0,
        failures: Vec::new(),
        skipped_overflow: 0,
        tolerance: tol,
        seed: None,
    };
    for (index, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Outcome::Skipped => report.skipped_overflow += 1,
            Outcome::Compared(err) => {
                // NaN errors count as failures too
                if !(err <= tol) {
                    report.failures.push(Failure {
                        index,
                        point: samples[index],
                        error: err,
                    });
                }
                if err > report.max_relative_error || err.is_nan() {
                    report.max_relative_error = err;
                }
            }
        }
    }
    report
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument("tolerance must be positive".into()))
    }
}

/// `f(g(z))` against `g(f(z))`.
pub fn check_commutativity(
    f: &impl Evaluator,
    g: &impl Evaluator,
    samples: &[Complex64],
    tol: f64,
) -> Result<IdentityReport> {
    check_tol(tol)?;
    Ok(run_check(
        "commutativity f∘g = g∘f".into(),
        samples,
        tol,
        |z| {
            let (fz, gz) = (f.eval(z), g.eval(z));
            let (fg, gf) = (f.eval(gz), g.eval(fz));
            match compare_all(&[fz, gz, fg, gf]) {
                Some(()) => Outcome::Compared(relative_error(fg, gf)),
                None => Outcome::Skipped,
            }
        },
    ))
}

/// `f(az + b)` against `a·f(z) + b`.
pub fn check_functional_equation(
    f: &impl Evaluator,
    a: Complex64,
    b: Complex64,
    samples: &[Complex64],
    tol: f64,
) -> Result<IdentityReport> {
    check_tol(tol)?;
    if a == Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidArgument("a must be nonzero".into()));
    }
    let identity = format!("functional equation f(az+b) = af(z)+b, a={a}, b={b}");
    Ok(run_check(identity, samples, tol, |z| {
        let fz = f.eval(z);
        let lhs = f.eval(a * z + b);
        let rhs = a * fz + b;
        match compare_all(&[fz, lhs, rhs]) {
            Some(()) => Outcome::Compared(relative_error(lhs, rhs)),
            None => Outcome::Skipped,
        }
    }))
}

/// Direct `n`-fold iteration of `g` against `aⁿ·f^{np}(z) + b·Σ_{k<n} aᵏ`
/// for `n = 1..=n_max`.
///
/// A sample's error is its worst error over `n`. Comparison for a sample
/// stops at the first `n` where either route leaves the usable range; the
/// sample counts as skipped only if not even `n = 1` could be compared.
pub fn check_iterate_identity(
    pair: &CommutingPair,
    n_max: u32,
    samples: &[Complex64],
    tol: f64,
) -> Result<IdentityReport> {
    check_tol(tol)?;
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be positive".into()));
    }
    let identity = format!(
        "iterate identity g^n = P^n∘f^(np), p={}, n<={n_max}",
        pair.p()
    );
    let p = pair.p() as usize;
    let map = pair.map();
    Ok(run_check(identity, samples, tol, |z| {
        let (mut direct, mut f_orbit) = (z, z);
        let mut worst: Option<f64> = None;
        for n in 1..=n_max {
            direct = pair.eval_g(direct);
            f_orbit = pair.f().iterate(f_orbit, p);
            let closed = map.iterate_closed_form(n, f_orbit);
            if compare_all(&[direct, f_orbit, closed]).is_none() {
                break;
            }
            let err = relative_error(direct, closed);
            worst = Some(worst.map_or(err, |w: f64| w.max(err)));
        }
        worst.map_or(Outcome::Skipped, Outcome::Compared)
    }))
}

/// Non-constant polynomial `Σ c_k z^k`, coefficients lowest degree first.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialQ {
    coefficients: Vec<Complex64>,
}

impl PolynomialQ {
    pub fn new(coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.len() < 2 {
            return Err(Error::InvalidArgument(
                "polynomial must have degree at least 1".into(),
            ));
        }
        if coefficients.last() == Some(&Complex64::new(0.0, 0.0)) {
            return Err(Error::InvalidArgument(
                "leading coefficient must be nonzero".into(),
            ));
        }
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("coefficients must be finite".into()));
        }
        Ok(PolynomialQ { coefficients })
    }

    /// `Q(z) = z`.
    pub fn identity() -> Self {
        PolynomialQ {
            coefficients: vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        }
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coefficients
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }
}

fn q_rhs(a_pow: Complex64, q_f: Complex64, b: Complex64, geom: Complex64) -> Complex64 {
    a_pow * q_f + b * geom
}

/// The hypothesis `Q(g(z)) = a·Q(f(z)) + b` itself.
pub fn check_q_hypothesis(
    f: &impl Evaluator,
    g: &impl Evaluator,
    q: &PolynomialQ,
    a: Complex64,
    b: Complex64,
    samples: &[Complex64],
    tol: f64,
) -> Result<IdentityReport> {
    check_tol(tol)?;
    let one = Complex64::new(1.0, 0.0);
    let identity = format!("Q-relation Q(g) = aQ(f)+b, a={a}, b={b}");
    Ok(run_check(identity, samples, tol, |z| {
        let (fz, gz) = (f.eval(z), g.eval(z));
        let (qf, qg) = (q.eval(fz), q.eval(gz));
        let rhs = q_rhs(a, qf, b, one);
        match compare_all(&[fz, gz, qf, qg, rhs]) {
            Some(()) => Outcome::Compared(relative_error(qg, rhs)),
            None => Outcome::Skipped,
        }
    }))
}

/// `Q(gⁿ(z))` against `aⁿ·Q(fⁿ(z)) + b·Σ_{k<n} aᵏ` for `n = 1..=n_max`.
///
/// Same per-sample aggregation and truncation as
/// [`check_iterate_identity`]. At `n = 1` the arithmetic is exactly that of
/// [`check_q_hypothesis`].
#[allow(clippy::too_many_arguments)]
pub fn check_q_recurrence(
    f: &impl Evaluator,
    g: &impl Evaluator,
    q: &PolynomialQ,
    a: Complex64,
    b: Complex64,
    n_max: u32,
    samples: &[Complex64],
    tol: f64,
) -> Result<IdentityReport> {
    check_tol(tol)?;
    if a == Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidArgument("a must be nonzero".into()));
    }
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be positive".into()));
    }
    let one = Complex64::new(1.0, 0.0);
    let identity = format!("Q-recurrence Q(g^n) = a^nQ(f^n)+bΣa^k, a={a}, b={b}, n<={n_max}");
    Ok(run_check(identity, samples, tol, |z| {
        let (mut gn, mut fn_) = (z, z);
        let (mut a_pow, mut geom) = (a, one);
        let mut worst: Option<f64> = None;
        for n in 1..=n_max {
            if n > 1 {
                a_pow *= a;
                geom = geom * a + one;
            }
            gn = g.eval(gn);
            fn_ = f.eval(fn_);
            let (qg, qf) = (q.eval(gn), q.eval(fn_));
            let rhs = q_rhs(a_pow, qf, b, geom);
            if compare_all(&[fn_, gn, qf, qg, rhs]).is_none() {
                break;
            }
            let err = relative_error(qg, rhs);
            worst = Some(worst.map_or(err, |w: f64| w.max(err)));
        }
        worst.map_or(Outcome::Skipped, Outcome::Compared)
    }))
}

/// True iff `| |a| − 1 | ≤ tol` and `|a − 1| > tol`.
pub fn check_unimodular(a: Complex64, tol: f64) -> bool {
    (a.norm() - 1.0).abs() <= tol && (a - Complex64::new(1.0, 0.0)).norm() > tol
}

/// Brute-force check that every partial sum `|Σ_{k<n} aᵏ|`, `n ≤ n_max`,
/// stays within `2/|a − 1|` (plus `1e−9`). Requires `|a| = 1` to within
/// `1e−12` and `a ≠ 1`.
pub fn geometric_sum_bound_check(a: Complex64, n_max: u32) -> Result<bool> {
    if !check_unimodular(a, 1e-12) {
        return Err(Error::InvalidArgument(format!(
            "a = {a} must satisfy |a| = 1 and a ≠ 1"
        )));
    }
    let bound = 2.0 / (a - Complex64::new(1.0, 0.0)).norm() + 1e-9;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    for _ in 0..n_max {
        sum += term;
        term *= a;
        if sum.norm() > bound {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Commutativity, functional equation and iterate identity for one pair.
pub fn pair_suite(
    pair: &CommutingPair,
    n_max: u32,
    samples: &[Complex64],
    tol: f64,
) -> Result<Vec<IdentityReport>> {
    let g = pair.partner();
    Ok(vec![
        check_commutativity(pair.f(), &g, samples, tol)?,
        check_functional_equation(pair.f(), pair.a(), pair.b(), samples, tol)?,
        check_iterate_identity(pair, n_max, samples, tol)?,
    ])
}
