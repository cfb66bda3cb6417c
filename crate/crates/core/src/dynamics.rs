//! Orbits, affine maps and the escape-time classifier.
//!
//! Classification is a finite-budget approximation of the three dynamical
//! sets: `Escaping` for the escaping set `I(f)`, `Bounded` for the filled
//! Julia set `K(f)` and `Bungee` for `BU(f)`. Orbits that fit none of the
//! heuristics within the budget stay `Undecided`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dsl::Expr;
use crate::{Error, Evaluator, Result};

/// The affine map `P(z) = a·z + b`, with `a ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    a: Complex64,
    b: Complex64,
}

impl AffineMap {
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        if a == Complex64::new(0.0, 0.0) {
            return Err(Error::InvalidAffine("multiplier a must be nonzero".into()));
        }
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidAffine("coefficients must be finite".into()));
        }
        Ok(AffineMap { a, b })
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn b(&self) -> Complex64 {
        self.b
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        self.a * z + self.b
    }

    /// `P^n(z) = aⁿz + b·(aⁿ − 1)/(a − 1)`, or `z + n·b` when `a = 1`.
    pub fn iterate_closed_form(&self, n: u32, z: Complex64) -> Complex64 {
        if n == 0 {
            return z;
        }
        let one = Complex64::new(1.0, 0.0);
        if self.a == one {
            return z + self.b * n as f64;
        }
        let an = self.a.powu(n);
        an * z + self.b * (an - one) / (self.a - one)
    }

    /// `P⁻¹(w) = w/a − b/a`.
    pub fn inverse(&self) -> AffineMap {
        let inv = self.a.inv();
        AffineMap {
            a: inv,
            b: -self.b * inv,
        }
    }
}

impl Evaluator for AffineMap {
    fn eval(&self, z: Complex64) -> Complex64 {
        self.apply(z)
    }
}

/// `f` together with the data of its partner `g(z) = a·f^p(z) + b`, where
/// `f^p` is the `p`-fold iterate.
///
/// Requires `a ∉ {0, 1}` and `p ≥ 1`. Whether `f` and `g` actually commute is
/// not checked here; see [`crate::lab`].
#[derive(Debug, Clone, PartialEq)]
pub struct CommutingPair {
    f: Expr,
    map: AffineMap,
    p: u32,
}

impl CommutingPair {
    pub fn new(f: Expr, a: Complex64, b: Complex64, p: u32) -> Result<Self> {
        if a == Complex64::new(1.0, 0.0) {
            return Err(Error::InvalidPair(
                "a = 1 violates the hypothesis a ≠ 0,1".into(),
            ));
        }
        if p == 0 {
            return Err(Error::InvalidPair(
                "iterate exponent p must be at least 1".into(),
            ));
        }
        let map = AffineMap::new(a, b).map_err(|e| match e {
            Error::InvalidAffine(msg) if a == Complex64::new(0.0, 0.0) => {
                Error::InvalidPair(format!("a = 0 violates the hypothesis a ≠ 0,1 ({msg})"))
            }
            other => other,
        })?;
        Ok(CommutingPair { f, map, p })
    }

    pub fn f(&self) -> &Expr {
        &self.f
    }

    pub fn map(&self) -> AffineMap {
        self.map
    }

    pub fn a(&self) -> Complex64 {
        self.map.a
    }

    pub fn b(&self) -> Complex64 {
        self.map.b
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn eval_f(&self, z: Complex64) -> Complex64 {
        self.f.evaluate(z)
    }

    /// `g(z) = a·f^p(z) + b`: `p` evaluations of `f`, then the affine map.
    pub fn eval_g(&self, z: Complex64) -> Complex64 {
        self.map.apply(self.f.iterate(z, self.p as usize))
    }

    /// The partner `g` as an [`Evaluator`].
    pub fn partner(&self) -> impl Evaluator + '_ {
        move |z| self.eval_g(z)
    }
}

/// Thresholds and budgets of the escape-time classifier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifierConfig {
    pub max_iter: usize,
    pub escape_radius: f64,
    pub bounded_radius: f64,
    pub overflow_cap: f64,
    pub confirm_steps: usize,
    pub bungee_min_alternations: usize,
    /// Keep every orbit value in [`OrbitRecord::values`], not just moduli.
    pub record_values: bool,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig {
            max_iter: 200,
            escape_radius: 1e3,
            bounded_radius: 1e2,
            overflow_cap: 1e100,
            confirm_steps: 3,
            bungee_min_alternations: 2,
            record_values: false,
        }
    }
}

impl ClassifierConfig {
    pub fn with_max_iter(self, max_iter: usize) -> Self {
        ClassifierConfig { max_iter, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.into()));
        if self.max_iter == 0 {
            return bad("max_iter must be positive");
        }
        if !(self.bounded_radius > 0.0) {
            return bad("bounded_radius must be positive");
        }
        if !(self.bounded_radius <= self.escape_radius && self.escape_radius < self.overflow_cap) {
            return bad("need bounded_radius <= escape_radius < overflow_cap");
        }
        if self.confirm_steps == 0 || self.confirm_steps >= self.max_iter {
            return bad("need 0 < confirm_steps < max_iter");
        }
        if self.bungee_min_alternations < 2 {
            return bad("bungee_min_alternations must be at least 2");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    BudgetExhausted,
    Overflow,
}

/// A forward orbit `f(z₀), f²(z₀), …` stored as moduli.
///
/// On overflow the last entry is the offending modulus (`+∞` when the value
/// was not finite) and no entry before it exceeds the cap.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitRecord {
    pub initial: Complex64,
    pub moduli: Vec<f64>,
    pub terminated_by: Termination,
    pub values: Option<Vec<Complex64>>,
}

impl OrbitRecord {
    pub fn iterations_used(&self) -> usize {
        self.moduli.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PointClass {
    Escaping,
    Bounded,
    Bungee,
    Undecided,
}

impl PointClass {
    /// Row/column order used by confusion matrices and reports.
    pub const ALL: [PointClass; 4] = [
        PointClass::Escaping,
        PointClass::Bounded,
        PointClass::Bungee,
        PointClass::Undecided,
    ];

    pub fn index(self) -> usize {
        match self {
            PointClass::Escaping => 0,
            PointClass::Bounded => 1,
            PointClass::Bungee => 2,
            PointClass::Undecided => 3,
        }
    }

    pub fn is_decided(self) -> bool {
        self != PointClass::Undecided
    }

    pub fn name(self) -> &'static str {
        match self {
            PointClass::Escaping => "Escaping",
            PointClass::Bounded => "Bounded",
            PointClass::Bungee => "Bungee",
            PointClass::Undecided => "Undecided",
        }
    }
}

impl fmt::Display for PointClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PointClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PointClass::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown point class {s:?}")))
    }
}

/// Iterates `f` from `z0` until the budget runs out or the orbit overflows.
pub fn iterate_orbit(f: &impl Evaluator, z0: Complex64, config: &ClassifierConfig) -> OrbitRecord {
    let mut moduli = Vec::with_capacity(config.max_iter.min(1024));
    let mut values = config.record_values.then(Vec::new);
    let mut z = z0;
    let mut terminated_by = Termination::BudgetExhausted;

    for _ in 0..config.max_iter {
        z = f.eval(z);
        let m = z.norm();
        if let Some(v) = values.as_mut() {
            v.push(z);
        }
        if !z.is_finite() || !m.is_finite() {
            moduli.push(f64::INFINITY);
            terminated_by = Termination::Overflow;
            break;
        }
        moduli.push(m);
        if m > config.overflow_cap {
            terminated_by = Termination::Overflow;
            break;
        }
    }

    OrbitRecord {
        initial: z0,
        moduli,
        terminated_by,
        values,
    }
}

/// Classifies a recorded orbit. Only the moduli sequence is consulted.
pub fn classify_orbit(record: &OrbitRecord, config: &ClassifierConfig) -> PointClass {
    classify_moduli(&record.moduli, config)
}

/// Four-way decision on a sequence of orbit moduli, in this order:
///
/// 1. `Escaping` if the last modulus overflowed, or the final
///    `confirm_steps` moduli all exceed `escape_radius` and never decrease.
/// 2. `Bounded` if every modulus is at most `bounded_radius`.
/// 3. `Bungee` if the orbit went from at most `bounded_radius` to above
///    `escape_radius` and back at least `bungee_min_alternations` times
///    each way. This is a heuristic: a finite orbit cannot witness the two
///    infinite subsequences of the definition.
/// 4. `Undecided` otherwise.
pub fn classify_moduli(moduli: &[f64], config: &ClassifierConfig) -> PointClass {
    let Some(&last) = moduli.last() else {
        return PointClass::Undecided;
    };
    if !last.is_finite() || last > config.overflow_cap {
        return PointClass::Escaping;
    }

    let k = config.confirm_steps;
    if moduli.len() >= k {
        let tail = &moduli[moduli.len() - k..];
        if tail.iter().all(|&m| m > config.escape_radius) && tail.windows(2).all(|w| w[0] <= w[1]) {
            return PointClass::Escaping;
        }
    }

    if moduli.iter().all(|&m| m <= config.bounded_radius) {
        return PointClass::Bounded;
    }

    #[derive(PartialEq)]
    enum Band {
        Low,
        High,
    }
    let (mut ups, mut downs) = (0, 0);
    let mut last_band = None;
    for &m in moduli {
        let band = if m > config.escape_radius {
            Band::High
        } else if m <= config.bounded_radius {
            Band::Low
        } else {
            continue;
        };
        match (&last_band, &band) {
            (Some(Band::Low), Band::High) => ups += 1,
            (Some(Band::High), Band::Low) => downs += 1,
            _ => {}
        }
        last_band = Some(band);
    }
    let need = config.bungee_min_alternations;
    if ups >= need && downs >= need {
        return PointClass::Bungee;
    }

    PointClass::Undecided
}

pub fn classify_point(f: &impl Evaluator, z0: Complex64, config: &ClassifierConfig) -> PointClass {
    classify_orbit(&iterate_orbit(f, z0, config), config)
}

/// `gⁿ(z₀)` computed as `Pⁿ(f^{np}(z₀))` with the closed-form affine iterate.
///
/// Serves as an oracle for direct iteration of `g`. If the `f`-orbit leaves
/// the finite range or exceeds `config.overflow_cap`, the result is
/// `∞ + ∞i`.
pub fn partner_orbit_via_identity(
    pair: &CommutingPair,
    z0: Complex64,
    n: u32,
    config: &ClassifierConfig,
) -> Result<Complex64> {
    let steps = n as usize * pair.p() as usize;
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if steps > config.max_iter {
        return Err(Error::InvalidArgument(format!(
            "n·p = {steps} exceeds the iteration budget {}",
            config.max_iter
        )));
    }
    let mut w = z0;
    for _ in 0..steps {
        w = pair.eval_f(w);
        if !w.is_finite() || w.norm() > config.overflow_cap {
            return Ok(Complex64::new(f64::INFINITY, f64::INFINITY));
        }
    }
    Ok(pair.map().iterate_closed_form(n, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn affine(a: Complex64, b: Complex64) -> AffineMap {
        AffineMap::new(a, b).unwrap()
    }

    fn pair(src: &str, a: f64, b: f64, p: u32) -> CommutingPair {
        CommutingPair::new(parse(src).unwrap(), c(a, 0.0), c(b, 0.0), p).unwrap()
    }

    #[test]
    fn affine_apply_examples() {
        assert_eq!(
            affine(c(-1.0, 0.0), c(2.0, 0.0)).apply(c(5.0, 0.0)),
            c(-3.0, 0.0)
        );
        assert_eq!(
            affine(c(2.0, 0.0), c(1.0, 0.0)).apply(c(0.0, 0.0)),
            c(1.0, 0.0)
        );
        assert_eq!(
            affine(c(0.0, 1.0), c(0.0, 0.0)).apply(c(1.0, 0.0)),
            c(0.0, 1.0)
        );
    }

    #[test]
    fn affine_closed_form_examples() {
        let h = affine(c(-1.0, 0.0), c(2.0, 0.0));
        assert_eq!(h.iterate_closed_form(2, c(5.0, 0.0)), c(5.0, 0.0));

        // brute force 0 → 1 → 3 → 7
        let p = affine(c(2.0, 0.0), c(1.0, 0.0));
        let brute = p.iterate(c(0.0, 0.0), 3);
        assert_eq!(brute, c(7.0, 0.0));
        assert_eq!(p.iterate_closed_form(3, c(0.0, 0.0)), brute);

        let z = c(0.3, -4.0);
        assert_eq!(
            affine(c(0.2, 0.9), c(-1.0, 3.0)).iterate_closed_form(0, z),
            z
        );
    }

    #[test]
    fn affine_unit_multiplier_branch() {
        let t = affine(c(1.0, 0.0), c(0.5, -0.25));
        let z = c(1.0, 1.0);
        assert_eq!(t.iterate_closed_form(4, z), c(3.0, 0.0));
        assert_eq!(t.iterate(z, 4), c(3.0, 0.0));
    }

    #[test]
    fn affine_rejects_zero_multiplier() {
        assert!(matches!(
            AffineMap::new(c(0.0, 0.0), c(1.0, 0.0)),
            Err(Error::InvalidAffine(_))
        ));
    }

    #[test]
    fn affine_inverse_examples() {
        let h = affine(c(-1.0, 0.0), c(2.0, 0.0));
        assert_eq!(h.inverse(), h);
        let s = affine(c(2.0, 0.0), c(0.0, 0.0)).inverse();
        assert_eq!(s.a(), c(0.5, 0.0));
        assert_eq!(s.b().norm(), 0.0);
        let p = affine(c(0.0, 1.0), c(1.0, 0.0));
        let back = p.inverse().apply(p.apply(c(3.0, 0.0)));
        assert!((back - c(3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn pair_rejects_hypothesis_violations() {
        let f = parse("sin(z)").unwrap();
        assert!(matches!(
            CommutingPair::new(f.clone(), c(1.0, 0.0), c(0.0, 0.0), 1),
            Err(Error::InvalidPair(_))
        ));
        assert!(matches!(
            CommutingPair::new(f.clone(), c(0.0, 0.0), c(0.0, 0.0), 1),
            Err(Error::InvalidPair(_))
        ));
        assert!(CommutingPair::new(f, c(-1.0, 0.0), c(0.0, 0.0), 0).is_err());
    }

    #[test]
    fn pair_g_examples() {
        assert_eq!(
            pair("1+sin(z-1)", -1.0, 2.0, 1).eval_g(c(1.0, 0.0)),
            c(1.0, 0.0)
        );
        assert_eq!(
            pair("1+sin(z-1)", -1.0, 2.0, 2).eval_g(c(1.0, 0.0)),
            c(1.0, 0.0)
        );
        let g = pair("sin(z)", -1.0, 0.0, 1).eval_g(c(0.3, 0.0));
        assert!((g.re + 0.3f64.sin()).abs() < 1e-15);
        assert!((g.re + 0.29552).abs() < 1e-5);
    }

    #[test]
    fn fixed_point_orbit() {
        let f = parse("1+sin(z-1)").unwrap();
        let cfg = ClassifierConfig::default();
        let rec = iterate_orbit(&f, c(1.0, 0.0), &cfg);
        assert_eq!(rec.terminated_by, Termination::BudgetExhausted);
        assert_eq!(rec.iterations_used(), cfg.max_iter);
        assert!(rec.moduli.iter().all(|&m| m == 1.0));
        assert_eq!(classify_orbit(&rec, &cfg), PointClass::Bounded);
    }

    #[test]
    fn imaginary_axis_sine_overflows_fast() {
        // brute force: |sin(iy)| = sinh(y); sinh(10) ≈ 1.1e4, sinh(1.1e4) = ∞
        let f = parse("sin(z)").unwrap();
        let cfg = ClassifierConfig::default();
        let rec = iterate_orbit(&f, c(0.0, 10.0), &cfg);
        assert_eq!(rec.terminated_by, Termination::Overflow);
        assert!(rec.iterations_used() <= 5);
        assert_eq!(*rec.moduli.last().unwrap(), f64::INFINITY);
        assert!(rec.moduli[..rec.moduli.len() - 1]
            .iter()
            .all(|m| m.is_finite()));
        assert_eq!(classify_point(&f, c(0.0, 10.0), &cfg), PointClass::Escaping);
    }

    #[test]
    fn real_sine_orbit_stays_in_unit_interval() {
        let f = parse("sin(z)").unwrap();
        let cfg = ClassifierConfig::default();
        let rec = iterate_orbit(&f, c(0.5, 0.0), &cfg);
        assert_eq!(rec.terminated_by, Termination::BudgetExhausted);
        let mut x = 0.5f64;
        for &m in &rec.moduli {
            x = x.sin();
            assert!((m - x.abs()).abs() < 1e-15);
            assert!(m <= 1.0);
        }
        assert_eq!(classify_point(&f, c(0.5, 0.0), &cfg), PointClass::Bounded);
    }

    #[test]
    fn recorded_values_match_moduli() {
        let f = parse("sin(z)").unwrap();
        let cfg = ClassifierConfig {
            record_values: true,
            ..ClassifierConfig::default()
        }
        .with_max_iter(20);
        let rec = iterate_orbit(&f, c(0.4, 0.2), &cfg);
        let values = rec.values.as_ref().unwrap();
        assert_eq!(values.len(), rec.moduli.len());
        for (v, m) in values.iter().zip(&rec.moduli) {
            assert_eq!(v.norm(), *m);
        }
    }

    #[test]
    fn synthetic_moduli_sequences() {
        let cfg = ClassifierConfig::default();
        assert_eq!(classify_moduli(&[1.0; 50], &cfg), PointClass::Bounded);
        assert_eq!(
            classify_moduli(&[2.0, 10.0, 1e3, 1e9, f64::INFINITY], &cfg),
            PointClass::Escaping
        );
        let alternating: Vec<f64> = (0..11)
            .map(|i| if i % 2 == 0 { 0.5 } else { 1e4 })
            .collect();
        assert_eq!(classify_moduli(&alternating, &cfg), PointClass::Bungee);
        // one excursion is not enough for k = 2
        assert_eq!(
            classify_moduli(&[0.5, 1e4, 0.5, 50.0], &cfg),
            PointClass::Undecided
        );
        // stuck between the radii
        assert_eq!(classify_moduli(&[500.0; 10], &cfg), PointClass::Undecided);
        // large but decreasing tail is not a confirmed escape
        assert_eq!(
            classify_moduli(&[5e3, 4e3, 3e3, 2e3], &cfg),
            PointClass::Undecided
        );
        assert_eq!(
            classify_moduli(&[5.0, 2e3, 3e3, 3e3], &cfg),
            PointClass::Escaping
        );
        assert_eq!(classify_moduli(&[], &cfg), PointClass::Undecided);
    }

    #[test]
    fn config_validation() {
        assert!(ClassifierConfig::default().validate().is_ok());
        let d = ClassifierConfig::default();
        let bad = [
            ClassifierConfig { max_iter: 0, ..d },
            ClassifierConfig {
                bounded_radius: 2e3,
                ..d
            },
            ClassifierConfig {
                overflow_cap: 1e3,
                ..d
            },
            ClassifierConfig {
                confirm_steps: 200,
                ..d
            },
            ClassifierConfig {
                bungee_min_alternations: 1,
                ..d
            },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err(), "{cfg:?}");
        }
    }

    #[test]
    fn partner_orbit_examples() {
        let cfg = ClassifierConfig::default();
        let h = pair("1+sin(z-1)", -1.0, 2.0, 1);
        for z in [c(0.3, 0.4), c(-1.5, 1.2), c(1.9, -0.1)] {
            let via = partner_orbit_via_identity(&h, z, 2, &cfg).unwrap();
            let f2 = h.f().iterate(z, 2);
            assert!((via - f2).norm() <= 1e-10 * (1.0 + f2.norm()));
        }
        let s = pair("sin(z)", -1.0, 0.0, 1);
        let via = partner_orbit_via_identity(&s, c(0.3, 0.0), 1, &cfg).unwrap();
        assert!((via.re + 0.3f64.sin()).abs() < 1e-15);

        let blown = partner_orbit_via_identity(&s, c(0.0, 10.0), 3, &cfg).unwrap();
        assert!(!blown.is_finite());
        assert!(partner_orbit_via_identity(&s, c(0.0, 0.0), 201, &cfg).is_err());
    }

    #[test]
    fn point_class_order_and_names() {
        for (i, class) in PointClass::ALL.into_iter().enumerate() {
            assert_eq!(class.index(), i);
            assert_eq!(class.name().parse::<PointClass>().unwrap(), class);
        }
    }
}
