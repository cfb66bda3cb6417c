use std::fmt;

use num_complex::Complex64;

use crate::Evaluator;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryFn {
    Sin,
    Cos,
    Exp,
    Sinh,
    Cosh,
    Neg,
}

impl UnaryFn {
    pub fn from_name(name: &str) -> Option<UnaryFn> {
        Some(match name {
            "sin" => UnaryFn::Sin,
            "cos" => UnaryFn::Cos,
            "exp" => UnaryFn::Exp,
            "sinh" => UnaryFn::Sinh,
            "cosh" => UnaryFn::Cosh,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            UnaryFn::Sin => "sin",
            UnaryFn::Cos => "cos",
            UnaryFn::Exp => "exp",
            UnaryFn::Sinh => "sinh",
            UnaryFn::Cosh => "cosh",
            UnaryFn::Neg => "-",
        }
    }

    fn apply(self, w: Complex64) -> Complex64 {
        match self {
            UnaryFn::Sin => w.sin(),
            UnaryFn::Cos => w.cos(),
            UnaryFn::Exp => w.exp(),
            UnaryFn::Sinh => w.sinh(),
            UnaryFn::Cosh => w.cosh(),
            UnaryFn::Neg => -w,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinaryOp {
    fn symbol(self) -> char {
        match self {
            BinaryOp::Add => '+',
            BinaryOp::Sub => '-',
            BinaryOp::Mul => '*',
            BinaryOp::Div => '/',
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinaryOp::Add | BinaryOp::Sub => 1,
            BinaryOp::Mul | BinaryOp::Div => 2,
        }
    }
}

/// Syntax tree of an entire function of `z`.
///
/// `Pow` carries its exponent as an integer, so non-entire powers cannot be
/// represented at all.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Complex64),
    Var,
    Unary(UnaryFn, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn constant(c: impl Into<Complex64>) -> Expr {
        Expr::Const(c.into())
    }

    pub fn unary(func: UnaryFn, child: Expr) -> Expr {
        Expr::Unary(func, Box::new(child))
    }

    pub fn binary(op: BinaryOp, left: Expr, right: Expr) -> Expr {
        Expr::Binary(op, Box::new(left), Box::new(right))
    }

    pub fn pow(base: Expr, exponent: u32) -> Expr {
        Expr::Pow(Box::new(base), exponent)
    }

    /// Evaluates the expression at `z`.
    ///
    /// Overflow is not an error: non-finite intermediates propagate and the
    /// caller is expected to test the result with `is_finite`.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Var => z,
            Expr::Unary(func, child) => func.apply(child.evaluate(z)),
            Expr::Binary(op, l, r) => {
                let (l, r) = (l.evaluate(z), r.evaluate(z));
                match op {
                    BinaryOp::Add => l + r,
                    BinaryOp::Sub => l - r,
                    BinaryOp::Mul => l * r,
                    BinaryOp::Div => l / r,
                }
            }
            Expr::Pow(base, n) => base.evaluate(z).powu(*n),
        }
    }

    /// Replaces every occurrence of `z` with `replacement`.
    pub fn substitute(&self, replacement: &Expr) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(*c),
            Expr::Var => replacement.clone(),
            Expr::Unary(func, child) => Expr::unary(*func, child.substitute(replacement)),
            Expr::Binary(op, l, r) => {
                Expr::binary(*op, l.substitute(replacement), r.substitute(replacement))
            }
            Expr::Pow(base, n) => Expr::pow(base.substitute(replacement), *n),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(op, _, _) => op.precedence(),
            Expr::Unary(UnaryFn::Neg, _) => 3,
            Expr::Pow(_, _) => 4,
            Expr::Const(c) if !is_plain_literal(*c) => 0,
            _ => 5,
        }
    }
}

impl Evaluator for Expr {
    fn eval(&self, z: Complex64) -> Complex64 {
        self.evaluate(z)
    }
}

/// Builds `f(z) = d/2 + G(z - d/2)` from an odd function `G`.
///
/// When `G` is odd the result satisfies `f(d - z) = d - f(z)`, so `f`
/// commutes with `g(z) = d - f(z)`. With `d = 0` the shift vanishes and `G`
/// is returned unchanged.
pub fn make_symmetric_from_odd(odd: &Expr, d: Complex64) -> Expr {
    if d == Complex64::new(0.0, 0.0) {
        return odd.clone();
    }
    let half = Expr::Const(d / 2.0);
    let shifted = Expr::binary(BinaryOp::Sub, Expr::Var, half.clone());
    Expr::binary(BinaryOp::Add, half, odd.substitute(&shifted))
}

fn is_plain_literal(c: Complex64) -> bool {
    (c.im == 0.0 && c.re.is_sign_positive()) || c == Complex64::i()
}

fn write_real(f: &mut fmt::Formatter<'_>, x: f64) -> fmt::Result {
    // Display for f64 is the shortest string that round-trips exactly.
    write!(f, "{}", x.abs())
}

fn write_const(f: &mut fmt::Formatter<'_>, c: Complex64) -> fmt::Result {
    if c == Complex64::i() {
        return f.write_str("i");
    }
    if c.im == 0.0 {
        if c.re.is_sign_negative() {
            f.write_str("-")?;
        }
        return write_real(f, c.re);
    }
    let mut wrote_re = false;
    if c.re != 0.0 {
        if c.re < 0.0 {
            f.write_str("-")?;
        }
        write_real(f, c.re)?;
        wrote_re = true;
    }
    if c.im < 0.0 {
        f.write_str("-")?;
    } else if wrote_re {
        f.write_str("+")?;
    }
    write_real(f, c.im)?;
    f.write_str("*i")
}

fn write_child(f: &mut fmt::Formatter<'_>, child: &Expr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

/// Prints the expression back into the DSL.
///
/// Parentheses are emitted wherever the tree shape would otherwise change on
/// re-parsing, so `parse(expr.to_string())` evaluates bit-identically.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write_const(f, *c),
            Expr::Var => f.write_str("z"),
            Expr::Unary(UnaryFn::Neg, child) => {
                f.write_str("-")?;
                write_child(f, child, child.precedence() < 3)
            }
            Expr::Unary(func, child) => write!(f, "{}({child})", func.name()),
            Expr::Binary(op, l, r) => {
                let p = op.precedence();
                write_child(f, l, l.precedence() < p)?;
                write!(f, "{}", op.symbol())?;
                let r_parens = r.precedence() <= p || matches!(**r, Expr::Unary(UnaryFn::Neg, _));
                write_child(f, r, r_parens)
            }
            Expr::Pow(base, n) => {
                write_child(f, base, base.precedence() < 5)?;
                write!(f, "^{n}")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ev(src: &str, z: Complex64) -> Complex64 {
        parse(src).unwrap().evaluate(z)
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(ev("1+sin(z-1)", c(1.0, 0.0)), c(1.0, 0.0));
        assert_eq!(ev("2*z+1", c(3.0, 0.0)), c(7.0, 0.0));
    }

    #[test]
    fn sine_on_imaginary_axis_matches_sinh() {
        // sin(iy) = i·sinh(y); reference computed from the real sinh
        let w = ev("sin(z)", c(0.0, 10.0));
        let expected = 10f64.sinh();
        assert!(w.re.abs() < 1e-12);
        assert!((w.im - expected).abs() <= 1e-12 * expected);
        assert!((w.im - 11013.232874703393).abs() < 1e-8);
    }

    #[test]
    fn precedence_of_arithmetic() {
        assert_eq!(ev("2+3*4", c(0.0, 0.0)), c(14.0, 0.0));
        assert_eq!(ev("(2+3)*4", c(0.0, 0.0)), c(20.0, 0.0));
        assert_eq!(ev("-z^2", c(3.0, 0.0)), c(-9.0, 0.0));
        assert_eq!(ev("2^3^2", c(0.0, 0.0)), c(512.0, 0.0));
        assert_eq!(ev("8-3-2", c(0.0, 0.0)), c(3.0, 0.0));
        assert_eq!(ev("8/4/2", c(0.0, 0.0)), c(1.0, 0.0));
    }

    #[test]
    fn complex_constants() {
        assert_eq!(ev("1+2*i", c(0.0, 0.0)), c(1.0, 2.0));
        assert_eq!(ev("i*i", c(0.0, 0.0)), c(-1.0, 0.0));
    }

    #[test]
    fn symmetric_construction_prints_expected_forms() {
        let sin = parse("sin(z)").unwrap();
        let f = make_symmetric_from_odd(&sin, c(2.0, 0.0));
        assert_eq!(f.to_string(), "1+sin(z-1)");
        assert_eq!(f, parse("1+sin(z-1)").unwrap());

        let g = parse("z*exp(z^2)").unwrap();
        let f = make_symmetric_from_odd(&g, c(2.0, 0.0));
        assert_eq!(f.to_string(), "1+(z-1)*exp((z-1)^2)");

        assert_eq!(make_symmetric_from_odd(&sin, c(0.0, 0.0)), sin);
    }

    #[test]
    fn symmetry_property_for_odd_generators() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let d = c(2.0, 0.0);
        for src in ["sin(z)", "z*exp(z^2)"] {
            let f = make_symmetric_from_odd(&parse(src).unwrap(), d);
            let mut n = 0;
            while n < 100 {
                let z = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                if z.norm() > 2.0 {
                    continue;
                }
                n += 1;
                let fz = f.evaluate(z);
                let err = (f.evaluate(d - z) - (d - fz)).norm();
                assert!(err <= 1e-12 * (1.0 + fz.norm()), "{src} at {z}: {err}");
            }
        }
    }

    #[test]
    fn printing_round_trips_negative_and_complex_constants() {
        let e = Expr::binary(
            BinaryOp::Mul,
            Expr::constant(c(-1.5, 0.25)),
            Expr::binary(BinaryOp::Sub, Expr::Var, Expr::constant(c(0.0, -3.0))),
        );
        let back = parse(&e.to_string()).unwrap();
        for z in [c(0.3, -0.7), c(-1.9, 1.1)] {
            assert_eq!(back.evaluate(z), e.evaluate(z));
        }
    }

    #[test]
    fn evaluation_is_pure() {
        let e = parse("1+(z-1)*exp((z-1)^2)").unwrap();
        let z = c(0.123, -1.77);
        let a = e.evaluate(z);
        let b = e.evaluate(z);
        assert_eq!(a.re.to_bits(), b.re.to_bits());
        assert_eq!(a.im.to_bits(), b.im.to_bits());
    }

    #[test]
    fn overflow_is_non_finite() {
        let w = ev("exp(exp(z))", c(10.0, 0.0));
        assert!(!w.is_finite());
    }
}
