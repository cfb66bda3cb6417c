//! Iteration and classification of transcendental entire functions over the
//! complex plane, with numerical checks that a commuting pair `f` and
//! `g = a·f^p + b` shares its escaping, filled Julia and bungee sets.
//!
//! The crate is organised around five pieces:
//!
//! * [`dsl`]: a small expression language for entire functions of `z`.
//! * [`dynamics`]: affine maps, commuting pairs, orbits and the four-way
//!   point classifier.
//! * [`lab`]: randomized verification of the functional identities that
//!   relate `f`, `g` and the affine map `P(z) = az + b`.
//! * [`raster`]: grid classification, f-vs-g agreement statistics, escape
//!   boundary extraction and PPM/JSON output.
//! * [`cli`]: the `permdyn` command line front end.
//!
//! Runnable walkthroughs of each capability live in the crate's `examples/`
//! directory (`cargo run --example <name>`).

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod corpus;
pub mod dsl;
pub mod dynamics;
mod error;
pub mod lab;
pub mod raster;

pub use num_complex::Complex64;

pub use dsl::{make_symmetric_from_odd, parse, tokenize, Expr, ParseError, Token, TokenKind};
pub use dynamics::{
    classify_orbit, classify_point, iterate_orbit, partner_orbit_via_identity, AffineMap,
    ClassifierConfig, CommutingPair, OrbitRecord, PointClass, Termination,
};
pub use error::{Error, Result};

/// Anything that can be evaluated as a function `ℂ → ℂ`.
///
/// Implemented for parsed expressions and for plain closures. Evaluators must
/// be `Sync` so rasters can be classified from several workers at once.
pub trait Evaluator: Sync {
    fn eval(&self, z: Complex64) -> Complex64;

    /// `k`-fold iterate of the function, starting from `z`.
    fn iterate(&self, z: Complex64, k: usize) -> Complex64 {
        let mut w = z;
        for _ in 0..k {
            w = self.eval(w);
        }
        w
    }
}

impl<F> Evaluator for F
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    fn eval(&self, z: Complex64) -> Complex64 {
        self(z)
    }
}
