//! Built-in commuting pairs drawn from the sine and Gaussian families.

use num_complex::Complex64;

use crate::dsl::parse;
use crate::dynamics::CommutingPair;

pub const SINE: &str = "sin(z)";
pub const SHIFTED_SINE: &str = "1+sin(z-1)";
pub const SHIFTED_GAUSSIAN: &str = "1+(z-1)*exp((z-1)^2)";

/// A named corpus pair `(f, a, b, p)`.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub pair: CommutingPair,
}

fn entry(name: &'static str, f: &str, a: f64, b: f64, p: u32) -> CorpusEntry {
    let pair = CommutingPair::new(
        parse(f).expect("corpus expression parses"),
        Complex64::new(a, 0.0),
        Complex64::new(b, 0.0),
        p,
    )
    .expect("corpus pair is valid");
    CorpusEntry { name, pair }
}

/// All corpus pairs: `(sin z, −sin z)`, `(1+sin(z−1), 1−sin(z−1))`, the
/// Gaussian-type pair with `g = 2 − f`, and `g = −f^p + 2` for `p = 2, 3`.
pub fn pairs() -> Vec<CorpusEntry> {
    vec![
        entry("sine/neg-sine", SINE, -1.0, 0.0, 1),
        entry("shifted-sine p=1", SHIFTED_SINE, -1.0, 2.0, 1),
        entry("shifted-sine p=2", SHIFTED_SINE, -1.0, 2.0, 2),
        entry("shifted-sine p=3", SHIFTED_SINE, -1.0, 2.0, 3),
        entry("shifted-gaussian", SHIFTED_GAUSSIAN, -1.0, 2.0, 1),
    ]
}

/// The corpus pairs with `p = 1`.
pub fn first_order_pairs() -> Vec<CorpusEntry> {
    pairs().into_iter().filter(|e| e.pair.p() == 1).collect()
}
