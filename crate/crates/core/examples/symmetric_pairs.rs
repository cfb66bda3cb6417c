//! Build symmetric functions `d/2 + G(z − d/2)` from odd `G` and check that
//! `f(d − z) = d − f(z)`, which makes `(f, d − f)` a commuting pair.

use permdyn::lab::{pair_suite, sample_square};
use permdyn::{make_symmetric_from_odd, parse, CommutingPair, Complex64};

fn main() {
    let d = Complex64::new(2.0, 0.0);
    let samples = sample_square(42, 200, 2.0);
    for odd in ["sin(z)", "z*exp(z^2)", "sinh(z)-z/4"] {
        let g = parse(odd).unwrap();
        let f = make_symmetric_from_odd(&g, d);
        let worst = samples
            .iter()
            .map(|&z| (f.evaluate(d - z) - (d - f.evaluate(z))).norm())
            .fold(0.0, f64::max);
        println!("G = {odd:<12} f = {f}");
        println!("    max |f(d−z) − (d − f(z))| = {worst:.2e}");

        let pair = CommutingPair::new(f, Complex64::new(-1.0, 0.0), d, 1).unwrap();
        for report in pair_suite(&pair, 4, &samples, 1e-8).unwrap() {
            println!(
                "    {:<48} {} (max rel err {:.2e}, {} skipped)",
                report.identity,
                if report.passed() { "ok" } else { "FAILED" },
                report.max_relative_error,
                report.skipped_overflow
            );
        }
    }
}
