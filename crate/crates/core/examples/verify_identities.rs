//! Randomized checks of the commuting-pair identities over the built-in
//! corpus, plus one pair that should fail. Writes a JSON report.

use permdyn::corpus;
use permdyn::lab::{check_functional_equation, pair_suite, sample_square, write_reports_json};
use permdyn::{parse, Complex64};

fn main() -> permdyn::Result<()> {
    let seed = 42;
    let samples = sample_square(seed, 200, 2.0);
    let mut all = Vec::new();
    for entry in corpus::pairs() {
        println!("{}", entry.name);
        for report in pair_suite(&entry.pair, 4, &samples, 1e-8)? {
            println!(
                "  {:<6} {:<48} max rel err {:.2e}",
                if report.passed() { "PASS" } else { "FAIL" },
                report.identity,
                report.max_relative_error
            );
            all.push(report.with_seed(seed));
        }
    }

    let exp = parse("exp(z)")?;
    let broken = check_functional_equation(
        &exp,
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 0.0),
        &samples,
        1e-8,
    )?;
    println!(
        "exp(z) with P(z) = −z: {} of {} samples fail, first at {:?}",
        broken.failures.len(),
        broken.samples_checked,
        broken.failures.first().map(|f| f.point)
    );
    all.push(broken.with_seed(seed));

    let path = std::env::temp_dir().join("permdyn_verify_identities.json");
    write_reports_json(&all, &path)?;
    println!("report: {}", path.display());
    Ok(())
}
