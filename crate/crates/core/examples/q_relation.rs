//! The polynomial relation `Q(g) = a·Q(f) + b` propagated along orbits, and
//! the bound `|Σ_{k<n} aᵏ| ≤ 2/|a − 1|` for unimodular `a`.

use permdyn::lab::{
    check_q_hypothesis, check_q_recurrence, check_unimodular, geometric_sum_bound_check,
    sample_square, PolynomialQ,
};
use permdyn::{parse, Complex64};

fn main() -> permdyn::Result<()> {
    let f = parse("1+sin(z-1)")?;
    let g = parse("1-sin(z-1)")?;
    let samples = sample_square(42, 200, 2.0);
    let c = |re| Complex64::new(re, 0.0);

    let cases = [
        (
            "Q(z) = z − 1",
            PolynomialQ::new(vec![c(-1.0), c(1.0)])?,
            c(-1.0),
            c(0.0),
        ),
        ("Q(z) = z", PolynomialQ::identity(), c(-1.0), c(2.0)),
        (
            "Q(z) = z (wrong b)",
            PolynomialQ::identity(),
            c(-1.0),
            c(1.0),
        ),
    ];
    for (label, q, a, b) in &cases {
        let hyp = check_q_hypothesis(&f, &g, q, *a, *b, &samples, 1e-8)?;
        let rec = check_q_recurrence(&f, &g, q, *a, *b, 6, &samples, 1e-8)?;
        println!(
            "{label:<20} a={a} b={b}: hypothesis {} ({:.1e}), recurrence n<=6 {} ({:.1e})",
            if hyp.passed() { "holds" } else { "fails" },
            hyp.max_relative_error,
            if rec.passed() { "holds" } else { "fails" },
            rec.max_relative_error
        );
    }

    for k in 1..8 {
        let a = Complex64::from_polar(1.0, k as f64 * 0.8);
        println!(
            "a = e^{{{:.1}i}}: unimodular {}, partial sums within 2/|a−1| = {:.3}: {}",
            k as f64 * 0.8,
            check_unimodular(a, 1e-12),
            2.0 / (a - 1.0).norm(),
            geometric_sum_bound_check(a, 200)?
        );
    }
    Ok(())
}
