//! Follow a handful of orbits of `sin z` and show how the classifier reads
//! their modulus sequences.

use permdyn::{classify_orbit, iterate_orbit, parse, ClassifierConfig, Complex64};

fn main() {
    let f = parse("sin(z)").unwrap();
    let config = ClassifierConfig {
        record_values: true,
        ..ClassifierConfig::default()
    };
    let starts = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 3.0),
        Complex64::new(0.0, 10.0),
        Complex64::new(1.5, 1.5),
        Complex64::new(-2.0, 0.7),
    ];
    for z0 in starts {
        let rec = iterate_orbit(&f, z0, &config);
        let head: Vec<String> = rec
            .moduli
            .iter()
            .take(6)
            .map(|m| format!("{m:.3e}"))
            .collect();
        println!(
            "z0 = {z0:<8} {:<10} after {:>3} steps ({:?}); |z_n|: {}",
            classify_orbit(&rec, &config).to_string(),
            rec.iterations_used(),
            rec.terminated_by,
            head.join(", ")
        );
    }

    // a short budget can leave an orbit undecided
    let short = ClassifierConfig::default().with_max_iter(2);
    let rec = iterate_orbit(&f, Complex64::new(0.0, 3.0), &short);
    println!("z0 = 3i with budget 2: {}", classify_orbit(&rec, &short));
}
