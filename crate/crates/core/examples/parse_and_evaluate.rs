//! Parse expressions, print them back and evaluate them at a few points.
//!
//! ```text
//! cargo run --example parse_and_evaluate -- "z*exp(z^2)" 0.5,0.25
//! ```

use permdyn::{parse, tokenize, Complex64};

fn main() {
    let mut args = std::env::args().skip(1);
    let source = args.next().unwrap_or_else(|| "1+sin(z-1)".to_string());
    let z = args
        .next()
        .map(|s| {
            let (re, im) = s.split_once(',').unwrap_or((&s, "0"));
            Complex64::new(re.parse().expect("re"), im.parse().expect("im"))
        })
        .unwrap_or(Complex64::new(0.5, 0.25));

    match parse(&source) {
        Ok(expr) => {
            let tokens: Vec<_> = tokenize(&source)
                .unwrap()
                .into_iter()
                .map(|t| t.lexeme)
                .collect();
            println!("tokens:   {tokens:?}");
            println!("printed:  {expr}");
            println!("f({z}) = {}", expr.evaluate(z));
        }
        Err(err) => {
            eprintln!("{source}\n{}^ {err}", " ".repeat(err.position));
            std::process::exit(2);
        }
    }

    // precedence and error reporting at a glance
    for src in [
        "2+3*4",
        "-z^2",
        "2^3^2",
        "sin(10*i)",
        "sin(",
        "2z",
        "tan(z)",
    ] {
        match parse(src) {
            Ok(e) => println!(
                "{src:>10}  ->  {e:<12} at z=3: {}",
                e.evaluate(Complex64::new(3.0, 0.0))
            ),
            Err(err) => println!("{src:>10}  ->  error: {err}"),
        }
    }
}
