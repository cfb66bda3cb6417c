//! Classify the same grid under `f` and its partner `g`, compare the two
//! rasters and write both images plus an agreement report.
//!
//! ```text
//! cargo run --release --example compare_sets -- [out_dir]
//! ```

use std::path::PathBuf;

use permdyn::corpus;
use permdyn::raster::{classify_grid, compare_rasters, write_ppm, write_report_json, GridSpec};
use permdyn::{ClassifierConfig, PointClass};

fn main() -> permdyn::Result<()> {
    let out: PathBuf = std::env::args()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(std::env::temp_dir);
    let spec = GridSpec::square(2.0, 256, 256)?;
    let config = ClassifierConfig::default();

    for entry in corpus::pairs() {
        let p = entry.pair.p() as usize;
        // g = a·f^p + b advances p steps of f per step
        let rf = classify_grid(
            entry.pair.f(),
            &spec,
            &config.with_max_iter(config.max_iter * p),
        )?;
        let rg = classify_grid(&entry.pair.partner(), &spec, &config)?;
        let report = compare_rasters(&rf, &rg)?;
        let counts: Vec<String> = PointClass::ALL
            .iter()
            .map(|&c| format!("{c} {}/{}", rf.count(c), rg.count(c)))
            .collect();
        println!(
            "{:<18} agreement {:.6}  undecided f {:.4} g {:.4}  [{}]",
            entry.name,
            report.decided_agreement_rate,
            report.undecided_fraction_f,
            report.undecided_fraction_g,
            counts.join(", ")
        );

        let stem = entry.name.replace(['/', ' ', '='], "_");
        write_ppm(&rf, &out.join(format!("{stem}_f.ppm")))?;
        write_ppm(&rg, &out.join(format!("{stem}_g.ppm")))?;
        write_report_json(&report, &out.join(format!("{stem}_report.json")))?;
    }
    println!("images and reports written to {}", out.display());
    Ok(())
}
