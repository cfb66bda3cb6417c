//! Approximate the Julia sets of `f` and `g` by the boundary of the escaping
//! class and measure how well the two boundaries overlap.

use std::path::PathBuf;

use permdyn::corpus;
use permdyn::raster::{classify_grid_with_workers, extract_boundary, write_mask_ppm, GridSpec};
use permdyn::ClassifierConfig;

fn main() -> permdyn::Result<()> {
    let out: PathBuf = std::env::args()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(std::env::temp_dir);
    let spec = GridSpec::new(-3.0, 5.0, -4.0, 4.0, 320, 320)?;
    let config = ClassifierConfig::default();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());

    for entry in corpus::first_order_pairs() {
        let rf = classify_grid_with_workers(entry.pair.f(), &spec, &config, workers)?;
        let rg = classify_grid_with_workers(&entry.pair.partner(), &spec, &config, workers)?;
        let (bf, bg) = (extract_boundary(&rf), extract_boundary(&rg));
        println!(
            "{:<18} boundary pixels f {:>5} g {:>5}  jaccard {:.4}  within 1px {:.4}",
            entry.name,
            bf.count(),
            bg.count(),
            bf.jaccard(&bg)?,
            bf.dilate(1).jaccard(&bg.dilate(1))?
        );
        let stem = entry.name.replace(['/', ' ', '='], "_");
        write_mask_ppm(&bf, &out.join(format!("{stem}_julia.ppm")))?;
    }
    println!("boundary masks written to {}", out.display());
    Ok(())
}
