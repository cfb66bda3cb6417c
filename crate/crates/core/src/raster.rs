//! Grid classification, f-vs-g agreement and escape-boundary extraction.

use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{classify_point, ClassifierConfig, PointClass};
use crate::{Error, Evaluator, Result};

/// A `width × height` pixel grid over `[re_min, re_max] × [im_min, im_max]`.
///
/// Pixels are sampled at their centres, row-major, with row 0 at `im_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub width: usize,
    pub height: usize,
}

impl GridSpec {
    pub fn new(
        re_min: f64,
        re_max: f64,
        im_min: f64,
        im_max: f64,
        width: usize,
        height: usize,
    ) -> Result<Self> {
        let spec = GridSpec {
            re_min,
            re_max,
            im_min,
            im_max,
            width,
            height,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Square grid `[−half, half]²`.
    pub fn square(half: f64, width: usize, height: usize) -> Result<Self> {
        GridSpec::new(-half, half, -half, half, width, height)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.re_min, self.re_max, self.im_min, self.im_max]
            .iter()
            .all(|x| x.is_finite());
        if !finite || !(self.re_min < self.re_max) || !(self.im_min < self.im_max) {
            return Err(Error::InvalidGrid(format!(
                "need finite re_min < re_max and im_min < im_max, got [{}, {}] × [{}, {}]",
                self.re_min, self.re_max, self.im_min, self.im_max
            )));
        }
        if self.width == 0 || self.height == 0 {
            return Err(Error::InvalidGrid(
                "width and height must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.width * self.height
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn pixel_center(&self, col: usize, row: usize) -> Complex64 {
        let dx = (self.re_max - self.re_min) / self.width as f64;
        let dy = (self.im_max - self.im_min) / self.height as f64;
        Complex64::new(
            self.re_min + (col as f64 + 0.5) * dx,
            self.im_max - (row as f64 + 0.5) * dy,
        )
    }
}

/// All pixel centres in row-major order, top row first.
pub fn grid_points(spec: &GridSpec) -> Vec<Complex64> {
    (0..spec.height)
        .flat_map(|row| (0..spec.width).map(move |col| spec.pixel_center(col, row)))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationRaster {
    spec: GridSpec,
    classes: Vec<PointClass>,
}

impl ClassificationRaster {
    pub fn new(spec: GridSpec, classes: Vec<PointClass>) -> Result<Self> {
        spec.validate()?;
        if classes.len() != spec.len() {
            return Err(Error::InvalidGrid(format!(
                "{} classes for a {}×{} grid",
                classes.len(),
                spec.width,
                spec.height
            )));
        }
        Ok(ClassificationRaster { spec, classes })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn classes(&self) -> &[PointClass] {
        &self.classes
    }

    pub fn get(&self, col: usize, row: usize) -> PointClass {
        self.classes[row * self.spec.width + col]
    }

    pub fn count(&self, class: PointClass) -> usize {
        self.classes.iter().filter(|&&c| c == class).count()
    }
}

/// Classifies every pixel centre under `f` on the current rayon pool.
pub fn classify_grid(
    f: &impl Evaluator,
    spec: &GridSpec,
    config: &ClassifierConfig,
) -> Result<ClassificationRaster> {
    spec.validate()?;
    config.validate()?;
    let points = grid_points(spec);
    let classes = points
        .par_iter()
        .with_min_len(spec.width)
        .map(|&z| classify_point(f, z, config))
        .collect();
    ClassificationRaster::new(*spec, classes)
}

/// [`classify_grid`] on a dedicated pool of `workers` threads.
///
/// Results are positional, so the raster does not depend on `workers`.
pub fn classify_grid_with_workers(
    f: &impl Evaluator,
    spec: &GridSpec,
    config: &ClassifierConfig,
    workers: usize,
) -> Result<ClassificationRaster> {
    if workers == 0 {
        return Err(Error::InvalidArgument(
            "worker count must be positive".into(),
        ));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot build worker pool: {e}")))?;
    pool.install(|| classify_grid(f, spec, config))
}

/// Comparison of the classes assigned to the same grid under `f` and `g`.
#[derive(Debug, Clone, PartialEq)]
pub struct AgreementReport {
    /// `confusion[i][j]` counts pixels with class `i` under `f` and `j` under
    /// `g`, in [`PointClass::ALL`] order.
    pub confusion: [[usize; 4]; 4],
    pub decided_agreement_rate: f64,
    pub undecided_fraction_f: f64,
    pub undecided_fraction_g: f64,
}

impl AgreementReport {
    pub fn total(&self) -> usize {
        self.confusion.iter().flatten().sum()
    }

    /// Pixels decided under both functions.
    pub fn decided_both(&self) -> usize {
        self.confusion[..3]
            .iter()
            .map(|row| row[..3].iter().sum::<usize>())
            .sum()
    }

    /// Pixels decided under both functions but classified differently.
    pub fn decided_disagreements(&self) -> usize {
        self.decided_both() - (0..3).map(|i| self.confusion[i][i]).sum::<usize>()
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Doc {
            classes: [&'static str; 4],
            confusion: [[usize; 4]; 4],
            total_pixels: usize,
            decided_both: usize,
            decided_agreement_rate: f64,
            undecided_fraction_f: f64,
            undecided_fraction_g: f64,
        }
        let doc = Doc {
            classes: PointClass::ALL.map(PointClass::name),
            confusion: self.confusion,
            total_pixels: self.total(),
            decided_both: self.decided_both(),
            decided_agreement_rate: round6(self.decided_agreement_rate),
            undecided_fraction_f: round6(self.undecided_fraction_f),
            undecided_fraction_g: round6(self.undecided_fraction_g),
        };
        serde_json::to_value(doc).expect("agreement report serializes")
    }
}

fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

pub fn compare_rasters(
    rf: &ClassificationRaster,
    rg: &ClassificationRaster,
) -> Result<AgreementReport> {
    if rf.spec != rg.spec {
        return Err(Error::GridMismatch(format!(
            "{:?} vs {:?}",
            rf.spec, rg.spec
        )));
    }
    let mut confusion = [[0usize; 4]; 4];
    for (cf, cg) in rf.classes.iter().zip(&rg.classes) {
        confusion[cf.index()][cg.index()] += 1;
    }
    let total = rf.classes.len() as f64;
    let undecided = PointClass::Undecided.index();
    let undecided_f: usize = confusion[undecided].iter().sum();
    let undecided_g: usize = confusion.iter().map(|row| row[undecided]).sum();

    let mut report = AgreementReport {
        confusion,
        decided_agreement_rate: 1.0,
        undecided_fraction_f: undecided_f as f64 / total,
        undecided_fraction_g: undecided_g as f64 / total,
    };
    let both = report.decided_both();
    if both > 0 {
        report.decided_agreement_rate =
            (both - report.decided_disagreements()) as f64 / both as f64;
    }
    Ok(report)
}

/// Binary per-pixel mask on a grid, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryMask {
    pub width: usize,
    pub height: usize,
    pub bits: Vec<bool>,
}

impl BoundaryMask {
    pub fn get(&self, col: usize, row: usize) -> bool {
        self.bits[row * self.width + col]
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.count() == 0
    }

    /// Sets every pixel within Chebyshev distance `radius` of a set pixel.
    pub fn dilate(&self, radius: usize) -> BoundaryMask {
        let mut bits = vec![false; self.bits.len()];
        for row in 0..self.height {
            for col in 0..self.width {
                if !self.get(col, row) {
                    continue;
                }
                let (r0, r1) = (
                    row.saturating_sub(radius),
                    (row + radius).min(self.height - 1),
                );
                let (c0, c1) = (
                    col.saturating_sub(radius),
                    (col + radius).min(self.width - 1),
                );
                for r in r0..=r1 {
                    for c in c0..=c1 {
                        bits[r * self.width + c] = true;
                    }
                }
            }
        }
        BoundaryMask {
            width: self.width,
            height: self.height,
            bits,
        }
    }

    /// `|A ∩ B| / |A ∪ B|`, defined as 1 for two empty masks.
    pub fn jaccard(&self, other: &BoundaryMask) -> Result<f64> {
        if (self.width, self.height) != (other.width, other.height) {
            return Err(Error::GridMismatch("mask sizes differ".into()));
        }
        let (mut inter, mut union) = (0usize, 0usize);
        for (&a, &b) in self.bits.iter().zip(&other.bits) {
            inter += (a && b) as usize;
            union += (a || b) as usize;
        }
        Ok(if union == 0 {
            1.0
        } else {
            inter as f64 / union as f64
        })
    }

    /// Black boundary on white, as binary PPM.
    pub fn to_ppm_bytes(&self) -> Vec<u8> {
        let mut out = ppm_header(self.width, self.height);
        for &b in &self.bits {
            let v = if b { 0 } else { 255 };
            out.extend_from_slice(&[v, v, v]);
        }
        out
    }
}

/// Approximates the Julia set as the boundary of the escaping class.
///
/// A pixel is set iff its closed 4-neighbourhood (itself plus the up to four
/// edge neighbours inside the grid) holds both an `Escaping` pixel and a
/// decided non-escaping one.
pub fn extract_boundary(raster: &ClassificationRaster) -> BoundaryMask {
    let (w, h) = (raster.spec.width, raster.spec.height);
    let mut bits = vec![false; w * h];
    for row in 0..h {
        for col in 0..w {
            let mut neighbours = [None; 5];
            neighbours[0] = Some((col, row));
            if col > 0 {
                neighbours[1] = Some((col - 1, row));
            }
            if col + 1 < w {
                neighbours[2] = Some((col + 1, row));
            }
            if row > 0 {
                neighbours[3] = Some((col, row - 1));
            }
            if row + 1 < h {
                neighbours[4] = Some((col, row + 1));
            }
            let (mut escaping, mut other) = (false, false);
            for (c, r) in neighbours.into_iter().flatten() {
                match raster.get(c, r) {
                    PointClass::Escaping => escaping = true,
                    PointClass::Undecided => {}
                    _ => other = true,
                }
            }
            bits[row * w + col] = escaping && other;
        }
    }
    BoundaryMask {
        width: w,
        height: h,
        bits,
    }
}

pub fn palette(class: PointClass) -> [u8; 3] {
    match class {
        PointClass::Escaping => [230, 57, 70],
        PointClass::Bounded => [29, 53, 87],
        PointClass::Bungee => [244, 211, 94],
        PointClass::Undecided => [168, 168, 168],
    }
}

fn ppm_header(width: usize, height: usize) -> Vec<u8> {
    format!("P6\n{width} {height}\n255\n").into_bytes()
}

/// Binary P6 encoding of a raster with the fixed class palette.
pub fn encode_ppm(raster: &ClassificationRaster) -> Vec<u8> {
    let mut out = ppm_header(raster.spec.width, raster.spec.height);
    out.reserve(raster.classes.len() * 3);
    for &class in &raster.classes {
        out.extend_from_slice(&palette(class));
    }
    out
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_ppm(raster: &ClassificationRaster, path: &Path) -> Result<()> {
    write_bytes(path, &encode_ppm(raster))
}

pub fn write_mask_ppm(mask: &BoundaryMask, path: &Path) -> Result<()> {
    write_bytes(path, &mask.to_ppm_bytes())
}

pub fn write_report_json(report: &AgreementReport, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(&report.to_json())?;
    text.push('\n');
    write_bytes(path, text.as_bytes())
}
