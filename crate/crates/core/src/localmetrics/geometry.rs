//! Ridge frequency, thickness and ridge/valley ratio per block, and the
//! four-feature block labelling built on them.

use super::map::{BlockLabel, BlockQualityMap, GlobalScore, EMPTY_FOREGROUND};
use super::profiles::{dominant_bin, power_spectrum, BlockSignatures};
use crate::error::{Error, Result};
use crate::imagecore::{BlockGrid, RidgeSignature};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockGeometry {
    /// Cycles per pixel.
    pub frequency: f64,
    /// Mean dark-run length, pixels.
    pub thickness: f64,
    /// Mean dark-run length over mean light-run length.
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RidgeGeometry {
    grid: BlockGrid,
    foreground: Vec<bool>,
    blocks: Vec<Option<BlockGeometry>>,
}

impl RidgeGeometry {
    /// `blocks[i]` is `None` for background blocks and for foreground blocks
    /// whose geometry is undefined.
    pub fn from_parts(grid: BlockGrid, foreground: Vec<bool>, blocks: Vec<Option<BlockGeometry>>) -> Result<Self> {
        if foreground.len() != grid.len() || blocks.len() != grid.len() {
            return Err(Error::InvalidParameter("geometry arrays must match the grid".into()));
        }
        Ok(Self { grid, foreground, blocks })
    }

    pub fn grid(&self) -> &BlockGrid {
        &self.grid
    }

    pub fn block(&self, index: usize) -> Option<&BlockGeometry> {
        self.blocks[index].as_ref()
    }

    pub fn is_foreground(&self, index: usize) -> bool {
        self.foreground[index]
    }

    /// Foreground blocks whose geometry could not be measured.
    pub fn is_undefined(&self, index: usize) -> bool {
        self.foreground[index] && self.blocks[index].is_none()
    }

    pub fn defined(&self) -> impl Iterator<Item = &BlockGeometry> {
        self.blocks.iter().flatten()
    }
}

pub fn ridge_geometry(signatures: &BlockSignatures) -> RidgeGeometry {
    let grid = *signatures.grid();
    let blocks = (0..grid.len())
        .map(|i| signatures.get(i).and_then(signature_geometry))
        .collect();
    RidgeGeometry {
        grid,
        foreground: signatures.mask().flags().to_vec(),
        blocks,
    }
}

/// Geometry of one signature; `None` when it never crosses its mean.
pub fn signature_geometry(sig: &RidgeSignature) -> Option<BlockGeometry> {
    let samples = sig.samples();
    let n = samples.len();
    let (bin, _) = dominant_bin(&power_spectrum(samples, sig.window()))?;
    let mean = sig.mean();
    let d: Vec<f64> = samples.iter().map(|s| s - mean).collect();
    let dark = |v: f64| v < 0.0;

    // Sub-sample positions where the signature crosses its mean.
    let crossings: Vec<f64> = (0..n - 1)
        .filter(|&i| dark(d[i]) != dark(d[i + 1]))
        .map(|i| i as f64 + d[i] / (d[i] - d[i + 1]))
        .collect();
    if crossings.is_empty() {
        return None;
    }

    // Runs strictly between crossings; the truncated runs at either end are
    // only used when a class has no complete run.
    let mut ridge = Vec::new();
    let mut valley = Vec::new();
    for w in crossings.windows(2) {
        let inside = w[0].floor() as usize + 1;
        let bucket = if dark(d[inside]) { &mut ridge } else { &mut valley };
        bucket.push(w[1] - w[0]);
    }
    if ridge.is_empty() || valley.is_empty() {
        let first = crossings[0];
        let last = *crossings.last().expect("non-empty");
        for (len, sample) in [(first, d[0]), ((n - 1) as f64 - last, d[n - 1])] {
            if len > 0.0 {
                if dark(sample) { &mut ridge } else { &mut valley }.push(len);
            }
        }
    }
    if ridge.is_empty() || valley.is_empty() {
        return None;
    }
    let avg = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let thickness = avg(&ridge);
    let valley_width = avg(&valley);
    Some(BlockGeometry {
        frequency: bin as f64 / sig.window() as f64,
        thickness,
        ratio: thickness / valley_width,
    })
}

/// Valid ranges for the four block features.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlThresholds {
    pub min_ocl: f64,
    pub frequency: (f64, f64),
    pub thickness: (f64, f64),
    pub ratio: (f64, f64),
}

impl Default for SlThresholds {
    fn default() -> Self {
        Self {
            min_ocl: 0.5,
            frequency: (1.0 / 25.0, 1.0 / 3.0),
            thickness: (1.5, 15.0),
            ratio: (0.4, 2.5),
        }
    }
}

/// Labels foreground blocks good (all four features valid), undetermined
/// (one invalid) or bad (two or more); background is blank. Returns the
/// labelled map (good 1, undetermined ½, bad 0) and
/// `S_L = (good + ½·undetermined) / (good + undetermined + bad)`.
pub fn block_classification_sl(
    ocl: &BlockQualityMap,
    geometry: &RidgeGeometry,
    thresholds: &SlThresholds,
) -> Result<(BlockQualityMap, GlobalScore)> {
    let grid = *ocl.grid();
    if grid != *geometry.grid() {
        return Err(Error::InvalidParameter("OCL map and ridge geometry use different grids".into()));
    }
    let within = |v: f64, (lo, hi): (f64, f64)| v >= lo && v <= hi;
    let labels: Vec<BlockLabel> = (0..grid.len())
        .map(|i| {
            let Some(ocl_value) = ocl.value(i) else {
                return BlockLabel::Blank;
            };
            let ocl_fails = usize::from(ocl_value < thresholds.min_ocl);
            let geometry_fails = match geometry.block(i) {
                Some(g) => [
                    within(g.frequency, thresholds.frequency),
                    within(g.thickness, thresholds.thickness),
                    within(g.ratio, thresholds.ratio),
                ]
                .iter()
                .filter(|ok| !**ok)
                .count(),
                None => 3,
            };
            match ocl_fails + geometry_fails {
                0 => BlockLabel::Good,
                1 => BlockLabel::Undetermined,
                _ => BlockLabel::Bad,
            }
        })
        .collect();

    let values = labels
        .iter()
        .map(|l| match l {
            BlockLabel::Good => Some(1.0),
            BlockLabel::Undetermined => Some(0.5),
            BlockLabel::Bad => Some(0.0),
            BlockLabel::Blank => None,
        })
        .collect();
    let map = BlockQualityMap::new(grid, values)?.with_labels(labels)?;
    let score = GlobalScore::mean_of(map.defined(), EMPTY_FOREGROUND);
    Ok((map, score))
}
