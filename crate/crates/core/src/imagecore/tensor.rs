//! Gradient covariance (structure tensor) per block and the direction field
//! derived from it.

use std::f64::consts::{FRAC_PI_2, PI};

use super::grid::BlockGrid;
use super::image::GrayImage;
use crate::error::{Error, Result};

/// Reduces an angle to the orientation class `[0, π)`.
pub fn wrap_orientation(angle: f64) -> f64 {
    let a = angle.rem_euclid(PI);
    // rem_euclid can return PI itself for inputs a hair below a multiple of PI.
    if a >= PI {
        0.0
    } else {
        a
    }
}

/// Acute difference between two orientations, in `[0, π/2]`.
pub fn orientation_difference(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(PI);
    d.min(PI - d).clamp(0.0, FRAC_PI_2)
}

const BORDER: usize = 2;

/// Fourth-order central-difference gradients, stencil `(1, −8, 0, 8, −1)/12`.
/// The two-pixel border, where the stencil would leave the image, carries
/// no gradient and is skipped by the block sums.
#[derive(Clone, Debug)]
pub struct Gradients {
    width: usize,
    height: usize,
    gx: Vec<f64>,
    gy: Vec<f64>,
}

impl Gradients {
    pub fn compute(img: &GrayImage) -> Self {
        let (w, h) = (img.width(), img.height());
        let px = |x: usize, y: usize| f64::from(img.get(x, y));
        let mut gx = vec![0.0; w * h];
        let mut gy = vec![0.0; w * h];
        let d = |m2: f64, m1: f64, p1: f64, p2: f64| (m2 - 8.0 * m1 + 8.0 * p1 - p2) / 12.0;
        for y in BORDER..h.saturating_sub(BORDER) {
            for x in BORDER..w.saturating_sub(BORDER) {
                let i = y * w + x;
                gx[i] = d(px(x - 2, y), px(x - 1, y), px(x + 1, y), px(x + 2, y));
                gy[i] = d(px(x, y - 2), px(x, y - 1), px(x, y + 1), px(x, y + 2));
            }
        }
        Self { width: w, height: h, gx, gy }
    }

    #[inline]
    pub fn at(&self, x: usize, y: usize) -> (f64, f64) {
        let i = y * self.width + x;
        (self.gx[i], self.gy[i])
    }

    /// Sums of gx², gy² and gx·gy over the interior pixels of one block.
    pub fn block_tensor(&self, grid: &BlockGrid, index: usize) -> StructureTensor {
        let (x0, y0) = grid.origin(index);
        let bs = grid.block_size();
        let xs = x0.max(BORDER)..(x0 + bs).min(self.width - BORDER);
        let ys = y0.max(BORDER)..(y0 + bs).min(self.height - BORDER);
        let mut t = StructureTensor::default();
        for y in ys {
            for x in xs.clone() {
                let (gx, gy) = self.at(x, y);
                t.gxx += gx * gx;
                t.gyy += gy * gy;
                t.gxy += gx * gy;
            }
        }
        t
    }
}

/// 2×2 gradient covariance of a block.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct StructureTensor {
    pub gxx: f64,
    pub gyy: f64,
    pub gxy: f64,
}

impl StructureTensor {
    /// `(λmax, λmin)`, both non-negative.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let trace = self.gxx + self.gyy;
        let disc = self.discriminant();
        let max = 0.5 * (trace + disc);
        let min = (0.5 * (trace - disc)).max(0.0);
        (max, min)
    }

    fn discriminant(&self) -> f64 {
        (self.gxx - self.gyy).hypot(2.0 * self.gxy)
    }

    /// Dominant ridge orientation in `[0, π)`: perpendicular to the dominant gradient.
    pub fn ridge_angle(&self) -> f64 {
        let gradient = 0.5 * (2.0 * self.gxy).atan2(self.gxx - self.gyy);
        wrap_orientation(gradient + FRAC_PI_2)
    }

    /// `(λmax − λmin) / (λmax + λmin)`, 0 for a zero tensor.
    pub fn coherence(&self) -> f64 {
        let trace = self.gxx + self.gyy;
        if trace <= 0.0 {
            return 0.0;
        }
        (self.discriminant() / trace).clamp(0.0, 1.0)
    }

    /// `1 − λmin / λmax`, 0 when λmax is 0.
    pub fn orientation_certainty(&self) -> f64 {
        let (max, min) = self.eigenvalues();
        if max <= 0.0 {
            return 0.0;
        }
        (1.0 - min / max).clamp(0.0, 1.0)
    }
}

/// Per-block ridge orientation with its certainty and the underlying tensor.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectionField {
    grid: BlockGrid,
    angles: Vec<f64>,
    certainty: Vec<f64>,
    tensors: Vec<StructureTensor>,
}

impl DirectionField {
    /// Builds a field from explicit angles and certainties (ground truth or overrides).
    /// Tensors are left zero.
    pub fn from_parts(grid: BlockGrid, angles: Vec<f64>, certainty: Vec<f64>) -> Result<Self> {
        if angles.len() != grid.len() || certainty.len() != grid.len() {
            return Err(Error::InvalidParameter(
                "direction field arrays must match the grid".into(),
            ));
        }
        if certainty.iter().any(|c| !(0.0..=1.0).contains(c)) {
            return Err(Error::InvalidParameter("certainty must lie in [0, 1]".into()));
        }
        Ok(Self {
            grid,
            angles: angles.into_iter().map(wrap_orientation).collect(),
            certainty,
            tensors: vec![StructureTensor::default(); grid.len()],
        })
    }

    pub fn grid(&self) -> &BlockGrid {
        &self.grid
    }

    pub fn angle(&self, index: usize) -> f64 {
        self.angles[index]
    }

    pub fn certainty(&self, index: usize) -> f64 {
        self.certainty[index]
    }

    pub fn tensor(&self, index: usize) -> &StructureTensor {
        &self.tensors[index]
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }
}

/// Structure-tensor direction field over every block of the grid.
pub fn direction_field(img: &GrayImage, grid: &BlockGrid) -> DirectionField {
    let grads = Gradients::compute(img);
    direction_field_from_gradients(&grads, grid)
}

pub fn direction_field_from_gradients(grads: &Gradients, grid: &BlockGrid) -> DirectionField {
    let tensors: Vec<StructureTensor> = (0..grid.len()).map(|i| grads.block_tensor(grid, i)).collect();
    DirectionField {
        grid: *grid,
        angles: tensors.iter().map(StructureTensor::ridge_angle).collect(),
        certainty: tensors.iter().map(StructureTensor::coherence).collect(),
        tensors,
    }
}
