use std::f64::consts::PI;

use super::map::{BlockQualityMap, GlobalScore, EMPTY_FOREGROUND};
use crate::error::{Error, Result};
use crate::imagecore::{GrayImage, SegmentationMask};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaborParams {
    /// Number of filter orientations `kπ/m`.
    pub directions: usize,
    /// Carrier frequency, cycles per pixel.
    pub frequency: f64,
    /// Gaussian envelope standard deviation, pixels.
    pub sigma: f64,
    /// A block is good when its normalised response spread exceeds this.
    pub threshold: f64,
}

impl Default for GaborParams {
    fn default() -> Self {
        Self {
            directions: 8,
            frequency: 0.1,
            sigma: 4.0,
            threshold: 0.4,
        }
    }
}

impl GaborParams {
    pub fn validate(&self) -> Result<()> {
        if self.directions < 4 {
            return Err(Error::InvalidParameter("Gabor bank needs at least 4 directions".into()));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidParameter("Gabor sigma must be positive".into()));
        }
        if !(self.frequency > 0.0 && self.frequency < 0.5) {
            return Err(Error::InvalidParameter("Gabor frequency must lie in (0, 0.5)".into()));
        }
        if !(0.0..=1.0).contains(&self.threshold) {
            return Err(Error::InvalidParameter("Gabor threshold must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

/// Complex zero-DC Gabor kernel on a `(2r+1)²` support.
struct Kernel {
    radius: isize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl Kernel {
    fn new(theta: f64, params: &GaborParams) -> Self {
        let radius = (3.0 * params.sigma).ceil() as isize;
        let (c, s) = (theta.cos(), theta.sin());
        let mut gauss = Vec::new();
        let mut re = Vec::new();
        let mut im = Vec::new();
        for dy in -radius..=radius {
            for dx in -radius..=radius {
                let (x, y) = (dx as f64, dy as f64);
                let g = (-(x * x + y * y) / (2.0 * params.sigma * params.sigma)).exp();
                let phase = 2.0 * PI * params.frequency * (x * c + y * s);
                gauss.push(g);
                re.push(g * phase.cos());
                im.push(g * phase.sin());
            }
        }
        // Remove the DC response of the even part so flat regions give zero.
        let dc = re.iter().sum::<f64>() / gauss.iter().sum::<f64>();
        for (r, g) in re.iter_mut().zip(&gauss) {
            *r -= dc * g;
        }
        Self { radius, re, im }
    }

    fn magnitude_at(&self, img: &GrayImage, cx: isize, cy: isize) -> f64 {
        let (w, h) = (img.width() as isize, img.height() as isize);
        let (mut sr, mut si) = (0.0, 0.0);
        let mut k = 0;
        for dy in -self.radius..=self.radius {
            let y = (cy + dy).clamp(0, h - 1) as usize;
            for dx in -self.radius..=self.radius {
                let x = (cx + dx).clamp(0, w - 1) as usize;
                let p = f64::from(img.get(x, y));
                sr += p * self.re[k];
                si += p * self.im[k];
                k += 1;
            }
        }
        sr.hypot(si)
    }
}

/// Spread of the `m` response magnitudes as `s/(1+s)`, `s` = coefficient of variation.
pub fn normalized_spread(magnitudes: &[f64]) -> f64 {
    let n = magnitudes.len() as f64;
    let mean = magnitudes.iter().sum::<f64>() / n;
    if mean <= 0.0 {
        return 0.0;
    }
    let sd = (magnitudes.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / n).sqrt();
    let s = sd / mean;
    s / (1.0 + s)
}

/// Gabor quality index: map of normalised response spread per foreground
/// block, and `QI` = fraction of foreground blocks whose spread exceeds the
/// threshold.
pub fn gabor_quality(
    img: &GrayImage,
    mask: &SegmentationMask,
    params: &GaborParams,
) -> Result<(BlockQualityMap, GlobalScore)> {
    params.validate()?;
    let grid = *mask.grid();
    let bank: Vec<Kernel> = (0..params.directions)
        .map(|k| Kernel::new(k as f64 * PI / params.directions as f64, params))
        .collect();
    let values: Vec<Option<f64>> = (0..grid.len())
        .map(|i| {
            mask.is_foreground(i).then(|| {
                let (cx, cy) = grid.center_pixel(i);
                let mags: Vec<f64> = bank
                    .iter()
                    .map(|k| k.magnitude_at(img, cx as isize, cy as isize))
                    .collect();
                normalized_spread(&mags)
            })
        })
        .collect();
    let map = BlockQualityMap::new(grid, values)?;
    let total = map.defined().count();
    let score = if total == 0 {
        GlobalScore::undefined(EMPTY_FOREGROUND)
    } else {
        let good = map.defined().filter(|&v| v > params.threshold).count();
        GlobalScore::defined(good as f64 / total as f64)
    };
    Ok((map, score))
}
