//! Whole-image measures: direction-field continuity, ridge-ratio
//! uniformity and ring-band spectral energy concentration.

use std::f64::consts::PI;
use std::io::Write;

use rustfft::{num_complex::Complex, FftPlanner};

use crate::error::{Error, Result};
use crate::imagecore::{orientation_difference, DirectionField, GrayImage, SegmentationMask};
use crate::localmetrics::{GlobalScore, RidgeGeometry, EMPTY_FOREGROUND};

pub const DEFAULT_ABRUPT_ANGLE_DEGREES: f64 = 15.0;
pub const DEFAULT_ABRUPT_ANGLE: f64 = DEFAULT_ABRUPT_ANGLE_DEGREES * PI / 180.0;
pub const DEFAULT_RING_COUNT: usize = 15;
pub const MIN_GEOMETRY_BLOCKS: usize = 8;
pub const RATIO_SPREAD_SCALE: f64 = 0.5;

/// `1 − abrupt/total` over 4-adjacent foreground block pairs, where a pair
/// is abrupt when its acute orientation difference exceeds `abrupt`.
pub fn direction_continuity(field: &DirectionField, mask: &SegmentationMask, abrupt: f64) -> GlobalScore {
    let (total, jumps) = field
        .grid()
        .forward_pairs()
        .filter(|&(a, b)| mask.is_foreground(a) && mask.is_foreground(b))
        .fold((0usize, 0usize), |(t, j), (a, b)| {
            let d = orientation_difference(field.angle(a), field.angle(b));
            (t + 1, j + usize::from(d > abrupt))
        });
    if total == 0 {
        return GlobalScore::undefined("no adjacent foreground block pairs");
    }
    GlobalScore::defined(1.0 - jumps as f64 / total as f64)
}

/// `1 / (1 + s/0.5)` with `s` the population standard deviation of the
/// ridge-to-valley ratio over blocks with defined geometry.
pub fn frequency_uniformity(geometry: &RidgeGeometry) -> GlobalScore {
    let ratios: Vec<f64> = geometry.defined().map(|g| g.ratio).collect();
    if ratios.len() < MIN_GEOMETRY_BLOCKS {
        return GlobalScore::undefined(format!(
            "ridge geometry defined on {} blocks, need {MIN_GEOMETRY_BLOCKS}",
            ratios.len()
        ));
    }
    let n = ratios.len() as f64;
    let mean = ratios.iter().sum::<f64>() / n;
    let sd = (ratios.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / n).sqrt();
    GlobalScore::defined(1.0 / (1.0 + sd / RATIO_SPREAD_SCALE))
}

/// Ring-band energies of the spectral region of interest.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralBands {
    /// `[lo, hi)` radial limits of each ring, cycles per pixel; the last ring
    /// also includes `hi`.
    pub limits: Vec<(f64, f64)>,
    pub energies: Vec<f64>,
    /// Normalised energies; all zero when the region holds no energy.
    pub normalized: Vec<f64>,
}

impl SpectralBands {
    pub fn len(&self) -> usize {
        self.limits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.limits.is_empty()
    }

    pub fn total_energy(&self) -> f64 {
        self.energies.iter().sum()
    }

    /// `ring,center_frequency,p` rows.
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "ring,center_frequency,p")?;
        for (t, ((lo, hi), p)) in self.limits.iter().zip(&self.normalized).enumerate() {
            writeln!(out, "{t},{:.6},{:.6}", (lo + hi) / 2.0, p)?;
        }
        Ok(())
    }
}

/// Power spectrum of the mean-removed, Hann-windowed image, row-major
/// `width × height` with the DC term at index 0.
fn windowed_power_spectrum(img: &GrayImage) -> Vec<f64> {
    let (w, h) = (img.width(), img.height());
    let values = img.to_f64();
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let hann = |i: usize, n: usize| 0.5 - 0.5 * (2.0 * PI * i as f64 / (n - 1) as f64).cos();
    let wx: Vec<f64> = (0..w).map(|x| hann(x, w)).collect();
    let wy: Vec<f64> = (0..h).map(|y| hann(y, h)).collect();
    let mut buf: Vec<Complex<f64>> = values
        .iter()
        .enumerate()
        .map(|(k, &v)| Complex::new((v - mean) * wx[k % w] * wy[k / w], 0.0))
        .collect();

    let mut planner = FftPlanner::new();
    let row_fft = planner.plan_fft_forward(w);
    for row in buf.chunks_exact_mut(w) {
        row_fft.process(row);
    }
    let col_fft = planner.plan_fft_forward(h);
    let mut column = vec![Complex::new(0.0, 0.0); h];
    for x in 0..w {
        for y in 0..h {
            column[y] = buf[y * w + x];
        }
        col_fft.process(&mut column);
        for y in 0..h {
            buf[y * w + x] = column[y];
        }
    }
    buf.iter().map(|c| c.norm_sqr()).collect()
}

fn signed_frequency(k: usize, n: usize) -> f64 {
    if k <= n / 2 {
        k as f64 / n as f64
    } else {
        k as f64 / n as f64 - 1.0
    }
}

/// Energy in `rings` equal-width rings tiling the annulus `band` of the
/// windowed power spectrum.
pub fn spectral_bands(img: &GrayImage, rings: usize, band: (f64, f64)) -> Result<SpectralBands> {
    let (lo, hi) = band;
    if rings == 0 {
        return Err(Error::InvalidParameter("ring count must be at least 1".into()));
    }
    if !(lo >= 0.0 && lo < hi && hi.is_finite()) {
        return Err(Error::InvalidParameter(format!("spectral band [{lo}, {hi}] is empty")));
    }
    let step = (hi - lo) / rings as f64;
    let limits: Vec<(f64, f64)> = (0..rings)
        .map(|t| (lo + t as f64 * step, if t + 1 == rings { hi } else { lo + (t + 1) as f64 * step }))
        .collect();
    let power = windowed_power_spectrum(img);
    let (w, h) = (img.width(), img.height());
    let mut energies = vec![0.0; rings];
    for v in 0..h {
        let fv = signed_frequency(v, h);
        for u in 0..w {
            let r = signed_frequency(u, w).hypot(fv);
            if r < lo || r > hi {
                continue;
            }
            let t = (((r - lo) / step) as usize).min(rings - 1);
            energies[t] += power[v * w + u];
        }
    }
    let total: f64 = energies.iter().sum();
    let normalized = if total > 0.0 {
        energies.iter().map(|e| e / total).collect()
    } else {
        vec![0.0; rings]
    };
    Ok(SpectralBands { limits, energies, normalized })
}

/// `Q_F = 1 − H/ln T`, `H` the entropy of the normalised ring energies.
/// `T = 1` gives 1 whenever the region holds energy.
pub fn spectral_energy_concentration(
    img: &GrayImage,
    mask: &SegmentationMask,
    rings: usize,
    band: (f64, f64),
) -> Result<(GlobalScore, SpectralBands)> {
    let bands = spectral_bands(img, rings, band)?;
    if mask.foreground_count() == 0 {
        return Ok((GlobalScore::undefined(EMPTY_FOREGROUND), bands));
    }
    if bands.total_energy() <= 0.0 {
        return Ok((GlobalScore::undefined("no spectral energy in the ridge band"), bands));
    }
    if rings == 1 {
        return Ok((GlobalScore::defined(1.0), bands));
    }
    let entropy: f64 = bands
        .normalized
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln())
        .sum();
    Ok((GlobalScore::defined(1.0 - entropy / (rings as f64).ln()), bands))
}
