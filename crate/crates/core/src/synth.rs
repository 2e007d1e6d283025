//! Synthetic fixtures with known ground truth: sinusoidal gratings,
//! concentric whorls, parametric degradations and score sets.
//!
//! All randomness comes from ChaCha8 seeded with a `u64`, so fixtures are
//! reproducible by any ChaCha8 implementation given the same seed.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::evaluation::{ScoreKind, ScoreRecord, ScoreSet};
use crate::imagecore::{
    block_size_for_dpi, wrap_orientation, BlockGrid, DirectionField, GrayImage,
};

/// Name of the generator recorded in fixture metadata.
pub const RNG_ALGORITHM: &str = "chacha8";

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check_period(width: usize, height: usize, period: f64) -> Result<()> {
    let max = width.min(height) as f64 / 2.0;
    if !(3.0..=max).contains(&period) {
        return Err(Error::InvalidParameter(format!(
            "period {period} outside [3, {max}]"
        )));
    }
    Ok(())
}

fn check_contrast(contrast: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&contrast) {
        return Err(Error::InvalidParameter(format!("contrast {contrast} outside [0, 1]")));
    }
    Ok(())
}

/// Planar sinusoid whose ridges run at `angle` (radians, image coordinates
/// with y pointing down). `period` is in pixels across the ridges.
pub fn generate_grating(
    width: usize,
    height: usize,
    angle: f64,
    period: f64,
    contrast: f64,
) -> Result<GrayImage> {
    check_period(width, height, period)?;
    check_contrast(contrast)?;
    let normal = angle + FRAC_PI_2;
    let (c, s) = (normal.cos(), normal.sin());
    let k = 2.0 * PI / period;
    Ok(GrayImage::from_fn(width, height, |x, y| {
        let phase = k * (x as f64 * c + y as f64 * s);
        crate::imagecore::quantize(128.0 + 127.0 * contrast * phase.cos())
    }))
}

/// Center of the concentric pattern.
pub fn whorl_center(width: usize, height: usize) -> (f64, f64) {
    ((width as f64 - 1.0) / 2.0, (height as f64 - 1.0) / 2.0)
}

/// Concentric rings around the image center, plus the analytic tangent
/// field sampled at each block center (block size from the default 500 dpi).
pub fn generate_whorl(
    width: usize,
    height: usize,
    period: f64,
    contrast: f64,
) -> Result<(GrayImage, DirectionField)> {
    check_period(width, height, period)?;
    check_contrast(contrast)?;
    let (cx, cy) = whorl_center(width, height);
    let k = 2.0 * PI / period;
    let img = GrayImage::from_fn(width, height, |x, y| {
        let r = (x as f64 - cx).hypot(y as f64 - cy);
        crate::imagecore::quantize(128.0 + 127.0 * contrast * (k * r).cos())
    });
    let grid = BlockGrid::for_image(&img, block_size_for_dpi(img.dpi()))?;
    let (angles, certainty) = (0..grid.len())
        .map(|i| {
            let (bx, by) = grid.center(i);
            let (dx, dy) = (bx - cx, by - cy);
            if dx == 0.0 && dy == 0.0 {
                (0.0, 0.0)
            } else {
                (wrap_orientation(dy.atan2(dx) + FRAC_PI_2), 1.0)
            }
        })
        .unzip();
    let truth = DirectionField::from_parts(grid, angles, certainty)?;
    Ok((img, truth))
}

/// Size and ridge period of the reference whorl used by tests and the
/// acceptance suite.
pub const REFERENCE_WHORL_WIDTH: usize = 400;
pub const REFERENCE_WHORL_HEIGHT: usize = 560;
pub const REFERENCE_WHORL_PERIOD: f64 = 10.0;

pub fn reference_whorl() -> (GrayImage, DirectionField) {
    generate_whorl(
        REFERENCE_WHORL_WIDTH,
        REFERENCE_WHORL_HEIGHT,
        REFERENCE_WHORL_PERIOD,
        1.0,
    )
    .expect("reference whorl parameters are valid")
}

/// Degradations applied by [`degrade`], in this order: contrast scaling
/// about mid-gray, box blur, additive Gaussian noise, block occlusion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DegradationSpec {
    /// Standard deviation of additive noise, gray levels.
    pub noise_sigma: f64,
    /// Box-blur radius; the kernel is `2r+1` pixels wide.
    pub blur_radius: usize,
    /// Multiplier on deviations from 128, in `[0, 1]`.
    pub contrast_scale: f64,
    /// Fraction of blocks replaced by the image mean gray.
    pub occlusion_fraction: f64,
}

impl DegradationSpec {
    pub fn identity() -> Self {
        Self {
            noise_sigma: 0.0,
            blur_radius: 0,
            contrast_scale: 1.0,
            occlusion_fraction: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.noise_sigma.is_finite() && self.noise_sigma >= 0.0) {
            return Err(Error::InvalidParameter("noise sigma must be >= 0".into()));
        }
        if !(0.0..=1.0).contains(&self.contrast_scale) {
            return Err(Error::InvalidParameter("contrast scale must lie in [0, 1]".into()));
        }
        if !(0.0..=1.0).contains(&self.occlusion_fraction) {
            return Err(Error::InvalidParameter("occlusion fraction must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

impl Default for DegradationSpec {
    fn default() -> Self {
        Self::identity()
    }
}

pub fn degrade(img: &GrayImage, spec: &DegradationSpec, seed: u64) -> Result<GrayImage> {
    spec.validate()?;
    let (w, h) = (img.width(), img.height());
    let mut rng = rng_from_seed(seed);
    let mut buf = img.to_f64();

    if spec.contrast_scale != 1.0 {
        for v in &mut buf {
            *v = 128.0 + spec.contrast_scale * (*v - 128.0);
        }
    }
    if spec.blur_radius > 0 {
        buf = box_blur(&buf, w, h, spec.blur_radius);
    }
    if spec.noise_sigma > 0.0 {
        let normal = Normal::new(0.0, spec.noise_sigma).expect("sigma validated");
        for v in &mut buf {
            *v = (*v + normal.sample(&mut rng)).clamp(0.0, 255.0);
        }
    }
    if spec.occlusion_fraction > 0.0 {
        let grid = BlockGrid::new(w, h, block_size_for_dpi(img.dpi()))?;
        let mean = buf.iter().sum::<f64>() / buf.len() as f64;
        let count = (spec.occlusion_fraction * grid.len() as f64).round() as usize;
        let mut blocks: Vec<usize> = (0..grid.len()).collect();
        blocks.shuffle(&mut rng);
        let bs = grid.block_size();
        for &b in &blocks[..count] {
            let (x0, y0) = grid.origin(b);
            for y in y0..y0 + bs {
                buf[y * w + x0..y * w + x0 + bs].fill(mean);
            }
        }
    }
    GrayImage::from_f64(w, h, &buf)?.with_dpi(img.dpi())
}

/// Separable moving average with edge replication.
fn box_blur(src: &[f64], w: usize, h: usize, radius: usize) -> Vec<f64> {
    let r = radius as isize;
    let norm = (2 * radius + 1) as f64;
    let mut tmp = vec![0.0; w * h];
    for y in 0..h {
        let row = &src[y * w..(y + 1) * w];
        for x in 0..w as isize {
            let s: f64 = (-r..=r)
                .map(|d| row[(x + d).clamp(0, w as isize - 1) as usize])
                .sum();
            tmp[y * w + x as usize] = s / norm;
        }
    }
    let mut out = vec![0.0; w * h];
    for y in 0..h as isize {
        for x in 0..w {
            let s: f64 = (-r..=r)
                .map(|d| tmp[(y + d).clamp(0, h as isize - 1) as usize * w + x])
                .sum();
            out[y as usize * w + x] = s / norm;
        }
    }
    out
}

/// Parameters of a synthetic verification experiment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SyntheticScoreSpec {
    pub n_genuine: usize,
    pub n_impostor: usize,
    pub genuine_mean: f64,
    pub genuine_sd: f64,
    pub impostor_mean: f64,
    pub impostor_sd: f64,
    /// Slope of the genuine mean against paired quality.
    pub coupling: f64,
    pub seed: u64,
}

impl Default for SyntheticScoreSpec {
    fn default() -> Self {
        Self {
            n_genuine: 10_000,
            n_impostor: 10_000,
            genuine_mean: 3.0,
            genuine_sd: 1.0,
            impostor_mean: 0.0,
            impostor_sd: 1.0,
            coupling: 4.0,
            seed: 0,
        }
    }
}

/// Genuine records: `q ~ U[0,1]`, score `~ N(μg + coupling·(q − 0.5), σg)`.
/// Impostor records: independent `q ~ U[0,1]`, score `~ N(μi, σi)`.
/// Both enrolment and test qualities are set to `q`, so the paired quality is `q`.
pub fn generate_score_set(spec: &SyntheticScoreSpec) -> Result<ScoreSet> {
    if spec.n_genuine == 0 || spec.n_impostor == 0 {
        return Err(Error::InvalidParameter("score counts must be at least 1".into()));
    }
    let genuine_noise = Normal::new(0.0, spec.genuine_sd)
        .map_err(|e| Error::InvalidParameter(format!("genuine sd: {e}")))?;
    let impostor_dist = Normal::new(spec.impostor_mean, spec.impostor_sd)
        .map_err(|e| Error::InvalidParameter(format!("impostor sd: {e}")))?;
    let mut rng = rng_from_seed(spec.seed);
    let mut records = Vec::with_capacity(spec.n_genuine + spec.n_impostor);
    for _ in 0..spec.n_genuine {
        let q: f64 = rng.random();
        let score = spec.genuine_mean + spec.coupling * (q - 0.5) + genuine_noise.sample(&mut rng);
        records.push(ScoreRecord::new(ScoreKind::Genuine, score, q, q));
    }
    for _ in 0..spec.n_impostor {
        let q: f64 = rng.random();
        let score = impostor_dist.sample(&mut rng);
        records.push(ScoreRecord::new(ScoreKind::Impostor, score, q, q));
    }
    ScoreSet::new("synthetic", Vec::new(), records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluation::pearson_correlation;
    use crate::imagecore::{segment_foreground, DEFAULT_VARIANCE_THRESHOLD};
    use rustfft::{num_complex::Complex, FftPlanner};

    #[test]
    fn zero_contrast_grating_is_flat() {
        let img = generate_grating(64, 64, 0.7, 8.0, 0.0).unwrap();
        assert!(img.pixels().iter().all(|&p| p == 128));
    }

    #[test]
    fn horizontal_ridges_vary_only_down_the_image() {
        // Ridge angle 0 means ridges run along x, so every row is constant.
        let img = generate_grating(64, 64, 0.0, 8.0, 1.0).unwrap();
        for y in 0..64 {
            assert!((0..64).all(|x| img.get(x, y) == img.get(0, y)));
        }
        assert_ne!(img.get(0, 0), img.get(0, 4));
    }

    #[test]
    fn period_out_of_range_is_rejected() {
        assert!(generate_grating(64, 64, 0.0, 2.5, 1.0).is_err());
        assert!(generate_grating(64, 64, 0.0, 33.0, 1.0).is_err());
        assert!(generate_whorl(64, 64, 40.0, 1.0).is_err());
    }

    #[test]
    fn grating_block_spectrum_peaks_at_one_eighth() {
        let img = generate_grating(128, 128, 0.0, 8.0, 1.0).unwrap();
        // 2-D FFT of a 16x16 block; dominant bin must be |k|/16 = 1/8 (±1 bin).
        let mut buf: Vec<Complex<f64>> = Vec::new();
        for y in 32..48 {
            for x in 32..48 {
                buf.push(Complex::new(f64::from(img.get(x, y)) - 128.0, 0.0));
            }
        }
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(16);
        for row in buf.chunks_mut(16) {
            fft.process(row);
        }
        let mut cols = vec![Complex::new(0.0, 0.0); 16];
        for x in 0..16 {
            for y in 0..16 {
                cols[y] = buf[y * 16 + x];
            }
            fft.process(&mut cols);
            for y in 0..16 {
                buf[y * 16 + x] = cols[y];
            }
        }
        let (best, _) = buf
            .iter()
            .enumerate()
            .skip(1)
            .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
            .unwrap();
        let (kx, ky) = ((best % 16) as f64, (best / 16) as f64);
        let fold = |k: f64| if k > 8.0 { 16.0 - k } else { k };
        let f = fold(kx).hypot(fold(ky)) / 16.0;
        assert!((f - 0.125).abs() <= 1.0 / 16.0, "f = {f}");
    }

    #[test]
    fn whorl_ground_truth_east_of_center_is_vertical() {
        // 176 px: the center (87.5, 87.5) coincides with the center of block (5, 5).
        let (_, truth) = generate_whorl(176, 176, 8.0, 1.0).unwrap();
        let grid = *truth.grid();
        let east = grid.index(8, 5);
        assert_eq!(grid.center(east), (135.5, 87.5));
        assert!((truth.angle(east) - FRAC_PI_2).abs() < 1e-12);
        let south = grid.index(5, 9);
        assert!(truth.angle(south).abs() < 1e-12);
        assert_eq!(truth.certainty(grid.index(5, 5)), 0.0);
    }

    #[test]
    fn zero_contrast_whorl_is_background() {
        let (img, _) = generate_whorl(96, 96, 8.0, 0.0).unwrap();
        let grid = BlockGrid::for_image(&img, 16).unwrap();
        assert_eq!(segment_foreground(&img, &grid, DEFAULT_VARIANCE_THRESHOLD).foreground_count(), 0);
    }

    #[test]
    fn identity_degradation_is_bit_identical() {
        let (img, _) = generate_whorl(96, 96, 8.0, 0.8).unwrap();
        assert_eq!(degrade(&img, &DegradationSpec::identity(), 99).unwrap(), img);
    }

    #[test]
    fn full_occlusion_blanks_every_block() {
        let (img, _) = generate_whorl(96, 96, 8.0, 1.0).unwrap();
        let spec = DegradationSpec {
            occlusion_fraction: 1.0,
            ..DegradationSpec::identity()
        };
        let out = degrade(&img, &spec, 1).unwrap();
        let grid = BlockGrid::for_image(&out, 16).unwrap();
        assert_eq!(segment_foreground(&out, &grid, DEFAULT_VARIANCE_THRESHOLD).foreground_count(), 0);
    }

    #[test]
    fn degradation_is_seeded() {
        let (img, _) = generate_whorl(64, 64, 8.0, 1.0).unwrap();
        let spec = DegradationSpec {
            noise_sigma: 20.0,
            blur_radius: 1,
            contrast_scale: 0.7,
            occlusion_fraction: 0.25,
        };
        assert_eq!(degrade(&img, &spec, 5).unwrap(), degrade(&img, &spec, 5).unwrap());
        assert_ne!(degrade(&img, &spec, 5).unwrap(), degrade(&img, &spec, 6).unwrap());
    }

    #[test]
    fn invalid_degradation_is_rejected() {
        let img = GrayImage::filled(32, 32, 0);
        let bad = DegradationSpec {
            contrast_scale: 1.5,
            ..DegradationSpec::identity()
        };
        assert!(degrade(&img, &bad, 0).is_err());
    }

    fn genuine_corr(coupling: f64) -> f64 {
        let set = generate_score_set(&SyntheticScoreSpec {
            coupling,
            seed: 17,
            ..SyntheticScoreSpec::default()
        })
        .unwrap();
        let (q, s): (Vec<f64>, Vec<f64>) = set
            .records()
            .iter()
            .filter(|r| r.kind == ScoreKind::Genuine)
            .map(|r| (r.q_enrol, r.score))
            .unzip();
        pearson_correlation(&q, &s).unwrap()
    }

    #[test]
    fn uncoupled_scores_are_uncorrelated_with_quality() {
        assert!(genuine_corr(0.0).abs() <= 0.05);
    }

    #[test]
    fn coupled_scores_correlate_with_quality() {
        assert!(genuine_corr(4.0) > 0.5);
    }

    #[test]
    fn score_sets_are_seeded_and_in_range() {
        let spec = SyntheticScoreSpec {
            n_genuine: 300,
            n_impostor: 500,
            seed: 3,
            ..SyntheticScoreSpec::default()
        };
        let a = generate_score_set(&spec).unwrap();
        assert_eq!(a, generate_score_set(&spec).unwrap());
        assert_eq!(a.records().len(), 800);
        assert!(a
            .records()
            .iter()
            .all(|r| (0.0..=1.0).contains(&r.q_enrol) && r.score.is_finite()));
        assert!(generate_score_set(&SyntheticScoreSpec { n_genuine: 0, ..spec }).is_err());
    }
}
