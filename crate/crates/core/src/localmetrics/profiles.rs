//! Ridge signatures for every foreground block, extracted once and shared by
//! the signature-based metrics.

use rustfft::{num_complex::Complex, FftPlanner};

use crate::imagecore::{
    extract_ridge_signature, BlockGrid, DirectionField, GrayImage, RidgeSignature,
    SegmentationMask, SignatureParams,
};

#[derive(Clone, Debug)]
pub struct BlockSignatures {
    mask: SegmentationMask,
    signatures: Vec<Option<RidgeSignature>>,
}

impl BlockSignatures {
    /// Background blocks and blocks whose orientation is undefined get `None`.
    pub fn extract(
        img: &GrayImage,
        field: &DirectionField,
        mask: &SegmentationMask,
        params: SignatureParams,
    ) -> Self {
        let signatures = (0..field.grid().len())
            .map(|i| extract_ridge_signature(img, field, mask, i, params).ok())
            .collect();
        Self {
            mask: mask.clone(),
            signatures,
        }
    }

    pub fn grid(&self) -> &BlockGrid {
        self.mask.grid()
    }

    pub fn mask(&self) -> &SegmentationMask {
        &self.mask
    }

    pub fn get(&self, index: usize) -> Option<&RidgeSignature> {
        self.signatures[index].as_ref()
    }
}

/// One-sided power spectrum `|X_k|²`, `k = 0..=N/2`, of the mean-removed
/// samples zero-padded to `n` points, so bin `k` is `k/n` cycles per sample.
pub fn power_spectrum(samples: &[f64], n: usize) -> Vec<f64> {
    assert!(n >= samples.len() && !samples.is_empty());
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    let mut buf: Vec<Complex<f64>> = samples.iter().map(|&v| Complex::new(v - mean, 0.0)).collect();
    buf.resize(n, Complex::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    buf[..=n / 2].iter().map(|c| c.norm_sqr()).collect()
}

/// Strongest non-DC bin (lowest index on ties) with its power, or `None`
/// for a flat signal.
pub fn dominant_bin(spectrum: &[f64]) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (k, &p) in spectrum.iter().enumerate().skip(1) {
        if best.is_none_or(|(_, b)| p > b) {
            best = Some((k, p));
        }
    }
    // Tiny residue from float mean removal is not a spectral peak.
    best.filter(|&(_, p)| p > 1e-9)
}
