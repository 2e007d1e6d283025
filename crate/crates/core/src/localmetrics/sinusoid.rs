use super::map::{BlockQualityMap, GlobalScore, EMPTY_FOREGROUND};
use super::profiles::{dominant_bin, power_spectrum, BlockSignatures};
use crate::error::{Error, Result};
use crate::imagecore::RidgeSignature;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SinusoidParams {
    /// Valid ridge band, cycles per pixel.
    pub band: (f64, f64),
    /// Minimum share of the non-DC signature energy held by the peak bin
    /// and its two neighbours.
    pub peak_ratio: f64,
}

impl Default for SinusoidParams {
    fn default() -> Self {
        Self {
            band: (1.0 / 25.0, 1.0 / 3.0),
            peak_ratio: 0.6,
        }
    }
}

/// A peak is only trusted when the retained samples span this many of its periods.
pub const MIN_SIGNATURE_CYCLES: f64 = 1.5;

impl SinusoidParams {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.band;
        if !(lo > 0.0 && lo < hi && hi <= 0.5) {
            return Err(Error::InvalidParameter(format!("ridge band [{lo}, {hi}] must satisfy 0 < fmin < fmax ≤ 0.5")));
        }
        if !(self.peak_ratio > 0.0 && self.peak_ratio <= 1.0) {
            return Err(Error::InvalidParameter("peak ratio must lie in (0, 1]".into()));
        }
        Ok(())
    }
}

/// Whether one signature looks like an in-band sinusoid. The spectrum is
/// zero-padded to the nominal window, so a trimmed signature spreads a tone
/// over the peak bin and its neighbours; the three together must hold
/// `peak_ratio` of the non-DC energy.
pub fn is_sinusoidal(sig: &RidgeSignature, params: &SinusoidParams) -> bool {
    let spec = power_spectrum(sig.samples(), sig.window());
    let total: f64 = spec[1..].iter().sum();
    let Some((k, _)) = dominant_bin(&spec) else {
        return false;
    };
    let lobe: f64 = spec[(k - 1).max(1)..=(k + 1).min(spec.len() - 1)].iter().sum();
    let f = k as f64 / sig.window() as f64;
    lobe >= params.peak_ratio * total
        && f >= params.band.0
        && f <= params.band.1
        && f * sig.len() as f64 >= MIN_SIGNATURE_CYCLES
}

/// Per-block pass (1) / fail (0) of [`is_sinusoidal`]. Foreground blocks
/// without a signature fail. The global score is the passing fraction of
/// the foreground.
pub fn sinusoid_spectrum_check(
    signatures: &BlockSignatures,
    params: &SinusoidParams,
) -> Result<(BlockQualityMap, GlobalScore)> {
    params.validate()?;
    let mask = signatures.mask();
    let grid = *mask.grid();
    let values = (0..grid.len())
        .map(|i| {
            mask.is_foreground(i).then(|| {
                let pass = signatures.get(i).is_some_and(|sig| is_sinusoidal(sig, params));
                if pass { 1.0 } else { 0.0 }
            })
        })
        .collect();
    let map = BlockQualityMap::new(grid, values)?;
    let score = GlobalScore::mean_of(map.defined(), EMPTY_FOREGROUND);
    Ok((map, score))
}
