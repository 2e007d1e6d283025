use super::map::{BlockQualityMap, GlobalScore, EMPTY_FOREGROUND};
use super::profiles::BlockSignatures;
use crate::imagecore::RidgeSignature;

pub const CLARITY_BINS: usize = 32;

/// Rows whose signature sample lies within this fraction of the half
/// peak-to-peak amplitude of the mean sit on a ridge/valley boundary and are
/// assigned to neither region.
pub const CLARITY_DEAD_BAND: f64 = 0.05;

/// Overlap `α ∈ [0, 1]` of the ridge and valley gray-level distributions in
/// one oriented window. Window rows whose signature sample is below the
/// signature mean are ridge, the rest valley. `None` when one class is empty.
pub fn clarity_overlap(sig: &RidgeSignature) -> Option<f64> {
    let mean = sig.mean();
    let dead = CLARITY_DEAD_BAND * sig.peak_to_peak() / 2.0;
    let mut ridge = [0usize; CLARITY_BINS];
    let mut valley = [0usize; CLARITY_BINS];
    for (i, &s) in sig.samples().iter().enumerate() {
        if (s - mean).abs() <= dead {
            continue;
        }
        let hist = if s < mean { &mut ridge } else { &mut valley };
        for &v in sig.points_of(i) {
            let bin = ((v / 256.0 * CLARITY_BINS as f64) as usize).min(CLARITY_BINS - 1);
            hist[bin] += 1;
        }
    }
    let (nr, nv) = (ridge.iter().sum::<usize>(), valley.iter().sum::<usize>());
    if nr == 0 || nv == 0 {
        return None;
    }
    let alpha = ridge
        .iter()
        .zip(&valley)
        .map(|(&r, &v)| (r as f64 / nr as f64).min(v as f64 / nv as f64))
        .sum::<f64>();
    Some(alpha.clamp(0.0, 1.0))
}

/// Local clarity: block quality `1 − α`; GCS is the mean over blocks where
/// `α` is defined.
pub fn local_clarity(signatures: &BlockSignatures) -> (BlockQualityMap, GlobalScore) {
    let grid = *signatures.grid();
    let values = (0..grid.len())
        .map(|i| signatures.get(i).and_then(clarity_overlap).map(|a| 1.0 - a))
        .collect();
    let map = BlockQualityMap::new(grid, values).expect("overlap lies in [0, 1]");
    let score = if signatures.mask().foreground_count() == 0 {
        GlobalScore::undefined(EMPTY_FOREGROUND)
    } else {
        GlobalScore::mean_of(map.defined(), "no block separates into ridge and valley")
    };
    (map, score)
}
