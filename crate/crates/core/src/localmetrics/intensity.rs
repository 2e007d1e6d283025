use super::map::{BlockQualityMap, GlobalScore};
use super::profiles::BlockSignatures;
use crate::imagecore::{block_variance, GrayImage, SegmentationMask};

/// Largest population variance of 8-bit data: half the pixels 0, half 255.
pub const MAX_GRAY_VARIANCE: f64 = 127.5 * 127.5;

#[derive(Clone, Debug, PartialEq)]
pub struct IntensityMaps {
    pub variance: BlockQualityMap,
    pub variance_score: GlobalScore,
    pub contrast: BlockQualityMap,
    pub contrast_score: GlobalScore,
}

/// Block gray-level variance over `127.5²` and ridge-signature
/// peak-to-peak amplitude over 255. Blocks without a signature are left
/// out of the contrast map.
pub fn variance_contrast(img: &GrayImage, mask: &SegmentationMask, signatures: &BlockSignatures) -> IntensityMaps {
    let grid = *mask.grid();
    let variance_values = (0..grid.len())
        .map(|i| {
            mask.is_foreground(i)
                .then(|| (block_variance(img, &grid, i) / MAX_GRAY_VARIANCE).clamp(0.0, 1.0))
        })
        .collect();
    let contrast_values = (0..grid.len())
        .map(|i| signatures.get(i).map(|s| (s.peak_to_peak() / 255.0).clamp(0.0, 1.0)))
        .collect();
    let variance = BlockQualityMap::new(grid, variance_values).expect("values clamped to [0, 1]");
    let contrast = BlockQualityMap::new(grid, contrast_values).expect("values clamped to [0, 1]");
    IntensityMaps {
        variance_score: variance.mean(),
        contrast_score: contrast.mean(),
        variance,
        contrast,
    }
}
