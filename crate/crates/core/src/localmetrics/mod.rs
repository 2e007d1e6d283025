//! Block-level quality measures. Each produces a [`BlockQualityMap`] and a
//! global score in `[0, 1]`.

mod clarity;
mod gabor;
mod geometry;
mod intensity;
mod map;
mod orientation;
mod profiles;
mod sinusoid;

pub use clarity::{clarity_overlap, local_clarity, CLARITY_BINS, CLARITY_DEAD_BAND};
pub use gabor::{gabor_quality, normalized_spread, GaborParams};
pub use geometry::{
    block_classification_sl, ridge_geometry, signature_geometry, BlockGeometry, RidgeGeometry, SlThresholds,
};
pub use intensity::{variance_contrast, IntensityMaps, MAX_GRAY_VARIANCE};
pub use map::{BlockLabel, BlockQualityMap, GlobalScore};
pub(crate) use map::EMPTY_FOREGROUND;
pub use orientation::{coherence_map, loq_map, ocl_map};
pub use profiles::{dominant_bin, power_spectrum, BlockSignatures};
pub use sinusoid::{is_sinusoidal, sinusoid_spectrum_check, SinusoidParams, MIN_SIGNATURE_CYCLES};
