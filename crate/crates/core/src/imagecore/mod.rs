//! Image representation, block layout, segmentation, gradients, direction
//! field and ridge signatures shared by every metric.

mod grid;
mod image;
mod signature;
mod tensor;

pub use grid::{
    block_size_for_dpi, block_variance, segment_foreground, BlockGrid, SegmentationMask,
    DEFAULT_BLOCK_SIZE, DEFAULT_VARIANCE_THRESHOLD, MIN_BLOCK_SIZE,
};
pub use image::{decode_image, load_image, GrayImage, DEFAULT_DPI, MIN_SIDE};
pub(crate) use image::quantize;
pub use signature::{
    extract_ridge_signature, RidgeSignature, SignatureParams, DEFAULT_SIGNATURE_WIDTH,
    DEFAULT_SIGNATURE_WINDOW,
};
pub use tensor::{
    direction_field, direction_field_from_gradients, orientation_difference, wrap_orientation,
    DirectionField, Gradients, StructureTensor,
};
