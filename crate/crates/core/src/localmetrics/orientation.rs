//! Metrics read directly off the gradient covariance and the direction field.

use std::f64::consts::FRAC_PI_2;

use super::map::{BlockQualityMap, GlobalScore, EMPTY_FOREGROUND};
use crate::imagecore::{orientation_difference, DirectionField, SegmentationMask};

/// Orientation certainty level: `1 − λmin/λmax` per foreground block.
pub fn ocl_map(field: &DirectionField, mask: &SegmentationMask) -> (BlockQualityMap, GlobalScore) {
    per_block(field, mask, |i| field.tensor(i).orientation_certainty())
}

/// Gradient coherence `(λmax − λmin)/(λmax + λmin)` per foreground block.
pub fn coherence_map(field: &DirectionField, mask: &SegmentationMask) -> (BlockQualityMap, GlobalScore) {
    per_block(field, mask, |i| field.tensor(i).coherence())
}

fn per_block(
    field: &DirectionField,
    mask: &SegmentationMask,
    f: impl Fn(usize) -> f64,
) -> (BlockQualityMap, GlobalScore) {
    let grid = *field.grid();
    let values = (0..grid.len())
        .map(|i| mask.is_foreground(i).then(|| f(i)))
        .collect();
    let map = BlockQualityMap::new(grid, values).expect("eigenvalue ratios lie in [0, 1]");
    let score = map.mean();
    (map, score)
}

/// Local orientation quality: one minus the mean acute angle to the
/// foreground 8-neighbours, normalised by π/2. Blocks without foreground
/// neighbours get no value and are left out of the global score (GOQS).
pub fn loq_map(field: &DirectionField, mask: &SegmentationMask) -> (BlockQualityMap, GlobalScore) {
    let grid = *field.grid();
    let values = (0..grid.len())
        .map(|i| {
            if !mask.is_foreground(i) {
                return None;
            }
            let (sum, n) = grid
                .neighbours8(i)
                .filter(|&j| mask.is_foreground(j))
                .map(|j| orientation_difference(field.angle(i), field.angle(j)))
                .fold((0.0, 0usize), |(s, n), d| (s + d, n + 1));
            (n > 0).then(|| (1.0 - sum / n as f64 / FRAC_PI_2).clamp(0.0, 1.0))
        })
        .collect();
    let map = BlockQualityMap::new(grid, values).expect("normalised differences lie in [0, 1]");
    let score = if mask.foreground_count() == 0 {
        GlobalScore::undefined(EMPTY_FOREGROUND)
    } else {
        GlobalScore::mean_of(map.defined(), "no foreground block has a foreground neighbour")
    };
    (map, score)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imagecore::{direction_field, segment_foreground, BlockGrid, GrayImage};
    use crate::synth::{generate_grating, reference_whorl};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn analyse(img: &GrayImage) -> (DirectionField, SegmentationMask) {
        let grid = BlockGrid::for_image(img, 16).unwrap();
        (direction_field(img, &grid), segment_foreground(img, &grid, 100.0))
    }

    fn noise(seed: u64) -> GrayImage {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        GrayImage::from_fn(128, 128, |_, _| rng.random())
    }

    fn p99(mut v: Vec<f64>) -> f64 {
        v.sort_by(f64::total_cmp);
        v[(v.len() as f64 * 0.99).ceil() as usize - 1]
    }

    #[test]
    fn clean_grating_is_strongly_oriented() {
        let img = generate_grating(128, 128, 0.3, 8.0, 1.0).unwrap();
        let (field, mask) = analyse(&img);
        assert!(ocl_map(&field, &mask).1.value > 0.9);
        assert!(coherence_map(&field, &mask).1.value > 0.9);
    }

    #[test]
    fn white_noise_scores_low() {
        let (ocl, qs): (Vec<f64>, Vec<f64>) = (0..100)
            .map(|seed| {
                let (field, mask) = analyse(&noise(seed));
                (ocl_map(&field, &mask).1.value, coherence_map(&field, &mask).1.value)
            })
            .unzip();
        assert!(p99(ocl.clone()) < 0.3, "OCL p99 {}", p99(ocl));
        assert!(p99(qs.clone()) < 0.3, "Q_S p99 {}", p99(qs));
    }

    #[test]
    fn constant_image_is_empty_foreground() {
        let img = GrayImage::filled(64, 64, 200);
        let (field, mask) = analyse(&img);
        for (map, score) in [ocl_map(&field, &mask), coherence_map(&field, &mask), loq_map(&field, &mask)] {
            assert!(map.values().iter().all(Option::is_none));
            assert_eq!(score.value, 0.0);
            assert_eq!(score.warning.as_deref(), Some(EMPTY_FOREGROUND));
        }
        assert!((0..field.grid().len()).all(|i| field.tensor(i).coherence() == 0.0));
    }

    fn synthetic_field(angles: impl Fn(usize, usize) -> f64) -> (DirectionField, SegmentationMask) {
        let grid = BlockGrid::new(96, 96, 16).unwrap();
        let a = (0..grid.len())
            .map(|i| {
                let (c, r) = grid.position(i);
                angles(c, r)
            })
            .collect();
        let field = DirectionField::from_parts(grid, a, vec![1.0; grid.len()]).unwrap();
        (field, SegmentationMask::all_foreground(grid))
    }

    #[test]
    fn uniform_field_has_perfect_goqs() {
        let (field, mask) = synthetic_field(|_, _| 0.7);
        let (map, goqs) = loq_map(&field, &mask);
        assert!(map.defined().all(|v| v == 1.0));
        assert_eq!(goqs.value, 1.0);
    }

    #[test]
    fn checkerboard_field() {
        // In the 8-neighbourhood of a checkerboard the 4 edge neighbours differ by
        // π/2 and the 4 diagonal neighbours agree, so interior blocks score 1/2.
        let (field, mask) = synthetic_field(|c, r| if (c + r) % 2 == 0 { 0.0 } else { FRAC_PI_2 });
        let (map, goqs) = loq_map(&field, &mask);
        let grid = *field.grid();
        for r in 1..grid.rows() - 1 {
            for c in 1..grid.cols() - 1 {
                assert!((map.value(grid.index(c, r)).unwrap() - 0.5).abs() < 1e-12);
            }
        }
        // Corner: 2 of 3 neighbours differ.
        assert!((map.value(0).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert!(goqs.value < 0.5);
    }

    #[test]
    fn stripes_of_perpendicular_rows_score_lower_than_smooth() {
        let (field, mask) = synthetic_field(|_, r| if r % 2 == 0 { 0.0 } else { FRAC_PI_2 });
        let (_, striped) = loq_map(&field, &mask);
        let (smooth_field, smooth_mask) = synthetic_field(|c, r| 0.05 * (c + r) as f64);
        let (_, smooth) = loq_map(&smooth_field, &smooth_mask);
        assert!(striped.value < 0.5 && smooth.value > 0.95);
    }

    #[test]
    fn isolated_block_is_excluded() {
        let grid = BlockGrid::new(64, 64, 16).unwrap();
        let field = DirectionField::from_parts(grid, vec![0.0; 16], vec![1.0; 16]).unwrap();
        let mut flags = vec![false; 16];
        flags[0] = true;
        flags[10] = true;
        let mask = SegmentationMask::from_flags(grid, flags).unwrap();
        let (map, goqs) = loq_map(&field, &mask);
        assert!(map.values().iter().all(Option::is_none));
        assert_eq!(goqs.value, 0.0);
        assert!(goqs.warning.is_some());
    }

    #[test]
    fn whorl_orientation_field_is_smooth() {
        let (img, _) = reference_whorl();
        let (field, mask) = analyse(&img);
        let (_, goqs) = loq_map(&field, &mask);
        assert!(goqs.value >= 0.85, "GOQS {}", goqs.value);
    }
}
