use super::image::{GrayImage, DEFAULT_DPI};
use crate::error::{Error, Result};

pub const DEFAULT_BLOCK_SIZE: usize = 16;
pub const MIN_BLOCK_SIZE: usize = 8;

/// Default segmentation threshold on block gray-level variance (intensity²).
pub const DEFAULT_VARIANCE_THRESHOLD: f64 = 100.0;

/// Block size for a resolution: 16 px at 500 dpi, scaled linearly, never below 8.
pub fn block_size_for_dpi(dpi: u32) -> usize {
    let scaled = (DEFAULT_BLOCK_SIZE as f64 * f64::from(dpi) / f64::from(DEFAULT_DPI)).round();
    (scaled as usize).max(MIN_BLOCK_SIZE)
}

/// Non-overlapping square blocks anchored at the top-left corner.
/// Trailing partial blocks on the right and bottom edges are discarded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockGrid {
    block_size: usize,
    cols: usize,
    rows: usize,
}

impl BlockGrid {
    pub fn new(width: usize, height: usize, block_size: usize) -> Result<Self> {
        if block_size == 0 {
            return Err(Error::InvalidParameter("block size must be positive".into()));
        }
        Ok(Self {
            block_size,
            cols: width / block_size,
            rows: height / block_size,
        })
    }

    pub fn for_image(img: &GrayImage, block_size: usize) -> Result<Self> {
        Self::new(img.width(), img.height(), block_size)
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn len(&self) -> usize {
        self.cols * self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, col: usize, row: usize) -> usize {
        row * self.cols + col
    }

    #[inline]
    pub fn position(&self, index: usize) -> (usize, usize) {
        (index % self.cols, index / self.cols)
    }

    /// Top-left pixel of a block.
    pub fn origin(&self, index: usize) -> (usize, usize) {
        let (col, row) = self.position(index);
        (col * self.block_size, row * self.block_size)
    }

    /// Geometric center of a block, `origin + (block_size − 1)/2`.
    pub fn center(&self, index: usize) -> (f64, f64) {
        let (x0, y0) = self.origin(index);
        let half = (self.block_size - 1) as f64 / 2.0;
        (x0 as f64 + half, y0 as f64 + half)
    }

    /// The pixel at offset `block_size / 2`, for operators evaluated on the
    /// pixel lattice.
    pub fn center_pixel(&self, index: usize) -> (usize, usize) {
        let (x0, y0) = self.origin(index);
        (x0 + self.block_size / 2, y0 + self.block_size / 2)
    }

    /// 4-connected neighbours (right and down only, so each pair is seen once).
    pub fn forward_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.len()).flat_map(move |i| {
            let (c, r) = self.position(i);
            let right = (c + 1 < self.cols).then(|| self.index(c + 1, r));
            let down = (r + 1 < self.rows).then(|| self.index(c, r + 1));
            right.into_iter().chain(down).map(move |j| (i, j))
        })
    }

    /// 8-connected neighbours of a block.
    pub fn neighbours8(&self, index: usize) -> impl Iterator<Item = usize> + '_ {
        let (c, r) = self.position(index);
        let (c, r) = (c as isize, r as isize);
        (-1isize..=1)
            .flat_map(move |dy| (-1isize..=1).map(move |dx| (dx, dy)))
            .filter(|&d| d != (0, 0))
            .filter_map(move |(dx, dy)| {
                let (nc, nr) = (c + dx, r + dy);
                (nc >= 0 && nr >= 0 && (nc as usize) < self.cols && (nr as usize) < self.rows)
                    .then(|| self.index(nc as usize, nr as usize))
            })
    }

    /// Pixel values of one block in row-major order.
    pub fn block_pixels<'a>(&self, img: &'a GrayImage, index: usize) -> impl Iterator<Item = u8> + 'a {
        let (x0, y0) = self.origin(index);
        let bs = self.block_size;
        (y0..y0 + bs).flat_map(move |y| (x0..x0 + bs).map(move |x| img.get(x, y)))
    }
}

/// Per-block foreground flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentationMask {
    grid: BlockGrid,
    foreground: Vec<bool>,
}

impl SegmentationMask {
    pub fn from_flags(grid: BlockGrid, foreground: Vec<bool>) -> Result<Self> {
        if foreground.len() != grid.len() {
            return Err(Error::InvalidParameter(format!(
                "mask has {} flags for a grid of {} blocks",
                foreground.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, foreground })
    }

    pub fn all_foreground(grid: BlockGrid) -> Self {
        Self {
            grid,
            foreground: vec![true; grid.len()],
        }
    }

    pub fn grid(&self) -> &BlockGrid {
        &self.grid
    }

    #[inline]
    pub fn is_foreground(&self, index: usize) -> bool {
        self.foreground[index]
    }

    pub fn foreground_count(&self) -> usize {
        self.foreground.iter().filter(|&&f| f).count()
    }

    pub fn foreground_blocks(&self) -> impl Iterator<Item = usize> + '_ {
        self.foreground
            .iter()
            .enumerate()
            .filter_map(|(i, &f)| f.then_some(i))
    }

    pub fn flags(&self) -> &[bool] {
        &self.foreground
    }
}

/// Population variance of a block's gray levels.
pub fn block_variance(img: &GrayImage, grid: &BlockGrid, index: usize) -> f64 {
    let n = (grid.block_size() * grid.block_size()) as f64;
    let mean = grid.block_pixels(img, index).map(f64::from).sum::<f64>() / n;
    grid.block_pixels(img, index)
        .map(|p| (f64::from(p) - mean).powi(2))
        .sum::<f64>()
        / n
}

/// A block is foreground iff its gray-level variance exceeds `variance_threshold`.
pub fn segment_foreground(img: &GrayImage, grid: &BlockGrid, variance_threshold: f64) -> SegmentationMask {
    let foreground = (0..grid.len())
        .map(|i| block_variance(img, grid, i) > variance_threshold)
        .collect();
    SegmentationMask {
        grid: *grid,
        foreground,
    }
}
