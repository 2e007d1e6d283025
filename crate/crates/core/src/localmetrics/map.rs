use std::io::Write;

use crate::error::{Error, Result};
use crate::imagecore::{BlockGrid, GrayImage};

/// Global score of one metric. Undefined scores (empty foreground, no
/// usable blocks) are reported as 0 together with a warning.
#[derive(Clone, Debug, PartialEq)]
pub struct GlobalScore {
    pub value: f64,
    pub warning: Option<String>,
}

impl GlobalScore {
    pub fn defined(value: f64) -> Self {
        debug_assert!(value.is_finite());
        Self {
            value: value.clamp(0.0, 1.0),
            warning: None,
        }
    }

    pub fn undefined(reason: impl Into<String>) -> Self {
        Self {
            value: 0.0,
            warning: Some(reason.into()),
        }
    }

    /// Mean of the values, or the warning when there are none.
    pub fn mean_of(values: impl IntoIterator<Item = f64>, empty: &str) -> Self {
        let (sum, n) = values
            .into_iter()
            .fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
        if n == 0 {
            Self::undefined(empty)
        } else {
            Self::defined(sum / n as f64)
        }
    }
}

pub(crate) const EMPTY_FOREGROUND: &str = "empty foreground";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BlockLabel {
    Good,
    Undetermined,
    Bad,
    Blank,
}

impl BlockLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            BlockLabel::Good => "good",
            BlockLabel::Undetermined => "undetermined",
            BlockLabel::Bad => "bad",
            BlockLabel::Blank => "blank",
        }
    }
}

/// Per-block quality in `[0, 1]`; `None` marks background or excluded blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockQualityMap {
    grid: BlockGrid,
    values: Vec<Option<f64>>,
    labels: Option<Vec<BlockLabel>>,
}

impl BlockQualityMap {
    pub fn new(grid: BlockGrid, values: Vec<Option<f64>>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidParameter(format!(
                "map has {} values for {} blocks",
                values.len(),
                grid.len()
            )));
        }
        if let Some(v) = values.iter().flatten().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidParameter(format!("block quality {v} outside [0, 1]")));
        }
        Ok(Self {
            grid,
            values,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<BlockLabel>) -> Result<Self> {
        if labels.len() != self.grid.len() {
            return Err(Error::InvalidParameter("label count must match the grid".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn grid(&self) -> &BlockGrid {
        &self.grid
    }

    pub fn value(&self, index: usize) -> Option<f64> {
        self.values[index]
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    pub fn labels(&self) -> Option<&[BlockLabel]> {
        self.labels.as_deref()
    }

    pub fn defined(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().flatten().copied()
    }

    pub fn mean(&self) -> GlobalScore {
        GlobalScore::mean_of(self.defined(), EMPTY_FOREGROUND)
    }

    /// `rows` lines of `cols` comma-separated values; undefined blocks are empty cells.
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        for row in 0..self.grid.rows() {
            let line: Vec<String> = (0..self.grid.cols())
                .map(|col| {
                    self.values[self.grid.index(col, row)]
                        .map_or_else(String::new, |v| format!("{v:.6}"))
                })
                .collect();
            writeln!(out, "{}", line.join(","))?;
        }
        Ok(())
    }

    /// One pixel per block: `value × 255`, undefined blocks black.
    pub fn heatmap(&self) -> GrayImage {
        GrayImage::from_fn(self.grid.cols(), self.grid.rows(), |c, r| {
            self.values[self.grid.index(c, r)].map_or(0, |v| crate::imagecore::quantize(v * 255.0))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn out_of_range_values_are_rejected() {
        let grid = BlockGrid::new(32, 32, 16).unwrap();
        assert!(BlockQualityMap::new(grid, vec![Some(1.2), None, None, None]).is_err());
        assert!(BlockQualityMap::new(grid, vec![None; 3]).is_err());
    }

    #[test]
    fn csv_and_heatmap_layout() {
        let grid = BlockGrid::new(48, 32, 16).unwrap();
        let map = BlockQualityMap::new(grid, vec![Some(1.0), None, Some(0.5), Some(0.0), None, Some(0.25)]).unwrap();
        let mut out = Vec::new();
        map.write_csv(&mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "1.000000,,0.500000\n0.000000,,0.250000\n"
        );
        let heat = map.heatmap();
        assert_eq!(heat.pixels(), &[255, 0, 128, 0, 0, 64]);
        assert_eq!(map.mean(), GlobalScore::defined(0.4375));
    }

    #[test]
    fn empty_map_mean_is_a_warning() {
        let grid = BlockGrid::new(32, 32, 16).unwrap();
        let m = BlockQualityMap::new(grid, vec![None; 4]).unwrap().mean();
        assert_eq!(m.value, 0.0);
        assert_eq!(m.warning.as_deref(), Some(EMPTY_FOREGROUND));
    }
}
