//! Per-image metric pipeline and the quality report it produces.

use std::cell::OnceCell;
use std::fmt;
use std::str::FromStr;

use crate::config::ToolConfig;
use crate::error::{Error, Result};
use crate::globalmetrics::{
    direction_continuity, frequency_uniformity, spectral_bands, spectral_energy_concentration, SpectralBands,
};
use crate::imagecore::{direction_field, segment_foreground, BlockGrid, DirectionField, GrayImage, SegmentationMask};
use crate::localmetrics::{
    block_classification_sl, coherence_map, gabor_quality, local_clarity, loq_map, ocl_map, ridge_geometry,
    sinusoid_spectrum_check, variance_contrast, BlockQualityMap, BlockSignatures, GlobalScore, IntensityMaps,
    RidgeGeometry,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    Ocl,
    Sl,
    Goqs,
    Qs,
    GaborQi,
    Variance,
    Contrast,
    Gcs,
    SinusoidPass,
    Continuity,
    FreqUniformity,
    Qf,
}

impl Metric {
    /// Canonical output order.
    pub const ALL: [Metric; 12] = [
        Metric::Ocl,
        Metric::Sl,
        Metric::Goqs,
        Metric::Qs,
        Metric::GaborQi,
        Metric::Variance,
        Metric::Contrast,
        Metric::Gcs,
        Metric::SinusoidPass,
        Metric::Continuity,
        Metric::FreqUniformity,
        Metric::Qf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Ocl => "ocl",
            Metric::Sl => "sl",
            Metric::Goqs => "goqs",
            Metric::Qs => "qs",
            Metric::GaborQi => "gabor_qi",
            Metric::Variance => "variance",
            Metric::Contrast => "contrast",
            Metric::Gcs => "gcs",
            Metric::SinusoidPass => "sinusoid_pass",
            Metric::Continuity => "continuity",
            Metric::FreqUniformity => "freq_uniformity",
            Metric::Qf => "qf",
        }
    }

    /// Whether the metric yields a per-block map.
    pub fn is_local(self) -> bool {
        !matches!(self, Metric::Continuity | Metric::FreqUniformity | Metric::Qf)
    }

    /// Parses a comma-separated list, returning the metrics in canonical order.
    pub fn parse_list(list: &str) -> Result<Vec<Metric>> {
        let mut out = Vec::new();
        for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let m: Metric = name.parse()?;
            if !out.contains(&m) {
                out.push(m);
            }
        }
        if out.is_empty() {
            return Err(Error::InvalidParameter("metric list is empty".into()));
        }
        out.sort();
        Ok(out)
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Metric::ALL.iter().map(|m| m.name()).collect();
            Error::InvalidParameter(format!("unknown metric '{s}' (known: {})", names.join(", ")))
        })
    }
}

/// Lazily evaluated intermediate products for one image.
pub struct Analysis<'a> {
    img: &'a GrayImage,
    config: &'a ToolConfig,
    field: DirectionField,
    mask: SegmentationMask,
    signatures: OnceCell<BlockSignatures>,
    ocl: OnceCell<(BlockQualityMap, GlobalScore)>,
    geometry: OnceCell<RidgeGeometry>,
    intensity: OnceCell<IntensityMaps>,
}

impl<'a> Analysis<'a> {
    pub fn new(img: &'a GrayImage, config: &'a ToolConfig) -> Result<Self> {
        img.ensure_measurable()?;
        let grid = BlockGrid::for_image(img, config.block_size_for(img.dpi()))?;
        if grid.cols() < 2 || grid.rows() < 2 {
            return Err(Error::InvalidParameter(format!(
                "block size {} leaves fewer than 2x2 blocks",
                grid.block_size()
            )));
        }
        Ok(Self {
            img,
            config,
            field: direction_field(img, &grid),
            mask: segment_foreground(img, &grid, config.variance_threshold),
            signatures: OnceCell::new(),
            ocl: OnceCell::new(),
            geometry: OnceCell::new(),
            intensity: OnceCell::new(),
        })
    }

    pub fn field(&self) -> &DirectionField {
        &self.field
    }

    pub fn mask(&self) -> &SegmentationMask {
        &self.mask
    }

    pub fn signatures(&self) -> &BlockSignatures {
        self.signatures.get_or_init(|| {
            BlockSignatures::extract(self.img, &self.field, &self.mask, self.config.signature_params())
        })
    }

    fn ocl(&self) -> &(BlockQualityMap, GlobalScore) {
        self.ocl.get_or_init(|| ocl_map(&self.field, &self.mask))
    }

    fn geometry(&self) -> &RidgeGeometry {
        self.geometry.get_or_init(|| ridge_geometry(self.signatures()))
    }

    fn intensity(&self) -> &IntensityMaps {
        self.intensity
            .get_or_init(|| variance_contrast(self.img, &self.mask, self.signatures()))
    }

    /// Map and global score of a block-level metric.
    pub fn local(&self, metric: Metric) -> Result<(BlockQualityMap, GlobalScore)> {
        let dpi = self.img.dpi();
        Ok(match metric {
            Metric::Ocl => self.ocl().clone(),
            Metric::Sl => block_classification_sl(&self.ocl().0, self.geometry(), &self.config.sl_thresholds(dpi))?,
            Metric::Goqs => loq_map(&self.field, &self.mask),
            Metric::Qs => coherence_map(&self.field, &self.mask),
            Metric::GaborQi => gabor_quality(self.img, &self.mask, &self.config.gabor_params(dpi))?,
            Metric::Variance => {
                let m = self.intensity();
                (m.variance.clone(), m.variance_score.clone())
            }
            Metric::Contrast => {
                let m = self.intensity();
                (m.contrast.clone(), m.contrast_score.clone())
            }
            Metric::Gcs => local_clarity(self.signatures()),
            Metric::SinusoidPass => sinusoid_spectrum_check(self.signatures(), &self.config.sinusoid_params(dpi))?,
            Metric::Continuity | Metric::FreqUniformity | Metric::Qf => {
                return Err(Error::InvalidParameter(format!("metric '{metric}' has no block map")))
            }
        })
    }

    pub fn spectral_bands(&self) -> Result<SpectralBands> {
        spectral_bands(self.img, self.config.rings, self.config.band(self.img.dpi()))
    }

    pub fn score(&self, metric: Metric) -> Result<GlobalScore> {
        match metric {
            Metric::Continuity => Ok(direction_continuity(
                &self.field,
                &self.mask,
                self.config.abrupt_angle_radians(),
            )),
            Metric::FreqUniformity => Ok(frequency_uniformity(self.geometry())),
            Metric::Qf => Ok(spectral_energy_concentration(
                self.img,
                &self.mask,
                self.config.rings,
                self.config.band(self.img.dpi()),
            )?
            .0),
            local => Ok(self.local(local)?.1),
        }
    }
}

/// Global scores of one image, in canonical metric order.
#[derive(Clone, Debug, PartialEq)]
pub struct QualityReport {
    pub image: String,
    pub scores: Vec<(Metric, GlobalScore)>,
}

impl QualityReport {
    pub fn get(&self, metric: Metric) -> Option<f64> {
        self.scores.iter().find(|(m, _)| *m == metric).map(|(_, s)| s.value)
    }

    /// `metric: reason` for every score reported with a warning.
    pub fn warnings(&self) -> Vec<String> {
        self.scores
            .iter()
            .filter_map(|(m, s)| s.warning.as_ref().map(|w| format!("{m}: {w}")))
            .collect()
    }
}

pub fn assess(
    image: impl Into<String>,
    img: &GrayImage,
    config: &ToolConfig,
    metrics: &[Metric],
) -> Result<QualityReport> {
    let analysis = Analysis::new(img, config)?;
    let mut ordered = metrics.to_vec();
    ordered.sort();
    ordered.dedup();
    let scores = ordered
        .into_iter()
        .map(|m| Ok((m, analysis.score(m)?)))
        .collect::<Result<_>>()?;
    Ok(QualityReport {
        image: image.into(),
        scores,
    })
}
