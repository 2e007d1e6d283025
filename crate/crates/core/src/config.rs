//! Tool configuration as a flat `key = value` text file.
//!
//! Lengths and frequencies are given at the 500 dpi reference resolution and
//! rescaled to each image's resolution when the metric parameters are built.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::globalmetrics::{DEFAULT_ABRUPT_ANGLE_DEGREES, DEFAULT_RING_COUNT};
use crate::imagecore::{
    block_size_for_dpi, SignatureParams, DEFAULT_DPI, DEFAULT_SIGNATURE_WIDTH, DEFAULT_SIGNATURE_WINDOW,
    DEFAULT_VARIANCE_THRESHOLD, MIN_BLOCK_SIZE,
};
use crate::localmetrics::{GaborParams, SinusoidParams, SlThresholds};

#[derive(Clone, Debug, PartialEq)]
pub struct ToolConfig {
    pub dpi: u32,
    /// `None` derives the block size from each image's resolution.
    pub block_size: Option<usize>,
    pub variance_threshold: f64,
    pub signature_window: usize,
    pub signature_width: usize,
    pub gabor_directions: usize,
    pub gabor_frequency: f64,
    pub gabor_sigma: f64,
    pub gabor_threshold: f64,
    pub band_min: f64,
    pub band_max: f64,
    pub sinusoid_peak_ratio: f64,
    pub sl_min_ocl: f64,
    pub sl_thickness_min: f64,
    pub sl_thickness_max: f64,
    pub sl_ratio_min: f64,
    pub sl_ratio_max: f64,
    pub rings: usize,
    /// Degrees.
    pub abrupt_angle: f64,
    pub operating_frr: f64,
    pub operating_far: f64,
}

impl Default for ToolConfig {
    fn default() -> Self {
        let gabor = GaborParams::default();
        let sin = SinusoidParams::default();
        let sl = SlThresholds::default();
        Self {
            dpi: DEFAULT_DPI,
            block_size: None,
            variance_threshold: DEFAULT_VARIANCE_THRESHOLD,
            signature_window: DEFAULT_SIGNATURE_WINDOW,
            signature_width: DEFAULT_SIGNATURE_WIDTH,
            gabor_directions: gabor.directions,
            gabor_frequency: gabor.frequency,
            gabor_sigma: gabor.sigma,
            gabor_threshold: gabor.threshold,
            band_min: sin.band.0,
            band_max: sin.band.1,
            sinusoid_peak_ratio: sin.peak_ratio,
            sl_min_ocl: sl.min_ocl,
            sl_thickness_min: sl.thickness.0,
            sl_thickness_max: sl.thickness.1,
            sl_ratio_min: sl.ratio.0,
            sl_ratio_max: sl.ratio.1,
            rings: DEFAULT_RING_COUNT,
            abrupt_angle: DEFAULT_ABRUPT_ANGLE_DEGREES,
            operating_frr: 0.01,
            operating_far: 0.01,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("{key}: cannot parse '{value}'")))
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg()))
    }
}

impl ToolConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::InvalidParameter(format!("config line {}: expected key = value", n + 1)))?;
            cfg.set(key.trim(), value.trim())
                .map_err(|e| Error::InvalidParameter(format!("config line {}: {e}", n + 1)))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// Sets one field from its textual form. Does not validate.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "dpi" => self.dpi = parse_value(key, value)?,
            "block_size" => {
                self.block_size = if value == "auto" { None } else { Some(parse_value(key, value)?) }
            }
            "variance_threshold" => self.variance_threshold = parse_value(key, value)?,
            "signature_window" => self.signature_window = parse_value(key, value)?,
            "signature_width" => self.signature_width = parse_value(key, value)?,
            "gabor_directions" => self.gabor_directions = parse_value(key, value)?,
            "gabor_frequency" => self.gabor_frequency = parse_value(key, value)?,
            "gabor_sigma" => self.gabor_sigma = parse_value(key, value)?,
            "gabor_threshold" => self.gabor_threshold = parse_value(key, value)?,
            "band_min" => self.band_min = parse_value(key, value)?,
            "band_max" => self.band_max = parse_value(key, value)?,
            "sinusoid_peak_ratio" => self.sinusoid_peak_ratio = parse_value(key, value)?,
            "sl_min_ocl" => self.sl_min_ocl = parse_value(key, value)?,
            "sl_thickness_min" => self.sl_thickness_min = parse_value(key, value)?,
            "sl_thickness_max" => self.sl_thickness_max = parse_value(key, value)?,
            "sl_ratio_min" => self.sl_ratio_min = parse_value(key, value)?,
            "sl_ratio_max" => self.sl_ratio_max = parse_value(key, value)?,
            "rings" => self.rings = parse_value(key, value)?,
            "abrupt_angle" => self.abrupt_angle = parse_value(key, value)?,
            "operating_frr" => self.operating_frr = parse_value(key, value)?,
            "operating_far" => self.operating_far = parse_value(key, value)?,
            _ => return Err(Error::InvalidParameter(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    /// Every key in a fixed order; `parse(dump())` reproduces `self`.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let block = self.block_size.map_or_else(|| "auto".to_string(), |b| b.to_string());
        let rows: [(&str, String); 21] = [
            ("dpi", self.dpi.to_string()),
            ("block_size", block),
            ("variance_threshold", self.variance_threshold.to_string()),
            ("signature_window", self.signature_window.to_string()),
            ("signature_width", self.signature_width.to_string()),
            ("gabor_directions", self.gabor_directions.to_string()),
            ("gabor_frequency", self.gabor_frequency.to_string()),
            ("gabor_sigma", self.gabor_sigma.to_string()),
            ("gabor_threshold", self.gabor_threshold.to_string()),
            ("band_min", self.band_min.to_string()),
            ("band_max", self.band_max.to_string()),
            ("sinusoid_peak_ratio", self.sinusoid_peak_ratio.to_string()),
            ("sl_min_ocl", self.sl_min_ocl.to_string()),
            ("sl_thickness_min", self.sl_thickness_min.to_string()),
            ("sl_thickness_max", self.sl_thickness_max.to_string()),
            ("sl_ratio_min", self.sl_ratio_min.to_string()),
            ("sl_ratio_max", self.sl_ratio_max.to_string()),
            ("rings", self.rings.to_string()),
            ("abrupt_angle", self.abrupt_angle.to_string()),
            ("operating_frr", self.operating_frr.to_string()),
            ("operating_far", self.operating_far.to_string()),
        ];
        for (k, v) in rows {
            let _ = writeln!(s, "{k} = {v}");
        }
        s
    }

    pub fn validate(&self) -> Result<()> {
        check((50..=5000).contains(&self.dpi), || format!("dpi {} outside [50, 5000]", self.dpi))?;
        if let Some(b) = self.block_size {
            check(b >= MIN_BLOCK_SIZE, || format!("block_size {b} below {MIN_BLOCK_SIZE}"))?;
        }
        check(self.variance_threshold >= 0.0 && self.variance_threshold.is_finite(), || {
            "variance_threshold must be non-negative".into()
        })?;
        self.signature_params().validate()?;
        self.gabor_params(DEFAULT_DPI).validate()?;
        self.sinusoid_params(DEFAULT_DPI).validate()?;
        check((0.0..=1.0).contains(&self.sl_min_ocl), || "sl_min_ocl must lie in [0, 1]".into())?;
        check(0.0 <= self.sl_thickness_min && self.sl_thickness_min < self.sl_thickness_max, || {
            "sl thickness range is empty".into()
        })?;
        check(0.0 <= self.sl_ratio_min && self.sl_ratio_min < self.sl_ratio_max, || {
            "sl ratio range is empty".into()
        })?;
        check(self.rings >= 1, || "rings must be at least 1".into())?;
        check(self.abrupt_angle > 0.0 && self.abrupt_angle <= 90.0, || {
            "abrupt_angle must lie in (0, 90] degrees".into()
        })?;
        for (name, r) in [("operating_frr", self.operating_frr), ("operating_far", self.operating_far)] {
            check(r > 0.0 && r < 1.0, || format!("{name} must lie in (0, 1)"))?;
        }
        Ok(())
    }

    /// Pixels at `dpi` per pixel at the reference resolution.
    fn scale(dpi: u32) -> f64 {
        f64::from(dpi) / f64::from(DEFAULT_DPI)
    }

    pub fn block_size_for(&self, dpi: u32) -> usize {
        self.block_size.unwrap_or_else(|| block_size_for_dpi(dpi))
    }

    pub fn signature_params(&self) -> SignatureParams {
        SignatureParams {
            window: self.signature_window,
            width: self.signature_width,
        }
    }

    pub fn gabor_params(&self, dpi: u32) -> GaborParams {
        let k = Self::scale(dpi);
        GaborParams {
            directions: self.gabor_directions,
            frequency: self.gabor_frequency / k,
            sigma: self.gabor_sigma * k,
            threshold: self.gabor_threshold,
        }
    }

    pub fn band(&self, dpi: u32) -> (f64, f64) {
        let k = Self::scale(dpi);
        (self.band_min / k, (self.band_max / k).min(0.5))
    }

    pub fn sinusoid_params(&self, dpi: u32) -> SinusoidParams {
        SinusoidParams {
            band: self.band(dpi),
            peak_ratio: self.sinusoid_peak_ratio,
        }
    }

    pub fn sl_thresholds(&self, dpi: u32) -> SlThresholds {
        let k = Self::scale(dpi);
        SlThresholds {
            min_ocl: self.sl_min_ocl,
            frequency: self.band(dpi),
            thickness: (self.sl_thickness_min * k, self.sl_thickness_max * k),
            ratio: (self.sl_ratio_min, self.sl_ratio_max),
        }
    }

    pub fn abrupt_angle_radians(&self) -> f64 {
        self.abrupt_angle.to_radians()
    }
}
