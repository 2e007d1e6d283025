use std::io::Write;

use super::rates::{OperatingPoint, SortedScores};
use super::scores::{pair_quality, ScoreKind, ScoreSet};
use crate::error::{Error, Result};

/// Which quality orders the records for rejection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QualityKey {
    /// `sqrt(q_enrol · q_test)`.
    Paired,
    /// A named metric column of the score set.
    Column(String),
}

impl QualityKey {
    pub fn parse(s: &str) -> Self {
        match s {
            "pair" | "paired" => QualityKey::Paired,
            other => QualityKey::Column(other.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OperatingRates {
    /// Fixed FRR for the `far_at_frr` column.
    pub frr: f64,
    /// Fixed FAR for the `frr_at_far` column.
    pub far: f64,
}

impl Default for OperatingRates {
    fn default() -> Self {
        Self { frr: 0.01, far: 0.01 }
    }
}

/// Error rates at one rejection fraction; `None` marks an unattainable value.
#[derive(Clone, Debug, PartialEq)]
pub struct RejectionPoint {
    pub fraction: f64,
    pub retained: usize,
    pub eer: Option<f64>,
    pub far_at_frr: Option<f64>,
    pub frr_at_far: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RejectionCurve {
    pub rates: OperatingRates,
    pub points: Vec<RejectionPoint>,
}

impl RejectionCurve {
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "fraction,eer,far_at_frr,frr_at_far")?;
        let cell = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), |v| format!("{v:.6}"));
        for p in &self.points {
            writeln!(
                out,
                "{},{},{},{}",
                p.fraction,
                cell(p.eer),
                cell(p.far_at_frr),
                cell(p.frr_at_far)
            )?;
        }
        Ok(())
    }
}

/// Quality of each record under `key`.
pub fn record_qualities(set: &ScoreSet, key: &QualityKey) -> Result<Vec<f64>> {
    match key {
        QualityKey::Paired => Ok(set.records().iter().map(pair_quality).collect()),
        QualityKey::Column(name) => {
            let idx = set.metric_index(name).ok_or_else(|| {
                let available = if set.metric_names().is_empty() {
                    "none".to_string()
                } else {
                    set.metric_names().join(", ")
                };
                Error::InvalidParameter(format!(
                    "no quality column {name:?}; available columns: {available} (or \"pair\")"
                ))
            })?;
            Ok(set.records().iter().map(|r| r.metrics[idx]).collect())
        }
    }
}

/// For each fraction `f`, drops the `floor(f·N)` records with the lowest
/// quality (stable: earlier records go first among equal qualities) and
/// recomputes the error rates on what remains.
pub fn rejection_sweep(
    set: &ScoreSet,
    key: &QualityKey,
    fractions: &[f64],
    rates: OperatingRates,
) -> Result<RejectionCurve> {
    if fractions.iter().any(|f| !(0.0..1.0).contains(f)) {
        return Err(Error::InvalidParameter("rejection fractions must lie in [0, 1)".into()));
    }
    if fractions.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("rejection fractions must be ascending".into()));
    }
    let quality = record_qualities(set, key)?;
    let mut order: Vec<usize> = (0..set.records().len()).collect();
    order.sort_by(|&a, &b| quality[a].total_cmp(&quality[b]));

    let n = order.len();
    let points = fractions
        .iter()
        .map(|&fraction| {
            let dropped = (fraction * n as f64).floor() as usize;
            let kept = &order[dropped..];
            let (mut genuine, mut impostor) = (Vec::new(), Vec::new());
            for &i in kept {
                let r = &set.records()[i];
                match r.kind {
                    ScoreKind::Genuine => genuine.push(r.score),
                    ScoreKind::Impostor => impostor.push(r.score),
                }
            }
            let mut point = RejectionPoint {
                fraction,
                retained: kept.len(),
                eer: None,
                far_at_frr: None,
                frr_at_far: None,
            };
            if let Ok(sorted) = SortedScores::new(genuine, impostor) {
                point.eer = Some(sorted.eer());
                point.far_at_frr = sorted.error_at(OperatingPoint::Frr(rates.frr)).ok();
                point.frr_at_far = sorted.error_at(OperatingPoint::Far(rates.far)).ok();
            }
            point
        })
        .collect();
    Ok(RejectionCurve { rates, points })
}
