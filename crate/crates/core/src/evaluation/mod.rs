//! Score-level evaluation: error rates, quality-based rejection sweeps,
//! correlation between quality metrics and the genuine/impostor separation
//! statistic.

mod rates;
mod scores;
mod stats;
mod sweep;

pub use rates::{compute_eer, error_at_operating_point, OperatingPoint, SortedScores};
pub use scores::{pair_quality, ScoreKind, ScoreRecord, ScoreSet};
pub use stats::{
    metric_correlation_matrix, pearson_correlation, separation_statistic, subject_separations,
    CorrelationMatrix, SubjectSeparation,
};
pub use sweep::{
    record_qualities, rejection_sweep, OperatingRates, QualityKey, RejectionCurve, RejectionPoint,
};
