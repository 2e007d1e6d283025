//! Verification error rates from genuine and impostor score lists.
//!
//! A comparison is accepted when `score >= t`, so
//! `FAR(t) = #{impostor >= t} / n_impostor` and `FRR(t) = #{genuine < t} / n_genuine`.
//! Candidate thresholds are the distinct observed scores.

use super::scores::{ScoreKind, ScoreSet};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OperatingPoint {
    /// Fix the false acceptance rate, report the false rejection rate.
    Far(f64),
    /// Fix the false rejection rate, report the false acceptance rate.
    Frr(f64),
}

/// Genuine and impostor scores, each sorted ascending.
#[derive(Clone, Debug)]
pub struct SortedScores {
    genuine: Vec<f64>,
    impostor: Vec<f64>,
}

/// Error counts at one threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Counts {
    false_accepts: usize,
    false_rejects: usize,
}

impl SortedScores {
    pub fn new(mut genuine: Vec<f64>, mut impostor: Vec<f64>) -> Result<Self> {
        if genuine.is_empty() {
            return Err(Error::EmptyClass("genuine"));
        }
        if impostor.is_empty() {
            return Err(Error::EmptyClass("impostor"));
        }
        if genuine.iter().chain(&impostor).any(|s| !s.is_finite()) {
            return Err(Error::InvalidParameter("scores must be finite".into()));
        }
        genuine.sort_by(f64::total_cmp);
        impostor.sort_by(f64::total_cmp);
        Ok(Self { genuine, impostor })
    }

    pub fn from_set(set: &ScoreSet) -> Result<Self> {
        Self::new(set.scores_of(ScoreKind::Genuine), set.scores_of(ScoreKind::Impostor))
    }

    pub fn n_genuine(&self) -> usize {
        self.genuine.len()
    }

    pub fn n_impostor(&self) -> usize {
        self.impostor.len()
    }

    /// Walks the distinct thresholds in ascending order with their error counts.
    fn sweep(&self) -> impl Iterator<Item = (f64, Counts)> + '_ {
        let (g, im) = (&self.genuine, &self.impostor);
        let (mut gi, mut ii) = (0usize, 0usize);
        std::iter::from_fn(move || {
            let t = match (g.get(gi), im.get(ii)) {
                (Some(&a), Some(&b)) => a.min(b),
                (Some(&a), None) => a,
                (None, Some(&b)) => b,
                (None, None) => return None,
            };
            // Counts for threshold t: genuine strictly below, impostor at or above.
            let counts = Counts {
                false_accepts: im.len() - ii,
                false_rejects: gi,
            };
            while gi < g.len() && g[gi] == t {
                gi += 1;
            }
            while ii < im.len() && im[ii] == t {
                ii += 1;
            }
            Some((t, counts))
        })
    }

    fn far(&self, c: Counts) -> f64 {
        c.false_accepts as f64 / self.impostor.len() as f64
    }

    fn frr(&self, c: Counts) -> f64 {
        c.false_rejects as f64 / self.genuine.len() as f64
    }

    /// Equal error rate: midpoint of FAR and FRR at the threshold minimising
    /// `|FAR − FRR|`; ties go to the lower threshold.
    pub fn eer(&self) -> f64 {
        let (ng, ni) = (self.genuine.len() as u128, self.impostor.len() as u128);
        let mut best: Option<(u128, Counts)> = None;
        for (_, c) in self.sweep() {
            // |fa/ni - fr/ng| compared exactly via cross-multiplication.
            let gap = (c.false_accepts as u128 * ng).abs_diff(c.false_rejects as u128 * ni);
            if best.is_none_or(|(b, _)| gap < b) {
                best = Some((gap, c));
            }
        }
        let (_, c) = best.expect("both classes are non-empty");
        0.5 * (self.far(c) + self.frr(c))
    }

    pub fn error_at(&self, point: OperatingPoint) -> Result<f64> {
        match point {
            OperatingPoint::Far(alpha) => {
                check_resolvable(alpha, self.impostor.len())?;
                let hit = self.sweep().find(|&(_, c)| self.far(c) <= alpha);
                // Above the highest score nothing is accepted: FAR 0, FRR 1.
                Ok(hit.map_or(1.0, |(_, c)| self.frr(c)))
            }
            OperatingPoint::Frr(alpha) => {
                check_resolvable(alpha, self.genuine.len())?;
                let hit = self
                    .sweep()
                    .take_while(|&(_, c)| self.frr(c) <= alpha)
                    .last()
                    .expect("FRR is 0 at the lowest threshold");
                Ok(self.far(hit.1))
            }
        }
    }
}

fn check_resolvable(alpha: f64, samples: usize) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!("rate {alpha} outside [0, 1]")));
    }
    let min_resolvable = 1.0 / samples as f64;
    if alpha < min_resolvable {
        return Err(Error::UnattainableRate {
            requested: alpha,
            samples,
            min_resolvable,
        });
    }
    Ok(())
}

pub fn compute_eer(scores: &ScoreSet) -> Result<f64> {
    Ok(SortedScores::from_set(scores)?.eer())
}

pub fn error_at_operating_point(scores: &ScoreSet, point: OperatingPoint) -> Result<f64> {
    SortedScores::from_set(scores)?.error_at(point)
}
