use std::collections::BTreeMap;

use super::scores::{ScoreKind, ScoreSet};
use crate::error::{Error, Result};

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Sample Pearson correlation coefficient.
pub fn pearson_correlation(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::InvalidParameter(format!(
            "correlation needs equal lengths, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::Undefined("correlation needs at least two pairs".into()));
    }
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Undefined("correlation of a zero-variance sequence".into()));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Distance of a genuine score from the impostor distribution in units of
/// the impostor standard deviation (population moments).
pub fn separation_statistic(genuine: f64, impostors: &[f64]) -> Result<f64> {
    if impostors.len() < 2 {
        return Err(Error::Undefined("separation needs at least two impostor scores".into()));
    }
    let m = mean(impostors);
    let var = impostors.iter().map(|s| (s - m).powi(2)).sum::<f64>() / impostors.len() as f64;
    if var == 0.0 {
        return Err(Error::Undefined("impostor scores have zero standard deviation".into()));
    }
    Ok((genuine - m) / var.sqrt())
}

/// One row of the per-subject separation output.
#[derive(Clone, Debug, PartialEq)]
pub struct SubjectSeparation {
    pub subject: String,
    pub genuine_score: f64,
    /// `Err` text when the statistic is undefined for this subject.
    pub separation: std::result::Result<f64, String>,
}

/// Separation of every genuine score against the impostor scores carrying
/// the same subject label. Records without a label are ignored.
pub fn subject_separations(set: &ScoreSet) -> Vec<SubjectSeparation> {
    let mut impostors: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for r in set.records() {
        if let (ScoreKind::Impostor, Some(s)) = (r.kind, r.subject.as_deref()) {
            impostors.entry(s).or_default().push(r.score);
        }
    }
    set.records()
        .iter()
        .filter(|r| r.kind == ScoreKind::Genuine)
        .filter_map(|r| {
            let subject = r.subject.as_deref()?;
            let imp = impostors.get(subject).map_or(&[][..], Vec::as_slice);
            Some(SubjectSeparation {
                subject: subject.to_string(),
                genuine_score: r.score,
                separation: separation_statistic(r.score, imp).map_err(|e| e.to_string()),
            })
        })
        .collect()
}

/// Symmetric matrix of pairwise correlations between metric columns.
/// Entries involving a zero-variance metric are `None`.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationMatrix {
    pub metrics: Vec<String>,
    pub values: Vec<Vec<Option<f64>>>,
}

/// `table[image][metric]`; every row must have one value per metric name.
pub fn metric_correlation_matrix(metrics: &[String], table: &[Vec<f64>]) -> Result<CorrelationMatrix> {
    if table.len() < 2 {
        return Err(Error::InvalidParameter("correlation matrix needs at least two images".into()));
    }
    if metrics.len() < 2 {
        return Err(Error::InvalidParameter("correlation matrix needs at least two metrics".into()));
    }
    if table.iter().any(|row| row.len() != metrics.len()) {
        return Err(Error::InvalidParameter("ragged quality table".into()));
    }
    let columns: Vec<Vec<f64>> = (0..metrics.len())
        .map(|m| table.iter().map(|row| row[m]).collect())
        .collect();
    let n = metrics.len();
    let mut values = vec![vec![None; n]; n];
    for i in 0..n {
        for j in i..n {
            let r = if i == j {
                pearson_correlation(&columns[i], &columns[i]).ok().map(|_| 1.0)
            } else {
                pearson_correlation(&columns[i], &columns[j]).ok()
            };
            values[i][j] = r;
            values[j][i] = r;
        }
    }
    Ok(CorrelationMatrix {
        metrics: metrics.to_vec(),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluation::ScoreRecord;

    #[test]
    fn pearson_identity_and_negation() {
        let x = [1.0, 4.0, 2.0, 8.0];
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((pearson_correlation(&x, &x).unwrap() - 1.0).abs() < 1e-15);
        assert!((pearson_correlation(&x, &neg).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn pearson_hand_computed() {
        // cov = 2/3·... : dx = (-1,0,1), dy = (-2/3,-2/3,4/3);
        // sxy = 2, sxx = 2, syy = 8/3 -> r = 2 / sqrt(16/3) = sqrt(3)/2.
        let r = pearson_correlation(&[1.0, 2.0, 3.0], &[2.0, 2.0, 4.0]).unwrap();
        assert!((r - 0.75f64.sqrt()).abs() < 1e-12);
        assert!((r - 0.866).abs() < 1e-3);
    }

    #[test]
    fn pearson_zero_variance_is_undefined() {
        assert!(matches!(pearson_correlation(&[1.0, 1.0], &[1.0, 2.0]), Err(Error::Undefined(_))));
        assert!(pearson_correlation(&[1.0, 2.0], &[1.0]).is_err());
    }

    #[test]
    fn separation_examples() {
        let o = separation_statistic(10.0, &[1.0, 2.0, 3.0]).unwrap();
        assert!((o - 8.0 / (2.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert!((o - 9.798).abs() < 1e-3);
        assert_eq!(separation_statistic(2.0, &[1.0, 2.0, 3.0]).unwrap(), 0.0);
        assert!(matches!(separation_statistic(1.0, &[4.0, 4.0]), Err(Error::Undefined(_))));
        assert!(separation_statistic(1.0, &[4.0]).is_err());
    }

    #[test]
    fn matrix_is_symmetric_with_unit_diagonal() {
        let names: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let table = vec![
            vec![0.1, 0.1, 0.9],
            vec![0.5, 0.5, 0.2],
            vec![0.7, 0.7, 0.4],
            vec![0.2, 0.2, 0.3],
        ];
        let m = metric_correlation_matrix(&names, &table).unwrap();
        for i in 0..3 {
            assert_eq!(m.values[i][i], Some(1.0));
            for j in 0..3 {
                assert_eq!(m.values[i][j], m.values[j][i]);
            }
        }
        assert!((m.values[0][1].unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_metric_is_marked_undefined() {
        let names: Vec<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
        let m = metric_correlation_matrix(&names, &[vec![0.3, 0.5], vec![0.6, 0.5]]).unwrap();
        assert_eq!(m.values[0][1], None);
        assert_eq!(m.values[1][1], None);
        assert_eq!(m.values[0][0], Some(1.0));
        assert!(metric_correlation_matrix(&names, &[vec![0.3, 0.5]]).is_err());
    }

    #[test]
    fn separations_group_by_subject() {
        let rec = |k, s, subj: &str| ScoreRecord::new(k, s, 1.0, 1.0).with_subject(subj);
        let set = ScoreSet::new(
            "t",
            vec![],
            vec![
                rec(ScoreKind::Genuine, 10.0, "a"),
                rec(ScoreKind::Impostor, 1.0, "a"),
                rec(ScoreKind::Impostor, 2.0, "a"),
                rec(ScoreKind::Impostor, 3.0, "a"),
                rec(ScoreKind::Genuine, 5.0, "b"),
                rec(ScoreKind::Impostor, 5.0, "b"),
            ],
        )
        .unwrap();
        let out = subject_separations(&set);
        assert_eq!(out.len(), 2);
        assert!((out[0].separation.clone().unwrap() - 9.797958971132712).abs() < 1e-9);
        assert!(out[1].separation.is_err());
    }
}
