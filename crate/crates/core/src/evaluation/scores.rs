//! Match-score records and their CSV form:
//! `kind,score,q_enrol,q_test[,subject][,<metric columns...>]`.

use std::io::{Read, Write};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScoreKind {
    Genuine,
    Impostor,
}

impl ScoreKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScoreKind::Genuine => "genuine",
            ScoreKind::Impostor => "impostor",
        }
    }
}

impl std::str::FromStr for ScoreKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "genuine" => Ok(ScoreKind::Genuine),
            "impostor" => Ok(ScoreKind::Impostor),
            other => Err(format!("unknown kind {other:?} (expected genuine or impostor)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScoreRecord {
    pub kind: ScoreKind,
    /// Higher means more similar.
    pub score: f64,
    pub q_enrol: f64,
    pub q_test: f64,
    /// Enrolled identity the comparison is attributed to, when known.
    pub subject: Option<String>,
    /// Extra quality values, aligned with [`ScoreSet::metric_names`].
    pub metrics: Vec<f64>,
}

impl ScoreRecord {
    pub fn new(kind: ScoreKind, score: f64, q_enrol: f64, q_test: f64) -> Self {
        Self {
            kind,
            score,
            q_enrol,
            q_test,
            subject: None,
            metrics: Vec::new(),
        }
    }

    pub fn with_subject(mut self, subject: impl Into<String>) -> Self {
        self.subject = Some(subject.into());
        self
    }
}

/// Quality assigned to a comparison: geometric mean of enrolment and test quality.
pub fn pair_quality(record: &ScoreRecord) -> f64 {
    (record.q_enrol * record.q_test).sqrt()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScoreSet {
    source: String,
    metric_names: Vec<String>,
    records: Vec<ScoreRecord>,
}

fn in_unit(v: f64) -> bool {
    (0.0..=1.0).contains(&v)
}

impl ScoreSet {
    pub fn new(source: impl Into<String>, metric_names: Vec<String>, records: Vec<ScoreRecord>) -> Result<Self> {
        for (i, r) in records.iter().enumerate() {
            let problem = if !r.score.is_finite() {
                Some("score is not finite".to_string())
            } else if !in_unit(r.q_enrol) || !in_unit(r.q_test) {
                Some("quality outside [0, 1]".to_string())
            } else if r.metrics.len() != metric_names.len() {
                Some(format!("{} metric values for {} columns", r.metrics.len(), metric_names.len()))
            } else if !r.metrics.iter().all(|&m| in_unit(m)) {
                Some("metric quality outside [0, 1]".to_string())
            } else {
                None
            };
            if let Some(p) = problem {
                return Err(Error::InvalidParameter(format!("record {i}: {p}")));
            }
        }
        Ok(Self {
            source: source.into(),
            metric_names,
            records,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn metric_names(&self) -> &[String] {
        &self.metric_names
    }

    pub fn records(&self) -> &[ScoreRecord] {
        &self.records
    }

    pub fn metric_index(&self, name: &str) -> Option<usize> {
        self.metric_names.iter().position(|m| m == name)
    }

    pub fn scores_of(&self, kind: ScoreKind) -> Vec<f64> {
        self.records
            .iter()
            .filter(|r| r.kind == kind)
            .map(|r| r.score)
            .collect()
    }

    pub fn has_subjects(&self) -> bool {
        self.records.iter().any(|r| r.subject.is_some())
    }

    pub fn read_csv(reader: impl Read, source: impl Into<String>) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let header = rdr
            .headers()
            .map_err(|e| Error::Csv { row: 1, message: e.to_string() })?
            .clone();
        let required = ["kind", "score", "q_enrol", "q_test"];
        for (i, name) in required.iter().enumerate() {
            if header.get(i) != Some(*name) {
                return Err(Error::Csv {
                    row: 1,
                    message: format!(
                        "header must start with kind,score,q_enrol,q_test; column {} is {:?}",
                        i + 1,
                        header.get(i).unwrap_or("")
                    ),
                });
            }
        }
        let subject_col = header.iter().position(|h| h == "subject");
        let metric_cols: Vec<usize> = (required.len()..header.len())
            .filter(|&c| Some(c) != subject_col)
            .collect();
        let metric_names = metric_cols.iter().map(|&c| header[c].to_string()).collect();

        let mut records = Vec::new();
        for (i, row) in rdr.records().enumerate() {
            let row_no = i + 2;
            let row = row.map_err(|e| Error::Csv { row: row_no, message: e.to_string() })?;
            let bad = |message: String| Error::Csv { row: row_no, message };
            if row.len() != header.len() {
                return Err(bad(format!("{} fields, header has {}", row.len(), header.len())));
            }
            let num = |c: usize| -> Result<f64> {
                row[c]
                    .parse::<f64>()
                    .map_err(|_| bad(format!("{}: {:?} is not a number", &header[c], &row[c])))
            };
            let kind = row[0].parse::<ScoreKind>().map_err(bad)?;
            let mut rec = ScoreRecord::new(kind, num(1)?, num(2)?, num(3)?);
            rec.subject = subject_col.map(|c| row[c].to_string());
            rec.metrics = metric_cols.iter().map(|&c| num(c)).collect::<Result<_>>()?;
            records.push(rec);
        }
        Self::new(source, metric_names, records).map_err(|e| match e {
            Error::InvalidParameter(m) => {
                // "record N: ..." -> report the CSV row.
                let row = m
                    .strip_prefix("record ")
                    .and_then(|r| r.split(':').next())
                    .and_then(|n| n.parse::<usize>().ok())
                    .map_or(0, |n| n + 2);
                Error::Csv { row, message: m }
            }
            other => other,
        })
    }

    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        let subjects = self.has_subjects();
        write!(out, "kind,score,q_enrol,q_test")?;
        if subjects {
            write!(out, ",subject")?;
        }
        for m in &self.metric_names {
            write!(out, ",{m}")?;
        }
        writeln!(out)?;
        for r in &self.records {
            write!(out, "{},{},{},{}", r.kind.as_str(), r.score, r.q_enrol, r.q_test)?;
            if subjects {
                write!(out, ",{}", r.subject.as_deref().unwrap_or(""))?;
            }
            for m in &r.metrics {
                write!(out, ",{m}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_quality_examples() {
        let r = |a, b| ScoreRecord::new(ScoreKind::Genuine, 0.0, a, b);
        assert_eq!(pair_quality(&r(1.0, 1.0)), 1.0);
        assert_eq!(pair_quality(&r(0.0, 0.7)), 0.0);
        assert!((pair_quality(&r(0.25, 0.81)) - 0.45).abs() < 1e-12);
    }

    #[test]
    fn csv_roundtrip_with_metrics_and_subjects() {
        let text = "kind,score,q_enrol,q_test,subject,ocl\n\
                    genuine,12.5,0.9,0.8,s1,0.7\n\
                    # comment lines are ignored\n\
                    impostor,-1,0.5,0.25,s1,0.1\n";
        let set = ScoreSet::read_csv(text.as_bytes(), "t").unwrap();
        assert_eq!(set.metric_names(), ["ocl"]);
        assert_eq!(set.records().len(), 2);
        assert_eq!(set.records()[1].subject.as_deref(), Some("s1"));
        let mut out = Vec::new();
        set.write_csv(&mut out).unwrap();
        assert_eq!(ScoreSet::read_csv(&out[..], "t").unwrap(), set);
    }

    #[test]
    fn malformed_row_reports_row_number() {
        let text = "kind,score,q_enrol,q_test\ngenuine,1,0.5,0.5\nimpostor,abc,0.5,0.5\n";
        let err = ScoreSet::read_csv(text.as_bytes(), "t").unwrap_err();
        assert!(matches!(err, Error::Csv { row: 3, .. }), "{err}");
    }

    #[test]
    fn out_of_range_quality_reports_row_number() {
        let text = "kind,score,q_enrol,q_test\ngenuine,1,0.5,0.5\ngenuine,1,1.5,0.5\n";
        let err = ScoreSet::read_csv(text.as_bytes(), "t").unwrap_err();
        assert!(matches!(err, Error::Csv { row: 3, .. }), "{err}");
    }

    #[test]
    fn bad_header_and_kind_are_rejected() {
        assert!(ScoreSet::read_csv("score,kind,q_enrol,q_test\n".as_bytes(), "t").is_err());
        let text = "kind,score,q_enrol,q_test\nmatch,1,0.5,0.5\n";
        assert!(matches!(
            ScoreSet::read_csv(text.as_bytes(), "t"),
            Err(Error::Csv { row: 2, .. })
        ));
    }
}
