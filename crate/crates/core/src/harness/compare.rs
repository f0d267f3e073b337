use std::path::Path;

use crate::harness::record::CSV_COLUMNS;
use crate::harness::{Curve, HarnessError};

/// A curve plus the name to fall back on when it carries no metadata.
pub struct NamedCurve {
    pub stem: String,
    pub curve: Curve,
}

impl NamedCurve {
    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        Ok(NamedCurve {
            stem,
            curve: Curve::load(path)?,
        })
    }
}

/// Long-format merge: every row gains `algorithm` and `game` columns taken
/// from the file's metadata, or the file stem and an empty game otherwise.
pub fn merge_curves(inputs: &[NamedCurve]) -> Result<String, HarnessError> {
    if inputs.is_empty() {
        return Err(HarnessError::Config("no curves to compare".into()));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["algorithm", "game"];
    header.extend(CSV_COLUMNS);
    w.write_record(&header)?;
    for input in inputs {
        let algorithm = input.curve.meta("algorithm").unwrap_or(&input.stem);
        let game = input.curve.meta("game").unwrap_or("");
        for r in &input.curve.records {
            let mut row = vec![algorithm.to_string(), game.to_string()];
            row.extend(r.fields());
            w.write_record(&row)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| HarnessError::Csv(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::ConvergenceRecord;

    fn curve(meta: bool, n: usize) -> Curve {
        Curve {
            metadata: if meta {
                vec![("game".into(), "leduc".into()), ("algorithm".into(), "cfr".into())]
            } else {
                Vec::new()
            },
            records: (1..=n)
                .map(|i| ConvergenceRecord {
                    iteration: i,
                    nashconv: 1.0 / i as f64,
                    exploitability_p0: 0.5 / i as f64,
                    exploitability_p1: 0.5 / i as f64,
                    best_iter_nashconv: None,
                    value_p0: 0.0,
                    wall_ms: 0,
                })
                .collect(),
        }
    }

    #[test]
    fn merge_counts_rows_and_names() {
        let merged = merge_curves(&[
            NamedCurve { stem: "a".into(), curve: curve(true, 100) },
            NamedCurve { stem: "xfp_run".into(), curve: curve(false, 100) },
        ])
        .unwrap();
        let lines: Vec<&str> = merged.lines().collect();
        assert_eq!(lines.len(), 201);
        assert!(lines[1].starts_with("cfr,leduc,1,"));
        assert!(lines[200].starts_with("xfp_run,,100,"));
        assert!(merge_curves(&[]).is_err());
    }
}
