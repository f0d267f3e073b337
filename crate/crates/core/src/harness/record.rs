use std::fs;
use std::io::Write;
use std::path::Path;

use crate::harness::HarnessError;

/// One evaluation point of a run.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRecord {
    pub iteration: usize,
    pub nashconv: f64,
    pub exploitability_p0: f64,
    pub exploitability_p1: f64,
    pub best_iter_nashconv: Option<f64>,
    pub value_p0: f64,
    pub wall_ms: u64,
}

pub const CSV_COLUMNS: [&str; 7] = [
    "iteration",
    "nashconv",
    "exploitability_p0",
    "exploitability_p1",
    "best_iter_nashconv",
    "value_p0",
    "wall_ms",
];

/// 17 significant digits: enough to reproduce any `f64` exactly.
pub(crate) fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

impl ConvergenceRecord {
    pub(crate) fn fields(&self) -> [String; 7] {
        [
            self.iteration.to_string(),
            fmt_real(self.nashconv),
            fmt_real(self.exploitability_p0),
            fmt_real(self.exploitability_p1),
            self.best_iter_nashconv.map(fmt_real).unwrap_or_default(),
            fmt_real(self.value_p0),
            self.wall_ms.to_string(),
        ]
    }

    fn parse(row: &csv::StringRecord, line: u64) -> Result<Self, HarnessError> {
        let bad = |col: &str| HarnessError::Csv(format!("line {line}: bad `{col}` value"));
        let real = |i: usize| row[i].trim().parse::<f64>().map_err(|_| bad(CSV_COLUMNS[i]));
        Ok(ConvergenceRecord {
            iteration: row[0].trim().parse().map_err(|_| bad(CSV_COLUMNS[0]))?,
            nashconv: real(1)?,
            exploitability_p0: real(2)?,
            exploitability_p1: real(3)?,
            best_iter_nashconv: if row[4].trim().is_empty() {
                None
            } else {
                Some(real(4)?)
            },
            value_p0: real(5)?,
            wall_ms: row[6].trim().parse().map_err(|_| bad(CSV_COLUMNS[6]))?,
        })
    }
}

/// A convergence curve file: `# key: value` metadata lines, a header row,
/// then one row per record.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Curve {
    pub metadata: Vec<(String, String)>,
    pub records: Vec<ConvergenceRecord>,
}

impl Curve {
    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn write<W: Write>(&self, mut out: W) -> Result<(), HarnessError> {
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}: {v}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_COLUMNS)?;
        for r in &self.records {
            w.write_record(r.fields())?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    pub fn save(&self, path: &Path) -> Result<(), HarnessError> {
        fs::write(path, self.to_csv_string())?;
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let mut metadata = Vec::new();
        let mut body = String::new();
        let mut in_header = true;
        for line in text.lines() {
            if in_header {
                if let Some(m) = line.strip_prefix('#') {
                    let (k, v) = m.trim().split_once(':').unwrap_or((m.trim(), ""));
                    metadata.push((k.trim().to_string(), v.trim().to_string()));
                    continue;
                }
                in_header = false;
            }
            body.push_str(line);
            body.push('\n');
        }
        let mut rd = csv::ReaderBuilder::new().has_headers(true).from_reader(body.as_bytes());
        let header = rd.headers()?.clone();
        if header.iter().map(str::trim).ne(CSV_COLUMNS) {
            return Err(HarnessError::Schema(format!(
                "expected columns {}, found {}",
                CSV_COLUMNS.join(","),
                header.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut records = Vec::new();
        for row in rd.records() {
            let row = row?;
            let line = row.position().map_or(0, |p| p.line());
            records.push(ConvergenceRecord::parse(&row, line)?);
        }
        Ok(Curve { metadata, records })
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        Self::parse(&fs::read_to_string(path)?)
    }
}
