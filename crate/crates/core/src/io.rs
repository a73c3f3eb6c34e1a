//! File helpers shared by the pipeline stages.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};

pub fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| io_err(path, e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Csv {
        path: path.display().to_string(),
        message: format!("invalid JSON: {e}"),
    })
}

/// A dated numeric table stored column-major, used for residuals and
/// pseudo-observations.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub dates: Vec<String>,
    pub tickers: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

impl Table {
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("date");
        for t in &self.tickers {
            out.push(',');
            out.push_str(t);
        }
        out.push('\n');
        for (r, date) in self.dates.iter().enumerate() {
            out.push_str(date);
            for c in &self.columns {
                out.push(',');
                out.push_str(&c[r].to_string());
            }
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_csv_string()).map_err(|e| io_err(path, e))
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let name = path.display().to_string();
        let csv_err = |e: csv::Error| Error::Csv {
            path: name.clone(),
            message: e.to_string(),
        };
        let file = fs::File::open(path).map_err(|e| io_err(path, e))?;
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(file);
        let header = rdr.headers().map_err(csv_err)?.clone();
        let tickers: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let mut dates = Vec::new();
        let mut columns = vec![Vec::new(); tickers.len()];
        for (r, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(csv_err)?;
            dates.push(rec.get(0).unwrap_or_default().to_string());
            for (j, col) in columns.iter_mut().enumerate() {
                let cell = rec.get(j + 1).unwrap_or_default();
                let v: f64 = cell.trim().parse().map_err(|_| Error::Parse {
                    row: r + 1,
                    column: tickers[j].clone(),
                    message: format!("not a number: \"{cell}\""),
                })?;
                col.push(v);
            }
        }
        if dates.is_empty() {
            return Err(Error::NoObservations.context(name));
        }
        Ok(Self {
            dates,
            tickers,
            columns,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_round_trip() {
        let t = Table {
            dates: vec!["2020-01-01".into(), "2020-01-02".into()],
            tickers: vec!["A".into(), "B".into()],
            columns: vec![vec![0.1, -2.5e-9], vec![1.0 / 3.0, 7.0]],
        };
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.csv");
        t.write_csv(&p).unwrap();
        assert_eq!(Table::read_csv(&p).unwrap(), t);
    }
}
