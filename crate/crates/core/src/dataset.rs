//! Price ingestion, missing-data repair, completeness filtering and
//! negative log-returns.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `(T + 1) x d` end-of-day prices; `None` marks a missing observation.
/// Stored column-major: `columns[j][t]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceMatrix {
    pub dates: Vec<String>,
    pub tickers: Vec<String>,
    pub columns: Vec<Vec<Option<f64>>>,
}

/// `T x d` negative log-returns, column-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnMatrix {
    pub dates: Vec<String>,
    pub tickers: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectorInfo {
    pub sector: String,
    pub subsector: String,
}

/// Ticker to sector/sub-sector classification.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SectorMap(pub BTreeMap<String, SectorInfo>);

impl SectorMap {
    pub fn sector_of(&self, ticker: &str) -> Option<&str> {
        self.0.get(ticker).map(|s| s.sector.as_str())
    }

    pub fn insert(&mut self, ticker: &str, sector: &str, subsector: &str) {
        self.0.insert(
            ticker.to_string(),
            SectorInfo {
                sector: sector.to_string(),
                subsector: subsector.to_string(),
            },
        );
    }

    /// Fails when any of `tickers` is not classified.
    pub fn check_covers(&self, tickers: &[String]) -> Result<()> {
        match tickers.iter().find(|t| !self.0.contains_key(*t)) {
            Some(t) => Err(Error::InvalidArgument(format!(
                "ticker \"{t}\" has no sector assignment"
            ))),
            None => Ok(()),
        }
    }
}

impl PriceMatrix {
    pub fn rows(&self) -> usize {
        self.dates.len()
    }

    pub fn missing_count(&self) -> usize {
        self.columns
            .iter()
            .map(|c| c.iter().filter(|v| v.is_none()).count())
            .sum()
    }
}

impl ReturnMatrix {
    pub fn rows(&self) -> usize {
        self.dates.len()
    }

    pub fn cols(&self) -> usize {
        self.tickers.len()
    }
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    match e.kind() {
        csv::ErrorKind::Io(_) => match e.into_kind() {
            csv::ErrorKind::Io(source) => io_err(path, source),
            _ => unreachable!(),
        },
        _ => Error::Csv {
            path: path.display().to_string(),
            message: e.to_string(),
        },
    }
}

fn check_date(s: &str, row: usize) -> Result<()> {
    chrono::NaiveDate::parse_from_str(s, "%Y-%m-%d")
        .map(|_| ())
        .map_err(|_| Error::Parse {
            row,
            column: "date".into(),
            message: format!("\"{s}\" is not an ISO-8601 date (YYYY-MM-DD)"),
        })
}

/// Parses prices from CSV text. Rows in error messages are 1-based data rows
/// (the header is not counted).
pub fn parse_prices<R: std::io::Read>(reader: R, origin: &Path) -> Result<PriceMatrix> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr.headers().map_err(|e| csv_err(origin, e))?.clone();
    if header.len() < 2 {
        return Err(Error::Csv {
            path: origin.display().to_string(),
            message: "header must be `date,<ticker>,...`".into(),
        });
    }
    let tickers: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let mut seen = HashSet::new();
    for t in &tickers {
        if t.is_empty() {
            return Err(Error::Csv {
                path: origin.display().to_string(),
                message: "empty ticker name in header".into(),
            });
        }
        if !seen.insert(t.as_str()) {
            return Err(Error::DuplicateTicker(t.clone()));
        }
    }

    let mut dates = Vec::new();
    let mut columns: Vec<Vec<Option<f64>>> = vec![Vec::new(); tickers.len()];
    for (i, rec) in rdr.records().enumerate() {
        let row = i + 1;
        let rec = rec.map_err(|e| csv_err(origin, e))?;
        if rec.len() != header.len() {
            return Err(Error::Parse {
                row,
                column: "*".into(),
                message: format!("expected {} fields, found {}", header.len(), rec.len()),
            });
        }
        let date = rec[0].to_string();
        check_date(&date, row)?;
        if let Some(prev) = dates.last() {
            if &date <= prev {
                return Err(Error::NonMonotoneDates { row, date });
            }
        }
        dates.push(date);
        for (j, cell) in rec.iter().skip(1).enumerate() {
            let v = if cell.is_empty() || cell == "NA" {
                None
            } else {
                let x: f64 = cell.parse().map_err(|_| Error::Parse {
                    row,
                    column: tickers[j].clone(),
                    message: format!("\"{cell}\" is not a decimal price"),
                })?;
                if !(x > 0.0) || !x.is_finite() {
                    return Err(Error::Parse {
                        row,
                        column: tickers[j].clone(),
                        message: format!("price must be positive (got {cell})"),
                    });
                }
                Some(x)
            };
            columns[j].push(v);
        }
    }
    if dates.is_empty() {
        return Err(Error::NoObservations);
    }
    Ok(PriceMatrix {
        dates,
        tickers,
        columns,
    })
}

pub fn load_prices(path: impl AsRef<Path>) -> Result<PriceMatrix> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| io_err(path, e))?;
    parse_prices(std::io::BufReader::new(file), path)
}

/// Reads `ticker,sector,subsector`.
pub fn load_sectors(path: impl AsRef<Path>) -> Result<SectorMap> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| io_err(path, e))?;
    parse_sectors(std::io::BufReader::new(file), path)
}

pub fn parse_sectors<R: std::io::Read>(reader: R, origin: &Path) -> Result<SectorMap> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let mut map = SectorMap::default();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| csv_err(origin, e))?;
        if rec.len() < 2 {
            return Err(Error::Parse {
                row: i + 1,
                column: "sector".into(),
                message: "expected `ticker,sector,subsector`".into(),
            });
        }
        let sub = rec.get(2).unwrap_or("");
        if map.0.contains_key(&rec[0]) {
            return Err(Error::DuplicateTicker(rec[0].to_string()));
        }
        map.insert(&rec[0], &rec[1], sub);
    }
    Ok(map)
}

fn to_csv_bytes(records: impl Iterator<Item = Vec<String>>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for rec in records {
        w.write_record(&rec).expect("writing to memory");
    }
    w.into_inner().expect("writing to memory")
}

pub fn sectors_to_csv(sectors: &SectorMap) -> Vec<u8> {
    let header = std::iter::once(vec!["ticker".into(), "sector".into(), "subsector".into()]);
    to_csv_bytes(header.chain(
        sectors
            .0
            .iter()
            .map(|(t, info)| vec![t.clone(), info.sector.clone(), info.subsector.clone()]),
    ))
}

/// Missing prices are written as `NA`.
pub fn prices_to_csv(prices: &PriceMatrix) -> Vec<u8> {
    let mut header = vec!["date".to_string()];
    header.extend(prices.tickers.iter().cloned());
    let rows = prices.dates.iter().enumerate().map(|(t, date)| {
        let mut rec = vec![date.clone()];
        rec.extend(prices.columns.iter().map(|c| match c[t] {
            Some(v) => format!("{v}"),
            None => "NA".to_string(),
        }));
        rec
    });
    to_csv_bytes(std::iter::once(header).chain(rows))
}

pub fn write_sectors(path: impl AsRef<Path>, sectors: &SectorMap) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, sectors_to_csv(sectors)).map_err(|e| io_err(path, e))
}

pub fn write_prices(path: impl AsRef<Path>, prices: &PriceMatrix) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, prices_to_csv(prices)).map_err(|e| io_err(path, e))
}

/// Keeps the columns whose missing fraction is at most `max_missing_frac`.
pub fn filter_by_completeness(p: &PriceMatrix, max_missing_frac: f64) -> Result<PriceMatrix> {
    if !(0.0..=1.0).contains(&max_missing_frac) {
        return Err(Error::InvalidArgument(format!(
            "missing fraction threshold must lie in [0, 1] (got {max_missing_frac})"
        )));
    }
    let n = p.rows() as f64;
    let mut out = PriceMatrix {
        dates: p.dates.clone(),
        tickers: Vec::new(),
        columns: Vec::new(),
    };
    for (t, col) in p.tickers.iter().zip(&p.columns) {
        let missing = col.iter().filter(|v| v.is_none()).count() as f64;
        if missing / n <= max_missing_frac {
            out.tickers.push(t.clone());
            out.columns.push(col.clone());
        }
    }
    if out.tickers.is_empty() {
        return Err(Error::NoColumnsRemain);
    }
    Ok(out)
}

fn fill_column(ticker: &str, col: &[Option<f64>]) -> Result<Vec<Option<f64>>> {
    let present: Vec<usize> = (0..col.len()).filter(|&i| col[i].is_some()).collect();
    let (first, last) = match (present.first(), present.last()) {
        (Some(&f), Some(&l)) => (f, l),
        _ => return Err(Error::AllMissing(ticker.to_string())),
    };
    let mut out = col.to_vec();
    for v in out.iter_mut().take(first) {
        *v = col[first];
    }
    for v in out.iter_mut().skip(last + 1) {
        *v = col[last];
    }
    for w in present.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b > a + 1 {
            let (va, vb) = (col[a].unwrap(), col[b].unwrap());
            for (i, v) in out.iter_mut().enumerate().take(b).skip(a + 1) {
                let s = (i - a) as f64 / (b - a) as f64;
                *v = Some(va + s * (vb - va));
            }
        }
    }
    Ok(out)
}

/// Linear interpolation (in row index) across interior gaps; leading and
/// trailing gaps repeat the nearest present value.
pub fn fill_missing(p: &PriceMatrix) -> Result<PriceMatrix> {
    let columns = p
        .tickers
        .iter()
        .zip(&p.columns)
        .map(|(t, c)| fill_column(t, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(PriceMatrix {
        dates: p.dates.clone(),
        tickers: p.tickers.clone(),
        columns,
    })
}

/// `X[t, j] = -ln(S[t, j] / S[t-1, j])`; a price drop gives a positive value.
pub fn neg_log_returns(p: &PriceMatrix) -> Result<ReturnMatrix> {
    if p.rows() < 2 {
        return Err(Error::Degenerate(format!(
            "need at least 2 price rows for returns (got {})",
            p.rows()
        )));
    }
    let mut columns = Vec::with_capacity(p.columns.len());
    for (t, col) in p.tickers.iter().zip(&p.columns) {
        let vals: Vec<f64> = col
            .iter()
            .map(|v| v.ok_or_else(|| Error::MissingValues(t.clone())))
            .collect::<Result<_>>()?;
        columns.push(vals.windows(2).map(|w| -(w[1] / w[0]).ln()).collect());
    }
    Ok(ReturnMatrix {
        dates: p.dates[1..].to_vec(),
        tickers: p.tickers.clone(),
        columns,
    })
}

/// Inverse of [`neg_log_returns`]: prices from a starting level and returns.
pub fn prices_from_returns(start: &[f64], r: &ReturnMatrix, first_date: &str) -> PriceMatrix {
    let mut dates = vec![first_date.to_string()];
    dates.extend(r.dates.iter().cloned());
    let columns = r
        .columns
        .iter()
        .zip(start)
        .map(|(col, &s0)| {
            let mut out = Vec::with_capacity(col.len() + 1);
            let mut log_s = s0.ln();
            out.push(Some(s0));
            for x in col {
                log_s -= x;
                out.push(Some(log_s.exp()));
            }
            out
        })
        .collect();
    PriceMatrix {
        dates,
        tickers: r.tickers.clone(),
        columns,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parse(s: &str) -> Result<PriceMatrix> {
        parse_prices(s.as_bytes(), Path::new("mem.csv"))
    }

    fn pm(cols: Vec<Vec<Option<f64>>>) -> PriceMatrix {
        let n = cols[0].len();
        PriceMatrix {
            dates: (0..n).map(|i| format!("2020-01-{:02}", i + 1)).collect(),
            tickers: (0..cols.len()).map(|j| format!("T{j}")).collect(),
            columns: cols,
        }
    }

    #[test]
    fn parses_na_cells() {
        let p = parse("date,A,B\n2020-01-01,1.0,2\n2020-01-02,NA,2.5\n2020-01-03,1.2,\n").unwrap();
        assert_eq!(p.missing_count(), 2);
        let p = parse("date,A,B\n2020-01-01,1.0,2\n2020-01-02,NA,2.5\n2020-01-03,1.2,3\n").unwrap();
        assert_eq!(p.missing_count(), 1);
        assert_eq!(p.columns[0][1], None);
    }

    #[test]
    fn header_only_is_an_error() {
        let e = parse("date,A,B\n").unwrap_err();
        assert_eq!(e.to_string(), "no observations");
    }

    #[test]
    fn bad_cell_names_row_and_column() {
        let e = parse("date,ABC,XYZ\n2020-01-01,1,2\n2020-01-02,3,abc\n").unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("row 2") && msg.contains("XYZ"), "{msg}");
    }

    #[test]
    fn lowercase_na_is_rejected() {
        assert!(parse("date,A\n2020-01-01,na\n").is_err());
    }

    #[test]
    fn duplicate_ticker_and_bad_dates() {
        assert!(matches!(
            parse("date,A,A\n2020-01-01,1,2\n"),
            Err(Error::DuplicateTicker(_))
        ));
        assert!(matches!(
            parse("date,A\n2020-01-02,1\n2020-01-01,2\n"),
            Err(Error::NonMonotoneDates { row: 2, .. })
        ));
        assert!(parse("date,A\n01/02/2020,1\n").is_err());
        assert!(parse("date,A\n2020-01-01,-3\n").is_err());
    }

    #[test]
    fn completeness_filter() {
        let mut c1 = vec![Some(1.0); 10];
        for v in c1.iter_mut().take(3) {
            *v = None;
        }
        let p = pm(vec![c1, vec![Some(2.0); 10]]);
        let f = filter_by_completeness(&p, 0.2).unwrap();
        assert_eq!(f.tickers, vec!["T1"]);
        assert_eq!(filter_by_completeness(&p, 1.0).unwrap(), p);
        let all_gone = pm(vec![vec![None, Some(1.0)]]);
        assert!(matches!(
            filter_by_completeness(&all_gone, 0.2),
            Err(Error::NoColumnsRemain)
        ));
    }

    #[test]
    fn fill_examples() {
        let p = pm(vec![
            vec![Some(1.0), None, Some(3.0), Some(3.0)],
            vec![None, None, Some(5.0), Some(7.0)],
            vec![Some(4.0), None, None, Some(10.0)],
        ]);
        let f = fill_missing(&p).unwrap();
        let vals = |j: usize| f.columns[j].iter().map(|v| v.unwrap()).collect::<Vec<_>>();
        assert_eq!(vals(0), vec![1.0, 2.0, 3.0, 3.0]);
        assert_eq!(vals(1), vec![5.0, 5.0, 5.0, 7.0]);
        // linear interpolant from (0, 4) to (3, 10) has slope 2
        assert_eq!(vals(2), vec![4.0, 6.0, 8.0, 10.0]);
    }

    #[test]
    fn fill_rejects_empty_column() {
        let p = pm(vec![vec![Some(1.0), Some(2.0)], vec![None, None]]);
        let e = fill_missing(&p).unwrap_err();
        assert!(e.to_string().contains("T1"));
    }

    #[test]
    fn returns_examples() {
        let p = pm(vec![vec![Some(5.0); 4], vec![Some(100.0), Some(90.0), Some(90.0), Some(90.0)]]);
        let r = neg_log_returns(&p).unwrap();
        assert_eq!(r.rows(), 3);
        assert!(r.columns[0].iter().all(|&x| x == 0.0));
        // -ln(0.9) = 0.1053605156578263 (independent evaluation)
        assert!((r.columns[1][0] - 0.105_360_515_657_826_3).abs() < 1e-15);
        assert!(r.columns[1][0] > 0.0);

        let long = pm(vec![(0..756).map(|i| Some(10.0 + i as f64)).collect()]);
        assert_eq!(neg_log_returns(&long).unwrap().rows(), 755);

        assert!(neg_log_returns(&pm(vec![vec![Some(1.0)]])).is_err());
        assert!(matches!(
            neg_log_returns(&pm(vec![vec![Some(1.0), None]])),
            Err(Error::MissingValues(_))
        ));
    }

    fn col_strategy() -> impl Strategy<Value = Vec<Option<f64>>> {
        proptest::collection::vec(proptest::option::weighted(0.7, 0.5f64..500.0), 2..40)
            .prop_filter("needs a present value", |c| c.iter().any(|v| v.is_some()))
    }

    proptest! {
        #[test]
        fn fill_is_idempotent_and_keeps_present_values(col in col_strategy()) {
            let p = pm(vec![col.clone()]);
            let f = fill_missing(&p).unwrap();
            prop_assert_eq!(&fill_missing(&f).unwrap(), &f);
            prop_assert!(f.columns[0].iter().all(|v| v.is_some()));
            for (a, b) in col.iter().zip(&f.columns[0]) {
                if let Some(a) = a {
                    prop_assert_eq!(Some(*a), *b);
                }
            }
        }

        #[test]
        fn filter_keeps_a_subsequence(cols in proptest::collection::vec(col_strategy().prop_map(|mut c| { c.resize(12, None); c }), 1..8), thr in 0.0f64..1.0) {
            let p = pm(cols);
            if let Ok(f) = filter_by_completeness(&p, thr) {
                let mut it = p.tickers.iter();
                for t in &f.tickers {
                    prop_assert!(it.any(|x| x == t));
                }
            }
        }

        #[test]
        fn returns_round_trip(rets in proptest::collection::vec(-0.2f64..0.2, 1..60), s0 in 1.0f64..1000.0) {
            let r = ReturnMatrix {
                dates: (0..rets.len()).map(|i| format!("d{i:04}")).collect(),
                tickers: vec!["A".into()],
                columns: vec![rets.clone()],
            };
            let p = prices_from_returns(&[s0], &r, "d");
            let back = neg_log_returns(&p).unwrap();
            for (a, b) in back.columns[0].iter().zip(&rets) {
                prop_assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
            }
        }
    }
}
