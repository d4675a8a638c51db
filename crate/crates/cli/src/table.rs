//! Rectangular result tables and their CSV form.
//!
//! Reals are written with 17 significant digits (`{:.16e}`), which parses
//! back to the identical `f64`. Missing values are written as `NA`.

use std::fmt;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(i64),
    Text(String),
    Missing,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Missing, Into::into)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Real(v) if v.is_nan() => f.write_str("NaN"),
            Cell::Real(v) if v.is_infinite() => f.write_str(if *v > 0.0 { "inf" } else { "-inf" }),
            Cell::Real(v) => write!(f, "{v:.16e}"),
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Text(s) => f.write_str(s),
            Cell::Missing => f.write_str("NA"),
        }
    }
}

impl Cell {
    /// Inverse of `Display`. Integers never contain an exponent, reals always
    /// do (or are one of `NaN`, `inf`, `-inf`).
    pub fn parse(s: &str) -> Cell {
        match s {
            "NA" => return Cell::Missing,
            "NaN" => return Cell::Real(f64::NAN),
            "inf" => return Cell::Real(f64::INFINITY),
            "-inf" => return Cell::Real(f64::NEG_INFINITY),
            _ => {}
        }
        if let Ok(i) = s.parse::<i64>() {
            return Cell::Int(i);
        }
        if s.contains(['e', 'E']) {
            if let Ok(v) = s.parse::<f64>() {
                return Cell::Real(v);
            }
        }
        Cell::Text(s.to_string())
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Real(v) => Some(*v),
            Cell::Int(i) => Some(*i as f64),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl ResultTable {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.columns.len() {
            bail!("row has {} cells, table has {} columns", row.len(), self.columns.len());
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }

    pub fn to_csv_bytes(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.to_string()))?;
        }
        Ok(w.into_inner().map_err(|e| e.into_error())?)
    }

    pub fn from_csv_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = csv::Reader::from_reader(bytes);
        let mut table = Self::new(r.headers()?.iter().map(str::to_string));
        for record in r.records() {
            table.push(record?.iter().map(Cell::parse).collect())?;
        }
        Ok(table)
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_csv_bytes(&bytes)
    }
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Named tables produced by one command.
pub type Outputs = Vec<(String, ResultTable)>;

/// Serialises every table first, then writes each atomically.
pub fn write_outputs(dir: &Path, outputs: &Outputs) -> Result<()> {
    let encoded = outputs
        .iter()
        .map(|(name, t)| Ok((dir.join(name), t.to_csv_bytes()?)))
        .collect::<Result<Vec<_>>>()?;
    for (path, bytes) in encoded {
        write_atomic(&path, &bytes)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn formats_reals_with_seventeen_digits() {
        assert_eq!(Cell::Real(0.1).to_string(), "1.0000000000000001e-1");
        assert_eq!(Cell::Real(f64::INFINITY).to_string(), "inf");
        assert_eq!(Cell::from(None::<usize>).to_string(), "NA");
    }

    #[test]
    fn rejects_ragged_rows() {
        let mut t = ResultTable::new(["a", "b"]);
        assert!(t.push(vec![Cell::Int(1)]).is_err());
    }

    #[test]
    fn quotes_text_with_commas() {
        let mut t = ResultTable::new(["name", "v"]);
        t.push(vec!["exponential_power(4/3), far".into(), 1.5.into()]).unwrap();
        let back = ResultTable::from_csv_bytes(&t.to_csv_bytes().unwrap()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn atomic_write_replaces_whole_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sub").join("t.csv");
        write_atomic(&path, b"first").unwrap();
        write_atomic(&path, b"second").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"second");
        assert_eq!(std::fs::read_dir(path.parent().unwrap()).unwrap().count(), 1);
    }

    proptest! {
        #[test]
        fn csv_round_trip_is_lossless(
            reals in prop::collection::vec(any::<f64>().prop_filter("finite", |v| v.is_finite()), 1..20),
            ints in prop::collection::vec(any::<i64>(), 1..20),
        ) {
            let mut t = ResultTable::new(["x", "n", "label"]);
            for (i, (&x, &n)) in reals.iter().zip(&ints).enumerate() {
                t.push(vec![Cell::Real(x), Cell::Int(n), Cell::Text(format!("row {i}"))]).unwrap();
            }
            let back = ResultTable::from_csv_bytes(&t.to_csv_bytes().unwrap()).unwrap();
            for (a, b) in t.rows().iter().zip(back.rows()) {
                prop_assert_eq!(a[0].as_f64().unwrap().to_bits(), b[0].as_f64().unwrap().to_bits());
            }
            prop_assert_eq!(back, t);
        }
    }
}
