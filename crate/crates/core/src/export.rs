//! Output formats and the on-disk results store.
//!
//! * b-file: one `n value` pair per line, increasing `n`.
//! * counts CSV: header `n,G,H,ratio` with `ratio = G(n)/G(n − 1)` (blank
//!   for the first row).

use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::bigcount::BigCount;

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// One row of the counts table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountRow {
    pub n: u32,
    pub g: BigCount,
    pub h: Option<BigCount>,
}

pub fn bfile_line(n: u32, value: &BigCount) -> String {
    format!("{n} {value}")
}

pub fn write_bfile<W: Write>(mut w: W, rows: &[(u32, BigCount)]) -> io::Result<()> {
    for (n, v) in rows {
        writeln!(w, "{}", bfile_line(*n, v))?;
    }
    Ok(())
}

/// Parses a b-file, skipping blank lines and `#` comments. Indices must be
/// strictly increasing.
pub fn parse_bfile<R: BufRead>(r: R) -> Result<Vec<(u32, BigCount)>, ExportError> {
    let mut out: Vec<(u32, BigCount)> = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let err = |msg: &str| ExportError::Parse {
            line: i + 1,
            msg: msg.to_string(),
        };
        let mut parts = t.split_whitespace();
        let (Some(n), Some(v), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(err("expected `n value`"));
        };
        let n: u32 = n.parse().map_err(|_| err("bad index"))?;
        let v: BigCount = v.parse().map_err(|_| err("bad value"))?;
        if out.last().is_some_and(|(m, _)| *m >= n) {
            return Err(err("indices must increase"));
        }
        out.push((n, v));
    }
    Ok(out)
}

/// `a / b` as a double, for counts of any size.
pub fn count_ratio(a: &BigCount, b: &BigCount) -> f64 {
    if b.is_zero() {
        return f64::NAN;
    }
    // scale both to the same exponent before dividing
    let shift = a.bits().max(b.bits()).saturating_sub(60);
    a.to_f64_scaled(shift) / b.to_f64_scaled(shift)
}

pub const COUNTS_HEADER: [&str; 4] = ["n", "G", "H", "ratio"];

pub fn write_counts_csv<W: Write>(w: W, rows: &[CountRow]) -> Result<(), ExportError> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(COUNTS_HEADER)?;
    let mut prev: Option<&CountRow> = None;
    for row in rows {
        csv.write_record(counts_record(row, prev))?;
        prev = Some(row);
    }
    csv.flush()?;
    Ok(())
}

/// Fields of one counts-CSV row; `prev` supplies `G(n − 1)`.
pub fn counts_record(row: &CountRow, prev: Option<&CountRow>) -> [String; 4] {
    let ratio = match prev {
        Some(p) if p.n + 1 == row.n => format!("{:.12}", count_ratio(&row.g, &p.g)),
        _ => String::new(),
    };
    [
        row.n.to_string(),
        row.g.to_string(),
        row.h.as_ref().map(ToString::to_string).unwrap_or_default(),
        ratio,
    ]
}

pub fn parse_counts_csv<R: io::Read>(r: R) -> Result<Vec<CountRow>, ExportError> {
    let mut csv = csv::Reader::from_reader(r);
    let header = csv.headers()?.clone();
    if header.iter().ne(COUNTS_HEADER) {
        return Err(ExportError::Parse {
            line: 1,
            msg: "expected header n,G,H,ratio".into(),
        });
    }
    let mut out = Vec::new();
    for (i, rec) in csv.records().enumerate() {
        let rec = rec?;
        let err = |msg: &str| ExportError::Parse {
            line: i + 2,
            msg: msg.to_string(),
        };
        let n = rec[0].parse().map_err(|_| err("bad n"))?;
        let g = rec[1].parse().map_err(|_| err("bad G"))?;
        let h = match &rec[2] {
            "" => None,
            s => Some(s.parse().map_err(|_| err("bad H"))?),
        };
        out.push(CountRow { n, g, h });
    }
    Ok(out)
}

/// A directory holding a `manifest.json` and append-only result files, so
/// long runs can be inspected or resumed after interruption.
#[derive(Clone, Debug)]
pub struct RunStore {
    dir: PathBuf,
}

impl RunStore {
    /// Creates the directory if needed and (re)writes the manifest.
    pub fn open<M: Serialize>(dir: &Path, manifest: &M) -> Result<Self, ExportError> {
        fs::create_dir_all(dir)?;
        let tmp = dir.join("manifest.json.partial");
        serde_json::to_writer_pretty(File::create(&tmp)?, manifest)?;
        fs::rename(&tmp, dir.join("manifest.json"))?;
        Ok(RunStore {
            dir: dir.to_path_buf(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Appends one line to `name` and flushes it.
    pub fn append(&self, name: &str, line: &str) -> Result<(), ExportError> {
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(self.dir.join(name))?;
        writeln!(f, "{line}")?;
        f.flush()?;
        Ok(())
    }

    /// Lines previously appended to `name` (empty if the file is missing).
    pub fn read_lines(&self, name: &str) -> Result<Vec<String>, ExportError> {
        match File::open(self.dir.join(name)) {
            Ok(f) => Ok(io::BufReader::new(f).lines().collect::<Result<_, _>>()?),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(Vec::new()),
            Err(e) => Err(e.into()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows() -> Vec<CountRow> {
        [(1u32, 1u64, 0u64), (2, 2, 0), (3, 4, 1), (4, 11, 3)]
            .iter()
            .map(|&(n, g, h)| CountRow {
                n,
                g: g.into(),
                h: Some(h.into()),
            })
            .collect()
    }

    #[test]
    fn bfile_round_trip() {
        let data: Vec<(u32, BigCount)> = rows().into_iter().map(|r| (r.n, r.g)).collect();
        let mut buf = Vec::new();
        write_bfile(&mut buf, &data).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap().lines().nth(2),
            Some("3 4")
        );
        assert_eq!(parse_bfile(buf.as_slice()).unwrap(), data);
        assert!(parse_bfile("2 1\n1 1\n".as_bytes()).is_err());
        assert!(parse_bfile("x 1\n".as_bytes()).is_err());
        assert_eq!(parse_bfile("# c\n\n5 7\n".as_bytes()).unwrap().len(), 1);
    }

    #[test]
    fn csv_round_trip() {
        let mut buf = Vec::new();
        write_counts_csv(&mut buf, &rows()).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("n,G,H,ratio\n1,1,0,\n2,2,0,2.000000000000\n"));
        assert_eq!(parse_counts_csv(buf.as_slice()).unwrap(), rows());
    }

    #[test]
    fn ratio_of_huge_counts() {
        let a = BigCount(num_bigint::BigUint::from(3u8) << 5000usize);
        let b = BigCount(num_bigint::BigUint::from(1u8) << 5000usize);
        assert!((count_ratio(&a, &b) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn run_store_appends() {
        let dir = tempfile::tempdir().unwrap();
        let store =
            RunStore::open(&dir.path().join("run"), &serde_json::json!({"cmd": "x"})).unwrap();
        store.append("counts.bfile", "1 1").unwrap();
        store.append("counts.bfile", "2 2").unwrap();
        assert_eq!(
            store.read_lines("counts.bfile").unwrap(),
            vec!["1 1", "2 2"]
        );
        assert!(store.read_lines("missing").unwrap().is_empty());
        assert!(store.dir().join("manifest.json").exists());
    }
}
