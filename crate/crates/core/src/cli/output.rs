use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::bifurcation::{SweepRecord, SweepTable};
use crate::dynamics::DensityRaster;
use crate::error::{Error, Result};

/// One CSV cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Float(f64),
    Int(u64),
    Bool(bool),
    Text(String),
}

impl Field {
    /// Floats use 17 significant digits in scientific notation, which
    /// round-trips every `f64` exactly.
    pub fn render(&self) -> String {
        match self {
            Field::Float(v) => format!("{v:.16e}"),
            Field::Int(v) => v.to_string(),
            Field::Bool(v) => v.to_string(),
            Field::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Float(v)
    }
}

impl From<u64> for Field {
    fn from(v: u64) -> Self {
        Field::Int(v)
    }
}

impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::Int(v as u64)
    }
}

impl From<u32> for Field {
    fn from(v: u32) -> Self {
        Field::Int(v as u64)
    }
}

impl From<bool> for Field {
    fn from(v: bool) -> Self {
        Field::Bool(v)
    }
}

impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::Text(v.to_string())
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).map_err(|e| Error::io(path, e))?))
}

/// Header line, then one line per row; comma separated, LF endings.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<Field>]) -> Result<()> {
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    writeln!(w, "{}", header.join(",")).map_err(io)?;
    for row in rows {
        let line: Vec<String> = row.iter().map(Field::render).collect();
        writeln!(w, "{}", line.join(",")).map_err(io)?;
    }
    w.flush().map_err(io)
}

pub const SWEEP_HEADER: [&str; 4] = ["a", "chi_c", "n_iter", "seed"];

pub fn sweep_rows(table: &SweepTable) -> Vec<Vec<Field>> {
    table
        .records
        .iter()
        .map(|r| vec![r.a.into(), r.chi_c.into(), r.n_iter.into(), r.seed.into()])
        .collect()
}

pub fn write_sweep_csv(table: &SweepTable, path: &Path) -> Result<()> {
    write_csv(path, &SWEEP_HEADER, &sweep_rows(table))
}

/// Reads back a file written by [`write_sweep_csv`].
pub fn read_sweep_csv(path: &Path) -> Result<Vec<SweepRecord>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines();
    if lines.next() != Some(SWEEP_HEADER.join(",").as_str()) {
        return Err(Error::InvalidInput(format!("{}: unexpected header", path.display())));
    }
    lines
        .map(|line| {
            let bad = || Error::InvalidInput(format!("{}: malformed row '{line}'", path.display()));
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 4 {
                return Err(bad());
            }
            Ok(SweepRecord {
                a: f[0].parse().map_err(|_| bad())?,
                chi_c: f[1].parse().map_err(|_| bad())?,
                n_iter: f[2].parse().map_err(|_| bad())?,
                seed: f[3].parse().map_err(|_| bad())?,
            })
        })
        .collect()
}

/// Whitespace-separated `a chi_c` columns for gnuplot.
pub fn write_gnuplot(table: &SweepTable, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    writeln!(w, "# a chi_c").map_err(io)?;
    for r in &table.records {
        writeln!(w, "{:.16e} {:.16e}", r.a, r.chi_c).map_err(io)?;
    }
    w.flush().map_err(io)
}

/// Pixel values of the raster, top row first (`y` near 1 at the top).
pub fn pgm_pixels(raster: &DensityRaster, gamma: f64) -> Vec<u8> {
    let (nx, ny) = (raster.nx(), raster.ny());
    let max = raster.max_count();
    let mut out = Vec::with_capacity(nx * ny);
    for row in 0..ny {
        let j = ny - 1 - row;
        for i in 0..nx {
            let c = raster.get(i, j);
            let v = if max == 0 {
                0.0
            } else {
                (255.0 * (c as f64 / max as f64).powf(gamma)).round()
            };
            out.push(v as u8);
        }
    }
    out
}

/// Binary greyscale PGM (`P5`, maxval 255).
pub fn write_pgm(raster: &DensityRaster, path: &Path, gamma: f64) -> Result<()> {
    if !(gamma > 0.0) {
        return Err(Error::InvalidInput(format!("gamma must be positive, got {gamma}")));
    }
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    write!(w, "P5\n{} {}\n255\n", raster.nx(), raster.ny()).map_err(io)?;
    w.write_all(&pgm_pixels(raster, gamma)).map_err(io)?;
    w.flush().map_err(io)
}

/// Pretty JSON with a trailing newline; key order follows the struct.
pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::InvalidInput(format!("cannot serialise {}: {e}", path.display())))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(n: usize) -> SweepTable {
        SweepTable {
            records: (0..n)
                .map(|k| SweepRecord {
                    a: -0.02 + k as f64 * 1e-3,
                    chi_c: (k as f64 * 0.37).sin() / 3.0,
                    n_iter: 1_000_000,
                    seed: u64::MAX - k as u64,
                })
                .collect(),
            family_id: "t".into(),
            step: 1e-3,
        }
    }

    #[test]
    fn empty_table_is_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.csv");
        write_sweep_csv(&table(0), &p).unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "a,chi_c,n_iter,seed\n");
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.csv");
        let t = table(41);
        write_sweep_csv(&t, &p).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert_eq!(text.lines().count(), 42);
        assert!(!text.contains('\r'));
        assert_eq!(read_sweep_csv(&p).unwrap(), t.records);
    }

    #[test]
    fn float_format_has_seventeen_digits() {
        assert_eq!(Field::Float(0.1).render(), "1.0000000000000001e-1");
        assert_eq!(Field::Float(-2.5).render(), "-2.5000000000000000e0");
    }

    #[test]
    fn pgm_edge_cases() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.pgm");
        let zero = DensityRaster::new(16, 16);
        write_pgm(&zero, &p, 0.5).unwrap();
        let bytes = std::fs::read(&p).unwrap();
        assert!(bytes.starts_with(b"P5\n16 16\n255\n"));
        assert!(bytes[13..].iter().all(|&b| b == 0));

        let mut one = DensityRaster::new(16, 16);
        one.record(0.0, 0.99);
        let px = pgm_pixels(&one, 0.5);
        assert_eq!(px.iter().filter(|&&b| b != 0).count(), 1);
        // y near 1 lands in the top row
        assert_eq!(px[0], 255);
        assert!(write_pgm(&one, &p, 0.0).is_err());
    }
}
