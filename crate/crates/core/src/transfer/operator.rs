use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use nalgebra::DMatrix;
use serde::Serialize;

use super::grid::UlamGrid;
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"ULAM";
pub const DUMP_VERSION: u32 = 1;

/// How the matrix entries were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UlamScheme {
    /// Stratified forward samples per cell.
    Sampled,
    /// Exact overlaps through preimages of cell boundaries (circle only).
    Exact,
    /// Base direction by stratified midpoints, fiber overlaps exact.
    FiberExact,
}

/// Sparse column-stochastic matrix: column `j` is the pushforward of the
/// uniform density on cell `j`. Stored in compressed-column form.
#[derive(Debug, Clone)]
pub struct UlamOperator {
    grid: UlamGrid,
    col_ptr: Vec<usize>,
    row_idx: Vec<u32>,
    values: Vec<f64>,
    scheme: UlamScheme,
    samples_per_cell: usize,
    seed: u64,
}

impl UlamOperator {
    /// Builds from per-column `(row, value)` lists. Rows within a column are
    /// sorted and duplicates merged.
    pub(crate) fn from_columns(
        grid: UlamGrid,
        columns: Vec<Vec<(u32, f64)>>,
        scheme: UlamScheme,
        samples_per_cell: usize,
        seed: u64,
    ) -> Self {
        let nnz_hint: usize = columns.iter().map(Vec::len).sum();
        let mut col_ptr = Vec::with_capacity(columns.len() + 1);
        let mut row_idx = Vec::with_capacity(nnz_hint);
        let mut values = Vec::with_capacity(nnz_hint);
        col_ptr.push(0);
        for mut col in columns {
            col.sort_by_key(|e| e.0);
            for (r, v) in col {
                if row_idx.len() > *col_ptr.last().unwrap() && *row_idx.last().unwrap() == r {
                    *values.last_mut().unwrap() += v;
                } else {
                    row_idx.push(r);
                    values.push(v);
                }
            }
            col_ptr.push(row_idx.len());
        }
        Self {
            grid,
            col_ptr,
            row_idx,
            values,
            scheme,
            samples_per_cell,
            seed,
        }
    }

    pub fn grid(&self) -> UlamGrid {
        self.grid
    }

    pub fn n(&self) -> usize {
        self.col_ptr.len() - 1
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn scheme(&self) -> UlamScheme {
        self.scheme
    }

    /// Samples actually drawn per cell, after rounding up to the stratification.
    pub fn samples_per_cell(&self) -> usize {
        self.samples_per_cell
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `(row, value)` pairs of column `j`, rows ascending.
    pub fn column(&self, j: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.col_ptr[j]..self.col_ptr[j + 1];
        self.row_idx[r.clone()]
            .iter()
            .zip(&self.values[r])
            .map(|(&i, &v)| (i as usize, v))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.column(j).find(|e| e.0 == i).map_or(0.0, |e| e.1)
    }

    pub fn column_sums(&self) -> Vec<f64> {
        (0..self.n()).map(|j| self.column(j).map(|e| e.1).sum()).collect()
    }

    /// `out = M v`.
    pub fn apply_into(&self, v: &[f64], out: &mut [f64]) {
        assert_eq!(v.len(), self.n());
        assert_eq!(out.len(), self.n());
        out.fill(0.0);
        for (j, &vj) in v.iter().enumerate() {
            if vj == 0.0 {
                continue;
            }
            for k in self.col_ptr[j]..self.col_ptr[j + 1] {
                out[self.row_idx[k] as usize] += self.values[k] * vj;
            }
        }
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n()];
        self.apply_into(v, &mut out);
        out
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.n();
        let mut m = DMatrix::zeros(n, n);
        for j in 0..n {
            for (i, v) in self.column(j) {
                m[(i, j)] += v;
            }
        }
        m
    }

    /// Writes the binary dump: `"ULAM"`, version, nx, ny (u32), nnz, seed
    /// (u64), then `(row u32, col u32, value f64)` triples; little-endian.
    pub fn write_binary(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        let (nx, ny) = self.grid.dims();
        let mut header = Vec::with_capacity(32);
        header.extend_from_slice(MAGIC);
        header.extend_from_slice(&DUMP_VERSION.to_le_bytes());
        header.extend_from_slice(&(nx as u32).to_le_bytes());
        header.extend_from_slice(&(ny as u32).to_le_bytes());
        header.extend_from_slice(&(self.nnz() as u64).to_le_bytes());
        header.extend_from_slice(&self.seed.to_le_bytes());
        w.write_all(&header).map_err(|e| Error::io(path, e))?;
        for j in 0..self.n() {
            for (i, v) in self.column(j) {
                let mut rec = [0u8; 16];
                rec[..4].copy_from_slice(&(i as u32).to_le_bytes());
                rec[4..8].copy_from_slice(&(j as u32).to_le_bytes());
                rec[8..].copy_from_slice(&v.to_le_bytes());
                w.write_all(&rec).map_err(|e| Error::io(path, e))?;
            }
        }
        w.flush().map_err(|e| Error::io(path, e))
    }

    /// Reads a dump written by [`write_binary`](Self::write_binary). A dump
    /// with `nx = 1` is read back as a circle grid.
    pub fn read_binary(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut r = BufReader::new(file);
        let mut header = [0u8; 32];
        r.read_exact(&mut header).map_err(|e| Error::io(path, e))?;
        if &header[..4] != MAGIC {
            return Err(Error::InvalidInput(format!("{}: not an Ulam dump", path.display())));
        }
        let u32_at = |k: usize| u32::from_le_bytes(header[k..k + 4].try_into().unwrap());
        let u64_at = |k: usize| u64::from_le_bytes(header[k..k + 8].try_into().unwrap());
        let version = u32_at(4);
        if version != DUMP_VERSION {
            return Err(Error::InvalidInput(format!(
                "{}: unsupported dump version {version}",
                path.display()
            )));
        }
        let (nx, ny) = (u32_at(8) as usize, u32_at(12) as usize);
        let nnz = u64_at(16) as usize;
        let seed = u64_at(24);
        let grid = if nx == 1 {
            UlamGrid::Circle { n: ny }
        } else {
            UlamGrid::Torus { nx, ny }
        };
        let mut columns = vec![Vec::new(); grid.len()];
        let mut rec = [0u8; 16];
        for _ in 0..nnz {
            r.read_exact(&mut rec).map_err(|e| Error::io(path, e))?;
            let i = u32::from_le_bytes(rec[..4].try_into().unwrap());
            let j = u32::from_le_bytes(rec[4..8].try_into().unwrap()) as usize;
            let v = f64::from_le_bytes(rec[8..].try_into().unwrap());
            if j >= columns.len() || i as usize >= columns.len() {
                return Err(Error::InvalidInput(format!("{}: index out of range", path.display())));
            }
            columns[j].push((i, v));
        }
        Ok(Self::from_columns(grid, columns, UlamScheme::Sampled, 0, seed))
    }
}
