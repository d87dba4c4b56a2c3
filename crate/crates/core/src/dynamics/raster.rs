use serde::Serialize;

use super::orbit::{iterate, OrbitSpec};
use crate::error::{Error, Result};
use crate::maps::SkewSystem;

pub const MIN_RASTER_SIDE: usize = 16;

/// Orbit occupation counts on a uniform `nx × ny` grid; cell `(i, j)` holds
/// points with `x ∈ [i/nx, (i+1)/nx)` and `y ∈ [j/ny, (j+1)/ny)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityRaster {
    nx: usize,
    ny: usize,
    /// Row-major in `j`: index `j * nx + i`.
    counts: Vec<u64>,
    total: u64,
}

impl DensityRaster {
    pub fn new(nx: usize, ny: usize) -> Self {
        Self {
            nx,
            ny,
            counts: vec![0; nx * ny],
            total: 0,
        }
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.counts[j * self.nx + i]
    }

    pub fn record(&mut self, x: f64, y: f64) {
        let i = ((x * self.nx as f64) as usize).min(self.nx - 1);
        let j = ((y * self.ny as f64) as usize).min(self.ny - 1);
        self.counts[j * self.nx + i] += 1;
        self.total += 1;
    }

    pub fn max_count(&self) -> u64 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    pub fn row_totals(&self) -> Vec<u64> {
        self.counts
            .chunks(self.nx)
            .map(|row| row.iter().sum())
            .collect()
    }

    /// Largest fraction of mass inside a horizontal band of height at most
    /// `height`, wrapping around `y = 1`.
    pub fn max_band_fraction(&self, height: f64) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        let rows = self.row_totals();
        let w = ((height * self.ny as f64).floor() as usize).clamp(1, self.ny);
        let mut window: u64 = rows[..w].iter().sum();
        let mut best = window;
        for start in 1..self.ny {
            window = window + rows[(start + w - 1) % self.ny] - rows[start - 1];
            best = best.max(window);
        }
        best as f64 / self.total as f64
    }

    /// Number of the `bands` equal horizontal bands `[b/bands, (b+1)/bands)`
    /// containing at least one point.
    pub fn nonempty_bands(&self, bands: usize) -> usize {
        let rows = self.row_totals();
        let mut mass = vec![0u64; bands];
        for (j, &r) in rows.iter().enumerate() {
            mass[j * bands / self.ny] += r;
        }
        mass.iter().filter(|&&m| m > 0).count()
    }

    pub fn nonzero_rows(&self) -> usize {
        self.row_totals().iter().filter(|&&r| r > 0).count()
    }
}

pub fn orbit_raster(system: &SkewSystem, spec: &OrbitSpec, nx: usize, ny: usize) -> Result<DensityRaster> {
    if nx < MIN_RASTER_SIDE || ny < MIN_RASTER_SIDE {
        return Err(Error::InvalidInput(format!(
            "raster sides must be at least {MIN_RASTER_SIDE}, got {nx}x{ny}"
        )));
    }
    let mut raster = DensityRaster::new(nx, ny);
    for p in iterate(system, spec) {
        raster.record(p.x(), p.y());
    }
    Ok(raster)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::TorusPoint;

    #[test]
    fn fixed_point_fills_one_cell() {
        let f = SkewSystem::experimental(-0.01, 0.01, 7).unwrap();
        let spec = OrbitSpec::from_point(TorusPoint::new(0.0, 0.0)).with_length(500);
        let r = orbit_raster(&f, &spec, 16, 16).unwrap();
        assert_eq!(r.get(0, 0), 500);
        assert_eq!(r.counts().iter().filter(|&&c| c > 0).count(), 1);
        assert_eq!(r.total(), 500);
    }

    #[test]
    fn counts_sum_to_total() {
        let f = SkewSystem::experimental(0.004, 0.01, 7).unwrap();
        let r = orbit_raster(&f, &OrbitSpec::random(3).with_length(20_000), 32, 64).unwrap();
        assert_eq!(r.counts().iter().sum::<u64>(), r.total());
        assert_eq!(r.total(), 20_000);
    }

    #[test]
    fn band_window_wraps() {
        let mut r = DensityRaster::new(16, 100);
        r.record(0.5, 0.995);
        r.record(0.5, 0.005);
        assert_eq!(r.max_band_fraction(0.02), 1.0);
        assert_eq!(r.max_band_fraction(0.01), 0.5);
    }

    #[test]
    fn small_rasters_rejected() {
        let f = SkewSystem::experimental(0.0, 0.01, 7).unwrap();
        assert!(orbit_raster(&f, &OrbitSpec::random(0), 8, 64).is_err());
    }
}
