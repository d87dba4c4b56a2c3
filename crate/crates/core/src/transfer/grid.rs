use serde::{Deserialize, Serialize};

/// Cell partition the operator acts on.
///
/// Circle grids index fiber cells `[j/n, (j+1)/n)`. Torus grids index cell
/// `(i, j)` as `j * nx + i`, the same layout as a density raster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum UlamGrid {
    Circle { n: usize },
    Torus { nx: usize, ny: usize },
}

impl UlamGrid {
    pub fn len(&self) -> usize {
        match *self {
            UlamGrid::Circle { n } => n,
            UlamGrid::Torus { nx, ny } => nx * ny,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(nx, ny)`; a circle grid counts as one column of fiber cells.
    pub fn dims(&self) -> (usize, usize) {
        match *self {
            UlamGrid::Circle { n } => (1, n),
            UlamGrid::Torus { nx, ny } => (nx, ny),
        }
    }

    /// Cell centre `(x, y)`. Circle cells report `x = 0`.
    pub fn center(&self, j: usize) -> (f64, f64) {
        match *self {
            UlamGrid::Circle { n } => (0.0, (j as f64 + 0.5) / n as f64),
            UlamGrid::Torus { nx, ny } => (
                ((j % nx) as f64 + 0.5) / nx as f64,
                ((j / nx) as f64 + 0.5) / ny as f64,
            ),
        }
    }

    /// Index of the cell containing `(x, y)`, both in `[0, 1)`.
    #[inline]
    pub fn locate(&self, x: f64, y: f64) -> usize {
        let (nx, ny) = self.dims();
        let i = ((x * nx as f64) as usize).min(nx - 1);
        let j = ((y * ny as f64) as usize).min(ny - 1);
        j * nx + i
    }

    /// Lebesgue measure of one cell.
    pub fn cell_area(&self) -> f64 {
        1.0 / self.len() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centers_and_locate_agree() {
        let g = UlamGrid::Torus { nx: 8, ny: 4 };
        for j in 0..g.len() {
            let (x, y) = g.center(j);
            assert_eq!(g.locate(x, y), j);
        }
        let c = UlamGrid::Circle { n: 5 };
        assert_eq!(c.center(2), (0.0, 0.5));
        assert_eq!(c.locate(0.3, 0.99), 4);
    }
}
