use std::ops::AddAssign;

/// Kahan–Babuška–Neumaier compensated accumulator.
///
/// Birkhoff sums of `log f'` over 10⁶ iterates sit near zero at the sign
/// change of the central exponent, so the plain running sum loses the digits
/// that matter.
#[derive(Debug, Default, Clone, Copy)]
pub struct NeumaierSum {
    s: f64,
    c: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn sum(&self) -> f64 {
        self.s + self.c
    }
}

impl AddAssign<f64> for NeumaierSum {
    #[inline]
    fn add_assign(&mut self, rhs: f64) {
        let t = self.s + rhs;
        if self.s.abs() >= rhs.abs() {
            self.c += (self.s - t) + rhs;
        } else {
            self.c += (rhs - t) + self.s;
        }
        self.s = t;
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = NeumaierSum::new();
        for v in iter {
            acc += v;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_small_terms_next_to_large_ones() {
        let mut s = NeumaierSum::new();
        s += 1e100;
        s += 1.0;
        s += -1e100;
        assert_eq!(s.sum(), 1.0);
    }

    #[test]
    fn beats_naive_sum_on_tenths() {
        let n = 1_000_000;
        let exact = 100_000.0;
        let naive: f64 = (0..n).map(|_| 0.1).sum();
        let comp: NeumaierSum = (0..n).map(|_| 0.1).collect();
        assert!((comp.sum() - exact).abs() <= (naive - exact).abs());
        assert!((comp.sum() - exact).abs() < 1e-9);
    }
}
