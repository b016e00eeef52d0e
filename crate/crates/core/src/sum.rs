//! Compensated (Neumaier) summation.
//!
//! Every reduction over circle samples, radial nodes or frame blocks goes
//! through [`CompensatedSum`] so that results do not depend on summation
//! order beyond the last couple of ulps.

use core::iter::FromIterator;
use core::ops::AddAssign;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub const fn new() -> Self {
        Self { sum: 0.0, carry: 0.0 }
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl AddAssign<f64> for CompensatedSum {
    fn add_assign(&mut self, rhs: f64) {
        self.add(rhs);
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated sum of an iterator of reals.
pub fn sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_mass() {
        let xs = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(sum(xs.iter().copied()), 2.0);
    }

    #[test]
    fn order_insensitive_on_harmonic_terms() {
        let fwd = sum((1..=100_000).map(|n| 1.0 / n as f64));
        let rev = sum((1..=100_000).rev().map(|n| 1.0 / n as f64));
        assert!((fwd - rev).abs() <= 1e-15 * fwd);
    }
}
