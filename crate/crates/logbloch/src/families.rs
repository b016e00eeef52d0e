//! Seeded test families.

use logbloch_core::{CoefficientSeries, Complex64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyKind {
    /// Positive increments `u_k (k+1)^{-e}` summed from the tail, `a_0 = 1`.
    RandomDecreasing,
    /// `e^{iθ_n}/(n+1)` with uniform phases.
    RandomPhases,
    /// Coefficients in `[1/2, 1]` at `n = 2^k`, zero elsewhere.
    Lacunary,
    /// `ρ^n` with `1 - ρ = 2^{-u}`, `u` uniform over the dyadic scales of the degree.
    GeometricLike,
    /// `log^{-ε-α}(n+2)`.
    Logpower { eps: f64, alpha: f64 },
}

impl FamilyKind {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::RandomDecreasing => "random_decreasing",
            FamilyKind::RandomPhases => "random_phases",
            FamilyKind::Lacunary => "lacunary",
            FamilyKind::GeometricLike => "geometric_like",
            FamilyKind::Logpower { .. } => "logpower",
        }
    }

    fn ordinal(&self) -> u64 {
        match self {
            FamilyKind::RandomDecreasing => 1,
            FamilyKind::RandomPhases => 2,
            FamilyKind::Lacunary => 3,
            FamilyKind::GeometricLike => 4,
            FamilyKind::Logpower { .. } => 5,
        }
    }

    /// Real, nonnegative and nonincreasing coefficients.
    pub fn is_decreasing(&self) -> bool {
        matches!(
            self,
            FamilyKind::RandomDecreasing | FamilyKind::GeometricLike | FamilyKind::Logpower { .. }
        )
    }

    pub fn is_nonnegative(&self) -> bool {
        !matches!(self, FamilyKind::RandomPhases)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFamilySpec {
    pub kind: FamilyKind,
    pub degree: usize,
    pub count: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyMember {
    pub kind: FamilyKind,
    pub index: usize,
    pub series: CoefficientSeries,
}

impl FamilyMember {
    pub fn label(&self) -> String {
        format!("{}#{}", self.kind.name(), self.index)
    }

    pub fn degree(&self) -> usize {
        self.series.degree()
    }

    /// Real parts, meaningful for the decreasing kinds.
    pub fn real_coeffs(&self) -> Vec<f64> {
        self.series.coeffs().iter().map(|c| c.re).collect()
    }
}

impl TestFamilySpec {
    pub fn new(kind: FamilyKind, degree: usize, count: usize, seed: u64) -> Result<Self> {
        if !(degree + 1).is_power_of_two() {
            return Err(Error::Config(format!("family degree {degree} is not 2^k - 1")));
        }
        if count == 0 {
            return Err(Error::Config(String::from("family count must be at least 1")));
        }
        if let FamilyKind::Logpower { eps, alpha } = kind {
            if !(eps + alpha).is_finite() {
                return Err(Error::Config(String::from("logpower exponents must be finite")));
            }
        }
        Ok(Self {
            kind,
            degree,
            count,
            seed,
        })
    }

    pub fn member(&self, index: usize) -> FamilyMember {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(
            self.seed,
            &[self.kind.ordinal(), self.degree as u64, index as u64],
        ));
        let n = self.degree;
        let coeffs: Vec<Complex64> = match self.kind {
            FamilyKind::RandomDecreasing => {
                let e = rng.random_range(0.5..2.0);
                let mut a: Vec<f64> = (0..=n)
                    .map(|k| rng.random_range(0.0..1.0) * (k as f64 + 1.0).powf(-e))
                    .collect();
                for k in (0..n).rev() {
                    a[k] += a[k + 1];
                }
                let top = a[0];
                a.into_iter().map(|x| Complex64::new(x / top, 0.0)).collect()
            }
            FamilyKind::RandomPhases => (0..=n)
                .map(|k| {
                    let theta = rng.random_range(0.0..std::f64::consts::TAU);
                    Complex64::from_polar(1.0 / (k as f64 + 1.0), theta)
                })
                .collect(),
            FamilyKind::Lacunary => (0..=n)
                .map(|k| {
                    let v = if k.is_power_of_two() { rng.random_range(0.5..=1.0) } else { 0.0 };
                    Complex64::new(v, 0.0)
                })
                .collect(),
            FamilyKind::GeometricLike => {
                let u = rng.random_range(1.0..((n + 1) as f64).log2() + 1.0);
                let log_rho = (-(2f64.powf(-u))).ln_1p();
                (0..=n).map(|k| Complex64::new((k as f64 * log_rho).exp(), 0.0)).collect()
            }
            FamilyKind::Logpower { eps, alpha } => (0..=n)
                .map(|k| Complex64::new((k as f64 + 2.0).ln().powf(-eps - alpha), 0.0))
                .collect(),
        };
        FamilyMember {
            kind: self.kind,
            index,
            series: CoefficientSeries::new(coeffs).expect("generated coefficients are finite"),
        }
    }

    pub fn members(&self) -> Vec<FamilyMember> {
        (0..self.count).map(|i| self.member(i)).collect()
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Independent stream seed for one task.
pub fn mix_seed(seed: u64, parts: &[u64]) -> u64 {
    parts.iter().fold(splitmix64(seed), |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

pub fn task_rng(seed: u64, parts: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix_seed(seed, parts))
}
