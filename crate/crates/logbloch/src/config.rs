//! TOML configuration of a verification run.
//!
//! Every key has a default, so an empty file is a complete configuration.
//! See `verify.example.toml` at the repository root for the annotated form.

use std::path::Path;

use logbloch_core::QuadratureConfig;
use serde::{Deserialize, Serialize};

use crate::error::{io_at, Error, Result};
use crate::families::{FamilyKind, TestFamilySpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Truncation degrees, each `2^k - 1`.
    pub degrees: Vec<usize>,
    pub quadrature: QuadratureSection,
    pub families: FamiliesSection,
    pub equivalence: EquivalenceSection,
    pub mapping: MappingSection,
    pub pass: PassSection,
    pub demo: DemoSection,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 20_240_521,
            degrees: vec![1023, 2047, 4095, 8191],
            quadrature: QuadratureSection::default(),
            families: FamiliesSection::default(),
            equivalence: EquivalenceSection::default(),
            mapping: MappingSection::default(),
            pass: PassSection::default(),
            demo: DemoSection::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSection {
    pub circle_rtol: f64,
    pub circle_cap: usize,
    pub panel_width: f64,
    pub sup_refinements: usize,
}

impl Default for QuadratureSection {
    fn default() -> Self {
        Self {
            circle_rtol: 1e-7,
            circle_cap: 1 << 16,
            panel_width: 2.0,
            sup_refinements: 3,
        }
    }
}

impl QuadratureSection {
    pub fn to_core(&self) -> QuadratureConfig {
        QuadratureConfig {
            circle_rtol: self.circle_rtol,
            circle_cap: self.circle_cap,
            panel_width: self.panel_width,
            sup_refinements: self.sup_refinements,
            ..QuadratureConfig::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FamiliesSection {
    pub random_decreasing: usize,
    pub geometric_like: usize,
    pub random_phases: usize,
    pub lacunary: usize,
    pub logpower: usize,
    pub logpower_eps: f64,
    pub logpower_alpha: f64,
    /// Members per family (by index) that also get the `p = ∞` profiles and
    /// the block-level checks.
    pub heavy_members: usize,
    /// Members per family used for the Hardy and Libera-derivative inequalities.
    pub inequality_members: usize,
}

impl Default for FamiliesSection {
    fn default() -> Self {
        Self {
            random_decreasing: 32,
            geometric_like: 6,
            random_phases: 6,
            lacunary: 3,
            logpower: 1,
            logpower_eps: 1.5,
            logpower_alpha: -0.5,
            heavy_members: 3,
            inequality_members: 1,
        }
    }
}

impl FamiliesSection {
    fn counts(&self) -> [(FamilyKind, usize); 5] {
        [
            (FamilyKind::RandomDecreasing, self.random_decreasing),
            (FamilyKind::GeometricLike, self.geometric_like),
            (FamilyKind::RandomPhases, self.random_phases),
            (FamilyKind::Lacunary, self.lacunary),
            (
                FamilyKind::Logpower {
                    eps: self.logpower_eps,
                    alpha: self.logpower_alpha,
                },
                self.logpower,
            ),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EquivalenceSection {
    pub thm1_alphas: Vec<f64>,
    pub thm2_alphas: Vec<f64>,
    pub thm7_alphas: Vec<f64>,
    pub thm3a_alphas: Vec<f64>,
    pub thm3b_alphas: Vec<f64>,
    /// `α` at which the logpower family must show unbounded growth.
    pub thm3b_divergent_alpha: f64,
    pub block_p: Vec<f64>,
    pub eq3_p: Vec<f64>,
    pub eq3_n_max: usize,
    pub radii: Vec<f64>,
    pub inequality_p: Vec<f64>,
    pub stud_windows_per_degree: usize,
    pub stud_max_start: usize,
    pub stud_max_len: usize,
    pub reform_q: Vec<f64>,
    pub moment_exponents: Vec<f64>,
    pub logsum_alphas: Vec<f64>,
}

impl Default for EquivalenceSection {
    fn default() -> Self {
        Self {
            thm1_alphas: vec![-1.0, -0.5, 0.0, 1.0, 2.0],
            thm2_alphas: vec![-0.5, 0.0, 1.0],
            thm7_alphas: vec![-1.0, 0.0, 1.0, 2.0],
            thm3a_alphas: vec![-1.0, 0.0, 1.0],
            thm3b_alphas: vec![0.0, 1.0],
            thm3b_divergent_alpha: -0.5,
            block_p: vec![0.5, 1.0, 2.0, f64::INFINITY],
            eq3_p: vec![1.0, 2.0, f64::INFINITY],
            eq3_n_max: 12,
            radii: vec![0.5, 0.9, 0.99],
            inequality_p: vec![1.0, 2.0, f64::INFINITY],
            stud_windows_per_degree: 50,
            stud_max_start: 512,
            stud_max_len: 256,
            reform_q: vec![1.0, 2.0, f64::INFINITY],
            moment_exponents: vec![0.5, 1.0, 2.0],
            logsum_alphas: vec![-0.5, 0.0, 1.0, 2.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MappingSection {
    pub cesaro_alphas: Vec<f64>,
    pub libera_alphas: Vec<f64>,
    /// Exponent of the power-weight target space for the Libera transform on
    /// the unweighted area space; must be below -1.
    pub power_alpha: f64,
    pub pairing_alphas: Vec<f64>,
}

impl Default for MappingSection {
    fn default() -> Self {
        Self {
            cesaro_alphas: vec![-0.5, 0.0, 1.0],
            libera_alphas: vec![0.5, 1.0, 2.0],
            power_alpha: -2.0,
            pairing_alphas: vec![-1.0, 0.0, 1.0, 2.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PassSection {
    /// Allowed inflation of the band width when the degree doubles.
    pub doubling_factor: f64,
    /// Largest max/min ratio for the frame-norm sizes.
    pub eq3_band: f64,
    /// Slack for inequalities that hold exactly.
    pub gap_tol: f64,
    pub ineq_li_tol: f64,
    pub adjoint_tol: f64,
    /// Required growth of a ratio that should be unbounded.
    pub unbounded_growth: f64,
}

impl Default for PassSection {
    fn default() -> Self {
        Self {
            doubling_factor: 1.2,
            eq3_band: 4.0,
            gap_tol: 1e-9,
            ineq_li_tol: 1e-8,
            adjoint_tol: 1e-12,
            unbounded_growth: 10.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DemoSection {
    pub alpha: f64,
    /// Defaults to `1 - α`.
    pub eps: Option<f64>,
    pub m: Vec<u32>,
    pub band: f64,
    pub min_growth: f64,
}

impl Default for DemoSection {
    fn default() -> Self {
        Self {
            alpha: -0.5,
            eps: None,
            m: vec![4, 8, 12, 16, 20],
            band: 4.0,
            min_growth: 2.0,
        }
    }
}

impl VerifyConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(io_at(path))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.degrees.is_empty() {
            return Err(Error::Config(String::from("degrees must not be empty")));
        }
        for &d in &self.degrees {
            if !(d + 1).is_power_of_two() || d < 3 {
                return Err(Error::Config(format!("degree {d} is not 2^k - 1 with k >= 2")));
            }
        }
        let q = &self.quadrature;
        if !(q.circle_rtol > 0.0) || !q.circle_cap.is_power_of_two() || !(q.panel_width > 0.0) {
            return Err(Error::Config(String::from(
                "quadrature needs circle_rtol > 0, a power-of-two circle_cap and panel_width > 0",
            )));
        }
        let eq = &self.equivalence;
        let positive = |name: &str, v: &[f64]| -> Result<()> {
            if v.iter().all(|&p| p > 0.0) {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} entries must be positive")))
            }
        };
        positive("block_p", &eq.block_p)?;
        positive("eq3_p", &eq.eq3_p)?;
        positive("inequality_p", &eq.inequality_p)?;
        positive("reform_q", &eq.reform_q)?;
        positive("moment_exponents", &eq.moment_exponents)?;
        if eq.radii.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
            return Err(Error::Config(String::from("radii must lie in (0, 1)")));
        }
        if eq.eq3_n_max == 0 || eq.eq3_n_max > 20 {
            return Err(Error::Config(String::from("eq3_n_max must lie in 1..=20")));
        }
        if eq.stud_max_len == 0 {
            return Err(Error::Config(String::from("stud_max_len must be positive")));
        }
        if !(self.mapping.power_alpha < -1.0) {
            return Err(Error::Config(String::from("power_alpha must be below -1")));
        }
        if !(self.pass.doubling_factor >= 1.0) {
            return Err(Error::Config(String::from("doubling_factor must be at least 1")));
        }
        Ok(())
    }

    pub fn quadrature_config(&self) -> QuadratureConfig {
        self.quadrature.to_core()
    }

    /// Family specs for every configured kind with nonzero count and every degree.
    pub fn family_specs(&self) -> Result<Vec<TestFamilySpec>> {
        let mut specs = Vec::new();
        for &degree in &self.degrees {
            for (kind, count) in self.families.counts() {
                if count > 0 {
                    specs.push(TestFamilySpec::new(kind, degree, count, self.seed)?);
                }
            }
        }
        Ok(specs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        assert_eq!(VerifyConfig::from_toml("").unwrap(), VerifyConfig::default());
    }

    #[test]
    fn infinite_exponents_parse() {
        let cfg = VerifyConfig::from_toml("[equivalence]\nblock_p = [1.0, inf]\n").unwrap();
        assert_eq!(cfg.equivalence.block_p, vec![1.0, f64::INFINITY]);
    }

    #[test]
    fn bad_values_are_config_errors() {
        for text in [
            "degrees = [1000]",
            "degrees = []",
            "bogus = 1",
            "[equivalence]\nradii = [1.0]",
            "[mapping]\npower_alpha = -0.5",
            "seed = \"x\"",
        ] {
            assert!(matches!(VerifyConfig::from_toml(text), Err(Error::Config(_))), "{text}");
        }
    }

    #[test]
    fn zero_counts_yield_no_specs() {
        let cfg = VerifyConfig::from_toml(
            "[families]\nrandom_decreasing = 0\ngeometric_like = 0\nrandom_phases = 0\nlacunary = 0\nlogpower = 0\n",
        )
        .unwrap();
        assert!(cfg.family_specs().unwrap().is_empty());
    }

    #[test]
    fn example_file_parses() {
        let text = include_str!("../../../verify.example.toml");
        VerifyConfig::from_toml(text).unwrap();
    }
}
