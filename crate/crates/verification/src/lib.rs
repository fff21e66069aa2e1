//! Independent oracles for rf-forster and the reports they produce.
//!
//! Nothing here is used by the library itself: the generalized Bessel
//! quadrature shares no code with the series evaluation, and the
//! time-dependent integrator is compared against the closed-form sideband
//! model it is meant to validate.

pub mod model;
pub mod quadrature;
pub mod tolerances;

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rf_forster::floquet::generalized_bessel;
use serde::Serialize;

pub use model::{check_model_against_evolution, ModelGrid};
pub use quadrature::quadrature_oracle_gb;

/// Outcome of one oracle comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub test_id: String,
    pub max_abs_dev: f64,
    pub max_rel_dev: f64,
    pub samples: usize,
    pub tolerance: f64,
    pub passed: bool,
}

impl OracleReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: max abs {:.3e}, max rel {:.3e}, {} samples, tolerance {:.1e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.test_id,
            self.max_abs_dev,
            self.max_rel_dev,
            self.samples,
            self.tolerance
        )
    }
}

/// Random evaluation points for the generalized Bessel check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GbGrid {
    pub points: usize,
    pub x_max: f64,
    pub y_max: f64,
    pub m_max: i32,
    pub seed: u64,
}

impl Default for GbGrid {
    fn default() -> Self {
        GbGrid {
            points: 100,
            x_max: 10.0,
            y_max: 10.0,
            m_max: 12,
            seed: 20_240_101,
        }
    }
}

impl GbGrid {
    pub fn points(&self) -> Vec<(i32, f64, f64)> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..self.points)
            .map(|_| {
                let m = rng.random_range(-self.m_max..=self.m_max);
                let x = if self.x_max > 0.0 { rng.random_range(-self.x_max..=self.x_max) } else { 0.0 };
                let y = if self.y_max > 0.0 { rng.random_range(-self.y_max..=self.y_max) } else { 0.0 };
                (m, x, y)
            })
            .collect()
    }
}

/// Series vs quadrature over `grid`; passes when every absolute deviation is
/// below the oracle tolerance.
pub fn check_gb_against_quadrature(grid: &GbGrid) -> OracleReport {
    compare_gb("gb.series-vs-quadrature", &grid.points(), tolerances::GB_ORACLE_ABS)
}

/// Compares series and quadrature values at explicit `(m, x, y)` points.
pub fn compare_gb(test_id: &str, points: &[(i32, f64, f64)], tolerance: f64) -> OracleReport {
    let mut max_abs: f64 = 0.0;
    let mut max_rel: f64 = 0.0;
    for &(m, x, y) in points {
        let series = generalized_bessel(m, x, y);
        let quad = quadrature_oracle_gb(m, x, y);
        let d = (series - quad).abs();
        max_abs = max_abs.max(d);
        if quad.abs() > 1e-300 {
            max_rel = max_rel.max(d / quad.abs());
        }
    }
    OracleReport {
        test_id: test_id.to_string(),
        max_abs_dev: max_abs,
        max_rel_dev: max_rel,
        samples: points.len(),
        tolerance,
        passed: max_abs < tolerance,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_passes() {
        let r = check_gb_against_quadrature(&GbGrid::default());
        assert!(r.passed, "{r}");
        assert_eq!(r.samples, 100);
    }

    #[test]
    fn odd_orders_vanish_without_x() {
        let grid = GbGrid {
            x_max: 0.0,
            ..Default::default()
        };
        for (m, x, y) in grid.points() {
            assert_eq!(x, 0.0);
            if m % 2 != 0 {
                assert!(generalized_bessel(m, x, y).abs() < 1e-12);
                assert!(quadrature_oracle_gb(m, x, y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn y_zero_is_ordinary_bessel() {
        let grid = GbGrid {
            y_max: 0.0,
            ..Default::default()
        };
        let r = compare_gb("y0", &grid.points(), 1e-12);
        assert!(r.passed, "{r}");
        for (m, x, _) in grid.points() {
            assert!((generalized_bessel(m, x, 0.0) - rf_forster::floquet::bessel_j(m, x)).abs() < 1e-15);
        }
    }

    #[test]
    fn report_json() {
        let r = compare_gb("t", &[(0, 0.0, 0.0)], 1e-10);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["test_id"], "t");
        assert_eq!(v["passed"], true);
    }
}
