//! Quadrature second moments in the `omega`-weighted convention.
//!
//! `x = (a + a^dag) / sqrt(2 omega)`, `p = -i sqrt(omega/2) (a - a^dag)`, so the
//! vacuum has `sigma_qq = 1/(2 omega)`, `sigma_pp = omega/2` and determinant 1/4.

use serde::{Deserialize, Serialize};

use crate::Complex;

/// Covariance matrix of `(x, p)` at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CovarianceSnapshot {
    pub mean_q: f64,
    pub mean_p: f64,
    pub sigma_qq: f64,
    pub sigma_pp: f64,
    /// Symmetrized cross term `<xp + px>/2 - <x><p>`.
    pub sigma_qp: f64,
    pub det: f64,
    pub omega: f64,
}

impl CovarianceSnapshot {
    /// Builds the covariance from `<a>`, `<a^2>` and `<a^dag a>`.
    pub fn from_ladder_moments(omega: f64, mean_a: Complex, mean_a2: Complex, mean_n: f64) -> Self {
        let centered_a2 = mean_a2 - mean_a * mean_a;
        let centered_n = mean_n - mean_a.norm_sqr();
        let sigma_qq = (2.0 * centered_a2.re + 2.0 * centered_n + 1.0) / (2.0 * omega);
        let sigma_pp = omega / 2.0 * (-2.0 * centered_a2.re + 2.0 * centered_n + 1.0);
        let sigma_qp = centered_a2.im;
        Self {
            mean_q: (2.0 / omega).sqrt() * mean_a.re,
            mean_p: (2.0 * omega).sqrt() * mean_a.im,
            sigma_qq,
            sigma_pp,
            sigma_qp,
            det: sigma_qq * sigma_pp - sigma_qp * sigma_qp,
            omega,
        }
    }

    /// Vacuum-normalized (dimensionless) covariance entries `(v_qq, v_pp, v_qp)`.
    pub fn dimensionless(&self) -> (f64, f64, f64) {
        (
            self.sigma_qq * self.omega,
            self.sigma_pp / self.omega,
            self.sigma_qp,
        )
    }

    /// Symplectic eigenvalue minus one half: the effective thermal occupation.
    pub fn symplectic_nu(&self) -> f64 {
        self.det.max(0.0).sqrt() - 0.5
    }

    /// Squeeze magnitude `r = ln(l+ / l-) / 4` from the eigenvalues of the
    /// dimensionless covariance.
    pub fn squeeze_r(&self) -> f64 {
        let (a, b, c) = self.dimensionless();
        let mean = 0.5 * (a + b);
        let half_gap = (0.25 * (a - b) * (a - b) + c * c).sqrt();
        0.25 * ((mean + half_gap) / (mean - half_gap)).ln()
    }

    /// True when one quadrature variance drops below its vacuum value.
    pub fn is_squeezed(&self) -> bool {
        self.sigma_qq < 0.5 / self.omega || self.sigma_pp < 0.5 * self.omega
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_covariance() {
        let c = CovarianceSnapshot::from_ladder_moments(
            2.0,
            Complex::new(0.0, 0.0),
            Complex::new(0.0, 0.0),
            0.0,
        );
        assert!((c.sigma_qq - 0.25).abs() < 1e-15);
        assert!((c.sigma_pp - 1.0).abs() < 1e-15);
        assert!((c.det - 0.25).abs() < 1e-15);
        assert!(c.symplectic_nu().abs() < 1e-15);
        assert!(c.squeeze_r().abs() < 1e-12);
    }

    #[test]
    fn coherent_state_has_vacuum_spread() {
        let a = Complex::new(1.3, -0.4);
        let c = CovarianceSnapshot::from_ladder_moments(1.0, a, a * a, a.norm_sqr());
        assert!((c.det - 0.25).abs() < 1e-14);
        assert!((c.mean_q - 2f64.sqrt() * 1.3).abs() < 1e-14);
        assert!((c.mean_p + 2f64.sqrt() * 0.4).abs() < 1e-14);
    }

    #[test]
    fn squeezed_vacuum_recovers_r() {
        let r: f64 = 0.7;
        let phi: f64 = 0.9;
        let a2 = Complex::from_polar(0.5 * (2.0 * r).sinh(), phi);
        let c = CovarianceSnapshot::from_ladder_moments(
            1.0,
            Complex::new(0.0, 0.0),
            a2,
            r.sinh().powi(2),
        );
        assert!((c.squeeze_r() - r).abs() < 1e-12);
        assert!((c.det - 0.25).abs() < 1e-12);
        assert!(c.is_squeezed());
    }
}
