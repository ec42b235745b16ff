//! Parameter bundles for the two state families and the reservoir.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::Complex;

/// Largest accepted `|beta0|`; beyond this `e^{-2|beta0|^2}` underflows to zero.
pub const MAX_CSS_AMPLITUDE: f64 = 50.0;

/// Reservoir of the damped-oscillator Liouvillian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReservoirParams {
    /// Angular frequency of the free evolution.
    pub omega: f64,
    /// System-reservoir coupling, in inverse time units.
    pub k: f64,
    /// Thermal occupation of the reservoir.
    pub nbar: f64,
}

impl ReservoirParams {
    pub fn new(omega: f64, k: f64, nbar: f64) -> Result<Self> {
        let res = Self { omega, k, nbar };
        res.validate()?;
        Ok(res)
    }

    /// Zero-temperature reservoir.
    pub fn zero_temperature(omega: f64, k: f64) -> Result<Self> {
        Self::new(omega, k, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(invalid(
                "omega",
                format!("must be positive, got {}", self.omega),
            ));
        }
        if !(self.k > 0.0 && self.k.is_finite()) {
            return Err(invalid("k", format!("must be positive, got {}", self.k)));
        }
        if !(self.nbar >= 0.0 && self.nbar.is_finite()) {
            return Err(invalid(
                "nbar",
                format!("must be non-negative, got {}", self.nbar),
            ));
        }
        Ok(())
    }
}

/// Initial data of `(|beta0> + e^{i theta} |-beta0>) / N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CssParams {
    pub beta0: Complex,
    pub theta: f64,
}

impl CssParams {
    pub fn new(beta0: Complex, theta: f64) -> Result<Self> {
        let p = Self { beta0, theta };
        p.validate()?;
        Ok(p)
    }

    /// Even (`theta = 0`) superposition with a real amplitude.
    pub fn even(beta0: f64) -> Result<Self> {
        Self::new(Complex::new(beta0, 0.0), 0.0)
    }

    /// Odd (`theta = pi`) superposition with a real amplitude.
    pub fn odd(beta0: f64) -> Result<Self> {
        Self::new(Complex::new(beta0, 0.0), std::f64::consts::PI)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta0.re.is_finite() && self.beta0.im.is_finite()) {
            return Err(invalid("beta0", "must be finite"));
        }
        if self.beta0.norm() >= MAX_CSS_AMPLITUDE {
            return Err(invalid(
                "beta0",
                format!(
                    "|beta0| must be below {MAX_CSS_AMPLITUDE}, got {}",
                    self.beta0.norm()
                ),
            ));
        }
        if !self.theta.is_finite() {
            return Err(invalid("theta", "must be finite"));
        }
        if !(self.norm_sq() > 1e-300) {
            return Err(invalid(
                "theta",
                "normalization 2(1 + e^{-2|beta0|^2} cos theta) vanishes",
            ));
        }
        Ok(())
    }

    /// `|beta0|^2`.
    pub fn intensity(&self) -> f64 {
        self.beta0.norm_sqr()
    }

    /// `N^2 = 2 (1 + e^{-2|beta0|^2} cos theta)`.
    pub fn norm_sq(&self) -> f64 {
        2.0 * (1.0 + (-2.0 * self.intensity()).exp() * self.theta.cos())
    }
}

/// Initial data of `D(alpha0) S(r0, phi0) rho_{nu0} S^dag D^dag`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GssParams {
    pub alpha0: Complex,
    pub r0: f64,
    pub phi0: f64,
    /// Thermal excitations of the undisplaced, unsqueezed core (not the photon number).
    pub nu0: f64,
}

impl GssParams {
    pub fn new(alpha0: Complex, r0: f64, phi0: f64, nu0: f64) -> Result<Self> {
        let p = Self {
            alpha0,
            r0,
            phi0,
            nu0,
        };
        p.validate()?;
        Ok(p)
    }

    /// Undisplaced squeezed thermal state with zero squeeze phase.
    pub fn squeezed_thermal(r0: f64, nu0: f64) -> Result<Self> {
        Self::new(Complex::new(0.0, 0.0), r0, 0.0, nu0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha0.re.is_finite() && self.alpha0.im.is_finite()) {
            return Err(invalid("alpha0", "must be finite"));
        }
        if !(self.r0 >= 0.0 && self.r0.is_finite()) {
            return Err(invalid(
                "r0",
                format!("must be finite and >= 0, got {}", self.r0),
            ));
        }
        if !self.phi0.is_finite() {
            return Err(invalid("phi0", "must be finite"));
        }
        if !(self.nu0 >= 0.0 && self.nu0.is_finite()) {
            return Err(invalid(
                "nu0",
                format!("must be finite and >= 0, got {}", self.nu0),
            ));
        }
        Ok(())
    }
}

/// Complex amplitude `lambda = sqrt(omega/2) x + i p / sqrt(2 omega)` of a phase-space point.
///
/// With this scaling the vacuum has `<x^2> = 1/(2 omega)` and `<p^2> = omega/2`.
pub fn phase_point(omega: f64, x: f64, p: f64) -> Complex {
    Complex::new((omega / 2.0).sqrt() * x, p / (2.0 * omega).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reservoir_validation() {
        assert!(ReservoirParams::new(1.0, 0.1, 0.0).is_ok());
        assert!(ReservoirParams::new(0.0, 0.1, 0.0).is_err());
        assert!(ReservoirParams::new(1.0, -0.1, 0.0).is_err());
        assert!(ReservoirParams::new(1.0, 0.1, -1.0).is_err());
    }

    #[test]
    fn css_validation() {
        assert!(CssParams::even(0.8).is_ok());
        assert!(CssParams::even(50.0).is_err());
        // odd superposition of the vacuum with itself is the zero vector
        assert!(CssParams::odd(0.0).is_err());
        assert!(CssParams::even(0.0).is_ok());
    }

    #[test]
    fn gss_validation() {
        assert!(GssParams::squeezed_thermal(1.0, 3.0).is_ok());
        assert!(GssParams::squeezed_thermal(-0.1, 0.0).is_err());
        assert!(GssParams::squeezed_thermal(0.1, -1.0).is_err());
    }

    #[test]
    fn unknown_json_fields_are_rejected() {
        let ok: ReservoirParams = serde_json::from_str(r#"{"omega":1,"k":0.1,"nbar":0}"#).unwrap();
        assert_eq!(ok.k, 0.1);
        assert!(
            serde_json::from_str::<ReservoirParams>(r#"{"omega":1,"k":0.1,"nbar":0,"x":1}"#)
                .is_err()
        );
    }
}
