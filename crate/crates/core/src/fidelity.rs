//! Uhlmann fidelity between the evolved superposition state and the evolved
//! Gaussian state.
//!
//! `rho_A` has rank two on the span of `u_e = |b> + |-b>` and `u_o = |b> - |-b>`.
//! Writing `rho_A = sum A_ij |u_i><u_j|` and `G_ij = <u_i|rho_B|u_j>`, the non-zero
//! eigenvalues of `sqrt(rho_A) rho_B sqrt(rho_A)` are those of the 2x2 product
//! `A G`, and `F = sqrt(l+) + sqrt(l-)`. For the even and odd states `A` is
//! diagonal and `A G` has the familiar `[[b, d], [d^*, c]]` spectrum.

use serde::{Deserialize, Serialize};

use crate::css::{self, CssSnapshot};
use crate::error::{Error, Result};
use crate::gss::{self, wrap_phase, GssSnapshot};
use crate::params::{CssParams, GssParams, ReservoirParams};
use crate::variant::FormulaVariant;
use crate::Complex;

/// Values of `F` up to this far above 1 are clamped; larger excursions are errors.
pub const FIDELITY_CLAMP: f64 = 1e-9;
const LAMBDA_FLOOR: f64 = -1e-10;

/// Coherent-state matrix elements of the Gaussian state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OverlapTriple {
    /// `<beta|rho_B|beta>`
    pub bb: Complex,
    /// `<-beta|rho_B|-beta>`
    pub mm: Complex,
    /// `<-beta|rho_B|beta>`
    pub mb: Complex,
}

/// `zeta = (beta^* + alpha^*) e^{i phi/2}`, `eta = (beta - alpha) e^{-i phi/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZetaEta {
    pub zeta: Complex,
    pub eta: Complex,
}

impl ZetaEta {
    pub fn new(beta: Complex, gss: &GssSnapshot) -> Self {
        let half = Complex::from_polar(1.0, 0.5 * wrap_phase(gss.phi));
        Self {
            zeta: (beta.conj() + gss.alpha.conj()) * half,
            eta: (beta - gss.alpha) * half.conj(),
        }
    }
}

/// Shared pieces of the Gaussian matrix elements.
struct Kernel {
    nu: f64,
    tanh_r: f64,
    /// `(nu+1)^2 - nu^2 tanh^2 r`
    den: f64,
    /// `(nu+1)^2 cosh^2 r - nu^2 sinh^2 r`
    den_cosh: f64,
}

impl Kernel {
    fn new(g: &GssSnapshot) -> Self {
        let nu = g.nu;
        let (sr, cr) = (g.r.sinh(), g.r.cosh());
        let tanh_r = g.r.tanh();
        Self {
            nu,
            tanh_r,
            den: (nu + 1.0).powi(2) - (nu * tanh_r).powi(2),
            den_cosh: ((nu + 1.0) * cr).powi(2) - (nu * sr).powi(2),
        }
    }

    /// `<g1|rho_B|g2>` for the rotated, recentred amplitudes
    /// `e_i = (g_i - alpha) e^{-i phi/2}`, without the displacement phase.
    fn element(&self, e1: Complex, e2: Complex, variant: FormulaVariant) -> Complex {
        let nu = self.nu;
        let prefactor = match variant {
            FormulaVariant::Corrected => 1.0 / self.den_cosh.sqrt(),
            FormulaVariant::Literal => {
                let ch2 = 1.0 / (1.0 - self.tanh_r * self.tanh_r);
                1.0 / ((nu + 1.0).powi(2) * ch2 - (nu * self.tanh_r).powi(2)).sqrt()
            }
        };
        let e1c = e1.conj();
        let squeeze = (2.0 * nu + 1.0) * self.tanh_r * (e1c * e1c + e2 * e2) / (2.0 * self.den);
        let spread =
            -(e1.norm_sqr() + e2.norm_sqr()) / 2.0 + e1c * e2 * nu * (nu + 1.0) / self.den_cosh;
        prefactor * (squeeze + spread).exp()
    }
}

/// The three matrix elements `<beta|rho_B|beta>`, `<-beta|rho_B|-beta>`, `<-beta|rho_B|beta>`.
///
/// The literal variant uses the `nu^2 tanh^2 r` prefactor and drops the phase
/// `e^{2i Im(alpha^* beta)}` of the off-diagonal element.
pub fn overlaps(
    css_snap: &CssSnapshot,
    gss_snap: &GssSnapshot,
    variant: FormulaVariant,
) -> OverlapTriple {
    let beta = css_snap.beta;
    let ze = ZetaEta::new(beta, gss_snap);
    let k = Kernel::new(gss_snap);
    // <-beta| recentred is -(beta + alpha), i.e. the conjugate of -zeta
    let minus = -ze.zeta.conj();
    let phase = match variant {
        FormulaVariant::Corrected => {
            Complex::from_polar(1.0, 2.0 * (gss_snap.alpha.conj() * beta).im)
        }
        FormulaVariant::Literal => Complex::new(1.0, 0.0),
    };
    OverlapTriple {
        bb: k.element(ze.eta, ze.eta, variant),
        mm: k.element(minus, minus, variant),
        mb: phase * k.element(minus, ze.eta, variant),
    }
}

/// Fidelity with the 2x2 reduction exposed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityResult {
    pub value: f64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    /// True when `value` was brought back from within `FIDELITY_CLAMP` above 1.
    pub clamped: bool,
}

impl FidelityResult {
    pub fn squared(&self) -> f64 {
        self.value * self.value
    }
}

/// `F = sqrt(l+) + sqrt(l-)` from the snapshots of both states at the same time.
pub fn fidelity_from_snapshots(
    css_params: &CssParams,
    c: &CssSnapshot,
    g: &GssSnapshot,
    variant: FormulaVariant,
) -> Result<FidelityResult> {
    let o = overlaps(c, g, variant);
    let (sin, cos) = css_params.theta.sin_cos();
    let n2 = css_params.norm_sq();
    // coefficients of rho_A on u_e, u_o; finite where N_o -> 0
    let we = (1.0 + c.f * cos) / (2.0 * n2);
    let wo = (1.0 - c.f * cos) / (2.0 * n2);
    let a = Complex::new(0.0, c.f * sin / (2.0 * n2));
    let ge = (o.bb + o.mm + 2.0 * o.mb.re).re;
    let go = (o.bb + o.mm - 2.0 * o.mb.re).re;
    let gx = o.bb - o.mm + Complex::new(0.0, 2.0 * o.mb.im);
    let trace = we * ge + wo * go + 2.0 * (a * gx.conj()).re;
    let det_a = (we * wo - a.norm_sqr()).max(0.0);
    let det = det_a * (ge * go - gx.norm_sqr());
    let disc = (trace * trace - 4.0 * det).max(0.0).sqrt();
    let lambda_plus = 0.5 * (trace + disc);
    let lambda_minus = if lambda_plus > 0.0 {
        det / lambda_plus
    } else {
        0.5 * (trace - disc)
    };
    if lambda_minus < LAMBDA_FLOOR {
        return Err(Error::NumericalConsistency(format!(
            "smaller eigenvalue of the reduced fidelity matrix is {lambda_minus:e}"
        )));
    }
    let value = lambda_plus.max(0.0).sqrt() + lambda_minus.max(0.0).sqrt();
    if value > 1.0 + FIDELITY_CLAMP && variant == FormulaVariant::Corrected {
        return Err(Error::NumericalConsistency(format!(
            "fidelity {value} exceeds 1"
        )));
    }
    let clamped = value > 1.0 && variant == FormulaVariant::Corrected;
    Ok(FidelityResult {
        value: if clamped { 1.0 } else { value },
        lambda_plus,
        lambda_minus,
        clamped,
    })
}

/// Uhlmann fidelity between the evolved CSS and the evolved GSS at time `t`.
pub fn fidelity_css_gss(
    css_params: &CssParams,
    gss_params: &GssParams,
    res: &ReservoirParams,
    t: f64,
) -> Result<FidelityResult> {
    let c = css::snapshot(css_params, res, t)?;
    let g = gss::evolve_gss(gss_params, res, t)?;
    fidelity_from_snapshots(css_params, &c, &g, FormulaVariant::Corrected)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn res() -> ReservoirParams {
        ReservoirParams::zero_temperature(1.0, 0.1).unwrap()
    }

    #[test]
    fn vacuum_overlaps_are_one() {
        let c = css::snapshot(&CssParams::even(0.0).unwrap(), &res(), 0.0).unwrap();
        let g = GssSnapshot::from_params(&GssParams::squeezed_thermal(0.0, 0.0).unwrap());
        let o = overlaps(&c, &g, FormulaVariant::Corrected);
        for v in [o.bb, o.mm, o.mb] {
            assert!((v - Complex::new(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn coherent_with_vacuum() {
        let c = css::snapshot(&CssParams::even(0.8).unwrap(), &res(), 0.0).unwrap();
        let g = GssSnapshot::from_params(&GssParams::squeezed_thermal(0.0, 0.0).unwrap());
        let o = overlaps(&c, &g, FormulaVariant::Corrected);
        let e = (-0.64f64).exp();
        assert!((o.bb.re - e).abs() < 1e-15 && (o.mm.re - e).abs() < 1e-15);
        // <-b|0><0|b> = e^{-|b|^2}
        assert!((o.mb - Complex::new(e, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn vacuum_limit_is_one() {
        let css = CssParams::odd(0.8).unwrap();
        let gss = GssParams::squeezed_thermal(1.0, 0.0).unwrap();
        let f = fidelity_css_gss(&css, &gss, &res(), 600.0).unwrap();
        assert!((f.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn trace_of_reduced_problem() {
        let css = CssParams::new(Complex::new(0.7, 0.4), 0.9).unwrap();
        let gss = GssParams::new(Complex::new(0.2, -0.1), 0.8, 0.5, 0.6).unwrap();
        let r = res();
        let c = css::snapshot(&css, &r, 3.0).unwrap();
        let g = gss::evolve_gss(&gss, &r, 3.0).unwrap();
        let f = fidelity_from_snapshots(&css, &c, &g, FormulaVariant::Corrected).unwrap();
        let o = overlaps(&c, &g, FormulaVariant::Corrected);
        let n2 = css.norm_sq();
        let fc = c.f * css.theta.cos();
        let b = (1.0 + fc) / (2.0 * n2) * (o.bb + o.mm + 2.0 * o.mb.re).re;
        let cc = (1.0 - fc) / (2.0 * n2) * (o.bb + o.mm - 2.0 * o.mb.re).re;
        // the even/odd coherence adds 2 Re(a G_eo^*) to b + c
        let a = Complex::new(0.0, c.f * css.theta.sin() / (2.0 * n2));
        let gx = o.bb - o.mm + Complex::new(0.0, 2.0 * o.mb.im);
        let trace = b + cc + 2.0 * (a * gx.conj()).re;
        assert!((f.lambda_plus + f.lambda_minus - trace).abs() < 1e-12);
        assert!(f.value > 0.0 && f.value <= 1.0);
    }

    #[test]
    fn continuous_at_zero_displacement() {
        let css = CssParams::even(0.8).unwrap();
        let r = res();
        for t in [0.0, 1.0, 4.0] {
            let a = fidelity_css_gss(
                &css,
                &GssParams::new(Complex::new(0.0, 0.0), 1.0, 0.0, 0.0).unwrap(),
                &r,
                t,
            )
            .unwrap();
            let b = fidelity_css_gss(
                &css,
                &GssParams::new(Complex::new(1e-12, 0.0), 1.0, 0.0, 0.0).unwrap(),
                &r,
                t,
            )
            .unwrap();
            assert!((a.value - b.value).abs() < 1e-10);
        }
    }

    #[test]
    fn pure_state_limit() {
        // at t = 0 rho_A is pure and F^2 = <psi|rho_B|psi>
        let css = CssParams::even(0.8).unwrap();
        let gss = GssParams::new(Complex::new(0.1, 0.05), 1.0, 0.0, 0.0).unwrap();
        let c = css::snapshot(&css, &res(), 0.0).unwrap();
        let g = GssSnapshot::from_params(&gss);
        let o = overlaps(&c, &g, FormulaVariant::Corrected);
        let expect = (o.bb + o.mm + 2.0 * o.mb.re).re / css.norm_sq();
        let f = fidelity_from_snapshots(&css, &c, &g, FormulaVariant::Corrected).unwrap();
        assert!((f.squared() - expect).abs() < 1e-10);
    }
}
