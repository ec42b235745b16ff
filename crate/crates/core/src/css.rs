//! Zero-temperature damping of even/odd coherent superposition states.
//!
//! Under amplitude damping into a vacuum reservoir the state keeps the form
//!
//! ```text
//! rho(t) = N^-2 { |b><b| + |-b><-b| + f (e^{i theta} |b><-b| + h.c.) },
//! b = beta0 e^{-(i omega + k) t},   f = e^{-2(|beta0|^2 - |b|^2)},
//! ```
//!
//! and is diagonal in the even/odd cat basis built on `b`. Every observable
//! below is evaluated from that form.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::moments::CovarianceSnapshot;
use crate::params::{CssParams, ReservoirParams};
use crate::specfun::{log_poisson_weight, PolyOrder};
use crate::variant::FormulaVariant;
use crate::Complex;

/// Truncation threshold for the CSS photon distribution.
pub const CSS_TAIL_TOLERANCE: f64 = 1e-12;

/// Evolved CSS in its even/odd eigenbasis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CssSnapshot {
    pub t: f64,
    pub beta: Complex,
    /// Interference factor `f(beta0, t)`.
    pub f: f64,
    pub p_even: f64,
    pub p_odd: f64,
    /// Norm of `|b> + |-b>`.
    pub n_even: f64,
    /// Norm of `|b> - |-b>`; zero once `b` reaches the vacuum.
    pub n_odd: f64,
    /// Even/odd coherence `<e|rho|o>`, `i f sin(theta) N_e N_o / (2 N^2)`.
    pub coherence: Complex,
    /// Determinant of the even/odd block, `N_e^2 N_o^2 (1 - f^2) / (4 N^4)`.
    pub block_det: f64,
}

impl CssSnapshot {
    /// Eigenvalues `(larger, smaller)` of the state, which has rank at most two.
    ///
    /// They are `p_e`, `p_o` whenever `sin(theta) = 0`.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let gap = ((self.p_even - self.p_odd).powi(2) + 4.0 * self.coherence.norm_sqr()).sqrt();
        let upper = 0.5 * (self.p_even + self.p_odd + gap);
        let lower = if upper > 0.0 {
            self.block_det / upper
        } else {
            0.0
        };
        (upper, lower)
    }
}

fn require_zero_temperature(res: &ReservoirParams) -> Result<()> {
    if res.nbar != 0.0 {
        return Err(Error::UnsupportedRegime(format!(
            "closed-form CSS dynamics needs a zero-temperature reservoir, got nbar = {}",
            res.nbar
        )));
    }
    Ok(())
}

fn require_time(t: f64) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(invalid("t", format!("must be finite and >= 0, got {t}")));
    }
    Ok(())
}

/// `f = exp(-2 |beta0|^2 (1 - e^{-2kt}))`.
fn coherence_factor(intensity0: f64, k: f64, t: f64) -> f64 {
    (2.0 * intensity0 * (-2.0 * k * t).exp_m1()).exp()
}

pub fn snapshot(params: &CssParams, res: &ReservoirParams, t: f64) -> Result<CssSnapshot> {
    require_zero_temperature(res)?;
    require_time(t)?;
    let beta = params.beta0 * Complex::new(-res.k * t, -res.omega * t).exp();
    let u = beta.norm_sqr();
    let f = coherence_factor(params.intensity(), res.k, t);
    let c = params.theta.cos();
    let n2 = params.norm_sq();
    let overlap = (-2.0 * u).exp();
    let one_minus_overlap = -(-2.0 * u).exp_m1();
    let p_even = (1.0 + overlap) * (1.0 + f * c) / n2;
    let p_odd = one_minus_overlap * (1.0 - f * c) / n2;
    let ne2 = 2.0 * (1.0 + overlap);
    let no2 = 2.0 * one_minus_overlap;
    // 1 - f^2 without cancellation near t = 0
    let one_minus_f2 = -(4.0 * params.intensity() * (-2.0 * res.k * t).exp_m1()).exp_m1();
    Ok(CssSnapshot {
        t,
        beta,
        f,
        p_even,
        p_odd,
        n_even: ne2.sqrt(),
        n_odd: no2.sqrt(),
        coherence: Complex::new(
            0.0,
            f * params.theta.sin() * (ne2 * no2).sqrt() / (2.0 * n2),
        ),
        block_det: ne2 * no2 * one_minus_f2 / (4.0 * n2 * n2),
    })
}

/// Wigner function `W = 2 tr[rho D(lambda) (-1)^n D^dag(lambda)]`.
///
/// Values lie in `[-2, 2]`; the vacuum peaks at 2 and `∫ W d^2 lambda = pi`.
pub fn wigner_css(
    params: &CssParams,
    res: &ReservoirParams,
    t: f64,
    lambda: Complex,
) -> Result<f64> {
    wigner_css_variant(params, res, t, lambda, FormulaVariant::Corrected)
}

/// Wigner function with a selectable interference-fringe phase.
///
/// The fringe term is `f e^{-2|lambda|^2} cos(theta + c Im(lambda b^*))`; the
/// displaced-parity evaluation fixes `c = 4`. The literal variant uses `c = -2`,
/// which agrees with `c = 4` only where the fringe vanishes or `Im(lambda b^*) = 0`.
pub fn wigner_css_variant(
    params: &CssParams,
    res: &ReservoirParams,
    t: f64,
    lambda: Complex,
    variant: FormulaVariant,
) -> Result<f64> {
    let snap = snapshot(params, res, t)?;
    let b = snap.beta;
    let n2 = params.norm_sq();
    // e^{-2|b|^2 - 2|l|^2} cosh(4 Re(l b*)) split into its two Gaussians.
    let gaussians = (-2.0 * (lambda - b).norm_sqr()).exp() + (-2.0 * (lambda + b).norm_sqr()).exp();
    let fringe_coeff = match variant {
        FormulaVariant::Corrected => 4.0,
        FormulaVariant::Literal => -2.0,
    };
    let phase = params.theta + fringe_coeff * (lambda * b.conj()).im;
    let fringe = snap.f * (-2.0 * lambda.norm_sqr()).exp() * phase.cos();
    Ok(2.0 / n2 * gaussians + 4.0 / n2 * fringe)
}

/// Fidelity with the vacuum, `sqrt(<0|rho|0>)`.
pub fn vacuum_fidelity(params: &CssParams, res: &ReservoirParams, t: f64) -> Result<f64> {
    let snap = snapshot(params, res, t)?;
    let f2 = 2.0 * (-snap.beta.norm_sqr()).exp() / params.norm_sq()
        * (1.0 + snap.f * params.theta.cos());
    Ok(f2.max(0.0).sqrt())
}

/// Normally ordered moment `<a^dag^m a^n>` of the evolved CSS.
fn normal_moment(params: &CssParams, beta: Complex, m: i32, n: i32) -> Complex {
    let bc = beta.conj();
    let plus = bc.powi(m) * beta.powi(n);
    let minus = (-bc).powi(m) * (-beta).powi(n);
    // cross terms carry f <-b|b> = e^{-2|beta0|^2}
    let w = (-2.0 * params.intensity()).exp();
    let eith = Complex::from_polar(1.0, params.theta);
    let cross =
        w * (eith * (-bc).powi(m) * beta.powi(n) + eith.conj() * bc.powi(m) * (-beta).powi(n));
    (plus + minus + cross) / params.norm_sq()
}

/// Mean photon number of the evolved CSS.
pub fn mean_photon_css(params: &CssParams, res: &ReservoirParams, t: f64) -> Result<f64> {
    let snap = snapshot(params, res, t)?;
    Ok(normal_moment(params, snap.beta, 1, 1).re)
}

/// Mean photon number of the initial superposition, `<n> = 2|beta0|^2 (1 - e^{-2|beta0|^2} cos theta) / N^2`.
pub fn initial_mean_photon(params: &CssParams) -> f64 {
    normal_moment(params, params.beta0, 1, 1).re
}

/// Quadrature covariance built from coherent-state matrix elements of `rho(t)`.
pub fn covariance_css(
    params: &CssParams,
    res: &ReservoirParams,
    t: f64,
) -> Result<CovarianceSnapshot> {
    let snap = snapshot(params, res, t)?;
    let b = snap.beta;
    let mean_a = normal_moment(params, b, 0, 1);
    let mean_a2 = normal_moment(params, b, 0, 2);
    let mean_n = normal_moment(params, b, 1, 1).re;
    Ok(CovarianceSnapshot::from_ladder_moments(
        res.omega, mean_a, mean_a2, mean_n,
    ))
}

/// Literal second moments `(<x^2>, <p^2>, <xp + px>)` as closed-form expressions in
/// `b`, `beta0` and `theta`; kept for comparison with [`covariance_css`].
pub fn literal_second_moments(
    params: &CssParams,
    res: &ReservoirParams,
    t: f64,
) -> Result<(f64, f64, f64)> {
    let snap = snapshot(params, res, t)?;
    let b = snap.beta;
    let w = res.omega;
    let b2 = b * b;
    let re2 = (b2 + b2.conj()).re;
    let bracket = 4.0 * b.norm_sqr() / params.norm_sq()
        * (1.0 - params.theta.cos() * (-2.0 * params.intensity()).exp());
    let x2 = (1.0 + re2 + bracket) / (2.0 * w);
    let p2 = -w / 2.0 * (-1.0 + re2 - bracket);
    let xp = (Complex::new(0.0, -1.0) * (b2 - b2.conj())).re;
    Ok((x2, p2, xp))
}

/// Time of the interior maximum of the covariance determinant,
/// `-(1/2k) ln[sinh(2|beta0|^2) / (4 |beta0|^2 cos theta)]`.
///
/// Absent unless `0 < sinh(2|beta0|^2) / (4 |beta0|^2 cos theta) < 1`. Exact for
/// the even and odd states; for other `theta` the mean field `<a>` is non-zero
/// and the maximum of [`covariance_css`] moves away from this time.
pub fn squeeze_time_css(params: &CssParams, k: f64) -> Option<f64> {
    if !(k > 0.0) {
        return None;
    }
    let b = params.intensity();
    let c = params.theta.cos();
    if !(b > 0.0) || c <= 0.0 {
        return None;
    }
    let ratio = (2.0 * b).sinh() / (4.0 * b * c);
    if !(ratio > 0.0 && ratio < 1.0) {
        return None;
    }
    Some(-ratio.ln() / (2.0 * k))
}

/// Visibility predicate for CSS squeezing, `0 < sinh(2|b0|^2)/(4|b0|^2 cos theta) < 1`.
pub fn squeeze_visible_css(params: &CssParams) -> bool {
    let b = params.intensity();
    let ratio = (2.0 * b).sinh() / (4.0 * b * params.theta.cos());
    ratio > 0.0 && ratio < 1.0
}

/// Decoherence time `tau = 1 / (4 |beta0|^2 k)`.
pub fn decoherence_time(params: &CssParams, k: f64) -> Result<f64> {
    let b = params.intensity();
    if !(b > 0.0) {
        return Err(invalid(
            "beta0",
            "decoherence time needs a non-degenerate superposition",
        ));
    }
    if !(k > 0.0) {
        return Err(invalid("k", format!("must be positive, got {k}")));
    }
    Ok(1.0 / (4.0 * b * k))
}

/// Smallest `n` with Poisson tail (mean `|beta0|^2`) below `CSS_TAIL_TOLERANCE`,
/// times a safety factor of 1.5.
pub fn auto_n_max_css(params: &CssParams) -> usize {
    let mu = params.intensity();
    let n = poisson_tail_cutoff(mu, CSS_TAIL_TOLERANCE);
    ((n as f64 * 1.5).ceil() as usize).max(10)
}

fn poisson_tail_cutoff(mu: f64, tol: f64) -> usize {
    if mu == 0.0 {
        return 1;
    }
    // accumulate the CDF in log space until the remainder is below tol
    let mut n = 0usize;
    let mut cdf = 0.0;
    loop {
        let w = (-mu + n as f64 * mu.ln() - crate::specfun::ln_factorial(n)).exp();
        cdf += w;
        n += 1;
        if 1.0 - cdf < tol && n as f64 > mu {
            return n;
        }
        if n > 100_000 {
            return n;
        }
    }
}

/// Photon-number distribution `P_0 ..= P_{n_max}`.
pub fn photon_pdf_css(
    params: &CssParams,
    res: &ReservoirParams,
    t: f64,
    n_max: PolyOrder,
) -> Result<Vec<f64>> {
    let snap = snapshot(params, res, t)?;
    let u = snap.beta.norm_sqr();
    let fc = snap.f * params.theta.cos();
    let scale = 2.0 / params.norm_sq();
    let poisson = |n: usize| -> f64 {
        log_poisson_weight(PolyOrder::with_limit(n, usize::MAX).expect("unbounded"), u)
            .expect("u >= 0")
            .exp()
    };
    let parity = |n: usize| if n % 2 == 0 { 1.0 + fc } else { 1.0 - fc };
    let n_max = n_max.get();
    let pdf: Vec<f64> = (0..=n_max)
        .map(|n| scale * poisson(n) * parity(n))
        .collect();
    // the tail beyond n_max, summed past the Poisson peak until it stops contributing
    let mut tail = 0.0;
    let mut n = n_max + 1;
    loop {
        let w = scale * poisson(n);
        tail += w * parity(n);
        if n as f64 > u && (w == 0.0 || w < 1e-18 * tail) {
            break;
        }
        n += 1;
    }
    if tail > CSS_TAIL_TOLERANCE {
        return Err(Error::Truncation {
            n_max,
            tail,
            suggested: auto_n_max_css(params).max(n_max + 1),
        });
    }
    Ok(pdf)
}

/// Mandel parameter `Q = (<(dn)^2> - <n>) / <n>` from factorial moments.
///
/// `None` when `<n> = 0`.
pub fn mandel_q(pdf: &[f64]) -> Result<Option<f64>> {
    let total: f64 = pdf.iter().sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(invalid(
            "pdf",
            format!("must sum to 1 within 1e-10, sums to {total}"),
        ));
    }
    let (mean, fact2) = factorial_moments(pdf);
    if mean == 0.0 {
        return Ok(None);
    }
    Ok(Some((fact2 - mean * mean) / mean))
}

/// `(<n>, <n(n-1)>)` of a photon-number distribution.
pub fn factorial_moments(pdf: &[f64]) -> (f64, f64) {
    pdf.iter().enumerate().fold((0.0, 0.0), |(m1, m2), (n, p)| {
        let nf = n as f64;
        (m1 + nf * p, m2 + nf * (nf - 1.0) * p)
    })
}

/// `-x ln x` with `0 ln 0 = 0`.
pub(crate) fn xlnx_neg(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.ln()
    }
}

/// Von Neumann entropy of the two non-zero eigenvalues; `-p_e ln p_e - p_o ln p_o`
/// for the even and odd states.
pub fn entropy_css(params: &CssParams, res: &ReservoirParams, t: f64) -> Result<f64> {
    let (upper, lower) = snapshot(params, res, t)?.eigenvalues();
    Ok(xlnx_neg(upper) + xlnx_neg(lower))
}

/// Minimum of the Wigner function over a set of phase-space points.
pub fn min_wigner_css(
    params: &CssParams,
    res: &ReservoirParams,
    t: f64,
    points: &[Complex],
) -> Result<f64> {
    let mut min = f64::INFINITY;
    for &l in points {
        min = min.min(wigner_css(params, res, t, l)?);
    }
    Ok(min)
}

/// First time on `times` at which the Wigner minimum over `points` rises above
/// `-threshold`. This is a grid-based negativity threshold, reported separately
/// from the e-folding time of `f`.
pub fn negativity_threshold_time(
    params: &CssParams,
    res: &ReservoirParams,
    times: &[f64],
    points: &[Complex],
    threshold: f64,
) -> Result<Option<f64>> {
    for &t in times {
        if min_wigner_css(params, res, t, points)? >= -threshold {
            return Ok(Some(t));
        }
    }
    Ok(None)
}
