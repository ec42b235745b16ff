//! Damping of displaced squeezed thermal states in a thermal reservoir.
//!
//! The state `D(alpha) S(r, phi) rho_nu S^dag D^dag` stays Gaussian; only its
//! four parameters move. With `s = e^{-2kt}` the covariance eigenvalues (in
//! vacuum units, times 1/2) relax linearly in `s`:
//!
//! ```text
//! l_pm(t) = (nu0 + 1/2) e^{pm 2 r0} s + (nbar + 1/2)(1 - s),
//! nu + 1/2 = sqrt(l_+ l_-),   r = ln(l_+ / l_-) / 4.
//! ```

use serde::{Deserialize, Serialize};

use crate::css::{factorial_moments, xlnx_neg};
use crate::dd::Dd;
use crate::error::{invalid, Error, Result};
use crate::moments::CovarianceSnapshot;
use crate::params::{CssParams, GssParams, ReservoirParams};
use crate::search::bisect;
use crate::specfun::{laguerre_sequence, ln_factorial, PolyOrder};
use crate::variant::FormulaVariant;
use crate::Complex;

/// Truncation threshold for the GSS photon distribution.
pub const GSS_TAIL_TOLERANCE: f64 = 1e-10;
/// Truncation threshold for the Laguerre-series Wigner function.
pub const SERIES_TAIL_TOLERANCE: f64 = 1e-12;
/// Cancellation ratio above which the Hermite sum is redone in double-double.
pub const CANCELLATION_FALLBACK: f64 = 1e8;
/// Largest photon number the automatic distribution will reach for.
pub const MAX_AUTO_N: usize = 8192;

const NU_CLAMP: f64 = 1e-12;
const DD_EPSILON: f64 = 4.93e-32;
/// Largest tolerated rounding error on a single `P_n`.
const PN_ERROR_BUDGET: f64 = 1e-14;

/// Parameters of the evolved Gaussian state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GssSnapshot {
    pub t: f64,
    pub alpha: Complex,
    pub r: f64,
    pub phi: f64,
    pub nu: f64,
    /// `(nu0 + 1/2) cosh(2 r0) e^{-2kt} + (nbar + 1/2)(1 - e^{-2kt})`.
    pub x_aux: f64,
}

impl GssSnapshot {
    /// Snapshot of a state given directly by its parameters.
    pub fn from_params(p: &GssParams) -> Self {
        Self {
            t: 0.0,
            alpha: p.alpha0,
            r: p.r0,
            phi: p.phi0,
            nu: p.nu0,
            x_aux: (p.nu0 + 0.5) * (2.0 * p.r0).cosh(),
        }
    }
}

pub fn evolve_gss(params: &GssParams, res: &ReservoirParams, t: f64) -> Result<GssSnapshot> {
    params.validate()?;
    res.validate()?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(invalid("t", format!("must be finite and >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(GssSnapshot::from_params(params));
    }
    let s = (-2.0 * res.k * t).exp();
    let relaxed = -(-2.0 * res.k * t).exp_m1();
    let a = params.nu0 + 0.5;
    let nb = res.nbar + 0.5;
    let two_r0 = 2.0 * params.r0;
    let l_plus = a * two_r0.exp() * s + nb * relaxed;
    let l_minus = a * (-two_r0).exp() * s + nb * relaxed;
    let x_aux = a * two_r0.cosh() * s + nb * relaxed;

    let radicand = l_plus * l_minus;
    let nu = radicand.sqrt() - 0.5;
    let nu = if nu >= 0.0 {
        nu
    } else if nu >= -NU_CLAMP {
        0.0
    } else {
        return Err(Error::NumericalConsistency(format!(
            "symplectic eigenvalue below 1/2 at t = {t}: nu = {nu}"
        )));
    };
    Ok(GssSnapshot {
        t,
        alpha: params.alpha0 * Complex::new(-res.k * t, -res.omega * t).exp(),
        r: 0.25 * (l_plus / l_minus).ln(),
        phi: params.phi0 - 2.0 * res.omega * t,
        nu,
        x_aux,
    })
}

/// Covariance determinant `(nu + 1/2)^2`.
pub fn determinant_gss(snap: &GssSnapshot) -> f64 {
    (snap.nu + 0.5).powi(2)
}

/// Von Neumann entropy `(nu+1) ln(nu+1) - nu ln nu`.
pub fn entropy_gss(snap: &GssSnapshot) -> f64 {
    let nu = snap.nu;
    if nu <= 0.0 {
        return 0.0;
    }
    (nu + 1.0) * nu.ln_1p() + xlnx_neg(nu)
}

/// Quadrature covariance of the snapshot in the `omega`-weighted convention.
pub fn covariance_gss(snap: &GssSnapshot, omega: f64) -> CovarianceSnapshot {
    let two_nu1 = 2.0 * snap.nu + 1.0;
    let a2c = Complex::from_polar(0.5 * two_nu1 * (2.0 * snap.r).sinh(), snap.phi);
    let nc = snap.nu + two_nu1 * snap.r.sinh().powi(2);
    let a = snap.alpha;
    CovarianceSnapshot::from_ladder_moments(omega, a, a2c + a * a, nc + a.norm_sqr())
}

/// `d` of the characteristic-time formula.
fn char_time_d(params: &GssParams, nbar: f64) -> f64 {
    let c = (2.0 * params.r0).cosh();
    let nu0 = params.nu0;
    2.0 * c * (nbar * (nu0 + 1.0) + nu0 * (nbar + 1.0) + 0.5)
        - 2.0 * (nbar + 0.5).powi(2)
        - 2.0 * (nu0 + 0.5).powi(2)
}

/// Time of the interior maximum of `D(t)`:
/// `(2k)^{-1} { ln 2 - ln[ (2 nbar + 1)/d (2 nu0 cosh 2r0 + cosh 2r0 - 2 nbar - 1) ] }`.
///
/// Present only when real and strictly positive.
pub fn char_time_gss(params: &GssParams, res: &ReservoirParams) -> Option<f64> {
    if !(res.k > 0.0) {
        return None;
    }
    let d = char_time_d(params, res.nbar);
    if d == 0.0 {
        return None;
    }
    let c = (2.0 * params.r0).cosh();
    let arg = (2.0 * res.nbar + 1.0) / d * (2.0 * params.nu0 * c + c - 2.0 * res.nbar - 1.0);
    if !(arg > 0.0) {
        return None;
    }
    let t = (std::f64::consts::LN_2 - arg.ln()) / (2.0 * res.k);
    (t > 0.0 && t.is_finite()).then_some(t)
}

/// The two visibility predicates `(nu0 < bound(nbar), nbar < bound(nu0))`.
pub fn visibility_gss(params: &GssParams, res: &ReservoirParams) -> (bool, bool) {
    let c = (2.0 * params.r0).cosh();
    (
        params.nu0 < 0.5 * (2.0 * res.nbar * c + c - 1.0),
        res.nbar < 0.5 * (2.0 * params.nu0 * c + c - 1.0),
    )
}

/// Dimensionless quadratures `(X, P) = sqrt(2) (Re, Im)` of a phase-space amplitude.
fn quadratures(z: Complex) -> (f64, f64) {
    (
        std::f64::consts::SQRT_2 * z.re,
        std::f64::consts::SQRT_2 * z.im,
    )
}

/// Closed Gaussian Wigner function, `W = 2 tr[rho D(lambda) (-1)^n D^dag(lambda)]`.
pub fn wigner_gss_closed(snap: &GssSnapshot, lambda: Complex) -> f64 {
    wigner_gss_closed_variant(snap, lambda, FormulaVariant::Corrected)
}

/// Closed Gaussian Wigner function. The literal variant keeps the `1/(pi(nu+1/2))`
/// prefactor and centres the Gaussian at the origin whatever `alpha` is.
pub fn wigner_gss_closed_variant(
    snap: &GssSnapshot,
    lambda: Complex,
    variant: FormulaVariant,
) -> f64 {
    let (x, p) = quadratures(lambda);
    let (dx, dp, prefactor) = match variant {
        FormulaVariant::Corrected => {
            let (x0, p0) = quadratures(snap.alpha);
            (x - x0, p - p0, 1.0 / (snap.nu + 0.5))
        }
        FormulaVariant::Literal => (x, p, 1.0 / (std::f64::consts::PI * (snap.nu + 0.5))),
    };
    let two_r = 2.0 * snap.r;
    let (sp, cp) = snap.phi.sin_cos();
    let c = two_r.cosh();
    let h = two_r.sinh();
    let w = 2.0 * snap.nu + 1.0;
    // cosh(2r)(1 -+ tanh(2r) cos phi) written without the tanh
    let exponent = sp * h / (snap.nu + 0.5) * dx * dp
        - (c - h * cp) / w * dx * dx
        - (c + h * cp) / w * dp * dp;
    prefactor * exponent.exp()
}

/// Order needed for the Laguerre-series tail to drop below `SERIES_TAIL_TOLERANCE`.
pub fn series_order_for(nu: f64) -> usize {
    if nu <= 0.0 {
        return 0;
    }
    let ratio = nu / (nu + 1.0);
    // tail after l_max is bounded by 2 ratio^{l_max + 1}
    ((SERIES_TAIL_TOLERANCE / 2.0).ln() / ratio.ln()).ceil() as usize
}

/// Laguerre-series Wigner function in the same convention as [`wigner_gss_closed`].
pub fn wigner_gss_series(snap: &GssSnapshot, lambda: Complex, l_max: PolyOrder) -> Result<f64> {
    wigner_gss_series_variant(snap, lambda, l_max, FormulaVariant::Corrected)
}

/// Laguerre-series Wigner function.
///
/// Each term is bounded by `ratio^l / (nu + 1)` with `ratio = nu/(nu+1)` because
/// `|L_l(y)| e^{-y/2} <= 1`; the series is rejected when that bound on the tail
/// exceeds `SERIES_TAIL_TOLERANCE`.
///
/// The corrected variant shears the momentum by `sin(phi) sinh(2r)/F4^2`, is
/// centred on `alpha`, and is scaled by `2 pi` into the displaced-parity
/// convention. The literal variant takes the printed imaginary part of `F2`,
/// the `p + p0` shift and the `1/pi` normalization.
pub fn wigner_gss_series_variant(
    snap: &GssSnapshot,
    lambda: Complex,
    l_max: PolyOrder,
    variant: FormulaVariant,
) -> Result<f64> {
    let nu = snap.nu;
    let l_max_n = l_max.get();
    if nu > 0.0 {
        let ratio = nu / (nu + 1.0);
        let tail = 2.0 * ratio.powi(l_max_n as i32 + 1);
        if tail > SERIES_TAIL_TOLERANCE {
            return Err(Error::Truncation {
                n_max: l_max_n,
                tail,
                suggested: series_order_for(nu),
            });
        }
    }
    let (x, p) = quadratures(lambda);
    let (x0, p0) = quadratures(snap.alpha);
    let (sr, cr) = (snap.r.sinh(), snap.r.cosh());
    let (sp, cp) = snap.phi.sin_cos();
    let f4 = ((2.0 * snap.r).cosh() + (2.0 * snap.r).sinh() * cp).sqrt();
    let dx = x - x0;
    let (shear, p_shift, norm) = match variant {
        FormulaVariant::Corrected => (
            (2.0 * snap.r).sinh() * sp / (f4 * f4),
            p - p0,
            2.0 * std::f64::consts::PI,
        ),
        FormulaVariant::Literal => {
            let e = Complex::from_polar(1.0, snap.phi);
            let f1 = cr + e * sr;
            let f2 = (1.0 - Complex::new(0.0, sp * sr) * f1) / ((cr + cp * sr) * f1);
            (f2.im, p + p0, 1.0)
        }
    };
    let xs = dx / f4;
    let ps = f4 * (p_shift - dx * shear);
    let rr = xs * xs + ps * ps;
    let lag = laguerre_sequence(l_max, 2.0 * rr);
    let damp = (-rr).exp();
    let mut sum = 0.0;
    let q = -nu / (nu + 1.0);
    let mut weight = 1.0 / (nu + 1.0);
    for l in lag {
        sum += weight * l;
        weight *= q;
        if weight == 0.0 {
            break;
        }
    }
    Ok(norm * sum * damp / std::f64::consts::PI)
}

/// `<n> = |alpha|^2 + nu + (2 nu + 1) sinh^2 r`.
pub fn mean_photon_gss(snap: &GssSnapshot) -> f64 {
    snap.alpha.norm_sqr() + snap.nu + (2.0 * snap.nu + 1.0) * snap.r.sinh().powi(2)
}

/// Arithmetic used by the Hermite double sum, in `f64` or double-double.
trait Field: Copy {
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn add(self, o: Self) -> Self;
    fn mul(self, o: Self) -> Self;
    fn div_f64(self, d: f64) -> Self;
    fn ldexp(self, e: i32) -> Self;
}

impl Field for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn mul(self, o: Self) -> Self {
        self * o
    }
    fn div_f64(self, d: f64) -> Self {
        self / d
    }
    fn ldexp(self, e: i32) -> Self {
        self * 2f64.powi(e)
    }
}

impl Field for Dd {
    fn from_f64(x: f64) -> Self {
        Dd::from_f64(x)
    }
    fn to_f64(self) -> f64 {
        Dd::to_f64(self)
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn mul(self, o: Self) -> Self {
        self * o
    }
    fn div_f64(self, d: f64) -> Self {
        Dd::div_f64(self, d)
    }
    fn ldexp(self, e: i32) -> Self {
        Dd::ldexp(self, e)
    }
}

const RENORM_BITS: i32 = 256;

/// `m * 2^e` with the mantissa kept inside `[2^-256, 2^256]`.
#[derive(Clone, Copy)]
struct Sc<T> {
    m: T,
    e: i64,
}

impl<T: Field> Sc<T> {
    fn renorm(mut self) -> Self {
        let a = self.m.to_f64().abs();
        if a > 2f64.powi(RENORM_BITS) {
            self.m = self.m.ldexp(-RENORM_BITS);
            self.e += RENORM_BITS as i64;
        } else if a != 0.0 && a < 2f64.powi(-RENORM_BITS) {
            self.m = self.m.ldexp(RENORM_BITS);
            self.e -= RENORM_BITS as i64;
        }
        self
    }
}

/// `h_j = i^{-j} s^{j/2} H_j(i y / sqrt(s))`, real for real `y, s`, via
/// `h_{j+1} = 2 y h_j + 2 j s h_{j-1}`.
fn hermite_imag_sequence<T: Field>(j_max: usize, y: f64, s: f64) -> Vec<Sc<T>> {
    let mut out = Vec::with_capacity(j_max + 1);
    let mut prev = T::from_f64(1.0);
    let mut cur = T::from_f64(2.0 * y);
    let mut e = 0i64;
    out.push(Sc { m: prev, e });
    if j_max == 0 {
        return out;
    }
    out.push(Sc { m: cur, e });
    let two_y = T::from_f64(2.0 * y);
    for j in 1..j_max {
        let next = two_y
            .mul(cur)
            .add(T::from_f64(2.0 * j as f64 * s).mul(prev));
        prev = cur;
        cur = next;
        let a = cur.to_f64().abs();
        if a > 2f64.powi(RENORM_BITS) {
            cur = cur.ldexp(-RENORM_BITS);
            prev = prev.ldexp(-RENORM_BITS);
            e += RENORM_BITS as i64;
        }
        out.push(Sc { m: cur, e });
    }
    out
}

/// Binomial coefficients `C(n, 0..=n)` as scaled values.
fn binomial_row<T: Field>(n: usize) -> Vec<Sc<T>> {
    let mut out = Vec::with_capacity(n + 1);
    let mut c = Sc {
        m: T::from_f64(1.0),
        e: 0,
    };
    out.push(c);
    for k in 0..n {
        c.m = c.m.mul(T::from_f64((n - k) as f64)).div_f64((k + 1) as f64);
        c = c.renorm();
        out.push(c);
    }
    out
}

/// Value of `S_n = sum_k C(n,k) h-_{2k} h+_{2n-2k}`.
#[derive(Clone, Copy)]
struct RowSum {
    sign: f64,
    ln_abs: f64,
    /// `ln` of the largest single term; bounds the rounding error of the sum.
    ln_largest: f64,
}

impl RowSum {
    fn cancellation(&self) -> f64 {
        (self.ln_largest - self.ln_abs).exp()
    }
}

fn hermite_double_sum<T: Field>(n: usize, hm: &[Sc<T>], hp: &[Sc<T>]) -> RowSum {
    let binom = binomial_row::<T>(n);
    let terms: Vec<Sc<T>> = (0..=n)
        .map(|k| {
            let a = hm[2 * k];
            let b = hp[2 * n - 2 * k];
            Sc {
                m: binom[k].m.mul(a.m).mul(b.m),
                e: binom[k].e + a.e + b.e,
            }
        })
        .filter(|t| t.m.to_f64() != 0.0)
        .collect();
    if terms.is_empty() {
        return RowSum {
            sign: 0.0,
            ln_abs: f64::NEG_INFINITY,
            ln_largest: f64::NEG_INFINITY,
        };
    }
    let lead = |t: &Sc<T>| t.m.to_f64().abs().log2() + t.e as f64;
    let top_exact = terms.iter().map(lead).fold(f64::NEG_INFINITY, f64::max);
    let top = top_exact.floor() as i64;
    let mut sum = T::from_f64(0.0);
    for t in &terms {
        let shift = t.e - top;
        if shift < -1100 {
            continue;
        }
        sum = sum.add(t.m.ldexp(shift as i32));
    }
    let s = sum.to_f64();
    let ln2 = std::f64::consts::LN_2;
    RowSum {
        sign: if s == 0.0 { 0.0 } else { s.signum() },
        ln_abs: if s == 0.0 {
            f64::NEG_INFINITY
        } else {
            s.abs().ln() + top as f64 * ln2
        },
        ln_largest: top_exact * ln2,
    }
}

/// Ingredients of the Hermite-sum form of `P_n`.
struct PnSetup {
    ln_piq: f64,
    y_minus: f64,
    s_minus: f64,
    y_plus: f64,
    s_plus: f64,
}

fn pn_setup(snap: &GssSnapshot, variant: FormulaVariant) -> PnSetup {
    let nu = snap.nu;
    let (sr, cr) = (snap.r.sinh(), snap.r.cosh());
    let two_r = 2.0 * snap.r;
    let eiphi = Complex::from_polar(1.0, snap.phi);
    let a = nu + (2.0 * nu + 1.0) * sr * sr;
    let b = -(2.0 * nu + 1.0) * eiphi * sr * cr;
    let c = snap.alpha;
    let den0 = (1.0 + a - b.norm()) * (1.0 + a + b.norm());
    let quad = (1.0 + a) * c.norm_sqr() + 0.5 * (b * c.conj() * c.conj() + b.conj() * c * c).re;
    let ln_piq = match variant {
        FormulaVariant::Corrected => -0.5 * den0.ln(),
        FormulaVariant::Literal => 0.5 * den0.ln(),
    } - quad / den0;

    let dt = nu * nu + (nu + 0.5) * (1.0 + two_r.cosh());
    let at = nu * (nu + 1.0) / dt;
    let bt_abs = (nu + 0.5) * two_r.sinh() / dt;
    let ct =
        (c * (0.5 + (nu + 0.5) * two_r.cosh()) - c.conj() * eiphi * (nu + 0.5) * two_r.sinh()) / dt;
    let ce = ct * Complex::from_polar(1.0, -0.5 * wrap_phase(snap.phi));
    PnSetup {
        ln_piq,
        y_minus: ce.im,
        s_minus: at - bt_abs,
        y_plus: ce.re,
        s_plus: at + bt_abs,
    }
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_phase(phi: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut w = phi.rem_euclid(two_pi);
    if w > std::f64::consts::PI {
        w -= two_pi;
    }
    w
}

fn pn_values<T: Field>(setup: &PnSetup, n_max: usize) -> Vec<RowSum> {
    let hm = hermite_imag_sequence::<T>(2 * n_max, setup.y_minus, setup.s_minus);
    let hp = hermite_imag_sequence::<T>(2 * n_max, setup.y_plus, setup.s_plus);
    (0..=n_max)
        .map(|n| hermite_double_sum(n, &hm, &hp))
        .collect()
}

/// Photon-number distribution `P_0 ..= P_{n_max}` from the double Hermite sum.
///
/// Every product is carried as mantissa and binary exponent. A row whose sum
/// cancels by more than `CANCELLATION_FALLBACK`, or whose rounding error could
/// exceed 1e-14, is recomputed in double-double.
pub fn photon_pdf_gss(
    snap: &GssSnapshot,
    n_max: PolyOrder,
    variant: FormulaVariant,
) -> Result<Vec<f64>> {
    let n_max = n_max.get();
    let pdf = photon_pdf_unchecked(snap, n_max, variant)?;
    if variant == FormulaVariant::Corrected {
        let tail = 1.0 - pdf.iter().sum::<f64>();
        if tail > GSS_TAIL_TOLERANCE {
            return Err(Error::Truncation {
                n_max,
                tail,
                suggested: suggest_n_max(snap, n_max),
            });
        }
    }
    Ok(pdf)
}

fn photon_pdf_unchecked(
    snap: &GssSnapshot,
    n_max: usize,
    variant: FormulaVariant,
) -> Result<Vec<f64>> {
    let setup = pn_setup(snap, variant);
    let ln_scale =
        |n: usize| setup.ln_piq - 2.0 * n as f64 * std::f64::consts::LN_2 - ln_factorial(n);
    let bound = |n: usize, row: &RowSum, eps: f64| {
        (n + 1) as f64 * eps * (ln_scale(n) + row.ln_largest).exp()
    };
    let fast = pn_values::<f64>(&setup, n_max);
    let fallback: Vec<bool> = fast
        .iter()
        .enumerate()
        .map(|(n, row)| {
            row.cancellation() > CANCELLATION_FALLBACK
                || bound(n, row, f64::EPSILON) > PN_ERROR_BUDGET
        })
        .collect();
    let slow = if fallback.iter().any(|&b| b) {
        Some(pn_values::<Dd>(&setup, n_max))
    } else {
        None
    };
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let (row, eps) = match &slow {
            Some(s) if fallback[n] => (s[n], DD_EPSILON),
            _ => (fast[n], f64::EPSILON),
        };
        let ln_scale = ln_scale(n);
        let error_bound = (n + 1) as f64 * eps * (ln_scale + row.ln_largest).exp();
        if error_bound > PN_ERROR_BUDGET {
            return Err(Error::NumericalConsistency(format!(
                "photon-number sum at n = {n} cancels by {:e}; rounding error up to {error_bound:e}",
                row.cancellation()
            )));
        }
        out.push(if row.sign == 0.0 {
            0.0
        } else {
            row.sign * (ln_scale + row.ln_abs).exp()
        });
    }
    Ok(out)
}

/// Rough cutoff from the mean and variance, grown past the current one.
fn suggest_n_max(snap: &GssSnapshot, current: usize) -> usize {
    let mean = mean_photon_gss(snap);
    let guess = (4.0 * mean + 40.0) as usize;
    guess.max(current * 3 / 2 + 1)
}

/// Photon-number distribution with `n_max` grown until the tail is below
/// `GSS_TAIL_TOLERANCE`.
pub fn photon_pdf_gss_auto(snap: &GssSnapshot) -> Result<Vec<f64>> {
    let mut n = ((4.0 * mean_photon_gss(snap) + 40.0) as usize).min(MAX_AUTO_N);
    loop {
        let order = PolyOrder::with_limit(n, MAX_AUTO_N)?;
        match photon_pdf_gss(snap, order, FormulaVariant::Corrected) {
            Err(Error::Truncation { .. }) if n < MAX_AUTO_N => n = (n * 3 / 2).min(MAX_AUTO_N),
            other => return other,
        }
    }
}

/// Second-order correlation with the `g2 > 3` verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct G2Witness {
    pub g2: f64,
    pub quantum: bool,
}

/// `g2 = <a^dag a^dag a a> / <a^dag a>^2` from the photon distribution.
///
/// `None` when `<n> = 0`.
pub fn g2_witness(snap: &GssSnapshot) -> Result<Option<G2Witness>> {
    let pdf = photon_pdf_gss_auto(snap)?;
    Ok(g2_from_pdf(&pdf))
}

/// `g2` and its verdict from any photon distribution.
pub fn g2_from_pdf(pdf: &[f64]) -> Option<G2Witness> {
    let (mean, fact2) = factorial_moments(pdf);
    if mean <= 0.0 {
        return None;
    }
    let g2 = fact2 / (mean * mean);
    Some(G2Witness {
        g2,
        quantum: g2 > 3.0,
    })
}

/// Squeeze magnitude `r0` at which the Gaussian state carries the same mean
/// photon number as the superposition state, by bisection to 1e-10.
pub fn energy_match_r0(css: &CssParams, alpha0: Complex, phi0: f64, nu0: f64) -> Result<f64> {
    css.validate()?;
    let target = crate::css::initial_mean_photon(css);
    if !(target > 0.0) {
        return Err(invalid("css", "mean photon number must be positive"));
    }
    let energy = |r0: f64| {
        let snap = GssSnapshot::from_params(&GssParams {
            alpha0,
            r0,
            phi0,
            nu0,
        });
        mean_photon_gss(&snap) - target
    };
    let floor = energy(0.0);
    if floor > 0.0 {
        return Err(Error::NoSolution(format!(
            "target energy {target} lies below the unsqueezed floor {}",
            floor + target
        )));
    }
    if floor == 0.0 {
        return Ok(0.0);
    }
    let mut hi = 1.0;
    while energy(hi) < 0.0 {
        hi *= 2.0;
    }
    bisect(energy, 0.0, hi, 1e-12)
}
