//! Initial states on the truncated Fock space.

use nalgebra::DMatrix;

use super::{FockDensityMatrix, DEFAULT_TAIL_BUDGET, TAIL_LEVELS};
use crate::error::{Error, Result};
use crate::params::{CssParams, GssParams};
use crate::specfun::ln_factorial;
use crate::Complex;

/// Largest dimension the automatic builders will try.
pub const MAX_AUTO_DIM: usize = 3000;

/// Extra levels used while exponentiating generators, so that the artifacts of
/// truncating `a` sit far above the levels that are kept.
pub fn pad_for(dim: usize) -> usize {
    40 + dim / 4
}

/// `<n|beta>` for a coherent state, evaluated in log space.
pub(crate) fn coherent_coefficient(beta: Complex, n: usize) -> Complex {
    let b2 = beta.norm_sqr();
    if b2 == 0.0 {
        return if n == 0 {
            Complex::new(1.0, 0.0)
        } else {
            Complex::new(0.0, 0.0)
        };
    }
    let ln_mag = -0.5 * b2 + 0.5 * n as f64 * b2.ln() - 0.5 * ln_factorial(n);
    Complex::from_polar(ln_mag.exp(), n as f64 * beta.arg())
}

fn dimension_error(dim: usize, tail: f64, budget: f64, suggested: usize) -> Error {
    Error::Dimension {
        dim,
        tail,
        budget,
        suggested,
    }
}

fn projector(psi: &[Complex]) -> DMatrix<Complex> {
    let d = psi.len();
    DMatrix::from_fn(d, d, |m, n| psi[m] * psi[n].conj())
}

/// `|beta><beta|`, renormalized after truncation.
pub fn build_coherent(beta: Complex, dim: usize) -> Result<FockDensityMatrix> {
    let amp = |n: usize| coherent_coefficient(beta, n);
    pure_from_amplitudes(amp, beta.norm_sqr(), dim)
}

fn pure_from_amplitudes(
    amp: impl Fn(usize) -> Complex,
    mean: f64,
    dim: usize,
) -> Result<FockDensityMatrix> {
    if dim <= TAIL_LEVELS {
        return Err(dimension_error(
            dim,
            1.0,
            DEFAULT_TAIL_BUDGET,
            TAIL_LEVELS + 10,
        ));
    }
    let tail = amplitude_tail(&amp, mean, dim - TAIL_LEVELS);
    if tail > DEFAULT_TAIL_BUDGET {
        let suggested = tail_dim(&amp, mean, DEFAULT_TAIL_BUDGET);
        return Err(dimension_error(
            dim,
            tail,
            DEFAULT_TAIL_BUDGET,
            suggested.max(dim + 1),
        ));
    }
    let mut psi: Vec<Complex> = (0..dim).map(&amp).collect();
    let norm: f64 = psi.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    for c in &mut psi {
        *c /= norm;
    }
    Ok(FockDensityMatrix::from_raw(projector(&psi)))
}

/// `sum_{n >= from} |amp(n)|^2`, summed past the peak until it stops changing.
fn amplitude_tail(amp: &impl Fn(usize) -> Complex, mean: f64, from: usize) -> f64 {
    let mut tail = 0.0;
    let mut n = from;
    loop {
        let w = amp(n).norm_sqr() + amp(n + 1).norm_sqr();
        tail += w;
        if n as f64 > mean && (w == 0.0 || w < 1e-17 * tail) {
            return tail;
        }
        n += 2;
    }
}

/// Smallest dimension whose top-level tail is within `budget`.
fn tail_dim(amp: &impl Fn(usize) -> Complex, mean: f64, budget: f64) -> usize {
    let mut d = TAIL_LEVELS + 1;
    while amplitude_tail(amp, mean, d - TAIL_LEVELS) > budget {
        d += 1;
    }
    d
}

fn css_amplitude(params: &CssParams) -> impl Fn(usize) -> Complex {
    let beta = params.beta0;
    let eith = Complex::from_polar(1.0, params.theta);
    let norm = params.norm_sq().sqrt();
    move |n| {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        coherent_coefficient(beta, n) * (Complex::new(1.0, 0.0) + eith * sign) / norm
    }
}

/// Dimension that keeps the superposition's top-level population within `budget`.
pub fn css_dim_hint(params: &CssParams, budget: f64) -> usize {
    tail_dim(&css_amplitude(params), params.intensity(), budget)
}

/// `|psi><psi|` with `psi = (|beta0> + e^{i theta}|-beta0>)/N`.
pub fn build_css(params: &CssParams, dim: usize) -> Result<FockDensityMatrix> {
    params.validate()?;
    pure_from_amplitudes(css_amplitude(params), params.intensity(), dim)
}

/// [`build_css`] at the smallest dimension within the default budget, with `extra` levels on top.
pub fn build_css_auto(params: &CssParams, extra: usize) -> Result<FockDensityMatrix> {
    build_css(params, css_dim_hint(params, DEFAULT_TAIL_BUDGET) + extra)
}

fn thermal_weights(nu: f64, m: usize) -> Vec<f64> {
    if nu == 0.0 {
        let mut p = vec![0.0; m];
        p[0] = 1.0;
        return p;
    }
    let q = nu / (nu + 1.0);
    (0..m)
        .map(|n| (n as f64 * q.ln()).exp() / (nu + 1.0))
        .collect()
}

/// Thermal state with mean occupation `nu`.
pub fn build_thermal(nu: f64, dim: usize) -> Result<FockDensityMatrix> {
    let p = thermal_weights(nu, dim);
    let q = if nu > 0.0 { nu / (nu + 1.0) } else { 0.0 };
    let tail = q.powi((dim - TAIL_LEVELS.min(dim)) as i32);
    if tail > DEFAULT_TAIL_BUDGET {
        let need = (DEFAULT_TAIL_BUDGET.ln() / q.ln()).ceil() as usize + TAIL_LEVELS;
        return Err(dimension_error(dim, tail, DEFAULT_TAIL_BUDGET, need));
    }
    let tr: f64 = p.iter().sum();
    let mut m = DMatrix::<Complex>::zeros(dim, dim);
    for (n, w) in p.iter().enumerate() {
        m[(n, n)] = Complex::new(w / tr, 0.0);
    }
    Ok(FockDensityMatrix::from_raw(m))
}

/// Dimension estimate for a displaced squeezed thermal state.
///
/// The photon-number tail of the undisplaced state falls off like `q^n` with
/// `q = (l - 1/2)/(l + 1/2)`, `l = (nu0 + 1/2) e^{2 r0}` the larger covariance
/// eigenvalue; the displacement shifts and widens it.
pub fn gss_dim_hint(params: &GssParams, budget: f64) -> usize {
    dim_for_eigenvalue((params.nu0 + 0.5) * (2.0 * params.r0).exp(), params, budget)
}

/// Dimension that holds the whole trajectory towards a reservoir of occupation `nbar`.
///
/// The larger covariance eigenvalue moves monotonically from its initial value
/// to `nbar + 1/2` and the displacement only decays, so both endpoints bound it.
pub fn gss_trajectory_dim_hint(params: &GssParams, nbar: f64, budget: f64) -> usize {
    let l0 = (params.nu0 + 0.5) * (2.0 * params.r0).exp();
    dim_for_eigenvalue(l0.max(nbar + 0.5), params, budget)
}

fn dim_for_eigenvalue(l: f64, params: &GssParams, budget: f64) -> usize {
    let q = (l - 0.5) / (l + 0.5);
    let base = if q <= 0.0 {
        1.0
    } else {
        ((budget * (1.0 - q) / 100.0).ln() / q.ln()).ceil()
    };
    let a = params.alpha0.norm();
    let spread = (2.0 * l).sqrt();
    let extra = (a * a + 10.0 * a * spread).ceil();
    (base + extra) as usize + TAIL_LEVELS + 5
}

/// `exp(G)` for a real generator restricted to one parity sector of `x (a^dag^2 - a^2) / 2`.
fn squeeze_block(r: f64, m: usize, parity: usize) -> DMatrix<f64> {
    let size = (m + 1 - parity) / 2;
    let mut g = DMatrix::<f64>::zeros(size, size);
    for i in 0..size.saturating_sub(1) {
        let n = (2 * i + parity) as f64;
        let c = 0.5 * r * ((n + 1.0) * (n + 2.0)).sqrt();
        g[(i + 1, i)] = c;
        g[(i, i + 1)] = -c;
    }
    g.exp()
}

/// `exp(x (a^dag - a))` on `m` levels.
pub(super) fn real_displacement(x: f64, m: usize) -> DMatrix<f64> {
    let mut g = DMatrix::<f64>::zeros(m, m);
    for n in 0..m - 1 {
        let c = x * ((n + 1) as f64).sqrt();
        g[(n + 1, n)] = c;
        g[(n, n + 1)] = -c;
    }
    g.exp()
}

/// `D(lambda)` on `dim` levels, computed on `dim + pad_for(dim)` levels and cropped.
pub fn displacement(lambda: Complex, dim: usize) -> DMatrix<Complex> {
    let m = dim + pad_for(dim);
    let d0 = real_displacement(lambda.norm(), m);
    let th = lambda.arg();
    DMatrix::from_fn(dim, dim, |i, j| {
        Complex::from_polar(d0[(i, j)], th * (i as f64 - j as f64))
    })
}

/// `D(alpha0) S(r0, phi0) rho_{nu0} S^dag D^dag` by exponentiating the truncated
/// generators on a padded space and cropping to `dim` levels.
pub fn build_gss(params: &GssParams, dim: usize) -> Result<FockDensityMatrix> {
    params.validate()?;
    if dim <= TAIL_LEVELS {
        return Err(dimension_error(
            dim,
            1.0,
            DEFAULT_TAIL_BUDGET,
            TAIL_LEVELS + 10,
        ));
    }
    let m = dim + pad_for(dim);
    let p = thermal_weights(params.nu0, m);

    // S(r, 0) is real and preserves parity; rho = (S sqrt(p)) (S sqrt(p))^T per sector.
    let mut re = DMatrix::<f64>::zeros(m, m);
    for parity in 0..2 {
        let s = squeeze_block(params.r0, m, parity);
        let size = s.nrows();
        let mut b = s;
        for j in 0..size {
            let w = p[2 * j + parity].sqrt();
            b.column_mut(j).scale_mut(w);
        }
        let block = &b * b.transpose();
        for i in 0..size {
            for j in 0..size {
                re[(2 * i + parity, 2 * j + parity)] = block[(i, j)];
            }
        }
    }
    let phi = params.phi0;
    let alpha = params.alpha0;
    let full = if alpha.norm() == 0.0 {
        DMatrix::from_fn(m, m, |i, j| {
            Complex::from_polar(re[(i, j)], 0.5 * phi * (i as f64 - j as f64))
        })
    } else {
        // D(alpha) = V D0(|alpha|) V^dag with V = diag(e^{i n arg alpha})
        let th = alpha.arg();
        let rot = |i: usize, j: usize| (0.5 * phi - th) * (i as f64 - j as f64);
        let mut ar = DMatrix::<f64>::zeros(m, m);
        let mut ai = DMatrix::<f64>::zeros(m, m);
        for j in 0..m {
            for i in 0..m {
                let z = Complex::from_polar(re[(i, j)], rot(i, j));
                ar[(i, j)] = z.re;
                ai[(i, j)] = z.im;
            }
        }
        let d0 = real_displacement(alpha.norm(), m);
        let d0t = d0.transpose();
        let br = &d0 * ar * &d0t;
        let bi = &d0 * ai * &d0t;
        DMatrix::from_fn(m, m, |i, j| {
            Complex::new(br[(i, j)], bi[(i, j)])
                * Complex::from_polar(1.0, th * (i as f64 - j as f64))
        })
    };

    let total: f64 = (0..m).map(|n| full[(n, n)].re).sum();
    let kept: f64 = (0..dim - TAIL_LEVELS).map(|n| full[(n, n)].re).sum();
    let tail = (total - kept).max(0.0) + (1.0 - total).max(0.0);
    if tail > DEFAULT_TAIL_BUDGET {
        let suggested = (dim * 3 / 2).max(gss_dim_hint(params, DEFAULT_TAIL_BUDGET));
        return Err(dimension_error(dim, tail, DEFAULT_TAIL_BUDGET, suggested));
    }
    let mut rho = full.view((0, 0), (dim, dim)).into_owned();
    let tr: f64 = (0..dim).map(|n| rho[(n, n)].re).sum();
    rho /= Complex::new(tr, 0.0);
    let rho = hermitize(rho);
    Ok(FockDensityMatrix::from_raw(rho))
}

pub(crate) fn hermitize(rho: DMatrix<Complex>) -> DMatrix<Complex> {
    let adj = rho.adjoint();
    (rho + adj) * Complex::new(0.5, 0.0)
}

/// [`build_gss`] starting from [`gss_dim_hint`] and growing until the budget holds,
/// with `extra` levels on top.
pub fn build_gss_auto(params: &GssParams, extra: usize) -> Result<FockDensityMatrix> {
    let mut dim = gss_dim_hint(params, DEFAULT_TAIL_BUDGET);
    loop {
        match build_gss(params, dim + extra) {
            Err(Error::Dimension { suggested, .. }) if suggested <= MAX_AUTO_DIM => {
                dim = suggested.max(dim + 1);
            }
            other => return other,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_builds() {
        let v = build_css(&CssParams::even(0.0).unwrap(), 10).unwrap();
        assert!((v.get(0, 0).re - 1.0).abs() < 1e-15);
        let g = build_gss(&GssParams::squeezed_thermal(0.0, 0.0).unwrap(), 10).unwrap();
        assert!((g.get(0, 0).re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn odd_css_has_no_vacuum() {
        let rho = build_css(&CssParams::odd(0.8).unwrap(), 30).unwrap();
        assert!(rho.get(0, 0).norm() < 1e-30);
        let rho = build_css(&CssParams::even(1.5).unwrap(), 40).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn css_too_small_is_reported() {
        match build_css(&CssParams::even(2.0).unwrap(), 12) {
            Err(Error::Dimension { suggested, .. }) => assert!(suggested > 12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn thermal_state() {
        let rho = build_gss(&GssParams::squeezed_thermal(0.0, 3.0).unwrap(), 120).unwrap();
        assert!((rho.get(0, 0).re - 0.25).abs() < 1e-12);
        assert!((rho.get(5, 5).re - 0.75f64.powi(5) / 4.0).abs() < 1e-12);
    }

    #[test]
    fn squeezed_vacuum_coefficients() {
        let r: f64 = 1.0;
        let rho = build_gss_auto(&GssParams::squeezed_thermal(r, 0.0).unwrap(), 0).unwrap();
        let pops = rho.populations();
        let mean: f64 = pops.iter().enumerate().map(|(n, p)| n as f64 * p).sum();
        assert!((mean - r.sinh().powi(2)).abs() < 1e-8);
        assert!(pops.iter().skip(1).step_by(2).all(|p| p.abs() < 1e-14));
        // <2|S|0> = -(1/cosh r)... magnitude tanh(r)/(sqrt(2) cosh^{1/2} r)
        let c2 = r.tanh() / 2f64.sqrt() / r.cosh().sqrt();
        assert!((pops[2] - c2 * c2).abs() < 1e-12);
    }

    #[test]
    fn displacement_of_vacuum_is_coherent() {
        let beta = Complex::new(0.6, -0.9);
        let d = displacement(beta, 30);
        for n in 0..20 {
            assert!((d[(n, 0)] - coherent_coefficient(beta, n)).norm() < 1e-13);
        }
    }

    #[test]
    fn displaced_gss_mean() {
        let p = GssParams::new(Complex::new(0.7, 0.4), 0.5, 0.9, 0.5).unwrap();
        let rho = build_gss_auto(&p, 0).unwrap();
        let mean: f64 = rho
            .populations()
            .iter()
            .enumerate()
            .map(|(n, q)| n as f64 * q)
            .sum();
        let expect = 0.65 + 0.5 + 2.0 * 0.5f64.sinh().powi(2);
        assert!((mean - expect).abs() < 1e-8, "{mean} vs {expect}");
    }
}
