//! Observables read off a truncated density matrix.

use std::collections::HashMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{hermitian_eigen, FockDensityMatrix};
use crate::css::{factorial_moments, xlnx_neg};
use crate::error::{Error, Result};
use crate::moments::CovarianceSnapshot;
use crate::params::ReservoirParams;
use crate::Complex;

use super::build::{pad_for, real_displacement};

/// Eigenvalues below this are an error rather than round-off.
const EIGEN_FLOOR: f64 = -1e-10;
/// Eigenvalues below this are clamped to zero before logs and square roots.
const EIGEN_CLAMP: f64 = 1e-14;
/// Eigenvalues of `sqrt(a) b sqrt(a)` below this are round-off; their square
/// roots (about 1e-8 each) would otherwise dominate the error of `F`.
const FIDELITY_NOISE: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witnesses {
    pub populations: Vec<f64>,
    pub mean_a: Complex,
    pub mean_a2: Complex,
    pub mean_n: f64,
    pub covariance: CovarianceSnapshot,
    pub entropy: f64,
    /// Total magnitude of eigenvalues below 1e-14 set to zero for the entropy.
    pub clamped_mass: f64,
    pub mandel_q: Option<f64>,
    pub g2: Option<f64>,
    pub purity: f64,
    /// `(lambda, W(lambda))` for each requested phase-space point.
    pub wigner: Vec<(Complex, f64)>,
}

/// Moments, entropy, photon statistics and Wigner values of `rho`.
pub fn extract_witnesses(
    rho: &FockDensityMatrix,
    res: &ReservoirParams,
    points: &[Complex],
) -> Result<Witnesses> {
    let d = rho.dim();
    let e = rho.elements();
    let mut mean_a = Complex::new(0.0, 0.0);
    let mut mean_a2 = Complex::new(0.0, 0.0);
    // <a> = sum_n sqrt(n+1) rho_{n+1, n}
    for n in 0..d.saturating_sub(1) {
        mean_a += e[(n + 1, n)] * ((n + 1) as f64).sqrt();
    }
    for n in 0..d.saturating_sub(2) {
        mean_a2 += e[(n + 2, n)] * (((n + 1) * (n + 2)) as f64).sqrt();
    }
    let populations = rho.populations();
    let (mean_n, fact2) = factorial_moments(&populations);
    let mandel_q = (mean_n > 0.0).then(|| (fact2 - mean_n * mean_n) / mean_n);
    let g2 = (mean_n > 0.0).then(|| fact2 / (mean_n * mean_n));
    let (entropy, clamped_mass) = entropy_of(rho)?;
    let wigner = points
        .iter()
        .copied()
        .zip(wigner_many(rho, points))
        .collect();
    Ok(Witnesses {
        covariance: CovarianceSnapshot::from_ladder_moments(res.omega, mean_a, mean_a2, mean_n),
        populations,
        mean_a,
        mean_a2,
        mean_n,
        entropy,
        clamped_mass,
        mandel_q,
        g2,
        purity: rho.purity(),
        wigner,
    })
}

fn entropy_of(rho: &FockDensityMatrix) -> Result<(f64, f64)> {
    let ev = rho.eigenvalues()?;
    if let Some(&worst) = ev.first() {
        if worst < EIGEN_FLOOR {
            return Err(Error::NumericalConsistency(format!(
                "density matrix has eigenvalue {worst:e}"
            )));
        }
    }
    let clamped: f64 = ev
        .iter()
        .filter(|&&x| x < EIGEN_CLAMP)
        .map(|x| x.abs())
        .sum();
    Ok((
        ev.iter()
            .filter(|&&x| x >= EIGEN_CLAMP)
            .map(|&x| xlnx_neg(x))
            .sum(),
        clamped,
    ))
}

/// `W(lambda) = 2 tr[rho D(lambda) Pi D(lambda)^dag]`, normalized so the vacuum peak is 2.
pub fn wigner_at(rho: &FockDensityMatrix, lambda: Complex) -> f64 {
    wigner_many(rho, &[lambda])[0]
}

/// Displaced-parity Wigner values at several points.
///
/// The state is zero-padded first so that its displaced copy, which reaches
/// about `(sqrt(dim) + |lambda|)^2` levels, is not cut off. The real
/// displacement matrix depends on `|lambda|` only and is reused across points
/// of equal modulus.
pub fn wigner_many(rho: &FockDensityMatrix, points: &[Complex]) -> Vec<f64> {
    let far = points.iter().map(|l| l.norm()).fold(0.0, f64::max);
    let reach = (rho.dim() as f64).sqrt() + far + 8.0;
    let d = rho.dim().max((reach * reach).ceil() as usize);
    let padded = rho.resized_padded(d);
    let mut cache: HashMap<u64, DMatrix<f64>> = HashMap::new();
    points
        .iter()
        .map(|&lambda| {
            let r = lambda.norm();
            let d0 = cache
                .entry(r.to_bits())
                .or_insert_with(|| real_displacement(r, d + pad_for(d)));
            // D(-lambda)_{ij} = d0_{ij}(|lambda|) e^{i (i - j) arg(-lambda)}
            let th = (-lambda).arg();
            let dm = DMatrix::from_fn(d, d, |i, j| {
                Complex::from_polar(d0[(i, j)], th * (i as f64 - j as f64))
            });
            let left = &dm * &padded;
            // only the diagonal of D rho D^dag enters the parity
            2.0 * (0..d)
                .map(|n| {
                    let diag: Complex = (0..d).map(|j| left[(n, j)] * dm[(n, j)].conj()).sum();
                    if n % 2 == 0 {
                        diag.re
                    } else {
                        -diag.re
                    }
                })
                .sum::<f64>()
        })
        .collect()
}

/// `tr sqrt(sqrt(a) b sqrt(a))`; the smaller matrix is zero-padded.
pub fn uhlmann_fidelity(a: &FockDensityMatrix, b: &FockDensityMatrix) -> Result<f64> {
    let dim = a.dim().max(b.dim());
    let a = a.resized_padded(dim);
    let b = b.resized_padded(dim);
    let sa = psd_sqrt(&a)?;
    let m = &sa * &b * &sa;
    let m = (&m + m.adjoint()) * Complex::new(0.5, 0.0);
    let ev = hermitian_eigen(&m)?.eigenvalues;
    if let Some(worst) = ev.iter().copied().reduce(f64::min) {
        if worst < EIGEN_FLOOR {
            return Err(Error::NumericalConsistency(format!(
                "sqrt(a) b sqrt(a) has eigenvalue {worst:e}"
            )));
        }
    }
    Ok(ev
        .iter()
        .filter(|&&x| x > FIDELITY_NOISE)
        .map(|&x| x.sqrt())
        .sum())
}

fn psd_sqrt(a: &DMatrix<Complex>) -> Result<DMatrix<Complex>> {
    let eig = hermitian_eigen(a)?;
    if let Some(worst) = eig.eigenvalues.iter().copied().reduce(f64::min) {
        if worst < EIGEN_FLOOR {
            return Err(Error::NumericalConsistency(format!(
                "matrix has eigenvalue {worst:e}"
            )));
        }
    }
    let top = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    let u = &eig.eigenvectors;
    let s = DMatrix::from_diagonal(&eig.eigenvalues.map(|x| {
        let keep = if x > 1e-14 * top { x.sqrt() } else { 0.0 };
        Complex::new(keep, 0.0)
    }));
    Ok(u * s * u.adjoint())
}

impl FockDensityMatrix {
    fn resized_padded(&self, dim: usize) -> DMatrix<Complex> {
        let mut out = DMatrix::<Complex>::zeros(dim, dim);
        let k = self.dim().min(dim);
        out.view_mut((0, 0), (k, k))
            .copy_from(&self.elements().view((0, 0), (k, k)));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::super::{build_coherent, build_css, build_thermal};
    use super::*;
    use crate::params::CssParams;

    fn res() -> ReservoirParams {
        ReservoirParams::zero_temperature(1.0, 0.1).unwrap()
    }

    #[test]
    fn vacuum_wigner_peak() {
        let v = build_coherent(Complex::new(0.0, 0.0), 20).unwrap();
        assert!((wigner_at(&v, Complex::new(0.0, 0.0)) - 2.0).abs() < 1e-12);
        let l = Complex::new(0.4, -0.3);
        assert!((wigner_at(&v, l) - 2.0 * (-2.0 * l.norm_sqr()).exp()).abs() < 1e-12);
    }

    #[test]
    fn odd_cat_is_negative_at_origin() {
        let c = build_css(&CssParams::odd(1.0).unwrap(), 40).unwrap();
        assert!((wigner_at(&c, Complex::new(0.0, 0.0)) + 2.0).abs() < 1e-10);
    }

    #[test]
    fn coherent_witnesses() {
        let b = Complex::new(0.9, 0.4);
        let c = build_coherent(b, 40).unwrap();
        let w = extract_witnesses(&c, &res(), &[]).unwrap();
        assert!((w.mean_a - b).norm() < 1e-12);
        assert!((w.mean_n - b.norm_sqr()).abs() < 1e-12);
        assert!(w.mandel_q.unwrap().abs() < 1e-10);
        assert!(w.entropy.abs() < 1e-8);
        assert!((w.covariance.det - 0.25).abs() < 1e-12);
    }

    #[test]
    fn thermal_entropy() {
        let nu = 0.6;
        let th = build_thermal(nu, 120).unwrap();
        let w = extract_witnesses(&th, &res(), &[]).unwrap();
        let exact = (nu + 1.0) * (nu + 1.0f64).ln() - nu * nu.ln();
        assert!((w.entropy - exact).abs() < 1e-10);
    }

    #[test]
    fn fidelity_of_coherent_pair() {
        let a = build_coherent(Complex::new(0.5, 0.0), 30).unwrap();
        let b = build_coherent(Complex::new(0.0, 0.5), 30).unwrap();
        let f = uhlmann_fidelity(&a, &b).unwrap();
        let exact = (-0.5 * Complex::new(0.5, -0.5).norm_sqr()).exp();
        assert!((f - exact).abs() < 1e-10, "{f} vs {exact}");
        assert!((uhlmann_fidelity(&a, &a).unwrap() - 1.0).abs() < 1e-10);
    }
}
