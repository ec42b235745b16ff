//! Brute-force reference engine on a truncated Fock space.
//!
//! States are dense density matrices. Initial states are built from coherent
//! amplitudes or from matrix exponentials of the truncated squeeze and
//! displacement generators, evolved by direct integration of the master
//! equation, and read out by plain linear algebra. Nothing here uses the
//! closed forms of the analytic modules.

mod build;
mod integrate;
mod witness;

pub use build::{
    build_coherent, build_css, build_css_auto, build_gss, build_gss_auto, build_thermal,
    css_dim_hint, displacement, gss_dim_hint, gss_trajectory_dim_hint, pad_for,
};
pub use integrate::{evolve, integrate, lindblad_rhs, IntegrationMethod, IntegrationPolicy};
pub use witness::{extract_witnesses, uhlmann_fidelity, wigner_at, wigner_many, Witnesses};

use nalgebra::DMatrix;

use crate::error::{invalid, Error, Result};
use crate::Complex;

/// Default bound on the population of the top five Fock levels.
pub const DEFAULT_TAIL_BUDGET: f64 = 1e-10;
/// Number of top levels whose population counts as tail.
pub const TAIL_LEVELS: usize = 5;
/// Entries below this are zeroed before an eigendecomposition.
const UNDERFLOW_FLUSH: f64 = 1e-100;

/// Hermitian eigendecomposition that survives graded matrices.
///
/// nalgebra's QR iteration can return NaN or infinite eigenvalues when the
/// entries span hundreds of orders of magnitude, as the far coherences of a
/// damped state do. Such inputs are redone on `m + s I` with `s` the largest
/// diagonal entry, which costs relative accuracy only for eigenvalues below
/// about `1e-16 s`.
pub(crate) fn hermitian_eigen(
    m: &DMatrix<Complex>,
) -> Result<nalgebra::SymmetricEigen<Complex, nalgebra::Dyn>> {
    let flushed = m.map(|z| {
        if z.norm() < UNDERFLOW_FLUSH {
            Complex::new(0.0, 0.0)
        } else {
            z
        }
    });
    let finite = |e: &nalgebra::SymmetricEigen<Complex, nalgebra::Dyn>| {
        e.eigenvalues.iter().all(|x| x.is_finite())
    };
    let plain = flushed.clone().symmetric_eigen();
    if finite(&plain) {
        return Ok(plain);
    }
    let s = (0..m.nrows())
        .map(|i| m[(i, i)].re.abs())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let n = m.nrows();
    let mut shifted =
        (flushed + DMatrix::<Complex>::identity(n, n) * Complex::new(s, 0.0)).symmetric_eigen();
    shifted.eigenvalues.iter_mut().for_each(|x| *x -= s);
    if finite(&shifted) {
        Ok(shifted)
    } else {
        Err(Error::NumericalConsistency(
            "eigendecomposition did not converge".into(),
        ))
    }
}

/// Truncated density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FockDensityMatrix {
    elements: DMatrix<Complex>,
}

impl FockDensityMatrix {
    /// Wraps a matrix after checking shape, Hermiticity and trace.
    pub fn new(elements: DMatrix<Complex>) -> Result<Self> {
        if elements.nrows() != elements.ncols() || elements.nrows() == 0 {
            return Err(invalid("elements", "must be a non-empty square matrix"));
        }
        let rho = Self { elements };
        let herm = rho.hermiticity_defect();
        if herm > 1e-12 {
            return Err(Error::NumericalConsistency(format!(
                "matrix is not Hermitian: defect {herm:e}"
            )));
        }
        let tr = rho.trace();
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::NumericalConsistency(format!("trace is {tr}, not 1")));
        }
        Ok(rho)
    }

    pub(crate) fn from_raw(elements: DMatrix<Complex>) -> Self {
        Self { elements }
    }

    pub fn dim(&self) -> usize {
        self.elements.nrows()
    }

    pub fn elements(&self) -> &DMatrix<Complex> {
        &self.elements
    }

    pub fn get(&self, m: usize, n: usize) -> Complex {
        self.elements[(m, n)]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|n| self.elements[(n, n)].re).sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for m in 0..d {
            for n in m..d {
                worst = worst.max((self.elements[(m, n)] - self.elements[(n, m)].conj()).norm());
            }
        }
        worst
    }

    /// Population of the top `TAIL_LEVELS` levels.
    pub fn tail_population(&self) -> f64 {
        let d = self.dim();
        (d.saturating_sub(TAIL_LEVELS)..d)
            .map(|n| self.elements[(n, n)].re)
            .sum()
    }

    /// Diagonal `P_n`.
    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|n| self.elements[(n, n)].re).collect()
    }

    pub fn purity(&self) -> f64 {
        self.elements.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Hermitian eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let mut ev: Vec<f64> = hermitian_eigen(&self.elements)?
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        Ok(ev)
    }

    /// Copy embedded in a larger dimension, or truncated to a smaller one
    /// and renormalized.
    pub fn resized(&self, dim: usize) -> Self {
        let d = self.dim();
        let mut out = DMatrix::<Complex>::zeros(dim, dim);
        let k = d.min(dim);
        out.view_mut((0, 0), (k, k))
            .copy_from(&self.elements.view((0, 0), (k, k)));
        let tr: f64 = (0..k).map(|n| out[(n, n)].re).sum();
        if dim < d && tr > 0.0 {
            out /= Complex::new(tr, 0.0);
        }
        Self { elements: out }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_hermitian() {
        let mut m = DMatrix::<Complex>::zeros(2, 2);
        m[(0, 0)] = Complex::new(1.0, 0.0);
        m[(0, 1)] = Complex::new(0.1, 0.0);
        assert!(FockDensityMatrix::new(m).is_err());
    }

    #[test]
    fn rejects_bad_trace() {
        let m = DMatrix::<Complex>::identity(3, 3);
        assert!(FockDensityMatrix::new(m).is_err());
    }
}
