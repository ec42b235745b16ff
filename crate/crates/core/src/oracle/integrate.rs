//! Direct integration of the master equation.
//!
//! The free rotation `-i omega [n, rho]` commutes with the dissipator, so it is
//! applied exactly and only the dissipator is integrated numerically. The
//! dissipator maps each diagonal band `rho_{m, m+d}` into itself with a real
//! tridiagonal matrix, so bands are stored and stepped independently; `d < 0`
//! follows by Hermiticity, which also makes the re-symmetrization exact.
//! Band matrices have non-negative off-diagonals and non-positive column sums,
//! so the l1 norm of every band is non-increasing and bands below
//! `band_cutoff` can be dropped with a permanent error bound.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{FockDensityMatrix, DEFAULT_TAIL_BUDGET, TAIL_LEVELS};
use crate::error::{invalid, Error, Result};
use crate::params::ReservoirParams;
use crate::Complex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntegrationMethod {
    /// Classical fixed-step fourth-order Runge-Kutta.
    Rk4,
    /// Adaptive Dormand-Prince 5(4) pair.
    DormandPrince,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegrationPolicy {
    pub method: IntegrationMethod,
    /// Fixed step; `None` selects `min(1e-3/k, 1e-2/omega, stability limit)`.
    pub dt: Option<f64>,
    /// Local error tolerance of the adaptive pair.
    pub tolerance: f64,
    pub tail_budget: f64,
    /// Bands whose l1 norm falls below this are dropped.
    pub band_cutoff: f64,
}

impl Default for IntegrationPolicy {
    fn default() -> Self {
        Self {
            method: IntegrationMethod::Rk4,
            dt: None,
            tolerance: 1e-10,
            tail_budget: DEFAULT_TAIL_BUDGET,
            band_cutoff: 1e-15,
        }
    }
}

impl IntegrationPolicy {
    pub fn fixed_step(dt: f64) -> Self {
        Self {
            dt: Some(dt),
            ..Self::default()
        }
    }

    pub fn adaptive(tolerance: f64) -> Self {
        Self {
            method: IntegrationMethod::DormandPrince,
            tolerance,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.method {
            IntegrationMethod::Rk4 => {
                if let Some(dt) = self.dt {
                    if !(dt > 0.0 && dt.is_finite()) {
                        return Err(invalid("dt", format!("must be positive, got {dt}")));
                    }
                }
            }
            IntegrationMethod::DormandPrince => {
                if !(self.tolerance > 0.0 && self.tolerance <= 1e-4) {
                    return Err(invalid(
                        "tolerance",
                        format!("must lie in (0, 1e-4], got {}", self.tolerance),
                    ));
                }
            }
        }
        if !(self.tail_budget > 0.0) {
            return Err(invalid("tail_budget", "must be positive"));
        }
        Ok(())
    }
}

/// `L rho` with truncated `a`, `a^dag`, as a dense matrix.
pub fn lindblad_rhs(rho: &FockDensityMatrix, res: &ReservoirParams) -> DMatrix<Complex> {
    let d = rho.dim();
    let r = rho.elements();
    let a = DMatrix::<Complex>::from_fn(d, d, |i, j| {
        if j == i + 1 {
            Complex::new((j as f64).sqrt(), 0.0)
        } else {
            Complex::new(0.0, 0.0)
        }
    });
    let ad = a.adjoint();
    let n = &ad * &a;
    let aad = &a * &ad;
    let i = Complex::new(0.0, 1.0);
    let c = |x: f64| Complex::new(x, 0.0);
    let hamiltonian = (&n * r - r * &n) * (-i * res.omega);
    let down = (&a * r * &ad * c(2.0) - &n * r - r * &n) * c(res.k * (res.nbar + 1.0));
    let up = (&ad * r * &a * c(2.0) - &aad * r - r * &aad) * c(res.k * res.nbar);
    hamiltonian + down + up
}

/// Tridiagonal coefficients of one band: `v_m' = lo_m v_{m-1} + di_m v_m + up_m v_{m+1}`.
struct BandOperator {
    lo: Vec<f64>,
    di: Vec<f64>,
    up: Vec<f64>,
}

impl BandOperator {
    fn new(dim: usize, d: usize, res: &ReservoirParams) -> Self {
        let len = dim - d;
        let kd = res.k * (res.nbar + 1.0);
        let ku = res.k * res.nbar;
        // diagonal of a a^dag after truncation
        let e = |j: usize| if j + 1 < dim { (j + 1) as f64 } else { 0.0 };
        let mut lo = vec![0.0; len];
        let mut di = vec![0.0; len];
        let mut up = vec![0.0; len];
        for m in 0..len {
            let mf = m as f64;
            let df = d as f64;
            di[m] = -kd * (2.0 * mf + df) - ku * (e(m) + e(m + d));
            if m + 1 < len {
                up[m] = 2.0 * kd * ((mf + 1.0) * (mf + df + 1.0)).sqrt();
            }
            if m > 0 {
                lo[m] = 2.0 * ku * (mf * (mf + df)).sqrt();
            }
        }
        Self { lo, di, up }
    }

    fn apply(&self, v: &[Complex], out: &mut [Complex]) {
        let len = v.len();
        for m in 0..len {
            let mut acc = v[m] * self.di[m];
            if m > 0 {
                acc += v[m - 1] * self.lo[m];
            }
            if m + 1 < len {
                acc += v[m + 1] * self.up[m];
            }
            out[m] = acc;
        }
    }

    /// Row-sum (infinity-norm) bound on the band operator.
    ///
    /// At zero temperature the operator is bidiagonal and far from normal, so
    /// a bound on its eigenvalues alone lets RK4 amplify rounding errors
    /// transiently in the high Fock levels. The norm bound keeps the whole
    /// numerical range inside the stability region.
    fn norm_bound(&self) -> f64 {
        let len = self.di.len();
        (0..len)
            .map(|m| {
                let left = if m > 0 { self.lo[m].abs() } else { 0.0 };
                let right = if m + 1 < len { self.up[m].abs() } else { 0.0 };
                self.di[m].abs() + left + right
            })
            .fold(0.0, f64::max)
    }
}

/// Density matrix in the rotating frame, stored by upper diagonals.
struct BandState {
    dim: usize,
    /// `bands[d]` is `rho_{m, m+d}`; `None` once dropped.
    bands: Vec<Option<Vec<Complex>>>,
    ops: Vec<BandOperator>,
}

impl BandState {
    fn new(rho: &FockDensityMatrix, res: &ReservoirParams, cutoff: f64) -> Self {
        let dim = rho.dim();
        let e = rho.elements();
        let mut bands = Vec::with_capacity(dim);
        let mut ops = Vec::with_capacity(dim);
        for d in 0..dim {
            let v: Vec<Complex> = (0..dim - d).map(|m| e[(m, m + d)]).collect();
            let norm: f64 = v.iter().map(|z| z.norm()).sum();
            bands.push(if d == 0 || norm >= cutoff {
                Some(v)
            } else {
                None
            });
            ops.push(BandOperator::new(dim, d, res));
        }
        Self { dim, bands, ops }
    }

    fn norm_bound(&self) -> f64 {
        self.bands
            .iter()
            .zip(&self.ops)
            .filter(|(b, _)| b.is_some())
            .map(|(_, op)| op.norm_bound())
            .fold(0.0, f64::max)
    }

    fn drop_small(&mut self, cutoff: f64) {
        for band in self.bands.iter_mut().skip(1) {
            if let Some(v) = band {
                if v.iter().map(|z| z.norm()).sum::<f64>() < cutoff {
                    *band = None;
                }
            }
        }
    }

    fn tail(&self) -> f64 {
        let diag = self.bands[0]
            .as_ref()
            .expect("diagonal band is never dropped");
        diag[self.dim.saturating_sub(TAIL_LEVELS)..]
            .iter()
            .map(|z| z.re)
            .sum()
    }

    fn to_matrix(&self, omega_t: f64) -> FockDensityMatrix {
        let dim = self.dim;
        let mut m = DMatrix::<Complex>::zeros(dim, dim);
        for (d, band) in self.bands.iter().enumerate() {
            let Some(v) = band else { continue };
            let phase = Complex::from_polar(1.0, omega_t * d as f64);
            for (i, z) in v.iter().enumerate() {
                let w = if d == 0 {
                    Complex::new(z.re, 0.0)
                } else {
                    z * phase
                };
                m[(i, i + d)] = w;
                m[(i + d, i)] = w.conj();
            }
        }
        FockDensityMatrix::from_raw(m)
    }

    fn rk4_step(&mut self, h: f64, scratch: &mut Rk4Scratch) {
        for (band, op) in self.bands.iter_mut().zip(&self.ops) {
            let Some(v) = band else { continue };
            scratch.step(op, v, h);
        }
        if let Some(v) = &mut self.bands[0] {
            for z in v.iter_mut() {
                z.im = 0.0;
            }
        }
    }
}

#[derive(Default)]
struct Rk4Scratch {
    k1: Vec<Complex>,
    k2: Vec<Complex>,
    k3: Vec<Complex>,
    k4: Vec<Complex>,
    tmp: Vec<Complex>,
}

impl Rk4Scratch {
    fn step(&mut self, op: &BandOperator, v: &mut [Complex], h: f64) {
        let n = v.len();
        for buf in [
            &mut self.k1,
            &mut self.k2,
            &mut self.k3,
            &mut self.k4,
            &mut self.tmp,
        ] {
            buf.resize(n, Complex::new(0.0, 0.0));
        }
        op.apply(v, &mut self.k1);
        for i in 0..n {
            self.tmp[i] = v[i] + self.k1[i] * (0.5 * h);
        }
        op.apply(&self.tmp, &mut self.k2);
        for i in 0..n {
            self.tmp[i] = v[i] + self.k2[i] * (0.5 * h);
        }
        op.apply(&self.tmp, &mut self.k3);
        for i in 0..n {
            self.tmp[i] = v[i] + self.k3[i] * h;
        }
        op.apply(&self.tmp, &mut self.k4);
        for i in 0..n {
            v[i] += (self.k1[i] + (self.k2[i] + self.k3[i]) * 2.0 + self.k4[i]) * (h / 6.0);
        }
    }
}

/// Step size used by the fixed-step method.
fn default_dt(res: &ReservoirParams, norm_bound: f64) -> f64 {
    // 2.5 keeps a margin inside the RK4 stability interval [-2.78, 0]
    let stable = if norm_bound > 0.0 {
        2.5 / norm_bound
    } else {
        f64::INFINITY
    };
    (1e-3 / res.k).min(1e-2 / res.omega).min(stable)
}

/// Evolves `rho0` and returns the state at each of `times` (non-decreasing, >= 0).
pub fn evolve(
    rho0: &FockDensityMatrix,
    res: &ReservoirParams,
    times: &[f64],
    policy: &IntegrationPolicy,
) -> Result<Vec<FockDensityMatrix>> {
    res.validate()?;
    policy.validate()?;
    if times.windows(2).any(|w| w[1] < w[0]) || times.iter().any(|t| !(*t >= 0.0 && t.is_finite()))
    {
        return Err(invalid(
            "times",
            "must be finite, non-negative and non-decreasing",
        ));
    }
    let mut state = BandState::new(rho0, res, policy.band_cutoff);
    let initial_tail = state.tail();
    if initial_tail > policy.tail_budget {
        return Err(Error::TailBreach {
            t: 0.0,
            tail: initial_tail,
            budget: policy.tail_budget,
        });
    }
    let mut out = Vec::with_capacity(times.len());
    let mut now = 0.0;
    match policy.method {
        IntegrationMethod::Rk4 => {
            let dt = policy
                .dt
                .unwrap_or_else(|| default_dt(res, state.norm_bound()));
            let mut scratch = Rk4Scratch::default();
            let mut steps_since_drop = 0usize;
            for &target in times {
                let span = target - now;
                if span > 0.0 {
                    let n = (span / dt).ceil().max(1.0) as usize;
                    let h = span / n as f64;
                    for i in 0..n {
                        state.rk4_step(h, &mut scratch);
                        let tail = state.tail();
                        if tail > policy.tail_budget {
                            return Err(Error::TailBreach {
                                t: now + (i + 1) as f64 * h,
                                tail,
                                budget: policy.tail_budget,
                            });
                        }
                        steps_since_drop += 1;
                        if steps_since_drop >= 100 {
                            state.drop_small(policy.band_cutoff);
                            steps_since_drop = 0;
                        }
                    }
                    now = target;
                }
                out.push(state.to_matrix(res.omega * target));
            }
        }
        IntegrationMethod::DormandPrince => {
            let mut h = default_dt(res, state.norm_bound());
            for &target in times {
                while now < target {
                    let step = h.min(target - now);
                    let (accepted, next) = dopri_step(&mut state, step, policy.tolerance);
                    if accepted {
                        now = if step == target - now {
                            target
                        } else {
                            now + step
                        };
                        let tail = state.tail();
                        if tail > policy.tail_budget {
                            return Err(Error::TailBreach {
                                t: now,
                                tail,
                                budget: policy.tail_budget,
                            });
                        }
                    }
                    h = next;
                    if h < 1e-14 * target.max(1.0) {
                        return Err(Error::NumericalConsistency(format!(
                            "step size collapsed at t = {now}"
                        )));
                    }
                }
                out.push(state.to_matrix(res.omega * target));
            }
        }
    }
    Ok(out)
}

/// State at `t_end`.
pub fn integrate(
    rho0: &FockDensityMatrix,
    res: &ReservoirParams,
    t_end: f64,
    policy: &IntegrationPolicy,
) -> Result<FockDensityMatrix> {
    if t_end == 0.0 {
        return Ok(rho0.clone());
    }
    Ok(evolve(rho0, res, &[t_end], policy)?
        .pop()
        .expect("one output per time"))
}

const DP_C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const DP_B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One Dormand-Prince attempt over all bands; returns (accepted, next step size).
fn dopri_step(state: &mut BandState, h: f64, tol: f64) -> (bool, f64) {
    debug_assert_eq!(DP_C.len(), 7);
    let mut proposals: Vec<Option<Vec<Complex>>> = Vec::with_capacity(state.bands.len());
    let mut err_max = 0.0f64;
    for (band, op) in state.bands.iter().zip(&state.ops) {
        let Some(v) = band else {
            proposals.push(None);
            continue;
        };
        let n = v.len();
        let mut k: Vec<Vec<Complex>> = vec![vec![Complex::new(0.0, 0.0); n]; 7];
        let mut tmp = vec![Complex::new(0.0, 0.0); n];
        for s in 0..7 {
            for i in 0..n {
                let mut acc = v[i];
                for (j, kj) in k.iter().enumerate().take(s) {
                    acc += kj[i] * (h * DP_A[s][j]);
                }
                tmp[i] = acc;
            }
            let (before, after) = k.split_at_mut(s);
            let _ = before;
            op.apply(&tmp, &mut after[0]);
        }
        let mut next = v.clone();
        for i in 0..n {
            let mut y5 = v[i];
            let mut y4 = v[i];
            for s in 0..7 {
                y5 += k[s][i] * (h * DP_B5[s]);
                y4 += k[s][i] * (h * DP_B4[s]);
            }
            let scale = tol + tol * y5.norm().max(v[i].norm());
            err_max = err_max.max((y5 - y4).norm() / scale);
            next[i] = y5;
        }
        proposals.push(Some(next));
    }
    let factor = if err_max == 0.0 {
        5.0
    } else {
        (0.9 * err_max.powf(-0.2)).clamp(0.2, 5.0)
    };
    if err_max <= 1.0 {
        for (band, p) in state.bands.iter_mut().zip(proposals) {
            if band.is_some() {
                *band = p;
            }
        }
        if let Some(v) = &mut state.bands[0] {
            for z in v.iter_mut() {
                z.im = 0.0;
            }
        }
        (true, h * factor)
    } else {
        (false, h * factor)
    }
}
