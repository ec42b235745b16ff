//! Special functions shared by the analytic engines.
//!
//! Laguerre and Hermite polynomials are evaluated by upward three-term
//! recurrence. The orders needed here stay in the few-hundred range where the
//! upward direction is stable in double precision, and the order cap turns any
//! request beyond that into an explicit error instead of a silently degraded
//! value.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::Complex;

/// Default cap on polynomial orders.
pub const DEFAULT_MAX_ORDER: usize = 512;

const LN_FACTORIAL_TABLE_LEN: usize = 8192;

/// Order index of a polynomial, checked against an order cap at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PolyOrder(usize);

impl PolyOrder {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_limit(n, DEFAULT_MAX_ORDER)
    }

    pub fn with_limit(n: usize, max: usize) -> Result<Self> {
        if n > max {
            return Err(Error::OrderOverflow { order: n, max });
        }
        Ok(Self(n))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

/// Laguerre polynomial `L_l(x)` via `(l+1) L_{l+1} = (2l+1-x) L_l - l L_{l-1}`.
pub fn laguerre(l: PolyOrder, x: f64) -> f64 {
    let l = l.get();
    let mut prev = 1.0;
    if l == 0 {
        return prev;
    }
    let mut cur = 1.0 - x;
    for j in 1..l {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 - x) * cur - jf * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Laguerre polynomials `L_0(x) ..= L_{l_max}(x)` in one pass.
pub fn laguerre_sequence(l_max: PolyOrder, x: f64) -> Vec<f64> {
    let l_max = l_max.get();
    let mut out = Vec::with_capacity(l_max + 1);
    out.push(1.0);
    if l_max == 0 {
        return out;
    }
    out.push(1.0 - x);
    for j in 1..l_max {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 - x) * out[j] - jf * out[j - 1]) / (jf + 1.0);
        out.push(next);
    }
    out
}

/// Physicists' Hermite polynomial `H_j(z)` via `H_{j+1} = 2z H_j - 2j H_{j-1}`.
pub fn hermite(j: PolyOrder, z: Complex) -> Complex {
    let j = j.get();
    let mut prev = Complex::new(1.0, 0.0);
    if j == 0 {
        return prev;
    }
    let mut cur = 2.0 * z;
    for i in 1..j {
        let next = 2.0 * z * cur - 2.0 * i as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `ln n!`, exact summation of `ln k` for tabulated orders.
pub fn ln_factorial(n: usize) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(LN_FACTORIAL_TABLE_LEN);
        let mut acc = 0.0f64;
        t.push(0.0);
        for k in 1..LN_FACTORIAL_TABLE_LEN {
            acc += (k as f64).ln();
            t.push(acc);
        }
        t
    });
    if n < table.len() {
        return table[n];
    }
    // Stirling series beyond the table; relative error far below f64 epsilon here.
    let x = n as f64 + 1.0;
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * x)
        - 1.0 / (360.0 * x.powi(3))
}

/// `ln( e^{-mu} mu^n / n! )`, the log of a Poisson weight with mean `mu = |beta|^2`.
///
/// Returns `-inf` for `mu = 0, n > 0`.
pub fn log_poisson_weight(n: PolyOrder, mean_sq_amplitude: f64) -> Result<f64> {
    let mu = mean_sq_amplitude;
    if !(mu >= 0.0) || !mu.is_finite() {
        return Err(Error::InvalidParameter {
            name: "mean_sq_amplitude",
            reason: format!("must be finite and non-negative, got {mu}"),
        });
    }
    let n = n.get();
    if mu == 0.0 {
        return Ok(if n == 0 { 0.0 } else { f64::NEG_INFINITY });
    }
    Ok(-mu + n as f64 * mu.ln() - ln_factorial(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(n: usize) -> PolyOrder {
        PolyOrder::new(n).unwrap()
    }

    #[test]
    fn laguerre_low_orders() {
        assert_eq!(laguerre(ord(0), 7.3), 1.0);
        assert_eq!(laguerre(ord(1), 2.0), -1.0);
        assert_eq!(laguerre(ord(40), 0.0), 1.0);
    }

    #[test]
    fn laguerre_matches_series() {
        // L_5(x) = sum_k C(5,k) (-x)^k / k!
        let x: f64 = 0.3;
        let binom = [1.0, 5.0, 10.0, 10.0, 5.0, 1.0];
        let mut fact = 1.0;
        let mut series = 0.0;
        for (k, c) in binom.iter().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            series += c * (-x).powi(k as i32) / fact;
        }
        let v = laguerre(ord(5), x);
        assert!(((v - series) / series).abs() <= 1e-12, "{v} vs {series}");
    }

    #[test]
    fn laguerre_sequence_agrees_with_single() {
        let seq = laguerre_sequence(ord(30), 3.7);
        for (l, v) in seq.iter().enumerate() {
            assert!((v - laguerre(ord(l), 3.7)).abs() < 1e-12);
        }
    }

    #[test]
    fn hermite_low_orders() {
        let z = Complex::new(0.4, -1.7);
        assert_eq!(hermite(ord(0), z), Complex::new(1.0, 0.0));
        let h2 = hermite(ord(2), Complex::new(0.0, 1.0));
        assert!((h2 - Complex::new(-6.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn hermite_six_matches_coefficients() {
        // H_6(z) = 64z^6 - 480z^4 + 720z^2 - 120
        let z = Complex::new(0.5, 0.2);
        let z2 = z * z;
        let explicit = 64.0 * z2 * z2 * z2 - 480.0 * z2 * z2 + 720.0 * z2 - 120.0;
        let v = hermite(ord(6), z);
        assert!((v - explicit).norm() / explicit.norm() <= 1e-12);
    }

    #[test]
    fn order_cap_is_enforced() {
        assert!(matches!(
            PolyOrder::new(DEFAULT_MAX_ORDER + 1),
            Err(Error::OrderOverflow { .. })
        ));
        assert!(PolyOrder::with_limit(2000, 4096).is_ok());
    }

    #[test]
    fn poisson_weights() {
        assert_eq!(log_poisson_weight(ord(0), 0.0).unwrap(), 0.0);
        assert_eq!(log_poisson_weight(ord(3), 0.0).unwrap(), f64::NEG_INFINITY);
        let w = log_poisson_weight(ord(3), 1.0).unwrap();
        assert!((w - (-1.0f64).exp().ln() + 6f64.ln()).abs() < 1e-14);
        assert!(log_poisson_weight(ord(2), -0.1).is_err());
    }

    #[test]
    fn poisson_weight_high_order_is_finite() {
        // n! overflows f64 beyond n = 170, so the direct quotient collapses to zero.
        let naive = 4f64.powi(200) / (1..=200).map(|k| k as f64).product::<f64>();
        assert_eq!(naive, 0.0);
        assert!(log_poisson_weight(ord(200), 4.0).unwrap().is_finite());
        let w = log_poisson_weight(ord(150), 4.0).unwrap();
        // ln Γ(151) = 605.0201..., computed independently by summation.
        let direct: f64 =
            -4.0 + 150.0 * 4f64.ln() - (1..=150).map(|k| (k as f64).ln()).sum::<f64>();
        assert!(w.is_finite());
        assert!((w - direct).abs() < 1e-10);
    }

    #[test]
    fn ln_factorial_beyond_table_is_continuous() {
        let n = LN_FACTORIAL_TABLE_LEN - 1;
        let inside = ln_factorial(n);
        let outside = ln_factorial(n + 1);
        assert!((outside - inside - ((n + 1) as f64).ln()).abs() < 1e-9);
    }
}
