//! One-dimensional root finding and maximization.

use crate::error::{Error, Result};

/// Bisection for a sign change of `f` on `[lo, hi]`, stopping at width `tol`.
pub fn bisect(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::NoSolution(format!(
            "no sign change on [{lo}, {hi}]: f = {flo}, {fhi}"
        )));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
pub fn golden_max(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

const PLATEAU: f64 = 1e-12;

/// Locates an interior maximum of `f` on a uniform grid of `n` intervals over
/// `[a, b]`, then refines it by golden section.
///
/// `None` if the grid maximum sits on an endpoint or clears both endpoint values
/// by no more than `PLATEAU` relative; a function that saturates towards its
/// limit would otherwise report rounding noise on the plateau as a maximum.
pub fn interior_argmax(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    n: usize,
    tol: f64,
) -> Option<f64> {
    let h = (b - a) / n as f64;
    let values: Vec<f64> = (0..=n).map(|i| f(a + i as f64 * h)).collect();
    let (imax, _) = values
        .iter()
        .enumerate()
        .fold(
            (0, f64::NEG_INFINITY),
            |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc },
        );
    if imax == 0 || imax == n {
        return None;
    }
    let edge = values[0].max(values[n]);
    if values[imax] - edge <= PLATEAU * values[imax].abs() {
        return None;
    }
    let lo = a + (imax - 1) as f64 * h;
    let hi = a + (imax + 1) as f64 * h;
    Some(golden_max(f, lo, hi, tol))
}
