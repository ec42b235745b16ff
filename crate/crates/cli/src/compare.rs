//! Analytic modules against the Fock-space oracle.

use std::collections::BTreeMap;

use anyhow::Result;
use decay_core::css;
use decay_core::fidelity::fidelity_css_gss;
use decay_core::gss::{self, MAX_AUTO_N};
use decay_core::oracle::{self, IntegrationPolicy, DEFAULT_TAIL_BUDGET};
use decay_core::specfun::PolyOrder;
use decay_core::{Complex, CssParams, GssParams, ReservoirParams};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::table::Table;

/// Largest absolute deviation per observable.
pub type Deviations = BTreeMap<&'static str, f64>;

pub const ORACLE_TOLERANCE: f64 = 1e-6;

fn bump(d: &mut Deviations, key: &'static str, v: f64) {
    let e = d.entry(key).or_insert(0.0);
    // NaN must register as a failure
    *e = if v.is_nan() { f64::NAN } else { e.max(v) };
}

pub fn merge(into: &mut Deviations, from: &Deviations) {
    for (k, v) in from {
        bump(into, k, *v);
    }
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}

fn order(n: usize) -> Result<PolyOrder> {
    Ok(PolyOrder::with_limit(n, MAX_AUTO_N)?)
}

/// CSS deviations at each time: entropy, determinant, full `P_n` and Wigner values.
pub fn compare_css(
    p: &CssParams,
    res: &ReservoirParams,
    times: &[f64],
    points: &[Complex],
) -> Result<Vec<Deviations>> {
    let rho0 = oracle::build_css_auto(p, 10)?;
    let states = oracle::evolve(&rho0, res, times, &IntegrationPolicy::default())?;
    let mut out = Vec::with_capacity(times.len());
    for (&t, rho) in times.iter().zip(&states) {
        let w = oracle::extract_witnesses(rho, res, points)?;
        let mut d = Deviations::new();
        bump(
            &mut d,
            "entropy",
            (w.entropy - css::entropy_css(p, res, t)?).abs(),
        );
        bump(
            &mut d,
            "det",
            (w.covariance.det - css::covariance_css(p, res, t)?.det).abs(),
        );
        let pdf = css::photon_pdf_css(p, res, t, order(rho.dim() - 1)?)?;
        bump(&mut d, "p_n", max_gap(&pdf, &w.populations));
        for (lambda, value) in &w.wigner {
            bump(
                &mut d,
                "wigner",
                (value - css::wigner_css(p, res, t, *lambda)?).abs(),
            );
        }
        out.push(d);
    }
    Ok(out)
}

/// GSS deviations at each time: symplectic `nu` and `r`, entropy, determinant,
/// mean amplitude and full `P_n`.
pub fn compare_gss(p: &GssParams, res: &ReservoirParams, times: &[f64]) -> Result<Vec<Deviations>> {
    let dim = oracle::gss_trajectory_dim_hint(p, res.nbar, DEFAULT_TAIL_BUDGET) + 10;
    let rho0 = oracle::build_gss(p, dim)?;
    let states = oracle::evolve(&rho0, res, times, &IntegrationPolicy::default())?;
    let mut out = Vec::with_capacity(times.len());
    for (&t, rho) in times.iter().zip(&states) {
        let w = oracle::extract_witnesses(rho, res, &[])?;
        let snap = gss::evolve_gss(p, res, t)?;
        let c = w.covariance;
        let mut d = Deviations::new();
        bump(&mut d, "nu", (c.symplectic_nu() - snap.nu).abs());
        bump(&mut d, "r", (c.squeeze_r() - snap.r).abs());
        bump(
            &mut d,
            "entropy",
            (w.entropy - gss::entropy_gss(&snap)).abs(),
        );
        bump(&mut d, "det", (c.det - gss::determinant_gss(&snap)).abs());
        bump(&mut d, "mean_a", (w.mean_a - snap.alpha).norm());
        let pdf = gss::photon_pdf_gss(
            &snap,
            order(rho.dim() - 1)?,
            decay_core::FormulaVariant::Corrected,
        )?;
        bump(&mut d, "p_n", max_gap(&pdf, &w.populations));
        out.push(d);
    }
    Ok(out)
}

/// Analytic and Uhlmann fidelity at time `t`, both states evolved in a common
/// Fock dimension.
pub fn compare_fidelity(
    c: &CssParams,
    g: &GssParams,
    res: &ReservoirParams,
    t: f64,
) -> Result<(f64, f64)> {
    let dim = oracle::css_dim_hint(c, DEFAULT_TAIL_BUDGET).max(oracle::gss_trajectory_dim_hint(
        g,
        res.nbar,
        DEFAULT_TAIL_BUDGET,
    )) + 10;
    let policy = IntegrationPolicy::default();
    let a = oracle::integrate(&oracle::build_css(c, dim)?, res, t, &policy)?;
    let b = oracle::integrate(&oracle::build_gss(g, dim)?, res, t, &policy)?;
    let numeric = oracle::uhlmann_fidelity(&a, &b)?;
    Ok((fidelity_css_gss(c, g, res, t)?.value, numeric))
}

pub(crate) fn run_compare(cfg: &RunConfig) -> Result<(Vec<Table>, Value)> {
    let res = &cfg.reservoir;
    let times = cfg.time.points();
    let points = cfg.phase_grid.amplitudes(res.omega);
    let (css_dev, gss_dev) = rayon::join(
        || compare_css(&cfg.css, res, &times, &points),
        || compare_gss(&cfg.gss, res, &times),
    );
    let (css_dev, gss_dev) = (css_dev?, gss_dev?);
    let fid = crate::par_map(&times, |&t| compare_fidelity(&cfg.css, &cfg.gss, res, t))?;
    let css_keys: Vec<&str> = css_dev[0].keys().copied().collect();
    let gss_keys: Vec<&str> = gss_dev[0].keys().copied().collect();
    let mut headers = vec!["kt".to_string(), "t[1/omega units]".to_string()];
    headers.extend(css_keys.iter().map(|k| format!("css_{k}_abs_err")));
    headers.extend(gss_keys.iter().map(|k| format!("gss_{k}_abs_err")));
    headers.push("fidelity_abs_err".into());
    let mut table = Table::with_headers("oracle_compare", headers);
    let mut worst = BTreeMap::new();
    for (i, &t) in times.iter().enumerate() {
        let mut row = vec![res.k * t, t];
        row.extend(css_keys.iter().map(|k| css_dev[i][k]));
        row.extend(gss_keys.iter().map(|k| gss_dev[i][k]));
        let (analytic, numeric) = fid[i];
        row.push((analytic - numeric).abs());
        for (h, v) in table.headers.iter().zip(&row).skip(2) {
            let e: &mut f64 = worst.entry(h.clone()).or_insert(0.0);
            *e = if v.is_nan() { f64::NAN } else { e.max(*v) };
        }
        table.push(row);
    }
    let pass = worst.values().all(|v| *v <= ORACLE_TOLERANCE);
    let summary = json!({
        "family": "oracle-compare",
        "tolerance": ORACLE_TOLERANCE,
        "max_abs_error": worst,
        "pass": pass,
    });
    Ok((vec![table], summary))
}
