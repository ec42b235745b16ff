//! Per-family sweeps: witness tables and scalar summaries.

use anyhow::{Context, Result};
use decay_core::css::{self, mandel_q};
use decay_core::fidelity::fidelity_css_gss;
use decay_core::gss::{self, g2_from_pdf};
use decay_core::specfun::PolyOrder;
use decay_core::{Complex, CovarianceSnapshot};
use serde_json::{json, Value};

use crate::config::{Family, RunConfig};
use crate::table::Table;
use crate::{compare, par_map};

/// Everything a run writes: its tables, the scalar summary and the resolved
/// parameters for the manifest.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub tables: Vec<Table>,
    pub summary: Value,
    pub parameters: Value,
}

pub fn run(cfg: &RunConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let parameters = serde_json::to_value(cfg).expect("config serializes");
    let (tables, summary) = match cfg.family {
        Family::Css => run_css(cfg).context("css sweep")?,
        Family::Gss => run_gss(cfg).context("gss sweep")?,
        Family::Fidelity => run_fidelity(cfg).context("fidelity sweep")?,
        Family::OracleCompare => compare::run_compare(cfg).context("oracle comparison")?,
    };
    Ok(RunOutput {
        tables,
        summary,
        parameters,
    })
}

fn covariance_headers() -> [&'static str; 4] {
    [
        "sigma_qq[1/(2omega) units]",
        "sigma_pp[omega/2 units]",
        "sigma_qp[1/2 units]",
        "det[hbar^2]",
    ]
}

fn covariance_cells(c: &CovarianceSnapshot) -> [f64; 4] {
    let (qq, pp, qp) = c.dimensionless();
    [2.0 * qq, 2.0 * pp, 2.0 * qp, c.det]
}

fn pn_headers(head: usize) -> impl Iterator<Item = String> {
    (0..head).map(|n| format!("P_{n}"))
}

fn head_of(pdf: &[f64], head: usize) -> impl Iterator<Item = Option<f64>> + '_ {
    (0..head).map(move |n| Some(pdf.get(n).copied().unwrap_or(0.0)))
}

/// Grid maximum of a column as `{t, kt, value}`.
fn grid_max(times: &[f64], k: f64, values: &[f64]) -> Value {
    let (i, v) = values
        .iter()
        .enumerate()
        .fold(
            (0, f64::NEG_INFINITY),
            |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc },
        );
    json!({ "t": times[i], "kt": k * times[i], "value": v })
}

fn run_css(cfg: &RunConfig) -> Result<(Vec<Table>, Value)> {
    let p = &cfg.css;
    let res = &cfg.reservoir;
    let times = cfg.time.points();
    let points = cfg.phase_grid.amplitudes(res.omega);
    let n_auto = css::auto_n_max_css(p);
    let order = PolyOrder::with_limit(n_auto, n_auto)?;
    let rows = par_map(&times, |&t| -> Result<(Vec<Option<f64>>, f64, f64)> {
        let snap = css::snapshot(p, res, t)?;
        let cov = css::covariance_css(p, res, t)?;
        let pdf = css::photon_pdf_css(p, res, t, order)?;
        let min_w = css::min_wigner_css(p, res, t, &points)?;
        let mut row = vec![
            Some(res.k * t),
            Some(t),
            Some(snap.p_even),
            Some(snap.p_odd),
            Some(css::mean_photon_css(p, res, t)?),
        ];
        row.extend(covariance_cells(&cov).map(Some));
        row.push(Some(css::entropy_css(p, res, t)?));
        row.push(mandel_q(&pdf)?);
        row.push(Some(min_w));
        row.push(Some(css::vacuum_fidelity(p, res, t)?));
        row.extend(head_of(&pdf, cfg.pn_head));
        Ok((row, cov.det, min_w))
    })?;
    let mut headers: Vec<String> = ["kt", "t[1/omega units]", "p_even", "p_odd", "mean_n"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    headers.extend(covariance_headers().iter().map(|s| s.to_string()));
    headers.extend(
        [
            "entropy[nats]",
            "mandel_q",
            "min_wigner[parity norm]",
            "vacuum_fidelity",
        ]
        .map(String::from),
    );
    headers.extend(pn_headers(cfg.pn_head));
    let mut table = Table::with_headers("css_witnesses", headers);
    let mut dets = Vec::new();
    let mut mins = Vec::new();
    for (row, det, w) in rows {
        table.push_optional(row);
        dets.push(det);
        mins.push(w);
    }
    // threshold well above the rounding noise of the fringe term
    let negativity = times
        .iter()
        .zip(&mins)
        .find(|(_, &w)| w >= -1e-9)
        .map(|(t, _)| *t);
    let summary = json!({
        "family": "css",
        "squeeze_time": css::squeeze_time_css(p, res.k),
        "squeeze_visible": css::squeeze_visible_css(p),
        "decoherence_time": css::decoherence_time(p, res.k).ok(),
        "negativity_threshold_time": negativity,
        "negativity_threshold": 1e-9,
        "det_max_on_grid": grid_max(&times, res.k, &dets),
        "initial_mean_photon": css::initial_mean_photon(p),
    });
    Ok((vec![table], summary))
}

fn run_gss(cfg: &RunConfig) -> Result<(Vec<Table>, Value)> {
    let p = &cfg.gss;
    let res = &cfg.reservoir;
    let times = cfg.time.points();
    let points = cfg.phase_grid.amplitudes(res.omega);
    let rows = par_map(&times, |&t| -> Result<(Vec<Option<f64>>, f64)> {
        let snap = gss::evolve_gss(p, res, t)?;
        let cov = gss::covariance_gss(&snap, res.omega);
        let pdf = gss::photon_pdf_gss_auto(&snap)?;
        let g2 = g2_from_pdf(&pdf);
        let min_w = points
            .iter()
            .map(|&l| gss::wigner_gss_closed(&snap, l))
            .fold(f64::INFINITY, f64::min);
        let mut row = vec![
            Some(res.k * t),
            Some(t),
            Some(snap.alpha.re),
            Some(snap.alpha.im),
            Some(snap.r),
            Some(snap.phi),
            Some(snap.nu),
            Some(gss::mean_photon_gss(&snap)),
        ];
        row.extend(covariance_cells(&cov).map(Some));
        row.push(Some(gss::entropy_gss(&snap)));
        row.push(mandel_q(&pdf)?);
        row.push(g2.map(|g| g.g2));
        row.push(g2.map(|g| if g.quantum { 1.0 } else { 0.0 }));
        row.push(Some(min_w));
        row.extend(head_of(&pdf, cfg.pn_head));
        Ok((row, gss::determinant_gss(&snap)))
    })?;
    let mut headers: Vec<String> = [
        "kt",
        "t[1/omega units]",
        "alpha_re",
        "alpha_im",
        "r",
        "phi[rad]",
        "nu",
        "mean_n",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    headers.extend(covariance_headers().iter().map(|s| s.to_string()));
    headers.extend(
        [
            "entropy[nats]",
            "mandel_q",
            "g2",
            "g2_quantum[flag]",
            "min_wigner[parity norm]",
        ]
        .map(String::from),
    );
    headers.extend(pn_headers(cfg.pn_head));
    let mut table = Table::with_headers("gss_witnesses", headers);
    let mut dets = Vec::new();
    for (row, det) in rows {
        table.push_optional(row);
        dets.push(det);
    }
    let (nu_visible, nbar_visible) = gss::visibility_gss(p, res);
    let summary = json!({
        "family": "gss",
        "characteristic_time": gss::char_time_gss(p, res),
        "nu0_inequality": nu_visible,
        "nbar_inequality": nbar_visible,
        "det_max_on_grid": grid_max(&times, res.k, &dets),
    });
    Ok((vec![table], summary))
}

fn run_fidelity(cfg: &RunConfig) -> Result<(Vec<Table>, Value)> {
    let res = &cfg.reservoir;
    let times = cfg.time.points();
    let rows = par_map(&times, |&t| -> Result<Vec<f64>> {
        let f = fidelity_css_gss(&cfg.css, &cfg.gss, res, t)?;
        Ok(vec![
            res.k * t,
            t,
            f.value,
            f.squared(),
            f.lambda_plus,
            f.lambda_minus,
            if f.clamped { 1.0 } else { 0.0 },
        ])
    })?;
    let mut table = Table::new(
        "fidelity",
        &[
            "kt",
            "t[1/omega units]",
            "F",
            "F_squared",
            "lambda_plus",
            "lambda_minus",
            "clamped[flag]",
        ],
    );
    for row in rows {
        table.push(row);
    }
    let f: Vec<f64> = table
        .rows
        .iter()
        .map(|r| r[2].unwrap_or(f64::NAN))
        .collect();
    let (imin, fmin) =
        f.iter().enumerate().fold(
            (0, f64::INFINITY),
            |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc },
        );
    let matched =
        gss::energy_match_r0(&cfg.css, Complex::new(0.0, 0.0), cfg.gss.phi0, cfg.gss.nu0).ok();
    let summary = json!({
        "family": "fidelity",
        "initial": f[0],
        "final": f[f.len() - 1],
        "min_on_grid": { "t": times[imin], "kt": res.k * times[imin], "value": fmin },
        "energy_matched_r0": matched,
    });
    Ok((vec![table], summary))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn css_det_peaks_at_the_squeeze_time() {
        let mut cfg = RunConfig::default();
        cfg.time.t_end = 8.0;
        cfg.time.n_points = 400;
        let out = run(&cfg).unwrap();
        let t = out.summary["det_max_on_grid"]["t"].as_f64().unwrap();
        assert!((t - 2.168).abs() < 0.03, "{t}");
        assert!((out.summary["squeeze_time"].as_f64().unwrap() - 2.168).abs() < 1e-3);
    }

    #[test]
    fn hot_core_has_no_characteristic_time() {
        let mut cfg = RunConfig::default();
        cfg.family = Family::Gss;
        cfg.gss = decay_core::GssParams::squeezed_thermal(1.0, 3.0).unwrap();
        cfg.time.n_points = 51;
        let out = run(&cfg).unwrap();
        assert!(out.summary["characteristic_time"].is_null());
        let s: Vec<f64> = out.tables[0]
            .column("entropy[nats]")
            .unwrap()
            .into_iter()
            .flatten()
            .collect();
        assert!(s.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    }
}
