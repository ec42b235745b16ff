//! Data grids behind each published figure, keyed by tag.

use anyhow::{bail, Result};
use decay_core::css;
use decay_core::fidelity::fidelity_css_gss;
use decay_core::gss::{self, MAX_AUTO_N};
use decay_core::specfun::PolyOrder;
use decay_core::{phase_point, Complex, CssParams, GssParams, ReservoirParams};
use serde_json::json;

use crate::config::linspace;
use crate::par_map;
use crate::run::RunOutput;
use crate::table::Table;

pub const TAGS: [&str; 21] = [
    "css-wigner-even-0.8",
    "css-wigner-even-1.5",
    "css-wigner-odd-0.8",
    "css-wigner-odd-1.5",
    "vacuum-fidelity",
    "css-det-0.8",
    "css-det-1.5",
    "css-pn-even-0.8",
    "css-pn-even-1.5",
    "css-pn-odd-0.8",
    "css-pn-odd-1.5",
    "css-entropy-0.8",
    "css-entropy-1.5",
    "gss-det",
    "gss-pn-nu0-0",
    "gss-pn-nu0-3",
    "gss-entropy",
    "fidelity-nu0-0-beta-0.8",
    "fidelity-nu0-0-beta-2.0",
    "fidelity-nu0-3-beta-0.8",
    "fidelity-nu0-3-beta-2.0",
];

const OMEGA: f64 = 1.0;
const K: f64 = 0.1;
/// Curves run over `kt` in `[0, KT_END]`.
const KT_END: f64 = 5.0;
const CURVE_POINTS: usize = 501;
const PN_TIMES: usize = 51;
const WIGNER_POINTS: usize = 101;
const WIGNER_HALF_WIDTH: f64 = 4.0;
const CSS_PN_MAX: usize = 20;
const GSS_PN_MAX: usize = 60;
const GSS_R0: f64 = 1.0;

fn reservoir() -> ReservoirParams {
    ReservoirParams::zero_temperature(OMEGA, K).expect("valid")
}

fn curve_times() -> Vec<f64> {
    linspace(0.0, KT_END / K, CURVE_POINTS)
}

fn pn_times() -> Vec<f64> {
    linspace(0.0, KT_END / K, PN_TIMES)
}

fn cat(parity: &str, beta0: f64) -> CssParams {
    match parity {
        "even" => CssParams::even(beta0),
        _ => CssParams::odd(beta0),
    }
    .expect("valid")
}

fn gaussian(nu0: f64) -> GssParams {
    GssParams::new(Complex::new(0.0, 0.0), GSS_R0, 0.0, nu0).expect("valid")
}

/// Splits `css-pn-even-0.8` style tags into their trailing fields.
fn fields(tag: &str) -> Vec<&str> {
    tag.split('-').collect()
}

fn beta_of(s: &str) -> Result<f64> {
    Ok(s.parse()?)
}

pub fn render(tag: &str) -> Result<RunOutput> {
    if !TAGS.contains(&tag) {
        bail!(
            "unknown figure tag `{tag}`; valid tags are: {}",
            TAGS.join(", ")
        );
    }
    let f = fields(tag);
    let res = reservoir();
    let reservoir_json = json!({ "omega": OMEGA, "k": K, "nbar": 0.0 });
    let time_json = json!({ "kt_start": 0.0, "kt_end": KT_END, "points": CURVE_POINTS });
    let (table, parameters) = match (f[0], f[1]) {
        ("css", "wigner") => {
            let p = cat(f[2], beta_of(f[3])?);
            (
                css_wigner(tag, &p, &res)?,
                json!({
                    "css": p, "reservoir": reservoir_json, "t": 0.0,
                    "grid": { "x": [-WIGNER_HALF_WIDTH, WIGNER_HALF_WIDTH], "p": [-WIGNER_HALF_WIDTH, WIGNER_HALF_WIDTH], "points_per_axis": WIGNER_POINTS },
                }),
            )
        }
        ("vacuum", _) => {
            let pair = [cat("even", 0.8), cat("odd", 0.8)];
            let t = css_pair_curve(tag, &pair, &res, "vacuum_fidelity", |p, t| {
                css::vacuum_fidelity(p, &res, t).map_err(Into::into)
            })?;
            (
                t,
                json!({ "css_even": pair[0], "css_odd": pair[1], "reservoir": reservoir_json, "time": time_json }),
            )
        }
        ("css", "det") => {
            let b = beta_of(f[2])?;
            let pair = [cat("even", b), cat("odd", b)];
            let t = css_pair_curve(tag, &pair, &res, "det[hbar^2]", |p, t| {
                Ok(css::covariance_css(p, &res, t)?.det)
            })?;
            (
                t,
                json!({ "css_even": pair[0], "css_odd": pair[1], "reservoir": reservoir_json, "time": time_json }),
            )
        }
        ("css", "entropy") => {
            let b = beta_of(f[2])?;
            let pair = [cat("even", b), cat("odd", b)];
            let t = css_pair_curve(tag, &pair, &res, "entropy[nats]", |p, t| {
                Ok(css::entropy_css(p, &res, t)?)
            })?;
            (
                t,
                json!({ "css_even": pair[0], "css_odd": pair[1], "reservoir": reservoir_json, "time": time_json }),
            )
        }
        ("css", "pn") => {
            let p = cat(f[2], beta_of(f[3])?);
            let order = PolyOrder::new(CSS_PN_MAX)?;
            let t = pn_surface(tag, &res, CSS_PN_MAX, |t| {
                Ok(css::photon_pdf_css(&p, &res, t, order)?)
            })?;
            (
                t,
                json!({ "css": p, "reservoir": reservoir_json, "time": { "kt_start": 0.0, "kt_end": KT_END, "points": PN_TIMES }, "n_max": CSS_PN_MAX }),
            )
        }
        ("gss", "det") => {
            let t = gss_pair_curve(tag, &res, "det[hbar^2]", gss::determinant_gss)?;
            (
                t,
                json!({ "gss_nu0_0": gaussian(0.0), "gss_nu0_3": gaussian(3.0), "reservoir": reservoir_json, "time": time_json }),
            )
        }
        ("gss", "entropy") => {
            let t = gss_pair_curve(tag, &res, "entropy[nats]", gss::entropy_gss)?;
            (
                t,
                json!({ "gss_nu0_0": gaussian(0.0), "gss_nu0_3": gaussian(3.0), "reservoir": reservoir_json, "time": time_json }),
            )
        }
        ("gss", "pn") => {
            let g = gaussian(beta_of(f[3])?);
            let order = PolyOrder::with_limit(GSS_PN_MAX, MAX_AUTO_N)?;
            let t = pn_surface(tag, &res, GSS_PN_MAX, |t| {
                // the distribution is evaluated in full and cut for display
                let full = gss::photon_pdf_gss_auto(&gss::evolve_gss(&g, &res, t)?)?;
                let mut head: Vec<f64> = full.into_iter().take(order.get() + 1).collect();
                head.resize(order.get() + 1, 0.0);
                Ok(head)
            })?;
            (
                t,
                json!({ "gss": g, "reservoir": reservoir_json, "time": { "kt_start": 0.0, "kt_end": KT_END, "points": PN_TIMES }, "n_max": GSS_PN_MAX }),
            )
        }
        ("fidelity", _) => {
            let g = gaussian(beta_of(f[2])?);
            let b = beta_of(f[4])?;
            let pair = [cat("even", b), cat("odd", b)];
            (
                fidelity_curve(tag, &pair, &g, &res)?,
                json!({ "css_even": pair[0], "css_odd": pair[1], "gss": g, "reservoir": reservoir_json, "time": time_json }),
            )
        }
        _ => unreachable!("tag list and dispatch disagree on {tag}"),
    };
    Ok(RunOutput {
        tables: vec![table],
        summary: json!({ "figure": tag, "rows": null }),
        parameters,
    }
    .with_row_count())
}

impl RunOutput {
    fn with_row_count(mut self) -> Self {
        self.summary["rows"] = json!(self.tables[0].rows.len());
        self
    }
}

fn table_name(tag: &str) -> String {
    tag.replace(['-', '.'], "_")
}

fn css_wigner(tag: &str, p: &CssParams, res: &ReservoirParams) -> Result<Table> {
    let axis = linspace(-WIGNER_HALF_WIDTH, WIGNER_HALF_WIDTH, WIGNER_POINTS);
    let rows = par_map(&axis, |&x| -> Result<Vec<Vec<f64>>> {
        axis.iter()
            .map(|&q| {
                Ok(vec![
                    x,
                    q,
                    css::wigner_css(p, res, 0.0, phase_point(res.omega, x, q))?,
                ])
            })
            .collect()
    })?;
    let mut t = Table::new(
        table_name(tag),
        &[
            "x[1/sqrt(omega) units]",
            "p[sqrt(omega) units]",
            "wigner[parity norm]",
        ],
    );
    rows.into_iter().flatten().for_each(|r| t.push(r));
    Ok(t)
}

fn css_pair_curve(
    tag: &str,
    pair: &[CssParams; 2],
    res: &ReservoirParams,
    label: &str,
    f: impl Fn(&CssParams, f64) -> Result<f64> + Sync,
) -> Result<Table> {
    let times = curve_times();
    let rows = par_map(&times, |&t| {
        Ok(vec![res.k * t, t, f(&pair[0], t)?, f(&pair[1], t)?])
    })?;
    let mut table = Table::with_headers(
        table_name(tag),
        vec![
            "kt".into(),
            "t[1/omega units]".into(),
            format!("{label}_even"),
            format!("{label}_odd"),
        ],
    );
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

fn gss_pair_curve(
    tag: &str,
    res: &ReservoirParams,
    label: &str,
    f: fn(&gss::GssSnapshot) -> f64,
) -> Result<Table> {
    let times = curve_times();
    let (cold, hot) = (gaussian(0.0), gaussian(3.0));
    let rows = par_map(&times, |&t| {
        Ok(vec![
            res.k * t,
            t,
            f(&gss::evolve_gss(&cold, res, t)?),
            f(&gss::evolve_gss(&hot, res, t)?),
        ])
    })?;
    let mut table = Table::with_headers(
        table_name(tag),
        vec![
            "kt".into(),
            "t[1/omega units]".into(),
            format!("{label}_nu0_0"),
            format!("{label}_nu0_3"),
        ],
    );
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

/// Long-format surface: one row per `(t, n)`.
fn pn_surface(
    tag: &str,
    res: &ReservoirParams,
    n_max: usize,
    pdf: impl Fn(f64) -> Result<Vec<f64>> + Sync,
) -> Result<Table> {
    let times = pn_times();
    let blocks = par_map(&times, |&t| pdf(t))?;
    let mut table = Table::new(table_name(tag), &["kt", "t[1/omega units]", "n", "P_n"]);
    for (&t, block) in times.iter().zip(blocks) {
        for (n, v) in block.into_iter().enumerate().take(n_max + 1) {
            table.push(vec![res.k * t, t, n as f64, v]);
        }
    }
    Ok(table)
}

fn fidelity_curve(
    tag: &str,
    pair: &[CssParams; 2],
    g: &GssParams,
    res: &ReservoirParams,
) -> Result<Table> {
    let times = curve_times();
    let rows = par_map(&times, |&t| {
        let e = fidelity_css_gss(&pair[0], g, res, t)?;
        let o = fidelity_css_gss(&pair[1], g, res, t)?;
        Ok(vec![
            res.k * t,
            t,
            e.value,
            e.squared(),
            o.value,
            o.squared(),
        ])
    })?;
    let mut table = Table::new(
        table_name(tag),
        &[
            "kt",
            "t[1/omega units]",
            "F_even",
            "F_squared_even",
            "F_odd",
            "F_squared_odd",
        ],
    );
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_wigner_grid_has_negative_entries() {
        let out = render("css-wigner-even-0.8").unwrap();
        let t = &out.tables[0];
        assert_eq!(t.rows.len(), WIGNER_POINTS * WIGNER_POINTS);
        assert!(t.rows.iter().any(|r| r[2].unwrap() < 0.0));
    }

    #[test]
    fn odd_vacuum_fidelity_starts_at_zero() {
        let out = render("vacuum-fidelity").unwrap();
        let odd = out.tables[0].column("vacuum_fidelity_odd").unwrap();
        assert!(odd[0].unwrap().abs() < 1e-12);
    }

    #[test]
    fn even_fidelity_starts_high() {
        let out = render("fidelity-nu0-0-beta-0.8").unwrap();
        assert!(out.tables[0].column("F_even").unwrap()[0].unwrap() >= 0.9);
    }

    #[test]
    fn unknown_tag_lists_the_valid_ones() {
        let err = render("css-wigner").unwrap_err().to_string();
        assert!(err.contains("gss-entropy"));
    }
}
