//! Acceptance criteria 1 to 9 as executable checks, shared by `validate`,
//! `oracle-compare --suite` and the acceptance test.

use std::f64::consts::{LN_2, PI};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{ensure, Result};
use decay_core::css::{self, covariance_css, mandel_q, photon_pdf_css};
use decay_core::fidelity::fidelity_css_gss;
use decay_core::gss::{self, evolve_gss, series_order_for, GssSnapshot};
use decay_core::oracle::{self, IntegrationPolicy, DEFAULT_TAIL_BUDGET};
use decay_core::search::{golden_max, interior_argmax};
use decay_core::specfun::{log_poisson_weight, PolyOrder};
use decay_core::{phase_point, Complex, CssParams, GssParams, ReservoirParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::compare::{self, merge, Deviations, ORACLE_TOLERANCE};
use crate::config::linspace;
use crate::{figures, output, par_map};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub requirement: String,
    pub pass: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            value,
            requirement: format!("<= {limit:e}"),
            pass: value <= limit,
        }
    }

    pub fn at_least(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            value,
            requirement: format!(">= {limit}"),
            pass: value >= limit,
        }
    }

    pub fn within(name: impl Into<String>, value: f64, lo: f64, hi: f64) -> Self {
        Self {
            name: name.into(),
            value,
            requirement: format!("in [{lo}, {hi}]"),
            pass: (lo..=hi).contains(&value),
        }
    }

    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self {
            name: name.into(),
            value: if ok { 1.0 } else { 0.0 },
            requirement: "true".into(),
            pass: ok,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub pass: bool,
    pub seconds: f64,
    pub time_limit_seconds: Option<f64>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl CriterionReport {
    /// One-line verdict with the failing checks, if any.
    pub fn line(&self) -> String {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        let mut s = format!(
            "criterion {} {verdict}: {} ({} checks, {:.1} s)",
            self.id,
            self.title,
            self.checks.len(),
            self.seconds
        );
        for c in self.checks.iter().filter(|c| !c.pass) {
            s.push_str(&format!(
                "; {} = {:e}, needs {}",
                c.name, c.value, c.requirement
            ));
        }
        if let Some(limit) = self.time_limit_seconds {
            if self.seconds > limit {
                s.push_str(&format!("; runtime over {limit} s"));
            }
        }
        s
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Where criterion 9 writes its two figure runs.
    pub figure_root: PathBuf,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            seed: 2024,
            figure_root: std::env::temp_dir().join("decay-figure-check"),
        }
    }
}

pub const TITLES: [&str; 9] = [
    "oracle equivalence, CSS",
    "oracle equivalence, GSS with temperature",
    "characteristic times and visibility predicates",
    "ordering of the characteristic times",
    "independence of the field intensity",
    "fidelity against the Uhlmann oracle",
    "structural property suites",
    "integrator self-convergence and trace drift",
    "figure reproduction",
];

const TIME_LIMITS: [Option<f64>; 9] = [
    Some(300.0),
    Some(300.0),
    None,
    None,
    None,
    Some(120.0),
    Some(120.0),
    None,
    None,
];

/// Runs one criterion; computation errors become a failing check.
pub fn run_criterion(id: u8, opts: &SuiteOptions) -> CriterionReport {
    assert!((1..=9).contains(&id), "criteria are numbered 1 to 9");
    let start = Instant::now();
    let mut notes = Vec::new();
    let outcome = match id {
        1 => criterion_1(),
        2 => criterion_2(),
        3 => criterion_3(opts.seed, &mut notes),
        4 => criterion_4(&mut notes),
        5 => criterion_5(),
        6 => criterion_6(opts.seed),
        7 => criterion_7(opts.seed),
        8 => criterion_8(),
        _ => criterion_9(&opts.figure_root, &mut notes),
    };
    let checks = outcome.unwrap_or_else(|e| {
        vec![Check::holds(
            format!("completed without error ({e:#})"),
            false,
        )]
    });
    let seconds = start.elapsed().as_secs_f64();
    let limit = TIME_LIMITS[id as usize - 1];
    let pass = checks.iter().all(|c| c.pass) && limit.map_or(true, |l| seconds <= l);
    CriterionReport {
        id,
        title: TITLES[id as usize - 1],
        pass,
        seconds,
        time_limit_seconds: limit,
        checks,
        notes,
    }
}

pub fn run_all(opts: &SuiteOptions) -> Vec<CriterionReport> {
    (1..=9).map(|id| run_criterion(id, opts)).collect()
}

fn deviation_checks(prefix: &str, d: &Deviations) -> Vec<Check> {
    d.iter()
        .map(|(k, v)| {
            Check::at_most(
                format!("{prefix} max |analytic - oracle| {k}"),
                *v,
                ORACLE_TOLERANCE,
            )
        })
        .collect()
}

fn cold() -> ReservoirParams {
    ReservoirParams::zero_temperature(1.0, 0.1).expect("valid")
}

fn criterion_1() -> Result<Vec<Check>> {
    let res = cold();
    let axis = [-2.0, -1.0, 0.0, 1.0, 2.0];
    let points: Vec<Complex> = axis
        .iter()
        .flat_map(|&x| axis.iter().map(move |&p| phase_point(1.0, x, p)))
        .collect();
    let times: Vec<f64> = [0.0, 0.1, 0.5, 1.0, 3.0]
        .iter()
        .map(|kt| kt / res.k)
        .collect();
    let mut cases = Vec::new();
    for beta0 in [0.4, 0.8, 1.5, 2.0] {
        for theta in [0.0, PI] {
            cases.push(CssParams::new(Complex::new(beta0, 0.0), theta)?);
        }
    }
    let all = par_map(&cases, |p| compare::compare_css(p, &res, &times, &points))?;
    let mut worst = Deviations::new();
    all.iter().flatten().for_each(|d| merge(&mut worst, d));
    Ok(deviation_checks("css", &worst))
}

/// Displacement and phase used for every point of the GSS grid.
const GSS_GRID_ALPHA0: Complex = Complex::new(0.4, -0.3);
const GSS_GRID_PHI0: f64 = 0.6;

fn criterion_2() -> Result<Vec<Check>> {
    let mut cases = Vec::new();
    for r0 in [0.0, 0.73, 1.0] {
        for nu0 in [0.0, 3.0] {
            for nbar in [0.0, 0.5, 2.0] {
                cases.push((
                    GssParams::new(GSS_GRID_ALPHA0, r0, GSS_GRID_PHI0, nu0)?,
                    ReservoirParams::new(1.0, 0.1, nbar)?,
                ));
            }
        }
    }
    let all = par_map(&cases, |(p, res)| {
        let times: Vec<f64> = [0.1, 0.5, 2.0].iter().map(|kt| kt / res.k).collect();
        compare::compare_gss(p, res, &times)
    })?;
    let mut worst = Deviations::new();
    all.iter().flatten().for_each(|d| merge(&mut worst, d));
    Ok(deviation_checks("gss", &worst))
}

fn css_det(p: &CssParams, res: &ReservoirParams) -> impl Fn(f64) -> f64 {
    let (p, res) = (*p, *res);
    move |t| {
        covariance_css(&p, &res, t)
            .map(|c| c.det)
            .unwrap_or(f64::NAN)
    }
}

fn gss_det(p: &GssParams, res: &ReservoirParams) -> impl Fn(f64) -> f64 {
    let (p, res) = (*p, *res);
    move |t| {
        evolve_gss(&p, &res, t)
            .map(|s| gss::determinant_gss(&s))
            .unwrap_or(f64::NAN)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn criterion_3(seed: u64, notes: &mut Vec<String>) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let res = cold();
    let cat = CssParams::even(0.8)?;
    let ts = css::squeeze_time_css(&cat, res.k)
        .ok_or_else(|| anyhow::anyhow!("no squeeze time for the even state"))?;
    let found = golden_max(css_det(&cat, &res), 0.5, 5.0, 1e-12);
    checks.push(Check::at_most(
        "t_c^S relative gap to golden argmax",
        rel(found, ts),
        1e-6,
    ));

    let g = GssParams::squeezed_thermal(1.0, 0.0)?;
    let tg =
        gss::char_time_gss(&g, &res).ok_or_else(|| anyhow::anyhow!("no characteristic time"))?;
    checks.push(Check::at_most(
        "|t_c^G - 5 ln 2|",
        (tg - 5.0 * LN_2).abs(),
        1e-9,
    ));
    let found = golden_max(gss_det(&g, &res), 0.5, 20.0, 1e-12);
    checks.push(Check::at_most(
        "t_c^G relative gap to golden argmax",
        rel(found, tg),
        1e-6,
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut css_mismatch = 0;
    let mut gss_mismatch = 0;
    let mut worst_time = 0.0f64;
    for _ in 0..50 {
        let k = rng.gen_range(0.05..0.5);
        let res = ReservoirParams::zero_temperature(1.0, k)?;
        // the closed form covers the states of definite parity
        let theta = if rng.gen_bool(0.5) { 0.0 } else { PI };
        let p = CssParams::new(
            Complex::from_polar(rng.gen_range(0.1..1.5), rng.gen_range(-PI..PI)),
            theta,
        )?;
        let found = interior_argmax(css_det(&p, &res), 0.0, 20.0 / k, 4000, 1e-10);
        if found.is_some() != css::squeeze_visible_css(&p) {
            css_mismatch += 1;
        }
        if let (Some(f), Some(tc)) = (found, css::squeeze_time_css(&p, k)) {
            worst_time = worst_time.max(rel(f, tc));
        }
    }
    for _ in 0..50 {
        let k = rng.gen_range(0.05..0.5);
        let res = ReservoirParams::new(1.0, k, rng.gen_range(0.0..2.0))?;
        let p = GssParams::new(
            Complex::new(0.0, 0.0),
            rng.gen_range(0.0..1.5),
            rng.gen_range(-PI..PI),
            rng.gen_range(0.0..3.0),
        )?;
        let (a, b) = gss::visibility_gss(&p, &res);
        let found = interior_argmax(gss_det(&p, &res), 0.0, 20.0 / k, 4000, 1e-10);
        if found.is_some() != (a && b) {
            gss_mismatch += 1;
        }
        if let (Some(f), Some(tc)) = (found, gss::char_time_gss(&p, &res)) {
            worst_time = worst_time.max(rel(f, tc));
        }
    }
    checks.push(Check::at_most(
        "CSS sets where maximum and predicate disagree (of 50)",
        css_mismatch as f64,
        0.0,
    ));
    checks.push(Check::at_most(
        "GSS sets where maximum and predicate disagree (of 50)",
        gss_mismatch as f64,
        0.0,
    ));
    // flat maxima are located only to about sqrt(eps) relative; informational
    notes.push(format!("worst relative gap between located maxima and closed forms over the random sets: {worst_time:e}"));
    Ok(checks)
}

/// Commonly quoted energy-matched squeeze, kept for comparison.
const QUOTED_R0: f64 = 0.73;

fn criterion_4(notes: &mut Vec<String>) -> Result<Vec<Check>> {
    let res = cold();
    let cat = CssParams::even(0.8)?;
    let r0 = gss::energy_match_r0(&cat, Complex::new(0.0, 0.0), 0.0, 0.0)?;
    let ts = css::squeeze_time_css(&cat, res.k).unwrap_or(f64::NAN);
    let tau = css::decoherence_time(&cat, res.k)?;
    let ordered = |r0: f64| -> Result<(bool, f64)> {
        let tg =
            gss::char_time_gss(&GssParams::squeezed_thermal(r0, 0.0)?, &res).unwrap_or(f64::NAN);
        Ok((0.0 < ts && ts < tg && tg < tau, tg))
    };
    let (holds, tg) = ordered(r0)?;
    let (holds_quoted, tg_quoted) = ordered(QUOTED_R0)?;
    notes.push(format!(
        "energy-matched r0 = {r0:.10}: t_c^S = {ts:.6}, t_c^G = {tg:.6}, tau = {tau:.6}"
    ));
    notes.push(format!(
        "quoted r0 = {QUOTED_R0}: t_c^G = {tg_quoted:.6}, ordering {}",
        if holds_quoted { "holds" } else { "fails" }
    ));
    Ok(vec![Check::holds(
        "0 < t_c^S < t_c^G < tau at the energy-matched r0",
        holds,
    )])
}

fn criterion_5() -> Result<Vec<Check>> {
    let far = Complex::from_polar(5.0, PI / 3.0);
    let mut worst = 0.0f64;
    let mut tc_gap = 0.0f64;
    let mut presence_agrees = true;
    for (r0, phi0, nu0, nbar) in [
        (1.0, 0.0, 0.0, 0.0),
        (0.73, 0.4, 0.0, 0.5),
        (0.5, -1.0, 2.0, 1.0),
        (1.2, 2.0, 3.0, 0.0),
    ] {
        let res = ReservoirParams::new(1.0, 0.1, nbar)?;
        let near = GssParams::new(Complex::new(0.0, 0.0), r0, phi0, nu0)?;
        let bright = GssParams::new(far, r0, phi0, nu0)?;
        match (
            gss::char_time_gss(&near, &res),
            gss::char_time_gss(&bright, &res),
        ) {
            (Some(a), Some(b)) => tc_gap = tc_gap.max((a - b).abs()),
            (None, None) => {}
            _ => presence_agrees = false,
        }
        for t in linspace(0.0, 100.0, 201) {
            let a = evolve_gss(&near, &res, t)?;
            let b = evolve_gss(&bright, &res, t)?;
            worst = worst.max((a.nu - b.nu).abs());
            worst = worst.max((gss::entropy_gss(&a) - gss::entropy_gss(&b)).abs());
        }
    }
    Ok(vec![
        Check::at_most("max |delta nu|, |delta S| over the grid", worst, 1e-12),
        Check::at_most("|delta t_c^G|", tc_gap, 1e-12),
        Check::holds("t_c^G present for both or neither", presence_agrees),
    ])
}

fn criterion_6(seed: u64) -> Result<Vec<Check>> {
    let res = cold();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6);
    let tuples: Vec<(CssParams, GssParams, f64)> = (0..30)
        .map(|_| -> Result<_> {
            let c = CssParams::new(
                Complex::from_polar(rng.gen_range(0.2..1.6), rng.gen_range(-PI..PI)),
                rng.gen_range(-PI..PI),
            )?;
            let g = GssParams::new(
                Complex::from_polar(rng.gen_range(0.0..1.0), rng.gen_range(-PI..PI)),
                rng.gen_range(0.0..1.0),
                rng.gen_range(-PI..PI),
                rng.gen_range(0.0..2.0),
            )?;
            Ok((c, g, rng.gen_range(0.0..3.0) / res.k))
        })
        .collect::<Result<_>>()?;
    let gaps = par_map(&tuples, |(c, g, t)| {
        let (analytic, numeric) = compare::compare_fidelity(c, g, &res, *t)?;
        Ok((analytic - numeric).abs())
    })?;
    let worst = gaps.iter().copied().fold(0.0, f64::max);
    let mut late = 1.0f64;
    for beta0 in [0.8, 2.0] {
        for theta in [0.0, PI] {
            for nu0 in [0.0, 3.0] {
                let f = fidelity_css_gss(
                    &CssParams::new(Complex::new(beta0, 0.0), theta)?,
                    &GssParams::squeezed_thermal(1.0, nu0)?,
                    &res,
                    6.0 / res.k,
                )?;
                late = late.min(f.value);
            }
        }
    }
    let initial = fidelity_css_gss(
        &CssParams::even(0.8)?,
        &GssParams::squeezed_thermal(1.0, 0.0)?,
        &res,
        0.0,
    )?
    .value;
    Ok(vec![
        Check::at_most(
            "max |analytic - Uhlmann| over 30 tuples",
            worst,
            ORACLE_TOLERANCE,
        ),
        Check::at_least(
            "min F at kt = 6 over the figure parameter sets",
            late,
            1.0 - 1e-4,
        ),
        Check::at_least("even-CSS initial fidelity", initial, 0.9),
    ])
}

fn criterion_7(seed: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7);
    let order = |n: usize| PolyOrder::with_limit(n, gss::MAX_AUTO_N);

    let mut q = 0.0f64;
    for mu in [0.5, 2.0, 10.0] {
        let pdf: Vec<f64> = (0..=200)
            .map(|n| Ok(log_poisson_weight(order(n)?, mu)?.exp()))
            .collect::<Result<_>>()?;
        q = q.max(mandel_q(&pdf)?.unwrap_or(f64::NAN).abs());
    }
    checks.push(Check::at_most("|Q| of Poisson distributions", q, 1e-9));

    let g2 = |p: GssParams| -> Result<f64> {
        Ok(gss::g2_witness(&GssSnapshot::from_params(&p))?.map_or(f64::NAN, |w| w.g2))
    };
    let mut thermal = 0.0f64;
    let mut coherent = 0.0f64;
    for nu in [0.3, 1.7, 5.0] {
        thermal = thermal.max((g2(GssParams::squeezed_thermal(0.0, nu)?)? - 2.0).abs());
    }
    for a in [
        Complex::new(0.5, 0.0),
        Complex::new(1.1, -0.6),
        Complex::new(-2.0, 3.0),
    ] {
        coherent = coherent.max((g2(GssParams::new(a, 0.0, 0.0, 0.0)?)? - 1.0).abs());
    }
    // g2 comes from a truncated distribution, so its accuracy is set by the tail tolerance
    checks.push(Check::at_most("|g2 - 2| of thermal states", thermal, 1e-7));
    checks.push(Check::at_most(
        "|g2 - 1| of coherent states",
        coherent,
        1e-8,
    ));

    let mut squeezed_odd = 0;
    let mut parity_sum = 0.0f64;
    let mut pn_sum = 0.0f64;
    let mut det_floor = f64::INFINITY;
    for _ in 0..200 {
        let k = rng.gen_range(0.01..1.0);
        let t = rng.gen_range(0.0..10.0) / k;
        let res = ReservoirParams::zero_temperature(1.0, k)?;
        let beta0 = Complex::from_polar(rng.gen_range(0.05..2.5), rng.gen_range(-PI..PI));
        if covariance_css(&CssParams::new(beta0, PI)?, &res, t)?.is_squeezed() {
            squeezed_odd += 1;
        }
        let p = CssParams::new(beta0, rng.gen_range(-PI..PI))?;
        let s = css::snapshot(&p, &res, t)?;
        parity_sum = parity_sum.max((s.p_even + s.p_odd - 1.0).abs());
        let pdf = photon_pdf_css(&p, &res, t, order(css::auto_n_max_css(&p))?)?;
        pn_sum = pn_sum.max((pdf.iter().sum::<f64>() - 1.0).abs());
        det_floor = det_floor.min(covariance_css(&p, &res, t)?.det);
    }
    let mut wigner_gap = 0.0f64;
    for _ in 0..100 {
        let res = ReservoirParams::new(
            rng.gen_range(0.5..2.0),
            rng.gen_range(0.02..0.5),
            rng.gen_range(0.0..2.0),
        )?;
        let g = GssParams::new(
            Complex::from_polar(rng.gen_range(0.0..1.5), rng.gen_range(-PI..PI)),
            rng.gen_range(0.0..1.2),
            rng.gen_range(-PI..PI),
            rng.gen_range(0.0..3.0),
        )?;
        let snap = evolve_gss(&g, &res, rng.gen_range(0.0..3.0) / res.k)?;
        let pdf = gss::photon_pdf_gss_auto(&snap)?;
        pn_sum = pn_sum.max((pdf.iter().sum::<f64>() - 1.0).abs());
        det_floor = det_floor.min(gss::determinant_gss(&snap));
        let spread = (snap.nu + 0.5).sqrt() * snap.r.exp();
        let lambda = snap.alpha
            + Complex::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0))
                * (spread / 2f64.sqrt());
        let closed = gss::wigner_gss_closed(&snap, lambda);
        let series = gss::wigner_gss_series(&snap, lambda, order(series_order_for(snap.nu))?)?;
        wigner_gap = wigner_gap.max((closed - series).abs());
    }
    checks.push(Check::at_most(
        "odd states found squeezed (of 200)",
        squeezed_odd as f64,
        0.0,
    ));

    let res = cold();
    let mut odd_q = f64::NEG_INFINITY;
    let mut even_q = f64::INFINITY;
    for beta0 in [0.8, 1.5] {
        for (p, is_odd) in [
            (CssParams::odd(beta0)?, true),
            (CssParams::even(beta0)?, false),
        ] {
            let pdf = photon_pdf_css(&p, &res, 0.0, order(css::auto_n_max_css(&p))?)?;
            let q = mandel_q(&pdf)?.unwrap_or(f64::NAN);
            if is_odd {
                odd_q = odd_q.max(q);
            } else {
                even_q = even_q.min(q);
            }
        }
    }
    checks.push(Check::holds("odd-CSS Q < 0 at t = 0", odd_q < 0.0));
    checks.push(Check::holds("even-CSS Q > 0 at t = 0", even_q > 0.0));
    checks.push(Check::at_most("|p_e + p_o - 1|", parity_sum, 1e-12));
    checks.push(Check::at_most("|sum P_n - 1|", pn_sum, 1e-9));
    checks.push(Check::at_least("min det", det_floor, 0.25 - 1e-9));
    checks.push(Check::at_most(
        "max |closed - series| Wigner",
        wigner_gap,
        1e-9,
    ));
    Ok(checks)
}

fn coherent_error(dt: f64) -> Result<f64> {
    let res = cold();
    let b0 = Complex::new(1.2, 0.3);
    let t = 10.0;
    let start = oracle::build_coherent(b0, 40)?;
    let out = oracle::integrate(&start, &res, t, &IntegrationPolicy::fixed_step(dt))?;
    let exact = oracle::build_coherent(b0 * Complex::new(-res.k * t, -res.omega * t).exp(), 40)?;
    Ok((out.elements() - exact.elements())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max))
}

fn criterion_8() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let errors = [0.2, 0.1, 0.05].map(coherent_error);
    let errors: Vec<f64> = errors.into_iter().collect::<Result<_>>()?;
    for (i, pair) in errors.windows(2).enumerate() {
        checks.push(Check::within(
            format!("error ratio on halving step {}", i + 1),
            pair[0] / pair[1],
            8.0,
            32.0,
        ));
    }
    let cold = cold();
    let hot = ReservoirParams::new(1.0, 0.1, 2.0)?;
    let g = GssParams::new(Complex::new(0.5, 0.5), 0.5, 0.3, 0.5)?;
    let dim = oracle::gss_trajectory_dim_hint(&g, hot.nbar, DEFAULT_TAIL_BUDGET) + 10;
    let cases = [
        (oracle::build_css_auto(&CssParams::even(1.5)?, 10)?, cold),
        (oracle::build_gss(&g, dim)?, hot),
    ];
    let mut drift = 0.0f64;
    for (rho0, res) in &cases {
        let times: Vec<f64> = (1..=10).map(|i| 0.5 * i as f64 / res.k).collect();
        for s in oracle::evolve(rho0, res, &times, &IntegrationPolicy::default())? {
            drift = drift.max((s.trace() - 1.0).abs());
        }
    }
    checks.push(Check::at_most("trace drift over kt in [0, 5]", drift, 1e-9));
    Ok(checks)
}

const FIGURE_LIMIT_SECONDS: f64 = 60.0;

fn criterion_9(root: &Path, notes: &mut Vec<String>) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut slowest = (0.0f64, "");
    for tag in figures::TAGS {
        let mut digests = Vec::new();
        for run in ["first", "second"] {
            let start = Instant::now();
            let out = figures::render(tag)?;
            let dir = output::figure_dir(&root.join(run), tag);
            let manifest = output::write_output(&dir, &format!("figure {tag}"), &out)?;
            let elapsed = start.elapsed().as_secs_f64();
            if elapsed > slowest.0 {
                slowest = (elapsed, tag);
            }
            checks.push(Check::at_most(
                format!("{tag} {run} run seconds"),
                elapsed,
                FIGURE_LIMIT_SECONDS,
            ));
            let mut files = Vec::new();
            for f in &manifest.files {
                let on_disk = output::file_digest(&dir.join(&f.file))?;
                ensure!(
                    on_disk == f.sha256,
                    "{tag}: {} differs from its manifest digest",
                    f.file
                );
                files.push(on_disk);
            }
            files.push(output::file_digest(&dir.join("manifest.json"))?);
            digests.push(files);
        }
        checks.push(Check::holds(
            format!("{tag} checksums stable across runs"),
            digests[0] == digests[1],
        ));
    }
    notes.push(format!("slowest tag {} at {:.2} s", slowest.1, slowest.0));
    Ok(checks)
}
