use decay_core::gss::{
    self, entropy_gss, evolve_gss, photon_pdf_gss, series_order_for, wigner_gss_closed,
    wigner_gss_series, GssSnapshot,
};
use decay_core::oracle::{self, FockDensityMatrix, IntegrationPolicy, DEFAULT_TAIL_BUDGET};
use decay_core::{phase_point, Complex, FormulaVariant, GssParams, PolyOrder, ReservoirParams};

fn trajectory(
    params: &GssParams,
    res: &ReservoirParams,
    kts: &[f64],
) -> (Vec<f64>, Vec<FockDensityMatrix>) {
    let dim = oracle::gss_trajectory_dim_hint(params, res.nbar, DEFAULT_TAIL_BUDGET) + 10;
    let rho0 = oracle::build_gss(params, dim).unwrap();
    let times: Vec<f64> = kts.iter().map(|kt| kt / res.k).collect();
    let states = oracle::evolve(&rho0, res, &times, &IntegrationPolicy::default()).unwrap();
    (times, states)
}

fn max_pn_gap(snap: &GssSnapshot, rho: &FockDensityMatrix) -> f64 {
    let pops = rho.populations();
    let pdf = photon_pdf_gss(
        snap,
        PolyOrder::with_limit(pops.len() - 1, gss::MAX_AUTO_N).unwrap(),
        FormulaVariant::Corrected,
    )
    .unwrap();
    pdf.iter()
        .zip(&pops)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

fn check(params: &GssParams, res: &ReservoirParams, kts: &[f64]) {
    let (times, states) = trajectory(params, res, kts);
    for (&t, rho) in times.iter().zip(&states) {
        let w = oracle::extract_witnesses(rho, res, &[]).unwrap();
        let snap = evolve_gss(params, res, t).unwrap();
        let c = w.covariance;
        assert!(
            (c.symplectic_nu() - snap.nu).abs() < 1e-6,
            "t={t}: nu {} vs {}",
            c.symplectic_nu(),
            snap.nu
        );
        assert!(
            (c.squeeze_r() - snap.r).abs() < 1e-6,
            "t={t}: r {} vs {}",
            c.squeeze_r(),
            snap.r
        );
        assert!(
            (w.entropy - entropy_gss(&snap)).abs() < 1e-6,
            "t={t}: S {} vs {}",
            w.entropy,
            entropy_gss(&snap)
        );
        assert!(
            (c.det - gss::determinant_gss(&snap)).abs() < 1e-6,
            "t={t}: det {}",
            c.det
        );
        assert!(
            (w.mean_a - snap.alpha).norm() < 1e-6,
            "t={t}: <a> {} vs {}",
            w.mean_a,
            snap.alpha
        );
        let gap = max_pn_gap(&snap, rho);
        assert!(gap < 1e-6, "t={t}: P_n gap {gap:e}");
    }
}

#[test]
fn displaced_squeezed_vacuum_at_all_temperatures() {
    let params = GssParams::new(Complex::new(0.4, -0.3), 0.73, 0.6, 0.0).unwrap();
    for nbar in [0.0, 0.5, 2.0] {
        check(
            &params,
            &ReservoirParams::new(1.0, 0.1, nbar).unwrap(),
            &[0.1, 0.5, 2.0],
        );
    }
}

#[test]
fn squeezed_thermal_state_into_hot_reservoir() {
    let params = GssParams::squeezed_thermal(1.0, 3.0).unwrap();
    check(
        &params,
        &ReservoirParams::new(1.0, 0.1, 2.0).unwrap(),
        &[0.1, 0.5, 2.0],
    );
}

#[test]
fn determinant_of_evolved_squeezed_vacuum() {
    let params = GssParams::squeezed_thermal(1.0, 0.0).unwrap();
    let res = ReservoirParams::zero_temperature(1.0, 0.1).unwrap();
    let (times, states) = trajectory(&params, &res, &[0.3]);
    let w = oracle::extract_witnesses(&states[0], &res, &[]).unwrap();
    let snap = evolve_gss(&params, &res, times[0]).unwrap();
    assert!((w.covariance.det - (snap.nu + 0.5).powi(2)).abs() < 1e-7);
}

#[test]
fn both_wigner_forms_match_displaced_parity() {
    let params = GssParams::new(Complex::new(0.5, 0.2), 0.7, 1.1, 0.4).unwrap();
    let res = ReservoirParams::new(1.0, 0.1, 0.5).unwrap();
    let (times, states) = trajectory(&params, &res, &[0.0, 0.5]);
    let axis = [-1.5, -0.5, 0.5, 1.5];
    for (&t, rho) in times.iter().zip(&states) {
        let snap = evolve_gss(&params, &res, t).unwrap();
        let order = PolyOrder::with_limit(series_order_for(snap.nu), 4096).unwrap();
        for &x in &axis {
            for &p in &axis {
                let lambda = snap.alpha + phase_point(res.omega, x, p);
                let numeric = oracle::wigner_at(rho, lambda);
                let closed = wigner_gss_closed(&snap, lambda);
                let series = wigner_gss_series(&snap, lambda, order).unwrap();
                assert!(
                    (numeric - closed).abs() < 1e-7,
                    "t={t} ({x},{p}): {numeric} vs {closed}"
                );
                assert!(
                    (numeric - series).abs() < 1e-7,
                    "t={t} ({x},{p}): {numeric} vs {series}"
                );
            }
        }
    }
}

#[test]
fn literal_forms_disagree_with_oracle() {
    let params = GssParams::new(Complex::new(0.5, 0.2), 0.7, 1.1, 0.4).unwrap();
    let snap = GssSnapshot::from_params(&params);
    let rho = oracle::build_gss_auto(&params, 10).unwrap();
    let lambda = Complex::new(0.3, 0.4);
    let numeric = oracle::wigner_at(&rho, lambda);
    let literal = gss::wigner_gss_closed_variant(&snap, lambda, FormulaVariant::Literal);
    assert!((numeric - literal).abs() > 1e-3);
    let pops = rho.populations();
    let literal_pdf = photon_pdf_gss(
        &snap,
        PolyOrder::new(pops.len() - 1).unwrap(),
        FormulaVariant::Literal,
    )
    .unwrap();
    let gap = literal_pdf
        .iter()
        .zip(&pops)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(gap > 1e-3, "{gap}");
}
