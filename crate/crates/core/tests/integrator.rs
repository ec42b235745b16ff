use decay_core::oracle::{
    self, FockDensityMatrix, IntegrationPolicy, Witnesses, DEFAULT_TAIL_BUDGET,
};
use decay_core::{Complex, CssParams, GssParams, ReservoirParams};

fn coherent_error(dt: f64) -> f64 {
    let res = ReservoirParams::zero_temperature(1.0, 0.1).unwrap();
    let b0 = Complex::new(1.2, 0.3);
    let t = 10.0;
    let start = oracle::build_coherent(b0, 40).unwrap();
    let out = oracle::integrate(&start, &res, t, &IntegrationPolicy::fixed_step(dt)).unwrap();
    let exact =
        oracle::build_coherent(b0 * Complex::new(-res.k * t, -res.omega * t).exp(), 40).unwrap();
    (out.elements() - exact.elements())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

#[test]
fn step_halving_shows_fourth_order() {
    let errors: Vec<f64> = [0.2, 0.1, 0.05]
        .iter()
        .map(|&dt| coherent_error(dt))
        .collect();
    for pair in errors.windows(2) {
        let ratio = pair[0] / pair[1];
        assert!((8.0..=32.0).contains(&ratio), "ratio {ratio} from {pair:?}");
    }
}

#[test]
fn default_policy_reproduces_coherent_solution() {
    let err = coherent_error(1e-2);
    assert!(err < 1e-8, "{err:e}");
}

fn trace_drift(rho0: &FockDensityMatrix, res: &ReservoirParams) -> f64 {
    let times: Vec<f64> = (1..=10).map(|i| 0.5 * i as f64 / res.k).collect();
    let states = oracle::evolve(rho0, res, &times, &IntegrationPolicy::default()).unwrap();
    states
        .iter()
        .map(|s| (s.trace() - 1.0).abs())
        .fold(0.0, f64::max)
}

#[test]
fn trace_is_preserved_to_five_decay_times() {
    let cold = ReservoirParams::zero_temperature(1.0, 0.1).unwrap();
    let hot = ReservoirParams::new(1.0, 0.1, 2.0).unwrap();
    let cat = oracle::build_css_auto(&CssParams::even(1.5).unwrap(), 10).unwrap();
    assert!(trace_drift(&cat, &cold) < 1e-9);
    let g = GssParams::new(Complex::new(0.5, 0.5), 0.5, 0.3, 0.5).unwrap();
    let dim = oracle::gss_trajectory_dim_hint(&g, hot.nbar, DEFAULT_TAIL_BUDGET) + 10;
    assert!(trace_drift(&oracle::build_gss(&g, dim).unwrap(), &hot) < 1e-9);
}

#[test]
fn fixed_points_stay_put() {
    let cold = ReservoirParams::zero_temperature(1.0, 0.1).unwrap();
    let vac = oracle::build_coherent(Complex::new(0.0, 0.0), 20).unwrap();
    let out = oracle::integrate(&vac, &cold, 1.0, &IntegrationPolicy::default()).unwrap();
    assert!((out.elements() - vac.elements())
        .iter()
        .all(|z| z.norm() < 1e-10));

    let nbar = 0.8;
    let hot = ReservoirParams::new(1.0, 0.1, nbar).unwrap();
    let th = oracle::build_thermal(nbar, 150).unwrap();
    let out = oracle::integrate(&th, &hot, 1.0, &IntegrationPolicy::default()).unwrap();
    // only the truncation edge departs from the fixed point
    for n in 0..120 {
        assert!((out.get(n, n) - th.get(n, n)).norm() < 1e-10, "level {n}");
    }
}

#[test]
fn adaptive_and_fixed_step_agree() {
    let res = ReservoirParams::new(1.0, 0.1, 0.5).unwrap();
    let g = GssParams::new(Complex::new(0.3, 0.0), 0.6, 0.0, 0.0).unwrap();
    let dim = oracle::gss_trajectory_dim_hint(&g, res.nbar, DEFAULT_TAIL_BUDGET) + 10;
    let rho = oracle::build_gss(&g, dim).unwrap();
    let a = oracle::integrate(&rho, &res, 8.0, &IntegrationPolicy::default()).unwrap();
    let b = oracle::integrate(&rho, &res, 8.0, &IntegrationPolicy::adaptive(1e-12)).unwrap();
    let gap = (a.elements() - b.elements())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    assert!(gap < 1e-9, "{gap:e}");
}

#[test]
fn states_remain_positive() {
    let res = ReservoirParams::new(1.0, 0.1, 0.5).unwrap();
    let g = GssParams::new(Complex::new(0.4, -0.2), 1.0, 0.5, 0.0).unwrap();
    let dim = oracle::gss_trajectory_dim_hint(&g, res.nbar, DEFAULT_TAIL_BUDGET) + 10;
    let times = [1.0, 5.0, 20.0];
    for s in oracle::evolve(
        &oracle::build_gss(&g, dim).unwrap(),
        &res,
        &times,
        &IntegrationPolicy::default(),
    )
    .unwrap()
    {
        assert!(s.eigenvalues().unwrap()[0] >= -1e-9);
    }
}

fn witness_gap(a: &Witnesses, b: &Witnesses) -> f64 {
    let pn = a
        .populations
        .iter()
        .zip(&b.populations)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    [
        pn,
        (a.mean_a - b.mean_a).norm(),
        (a.covariance.det - b.covariance.det).abs(),
        (a.entropy - b.entropy).abs(),
        (a.mean_n - b.mean_n).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

#[test]
fn doubling_the_dimension_changes_nothing() {
    let res = ReservoirParams::new(1.0, 0.1, 0.5).unwrap();
    let g = GssParams::new(Complex::new(0.4, 0.1), 0.73, 0.0, 0.0).unwrap();
    let dim = oracle::gss_trajectory_dim_hint(&g, res.nbar, DEFAULT_TAIL_BUDGET) + 10;
    let t = [5.0];
    let small = oracle::evolve(
        &oracle::build_gss(&g, dim).unwrap(),
        &res,
        &t,
        &IntegrationPolicy::default(),
    )
    .unwrap();
    let large = oracle::evolve(
        &oracle::build_gss(&g, 2 * dim).unwrap(),
        &res,
        &t,
        &IntegrationPolicy::default(),
    )
    .unwrap();
    let a = oracle::extract_witnesses(&small[0], &res, &[]).unwrap();
    let b = oracle::extract_witnesses(&large[0], &res, &[]).unwrap();
    assert!(witness_gap(&a, &b) < 1e-9, "{:e}", witness_gap(&a, &b));

    let cold = ReservoirParams::zero_temperature(1.0, 0.1).unwrap();
    let c = CssParams::odd(2.0).unwrap();
    let dim = oracle::css_dim_hint(&c, DEFAULT_TAIL_BUDGET) + 10;
    let small = oracle::integrate(
        &oracle::build_css(&c, dim).unwrap(),
        &cold,
        5.0,
        &IntegrationPolicy::default(),
    )
    .unwrap();
    let large = oracle::integrate(
        &oracle::build_css(&c, 2 * dim).unwrap(),
        &cold,
        5.0,
        &IntegrationPolicy::default(),
    )
    .unwrap();
    let a = oracle::extract_witnesses(&small, &cold, &[]).unwrap();
    let b = oracle::extract_witnesses(&large, &cold, &[]).unwrap();
    assert!(witness_gap(&a, &b) < 1e-9, "{:e}", witness_gap(&a, &b));
}

#[test]
fn hot_squeezed_state_relaxing_into_vacuum_stays_positive() {
    // large dimension at zero temperature: the band operator is far from normal
    let res = ReservoirParams::zero_temperature(1.0, 0.1).unwrap();
    let g = GssParams::new(Complex::new(0.4, -0.3), 1.0, 0.6, 3.0).unwrap();
    let dim = oracle::gss_trajectory_dim_hint(&g, res.nbar, DEFAULT_TAIL_BUDGET) + 10;
    let rho = oracle::build_gss(&g, dim).unwrap();
    let out = oracle::integrate(&rho, &res, 1.0, &IntegrationPolicy::default()).unwrap();
    let min = out.eigenvalues().unwrap()[0];
    assert!(min > -1e-12, "{min:e}");
}
