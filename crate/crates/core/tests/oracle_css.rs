use std::f64::consts::PI;

use decay_core::css::{self, covariance_css, entropy_css, photon_pdf_css, wigner_css};
use decay_core::oracle::{self, IntegrationPolicy};
use decay_core::{phase_point, Complex, CssParams, PolyOrder, ReservoirParams};

fn res() -> ReservoirParams {
    ReservoirParams::zero_temperature(1.0, 0.1).unwrap()
}

fn grid(omega: f64) -> Vec<Complex> {
    let axis = [-2.0, -1.0, 0.0, 1.0, 2.0];
    axis.iter()
        .flat_map(|&x| axis.iter().map(move |&p| phase_point(omega, x, p)))
        .collect()
}

fn check(params: &CssParams, kts: &[f64]) {
    let res = res();
    let rho0 = oracle::build_css_auto(params, 10).unwrap();
    let times: Vec<f64> = kts.iter().map(|kt| kt / res.k).collect();
    let states = oracle::evolve(&rho0, &res, &times, &IntegrationPolicy::default()).unwrap();
    let points = grid(res.omega);
    for (&t, rho) in times.iter().zip(&states) {
        let w = oracle::extract_witnesses(rho, &res, &points).unwrap();
        let entropy = entropy_css(params, &res, t).unwrap();
        let det = covariance_css(params, &res, t).unwrap().det;
        assert!(
            (w.entropy - entropy).abs() < 1e-6,
            "t={t}: S {} vs {entropy}",
            w.entropy
        );
        assert!(
            (w.covariance.det - det).abs() < 1e-6,
            "t={t}: det {} vs {det}",
            w.covariance.det
        );
        let pdf = photon_pdf_css(params, &res, t, PolyOrder::new(rho.dim() - 1).unwrap()).unwrap();
        for (n, (a, b)) in pdf.iter().zip(&w.populations).enumerate() {
            assert!((a - b).abs() < 1e-6, "t={t}: P_{n} {a} vs {b}");
        }
        for (lambda, value) in &w.wigner {
            let exact = wigner_css(params, &res, t, *lambda).unwrap();
            assert!(
                (value - exact).abs() < 1e-6,
                "t={t}, lambda={lambda}: W {value} vs {exact}"
            );
        }
    }
}

#[test]
fn even_superpositions_follow_the_oracle() {
    for beta0 in [0.4, 1.5] {
        check(&CssParams::even(beta0).unwrap(), &[0.0, 0.1, 1.0, 3.0]);
    }
}

#[test]
fn odd_superpositions_follow_the_oracle() {
    for beta0 in [0.8, 2.0] {
        check(&CssParams::odd(beta0).unwrap(), &[0.0, 0.5, 1.0, 3.0]);
    }
}

#[test]
fn complex_amplitude_and_phase() {
    check(
        &CssParams::new(Complex::from_polar(1.1, 0.7), 0.4 * PI).unwrap(),
        &[0.0, 0.5, 2.0],
    );
}

#[test]
fn eigenvalues_are_the_parity_weights() {
    let params = CssParams::even(0.8).unwrap();
    let r = res();
    let rho = oracle::integrate(
        &oracle::build_css_auto(&params, 10).unwrap(),
        &r,
        5.0,
        &IntegrationPolicy::default(),
    )
    .unwrap();
    let ev = rho.eigenvalues().unwrap();
    let snap = css::snapshot(&params, &r, 5.0).unwrap();
    let top = ev[ev.len() - 1];
    let second = ev[ev.len() - 2];
    assert!((top - snap.p_even).abs() < 1e-7, "{top} vs {}", snap.p_even);
    assert!(
        (second - snap.p_odd).abs() < 1e-7,
        "{second} vs {}",
        snap.p_odd
    );
}

#[test]
fn literal_fringe_disagrees_with_oracle() {
    let params = CssParams::even(1.5).unwrap();
    let r = res();
    let rho = oracle::build_css_auto(&params, 10).unwrap();
    let lambda = Complex::new(0.0, 0.4);
    let numeric = oracle::wigner_at(&rho, lambda);
    let literal = css::wigner_css_variant(
        &params,
        &r,
        0.0,
        lambda,
        decay_core::FormulaVariant::Literal,
    )
    .unwrap();
    let corrected = wigner_css(&params, &r, 0.0, lambda).unwrap();
    assert!((numeric - corrected).abs() < 1e-10);
    assert!((numeric - literal).abs() > 0.1);
}

#[test]
fn printed_second_moments_match_for_definite_parity() {
    let r = res();
    for params in [CssParams::even(0.8).unwrap(), CssParams::odd(1.5).unwrap()] {
        for t in [0.0, 3.0, 11.0] {
            let rho = oracle::integrate(
                &oracle::build_css_auto(&params, 10).unwrap(),
                &r,
                t,
                &IntegrationPolicy::default(),
            )
            .unwrap();
            let w = oracle::extract_witnesses(&rho, &r, &[]).unwrap();
            let (x2, p2, xp) = css::literal_second_moments(&params, &r, t).unwrap();
            let c = w.covariance;
            // <x> = <p> = 0 for definite parity
            assert!((x2 - c.sigma_qq).abs() < 1e-8 && (p2 - c.sigma_pp).abs() < 1e-8);
            assert!((xp / 2.0 - c.sigma_qp).abs() < 1e-8);
        }
    }
}

#[test]
fn far_phase_space_points_are_not_truncated() {
    let params = CssParams::even(0.8).unwrap();
    let r = res();
    let rho = oracle::build_css_auto(&params, 10).unwrap();
    for lambda in [
        phase_point(1.0, 4.0, 4.0),
        phase_point(1.0, -4.0, 0.0),
        Complex::new(0.0, 3.5),
    ] {
        let numeric = oracle::wigner_at(&rho, lambda);
        let exact = wigner_css(&params, &r, 0.0, lambda).unwrap();
        assert!(
            (numeric - exact).abs() < 1e-10,
            "{lambda}: {numeric} vs {exact}"
        );
    }
}
