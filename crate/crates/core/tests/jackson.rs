use qjackson::jackson::{
    gauss_g, gauss_ga, integrate, jackson_definite, jackson_improper, normalized_moment,
    IntegrationDomain,
};
use qjackson::qfunc::{gamma_q2_closed, qderivative, QContext};
use qjackson::Error;

fn ctx(q: f64) -> QContext {
    QContext::with_q(q).unwrap()
}

#[test]
fn powers_integrate_exactly() {
    for q in [0.2, 0.5, 0.9] {
        let c = ctx(q);
        for k in 0..6 {
            let b = 1.7;
            let r = jackson_definite(&c, |x| x.powi(k), b).unwrap();
            let want = (1.0 - q) * b.powi(k + 1) / (1.0 - q.powi(k + 1));
            assert!((r.value - want).abs() <= 1e-13 * want, "q = {q}, k = {k}");
        }
    }
}

#[test]
fn derivative_integrates_back() {
    // int_0^b D_q F d_qx = F(b) - F(0)
    let c = ctx(0.6);
    let f = |x: f64| (x * x + 1.0).ln() + x.sin();
    let r = jackson_definite(&c, |x| qderivative(&c, f, x).unwrap(), 2.0).unwrap();
    assert!((r.value - (f(2.0) - f(0.0))).abs() < 1e-12, "{}", r.value);
}

#[test]
fn improper_integral_depends_on_node_set_only() {
    // a and a/q give the same lattice {q^n / a}
    let c = ctx(0.5);
    let f = |x: f64| (-x).exp() * x;
    let a = jackson_improper(&c, f, 1.3).unwrap().value;
    let b = jackson_improper(&c, f, 1.3 * 0.5).unwrap().value;
    assert!((a - b).abs() < 1e-14 * a.abs());
    // and approaches the Riemann value as q -> 1, with error O(1-q)
    let near = jackson_improper(&ctx(0.995), f, 1.0).unwrap().value;
    assert!((near - 1.0).abs() < 0.005, "{near}");
}

#[test]
fn symmetric_domain_cancels_odd_parts() {
    let c = ctx(0.4);
    let r = integrate(
        &c,
        |x| Ok(x.powi(3) + 2.0),
        IntegrationDomain::Symmetric { b: 1.5 },
    )
    .unwrap();
    let want = 2.0 * 2.0 * 1.5;
    assert!((r.value - want).abs() < 1e-13);
}

#[test]
fn gaussian_integrals_match_gamma() {
    for q in [0.3, 0.7] {
        let c = ctx(q);
        for t in [1.0, 3.0, 5.0] {
            let g = gauss_g(&c, t).unwrap();
            let closed = gamma_q2_closed(&c, t).unwrap();
            assert!((g - closed).abs() < 1e-10 * closed, "q = {q}, t = {t}");
        }
        assert_eq!(gauss_g(&c, 2.0).unwrap(), 0.0);
        assert!(gauss_ga(&c, 1.0, 3.0).unwrap() > 0.0);
    }
    assert!(matches!(gauss_g(&ctx(0.5), 1.5), Err(Error::Domain(_))));
}

#[test]
fn moments_approach_classical_values() {
    let c = QContext::new(0.99, 1e-12, 10_000_000).unwrap();
    for (n, classical) in [(1, 1.0), (2, 3.0)] {
        let mu = normalized_moment(&c, n).unwrap();
        assert!(
            (mu - classical).abs() / classical < 0.05,
            "mu_{} = {mu}",
            2 * n
        );
    }
}

#[test]
fn non_convergent_integrals_report() {
    let c = QContext::new(0.5, 1e-15, 200).unwrap();
    let e = jackson_improper(&c, |_| 1.0, 1.0).unwrap_err();
    assert!(matches!(e, Error::TailNonConvergence { .. }), "{e}");
    let e = jackson_definite(&c, |x| 1.0 / (x * x), 1.0).unwrap_err();
    assert!(matches!(e, Error::NonConvergence { .. }), "{e}");
}
