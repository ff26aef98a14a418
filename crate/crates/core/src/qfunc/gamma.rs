use super::exp::qpow_ratio;
use super::QContext;
use crate::error::{Error, Result};

/// `Gamma_{q,2}(t) = (1 - q^2)_{q,2}^{t/2 - 1} / (1 - q)^{t/2 - 1}` for `t > 0`.
pub fn gamma_q2_closed(ctx: &QContext, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!(
            "Gamma_(q,2)(t) needs t > 0, got {t}"
        )));
    }
    let q = ctx.q();
    let s = t / 2.0 - 1.0;
    Ok(qpow_ratio(ctx, -q * q, s)? / (1.0 - q).powf(s))
}

/// Bridge factor with `Gamma_{q,2}(t) = c(a, t) gamma^{(a)}_{q,2}(t)`:
///
/// `c(a,t) = a^t [2]_q^{t/2} / (1 + [2]_q a^2)
///           * (1 + 1/([2]_q a^2))_{q,2}^{t/2} * (1 + [2]_q a^2)_{q,2}^{1 - t/2}`
pub fn c_factor(ctx: &QContext, a: f64, t: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::Domain(format!("c(a, t) needs a > 0, got {a}")));
    }
    let two = ctx.qint2();
    let b = two * a * a;
    let prefactor = a.powf(t) * two.powf(t / 2.0) / (1.0 + b);
    Ok(prefactor * qpow_ratio(ctx, 1.0 / b, t / 2.0)? * qpow_ratio(ctx, b, 1.0 - t / 2.0)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qarith::{pochhammer_qk, qint_real};

    #[test]
    fn functional_equation() {
        for q in [0.3, 0.5, 0.8] {
            let ctx = QContext::with_q(q).unwrap();
            for t in [1.0, 2.0, 3.5] {
                let lhs = gamma_q2_closed(&ctx, t + 2.0).unwrap();
                let rhs = qint_real(q, t) * gamma_q2_closed(&ctx, t).unwrap();
                assert!((lhs / rhs - 1.0).abs() < 1e-9, "q={q} t={t}");
            }
        }
    }

    #[test]
    fn ratios_give_pochhammer() {
        let ctx = QContext::with_q(0.5).unwrap();
        let g1 = gamma_q2_closed(&ctx, 1.0).unwrap();
        assert!((gamma_q2_closed(&ctx, 3.0).unwrap() / g1 - 1.0).abs() < 1e-12);
        let p = pochhammer_qk(1, 2, 2).eval_f64(0.5);
        assert!((gamma_q2_closed(&ctx, 5.0).unwrap() / g1 - p).abs() < 1e-10);
        // Gamma_(q,2)(2) = 1 exactly in closed form
        assert!((gamma_q2_closed(&ctx, 2.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn classical_value_near_one() {
        let ctx = QContext::new(0.999, 1e-12, 10_000_000).unwrap();
        let g = gamma_q2_closed(&ctx, 1.0).unwrap();
        let classical = (std::f64::consts::PI / 2.0).sqrt();
        assert!((g / classical - 1.0).abs() < 0.01, "{g}");
    }

    #[test]
    fn rejects_bad_arguments() {
        let ctx = QContext::with_q(0.5).unwrap();
        assert!(gamma_q2_closed(&ctx, 0.0).is_err());
        assert!(c_factor(&ctx, -1.0, 1.0).is_err());
    }
}
