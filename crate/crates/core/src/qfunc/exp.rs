use serde::{Deserialize, Serialize};

use super::QContext;
use crate::error::{Error, Result};

/// The two q-exponentials in base `q^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExpKind {
    /// `E_{q,2}^z = sum q^{n(n-1)} z^n / [n]_{q^2}! = prod (1 + (1-q^2) q^{2j} z)`
    BigE,
    /// `e_{q,2}^z = sum z^n / [n]_{q^2}! = 1 / prod (1 - (1-q^2) q^{2j} z)`
    SmallE,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExpForm {
    Series,
    Product,
}

/// `(1 + x)_{q,2}^inf = prod_{j >= 0} (1 + q^{2j} x)`.
///
/// Stops once the remaining factors can move the product by less than `tol`
/// relative, i.e. when `|q^{2j} x| / (1 - q^2) < tol`.
pub fn qpoch_inf(ctx: &QContext, x: f64) -> Result<f64> {
    let q2 = ctx.q() * ctx.q();
    let damp = 1.0 - q2;
    let mut prod = 1.0;
    let mut term = x;
    for _ in 0..ctx.max_terms() {
        if term.abs() < ctx.tol() * damp {
            return Ok(prod);
        }
        prod *= 1.0 + term;
        term *= q2;
    }
    Err(Error::NonConvergence {
        what: format!("product (1 + {x})_(q,2)^inf"),
        terms: ctx.max_terms(),
    })
}

/// `(1 + x)_{q,2}^s = (1 + x)^inf / (1 + q^{2s} x)^inf` for real `s`.
///
/// Evaluated as the single product `prod_j (1 + q^{2j} x) / (1 + q^{2j} y)`
/// with `y = q^{2s} x`; the two infinite products can each underflow when
/// `q` is close to 1 while their ratio stays moderate.
pub fn qpow_ratio(ctx: &QContext, x: f64, s: f64) -> Result<f64> {
    let q2 = ctx.q() * ctx.q();
    let damp = 1.0 - q2;
    let mut tx = x;
    let mut ty = ctx.q().powf(2.0 * s) * x;
    let mut prod = 1.0;
    for _ in 0..ctx.max_terms() {
        if tx.abs().max(ty.abs()) < ctx.tol() * damp {
            return Ok(prod);
        }
        let den = 1.0 + ty;
        if den == 0.0 {
            return Err(Error::Pole(format!(
                "(1 + q^(2s) x)^inf vanishes for x = {x}, s = {s}"
            )));
        }
        prod *= (1.0 + tx) / den;
        tx *= q2;
        ty *= q2;
    }
    Err(Error::NonConvergence {
        what: format!("ratio (1 + {x})_(q,2)^{s}"),
        terms: ctx.max_terms(),
    })
}

/// q-exponential of `z` in series or product form.
pub fn qexp(ctx: &QContext, kind: ExpKind, z: f64, form: ExpForm) -> Result<f64> {
    match form {
        ExpForm::Series => qexp_series(ctx, kind, z),
        ExpForm::Product => qexp_product(ctx, kind, z),
    }
}

fn qexp_series(ctx: &QContext, kind: ExpKind, z: f64) -> Result<f64> {
    let q2 = ctx.q() * ctx.q();
    let damp = 1.0 - q2;
    if kind == ExpKind::SmallE && z.abs() * damp >= 1.0 {
        return Err(Error::Domain(format!(
            "e_(q,2) series diverges for |z|(1-q^2) = {} >= 1; use the product form",
            z.abs() * damp
        )));
    }
    let mut sum = 1.0;
    let mut term = 1.0;
    let mut biggest: f64 = 1.0;
    // q^{2(n-1)} for the BigE ratio
    let mut q2_pow = 1.0;
    // q^{2n}
    let mut q2n = 1.0;
    for _ in 1..ctx.max_terms() {
        q2n *= q2;
        let qint_n = (1.0 - q2n) / damp;
        let ratio_factor = match kind {
            ExpKind::BigE => q2_pow,
            ExpKind::SmallE => 1.0,
        };
        term *= ratio_factor * z / qint_n;
        q2_pow *= q2;
        sum += term;
        biggest = biggest.max(term.abs());

        // next-term ratio bounds the geometric tail from here on
        let next_ratio = match kind {
            ExpKind::BigE => q2_pow * z.abs() * damp / (1.0 - q2n * q2),
            ExpKind::SmallE => z.abs() * damp / (1.0 - q2n * q2),
        };
        if next_ratio < 1.0 {
            let tail = term.abs() * next_ratio / (1.0 - next_ratio);
            if tail <= ctx.tol() * sum.abs() || tail <= 1e-17 * biggest {
                return Ok(sum);
            }
        }
    }
    Err(Error::NonConvergence {
        what: format!("{kind:?} series at z = {z}"),
        terms: ctx.max_terms(),
    })
}

fn qexp_product(ctx: &QContext, kind: ExpKind, z: f64) -> Result<f64> {
    let damp = 1.0 - ctx.q() * ctx.q();
    match kind {
        ExpKind::BigE => qpoch_inf(ctx, damp * z),
        ExpKind::SmallE => {
            let p = qpoch_inf(ctx, -damp * z)?;
            if p == 0.0 {
                return Err(Error::Domain(format!("e_(q,2) has a pole at z = {z}")));
            }
            Ok(1.0 / p)
        }
    }
}

/// `d_q f / d_q x = (f(qx) - f(x)) / ((q - 1) x)`
pub fn qderivative<F: Fn(f64) -> f64>(ctx: &QContext, f: F, x: f64) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::Domain("q-derivative needs x != 0".into()));
    }
    let q = ctx.q();
    Ok((f(q * x) - f(x)) / ((q - 1.0) * x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(q: f64) -> QContext {
        QContext::new(q, 1e-15, 100_000).unwrap()
    }

    #[test]
    fn value_at_zero() {
        let c = ctx(0.5);
        for kind in [ExpKind::BigE, ExpKind::SmallE] {
            for form in [ExpForm::Series, ExpForm::Product] {
                assert_eq!(qexp(&c, kind, 0.0, form).unwrap(), 1.0);
            }
        }
    }

    #[test]
    fn big_and_small_are_reciprocal() {
        let c = ctx(0.5);
        for z in [0.3, -0.7, 1.1] {
            let e = qexp(&c, ExpKind::BigE, z, ExpForm::Series).unwrap();
            let s = qexp(&c, ExpKind::SmallE, -z, ExpForm::Series).unwrap();
            assert!((e * s - 1.0).abs() < 1e-10, "z = {z}: {}", e * s);
        }
    }

    #[test]
    fn classical_limit() {
        let c = ctx(0.999);
        let e = qexp(&c, ExpKind::BigE, 0.5, ExpForm::Series).unwrap();
        assert!((e / 0.5f64.exp() - 1.0).abs() < 0.01);
    }

    #[test]
    fn series_matches_product() {
        let c = QContext::new(0.5, 1e-12, 100_000).unwrap();
        for z in [-1.9f64, -0.4, 0.2, 1.3] {
            for kind in [ExpKind::BigE, ExpKind::SmallE] {
                if kind == ExpKind::SmallE && z.abs() * 0.75 >= 1.0 {
                    continue;
                }
                let s = qexp(&c, kind, z, ExpForm::Series).unwrap();
                let p = qexp(&c, kind, z, ExpForm::Product).unwrap();
                assert!((s - p).abs() <= 10.0 * c.tol() * s.abs().max(1.0));
            }
        }
    }

    #[test]
    fn small_e_series_domain() {
        let c = ctx(0.5);
        assert!(matches!(
            qexp(&c, ExpKind::SmallE, 2.0, ExpForm::Series),
            Err(Error::Domain(_))
        ));
        // the product form is still defined there
        assert!(qexp(&c, ExpKind::SmallE, 2.0, ExpForm::Product).is_ok());
        assert!(qexp(&c, ExpKind::SmallE, 1.0 / 0.75, ExpForm::Product).is_err());
    }

    #[test]
    fn non_convergence_reported() {
        let c = QContext::new(0.99, 1e-15, 5).unwrap();
        assert!(matches!(
            qexp(&c, ExpKind::BigE, 1.0, ExpForm::Product),
            Err(Error::NonConvergence { .. })
        ));
    }

    #[test]
    fn derivative_of_monomials() {
        let c = ctx(0.5);
        assert_eq!(qderivative(&c, |_| 3.0, 0.7).unwrap(), 0.0);
        // d_q x^2 = [2]_q x
        assert!((qderivative(&c, |x| x * x, 1.0).unwrap() - 1.5).abs() < 1e-15);
        assert!(qderivative(&c, |x| x, 0.0).is_err());
    }
}
