use serde::Serialize;

use super::lambda::{exp_coefficient, LambdaKind, LambdaTable};
use super::ExpKind;
use crate::error::{Error, Result};
use crate::qarith::rational::binomial;
use crate::qarith::QRationalFn;

pub const MAX_DECOMPOSITION_ORDER: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientMismatch {
    /// power of `x`
    pub a: usize,
    /// power of `y`
    pub b: usize,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub identity: String,
    pub order: usize,
    pub checked: usize,
    pub failures: Vec<CoefficientMismatch>,
}

impl DecompositionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Expands both sides of `X^{x+y} = X^x * sum_{c,d} coeff_{c,d} x^c y^d` as
/// bivariate polynomials through total degree `order` and compares every
/// coefficient exactly.
///
/// `X = E_{q,2}` pairs with the lambda table and `X = e_{q,2}` with kappa. The
/// left side comes from the binomial expansion of `(x+y)^n` only; the right
/// side from the table.
pub fn verify_addition_decomposition(kind: ExpKind, order: usize) -> Result<DecompositionReport> {
    if order > MAX_DECOMPOSITION_ORDER {
        return Err(Error::SizeGuard {
            what: "bivariate decomposition check".into(),
            predicted: ((order + 1) * (order + 2) / 2) as u128,
            limit: ((MAX_DECOMPOSITION_ORDER + 1) * (MAX_DECOMPOSITION_ORDER + 2) / 2) as u128,
        });
    }
    let (table, identity) = match kind {
        ExpKind::BigE => (
            LambdaTable::new(LambdaKind::Lambda),
            "E_{q,2}^{x+y} = E_{q,2}^x * sum lambda_{c,d} x^c y^d",
        ),
        ExpKind::SmallE => (
            LambdaTable::new(LambdaKind::Kappa),
            "e_{q,2}^{x+y} = e_{q,2}^x * sum kappa_{c,d} x^c y^d",
        ),
    };
    Ok(compare(kind, &table, identity, order))
}

fn compare(
    kind: ExpKind,
    table: &LambdaTable,
    identity: &str,
    order: usize,
) -> DecompositionReport {
    let exp_coeffs: Vec<QRationalFn> = (0..=order).map(|n| exp_coefficient(kind, n)).collect();

    let mut checked = 0;
    let mut failures = Vec::new();
    for n in 0..=order {
        for a in 0..=n {
            let b = n - a;
            let lhs = exp_coeffs[n].scale(&binomial(n as u64, a as u64));
            let rhs: QRationalFn = (0..=a).map(|c| &exp_coeffs[a - c] * &table.get(c, b)).sum();
            checked += 1;
            if lhs != rhs {
                failures.push(CoefficientMismatch {
                    a,
                    b,
                    lhs: lhs.to_string(),
                    rhs: rhs.to_string(),
                });
            }
        }
    }
    DecompositionReport {
        identity: identity.to_string(),
        order,
        checked,
        failures,
    }
}
