//! Exact arithmetic in the deformation parameter `q`: rationals, polynomials,
//! reduced rational functions and truncated power series, plus q-integers,
//! q-factorials, q-Pochhammer symbols and q-multinomials.

mod numbers;
mod poly;
mod ratfn;
pub mod rational;
mod series;

pub use numbers::{
    pochhammer_qk, pochhammer_qk_real, qfactorial, qfactorial_base, qint, qint2_pow, qint_real,
    qmultinomial,
};
pub use poly::QPolynomial;
pub use ratfn::{qrat_limit_at_one, QRationalFn};
pub use rational::Rational;
pub use series::QSeries;

use crate::error::Result;

/// Double-precision evaluation at a numeric `q`.
pub trait EvalFloat {
    fn eval_float(&self, q: f64) -> Result<f64>;
}

impl EvalFloat for QPolynomial {
    fn eval_float(&self, q: f64) -> Result<f64> {
        Ok(self.eval_f64(q))
    }
}

impl EvalFloat for QRationalFn {
    fn eval_float(&self, q: f64) -> Result<f64> {
        self.eval_f64(q)
    }
}

impl EvalFloat for QSeries {
    fn eval_float(&self, q: f64) -> Result<f64> {
        Ok(self.eval_f64(q))
    }
}

/// Free-function form of [`EvalFloat::eval_float`].
pub fn eval_float<T: EvalFloat + ?Sized>(value: &T, q: f64) -> Result<f64> {
    value.eval_float(q)
}
