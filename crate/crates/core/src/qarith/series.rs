use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use serde::{Serialize, Serializer};

use super::poly::QPolynomial;
use super::rational::{to_f64, Rational};
use crate::error::{Error, Result};

/// Power series in `q` known through `q^order` (inclusive).
///
/// Binary operations take the smaller order of the two operands, so a value
/// never claims more precision than its least precise input.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QSeries {
    coeffs: Vec<Rational>,
    order: usize,
}

impl QSeries {
    pub fn new(mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.resize(order + 1, Rational::zero());
        QSeries { coeffs, order }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::new(vec![super::rational::int(1)], order)
    }

    pub fn from_poly(p: &QPolynomial, order: usize) -> Self {
        Self::new(p.coeffs().iter().take(order + 1).cloned().collect(), order)
    }

    /// Expansion of `num / den`; `den` must have a nonzero constant term.
    pub fn from_ratio(num: &QPolynomial, den: &QPolynomial, order: usize) -> Result<Self> {
        let inv = Self::from_poly(den, order).inverse()?;
        Ok(&Self::from_poly(num, order) * &inv)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, m: usize) -> Result<&Rational> {
        self.coeffs.get(m).ok_or(Error::BeyondTruncation {
            order: self.order,
            requested: m,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        Self::new(self.coeffs[..=order].to_vec(), order)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
            order: self.order,
        }
    }

    /// Multiplies by `q^k`, keeping the order.
    pub fn shift(&self, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k.min(self.order + 1)];
        coeffs.extend(
            self.coeffs
                .iter()
                .take((self.order + 1).saturating_sub(k))
                .cloned(),
        );
        QSeries {
            coeffs,
            order: self.order,
        }
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::Domain(
                "series with zero constant term has no inverse".into(),
            ));
        }
        let inv0 = c0.recip();
        let mut out: Vec<Rational> = Vec::with_capacity(self.order + 1);
        out.push(inv0.clone());
        for m in 1..=self.order {
            let mut acc = Rational::zero();
            for i in 1..=m {
                let a = &self.coeffs[i];
                if !a.is_zero() {
                    acc += a * &out[m - i];
                }
            }
            out.push(-(acc * &inv0));
        }
        Ok(QSeries {
            coeffs: out,
            order: self.order,
        })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.order);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Sum of the known terms at a numeric `q`.
    pub fn eval_f64(&self, q: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * q + to_f64(c))
    }

    pub fn eval_rational(&self, q: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * q + c)
    }

    pub fn to_poly(&self) -> QPolynomial {
        QPolynomial::new(self.coeffs.clone())
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.to_poly();
        if p.is_zero() {
            write!(f, "O(q^{})", self.order + 1)
        } else {
            write!(f, "{} + O(q^{})", p, self.order + 1)
        }
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QSeries({self})")
    }
}

impl Serialize for QSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("QSeries", 2)?;
        let coeffs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        st.serialize_field("coeffs", &coeffs)?;
        st.serialize_field("order", &self.order)?;
        st.end()
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        let order = self.order.min(rhs.order);
        let coeffs = (0..=order)
            .map(|i| &self.coeffs[i] + &rhs.coeffs[i])
            .collect();
        QSeries { coeffs, order }
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        let order = self.order.min(rhs.order);
        let coeffs = (0..=order)
            .map(|i| &self.coeffs[i] - &rhs.coeffs[i])
            .collect();
        QSeries { coeffs, order }
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        let order = self.order.min(rhs.order);
        let mut coeffs = vec![Rational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().take(order + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(order + 1 - i).enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        QSeries { coeffs, order }
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            order: self.order,
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for QSeries {
            type Output = QSeries;
            fn $m(self, rhs: QSeries) -> QSeries {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&QSeries> for QSeries {
            type Output = QSeries;
            fn $m(self, rhs: &QSeries) -> QSeries {
                (&self).$m(rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);
