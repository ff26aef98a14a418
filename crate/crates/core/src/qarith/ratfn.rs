use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::poly::QPolynomial;
use super::rational::Rational;
use super::series::QSeries;
use crate::error::{Error, Result};

/// Reduced quotient of two polynomials in `q`.
///
/// Normal form: `gcd(num, den) = 1` and `den` is monic, so two equal
/// rational functions have identical representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QRationalFn {
    num: QPolynomial,
    den: QPolynomial,
}

impl QRationalFn {
    pub fn new(num: QPolynomial, den: QPolynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Pole("denominator is the zero polynomial".into()));
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: QPolynomial, den: QPolynomial) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd divides numerator"),
                den.exact_div(&g).expect("gcd divides denominator"),
            )
        };
        Self::normalize_lc(num, den)
    }

    fn normalize_lc(num: QPolynomial, den: QPolynomial) -> Self {
        let lc = den.leading().expect("nonzero denominator").clone();
        if lc.is_one() {
            QRationalFn { num, den }
        } else {
            let inv = lc.recip();
            QRationalFn {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn from_poly(p: QPolynomial) -> Self {
        QRationalFn {
            num: p,
            den: QPolynomial::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(QPolynomial::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(QPolynomial::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(QPolynomial::one())
    }

    pub fn num(&self) -> &QPolynomial {
        &self.num
    }

    pub fn den(&self) -> &QPolynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Pole("reciprocal of zero".into()));
        }
        Ok(Self::normalize_lc(self.den.clone(), self.num.clone()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        QRationalFn {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn eval_f64(&self, q: f64) -> Result<f64> {
        let d = self.den.eval_f64(q);
        if d == 0.0 {
            return Err(Error::Pole(q.to_string()));
        }
        Ok(self.num.eval_f64(q) / d)
    }

    pub fn eval_rational(&self, q: &Rational) -> Result<Rational> {
        let d = self.den.eval_rational(q);
        if d.is_zero() {
            return Err(Error::Pole(q.to_string()));
        }
        Ok(self.num.eval_rational(q) / d)
    }

    /// Exact value at `q = 1`. Because the form is reduced, a vanishing
    /// denominator there is a genuine pole.
    pub fn limit_at_one(&self) -> Result<Rational> {
        let d = self.den.at_one();
        if d.is_zero() {
            return Err(Error::Indeterminate);
        }
        Ok(self.num.at_one() / d)
    }

    /// q-adic expansion through `q^order`. Requires `den(0) != 0`.
    pub fn to_series(&self, order: usize) -> Result<QSeries> {
        QSeries::from_ratio(&self.num, &self.den, order)
    }
}

/// Exact value at `q = 1` of a rational function.
pub fn qrat_limit_at_one(f: &QRationalFn) -> Result<Rational> {
    f.limit_at_one()
}

impl fmt::Display for QRationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for QRationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QRationalFn({self})")
    }
}

impl Serialize for QRationalFn {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("QRationalFn", 2)?;
        st.serialize_field("num", &self.num)?;
        st.serialize_field("den", &self.den)?;
        st.end()
    }
}

impl From<QPolynomial> for QRationalFn {
    fn from(p: QPolynomial) -> Self {
        Self::from_poly(p)
    }
}

impl Add for &QRationalFn {
    type Output = QRationalFn;
    fn add(self, rhs: &QRationalFn) -> QRationalFn {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        // with both operands reduced, any common factor of the new numerator
        // and denominator already divides g = gcd(den_a, den_b)
        let g = self.den.gcd(&rhs.den);
        let (da, db) = if g.is_one() {
            (self.den.clone(), rhs.den.clone())
        } else {
            (
                self.den.exact_div(&g).expect("gcd divides"),
                rhs.den.exact_div(&g).expect("gcd divides"),
            )
        };
        let num = &(&self.num * &db) + &(&rhs.num * &da);
        if num.is_zero() {
            return QRationalFn::zero();
        }
        let den = &self.den * &db;
        if g.is_one() {
            return QRationalFn::normalize_lc(num, den);
        }
        let h = num.gcd(&g);
        if h.is_one() {
            QRationalFn::normalize_lc(num, den)
        } else {
            QRationalFn::normalize_lc(
                num.exact_div(&h).expect("gcd divides"),
                den.exact_div(&h).expect("gcd divides"),
            )
        }
    }
}

impl Neg for &QRationalFn {
    type Output = QRationalFn;
    fn neg(self) -> QRationalFn {
        QRationalFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Sub for &QRationalFn {
    type Output = QRationalFn;
    fn sub(self, rhs: &QRationalFn) -> QRationalFn {
        self + &(-rhs)
    }
}

fn cancel(a: &QPolynomial, b: &QPolynomial) -> (QPolynomial, QPolynomial) {
    let g = a.gcd(b);
    if g.is_one() {
        (a.clone(), b.clone())
    } else {
        (
            a.exact_div(&g).expect("gcd divides"),
            b.exact_div(&g).expect("gcd divides"),
        )
    }
}

impl Mul for &QRationalFn {
    type Output = QRationalFn;
    fn mul(self, rhs: &QRationalFn) -> QRationalFn {
        if self.is_zero() || rhs.is_zero() {
            return QRationalFn::zero();
        }
        let (n1, d2) = cancel(&self.num, &rhs.den);
        let (n2, d1) = cancel(&rhs.num, &self.den);
        QRationalFn::normalize_lc(&n1 * &n2, &d1 * &d2)
    }
}

impl Div for &QRationalFn {
    type Output = QRationalFn;
    /// Panics on division by the zero function.
    fn div(self, rhs: &QRationalFn) -> QRationalFn {
        self * &rhs.recip().expect("division by zero rational function")
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for QRationalFn {
            type Output = QRationalFn;
            fn $m(self, rhs: QRationalFn) -> QRationalFn {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&QRationalFn> for QRationalFn {
            type Output = QRationalFn;
            fn $m(self, rhs: &QRationalFn) -> QRationalFn {
                (&self).$m(rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul, Div::div);

impl Neg for QRationalFn {
    type Output = QRationalFn;
    fn neg(self) -> QRationalFn {
        -&self
    }
}

impl std::iter::Sum for QRationalFn {
    fn sum<I: Iterator<Item = QRationalFn>>(iter: I) -> Self {
        iter.fold(QRationalFn::zero(), |acc, x| &acc + &x)
    }
}

impl Zero for QRationalFn {
    fn zero() -> Self {
        QRationalFn::zero()
    }
    fn is_zero(&self) -> bool {
        QRationalFn::is_zero(self)
    }
}
