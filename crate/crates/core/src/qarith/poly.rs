use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{parse_rational, to_f64, Rational};
use crate::error::{Error, Result};

/// Dense polynomial in `q` with exact rational coefficients.
///
/// `coeffs[i]` is the coefficient of `q^i`. The highest stored coefficient is
/// nonzero; the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QPolynomial {
    coeffs: Vec<Rational>,
}

impl QPolynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPolynomial { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| super::rational::int(c)).collect())
    }

    pub fn zero() -> Self {
        QPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `c * q^deg`
    pub fn monomial(deg: usize, c: Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::zero(); deg + 1];
        coeffs[deg] = c;
        QPolynomial { coeffs }
    }

    /// `q^deg`
    pub fn q_pow(deg: usize) -> Self {
        Self::monomial(deg, Rational::one())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Index of the lowest nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        QPolynomial {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        QPolynomial { coeffs }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `p(q^k)`
    pub fn compose_q_power(&self, k: usize) -> Self {
        assert!(k > 0, "substitution q -> q^0 is not a polynomial map");
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        QPolynomial { coeffs }
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lc) => {
                let inv = lc.recip();
                self.scale(&inv)
            }
        }
    }

    /// Euclidean division `self = quot * divisor + rem`, `deg rem < deg divisor`.
    ///
    /// Panics when `divisor` is zero.
    pub fn div_rem(&self, divisor: &QPolynomial) -> (QPolynomial, QPolynomial) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let Some(nd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if nd < dd {
            return (Self::zero(), self.clone());
        }
        let lc_inv = divisor.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let top = &rem[i + dd];
            if top.is_zero() {
                continue;
            }
            let factor = top * &lc_inv;
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    rem[i + j] -= &factor * dc;
                }
            }
            quot[i] = factor;
        }
        rem.truncate(dd);
        (QPolynomial::new(quot), QPolynomial::new(rem))
    }

    /// Division that must leave no remainder.
    pub fn exact_div(&self, divisor: &QPolynomial) -> Result<QPolynomial> {
        let (quot, rem) = self.div_rem(divisor);
        if rem.is_zero() {
            Ok(quot)
        } else {
            Err(Error::InexactDivision)
        }
    }

    /// Monic gcd over the rationals; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &QPolynomial) -> QPolynomial {
        let (mut a, mut b) = if self.coeffs.len() >= other.coeffs.len() {
            (self.monic(), other.monic())
        } else {
            (other.monic(), self.monic())
        };
        while !b.is_zero() {
            if b.is_constant() {
                return Self::one();
            }
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a
    }

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

    /// Sum of coefficients, i.e. the value at `q = 1`.
    pub fn at_one(&self) -> Rational {
        self.coeffs.iter().fold(Rational::zero(), |acc, c| acc + c)
    }

    /// Parses the canonical text form, e.g. `"1 + 2*q - 3/4*q^3"`.
    pub fn parse(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = compact.as_bytes();
        for i in 1..bytes.len() {
            // a sign starts a new term unless it belongs to an exponent or a fraction
            if (bytes[i] == b'+' || bytes[i] == b'-')
                && bytes[i - 1] != b'^'
                && bytes[i - 1] != b'/'
            {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);

        let mut coeffs: Vec<Rational> = Vec::new();
        for term in terms {
            let (neg, body) = match term.as_bytes().first() {
                Some(b'+') => (false, &term[1..]),
                Some(b'-') => (true, &term[1..]),
                _ => (false, term),
            };
            let (coeff, deg) = if let Some(pos) = body.find('q') {
                let head = &body[..pos];
                let tail = &body[pos + 1..];
                let coeff = match head.strip_suffix('*') {
                    Some(h) => parse_rational(h)?,
                    None if head.is_empty() => Rational::one(),
                    None => return Err(Error::Parse(format!("bad term {term:?}"))),
                };
                let deg = if tail.is_empty() {
                    1
                } else {
                    tail.strip_prefix('^')
                        .and_then(|e| e.parse::<usize>().ok())
                        .ok_or_else(|| Error::Parse(format!("bad exponent in {term:?}")))?
                };
                (coeff, deg)
            } else {
                (parse_rational(body)?, 0)
            };
            if coeffs.len() <= deg {
                coeffs.resize(deg + 1, Rational::zero());
            }
            if neg {
                coeffs[deg] -= coeff;
            } else {
                coeffs[deg] += coeff;
            }
        }
        Ok(QPolynomial::new(coeffs))
    }
}

impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => {}
                (_, false) => write!(f, "{mag}*")?,
            }
            match i {
                0 => {}
                1 => write!(f, "q")?,
                _ => write!(f, "q^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPolynomial({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    coeffs: Vec<String>,
}

impl Serialize for QPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PolyJson::deserialize(d)?;
        let coeffs = raw
            .coeffs
            .iter()
            .map(|c| parse_rational(c))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Ok(QPolynomial::new(coeffs))
    }
}

impl Add for &QPolynomial {
    type Output = QPolynomial;
    fn add(self, rhs: &QPolynomial) -> QPolynomial {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (a, b) in coeffs.iter_mut().zip(&short.coeffs) {
            *a += b;
        }
        QPolynomial::new(coeffs)
    }
}

impl Sub for &QPolynomial {
    type Output = QPolynomial;
    fn sub(self, rhs: &QPolynomial) -> QPolynomial {
        let mut coeffs = self.coeffs.clone();
        if coeffs.len() < rhs.coeffs.len() {
            coeffs.resize(rhs.coeffs.len(), Rational::zero());
        }
        for (a, b) in coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
        QPolynomial::new(coeffs)
    }
}

impl Mul for &QPolynomial {
    type Output = QPolynomial;
    fn mul(self, rhs: &QPolynomial) -> QPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return QPolynomial::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        QPolynomial::new(coeffs)
    }
}

impl Neg for &QPolynomial {
    type Output = QPolynomial;
    fn neg(self) -> QPolynomial {
        QPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for QPolynomial {
            type Output = QPolynomial;
            fn $m(self, rhs: QPolynomial) -> QPolynomial {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&QPolynomial> for QPolynomial {
            type Output = QPolynomial;
            fn $m(self, rhs: &QPolynomial) -> QPolynomial {
                (&self).$m(rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for QPolynomial {
    type Output = QPolynomial;
    fn neg(self) -> QPolynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qarith::rational::{int, rat};

    fn p(s: &str) -> QPolynomial {
        QPolynomial::parse(s).unwrap()
    }

    #[test]
    fn canonical_text_form() {
        assert_eq!(
            QPolynomial::from_ints(&[1, 2, 0, 1]).to_string(),
            "1 + 2*q + q^3"
        );
        assert_eq!(
            QPolynomial::from_ints(&[0, -1, 3]).to_string(),
            "-q + 3*q^2"
        );
        assert_eq!(QPolynomial::zero().to_string(), "0");
        let r = QPolynomial::new(vec![rat(3, 4), int(0), rat(-1, 2)]);
        assert_eq!(r.to_string(), "3/4 - 1/2*q^2");
        assert_eq!(p(&r.to_string()), r);
        assert_eq!(p("q^2 + q + q"), QPolynomial::from_ints(&[0, 2, 1]));
    }

    #[test]
    fn json_form() {
        let poly = QPolynomial::new(vec![int(1), rat(3, 4)]);
        let js = serde_json::to_string(&poly).unwrap();
        assert_eq!(js, r#"{"coeffs":["1","3/4"]}"#);
        let back: QPolynomial = serde_json::from_str(&js).unwrap();
        assert_eq!(back, poly);
    }

    #[test]
    fn division_and_gcd() {
        let a = p("1 + q + q^2");
        let b = p("1 - q");
        let prod = &a * &b;
        assert_eq!(prod, p("1 - q^3"));
        assert_eq!(prod.exact_div(&b).unwrap(), a);
        assert!(a.exact_div(&b).is_err());
        let g = (&a * &p("1 + q")).gcd(&(&a * &p("2 + q")));
        assert_eq!(g, a);
        assert!(p("1 + q").gcd(&p("2 + q")).is_one());
        assert_eq!(QPolynomial::zero().gcd(&p("2 + 2*q")), p("1 + q"));
    }

    #[test]
    fn substitution_and_evaluation() {
        let a = p("1 + q");
        assert_eq!(a.compose_q_power(2), p("1 + q^2"));
        assert_eq!(a.pow(3), p("1 + 3*q + 3*q^2 + q^3"));
        assert_eq!(a.eval_f64(0.5), 1.5);
        assert_eq!(p("1 + q + q^2").at_one(), int(3));
        assert_eq!(a.eval_rational(&rat(1, 2)), rat(3, 2));
        assert_eq!(p("q^2 + q^3").valuation(), Some(2));
    }
}
