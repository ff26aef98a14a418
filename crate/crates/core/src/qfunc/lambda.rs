use std::collections::HashMap;
use std::sync::RwLock;

use serde::Serialize;

use crate::qarith::rational::binomial;
use crate::qarith::{qfactorial_base, qmultinomial, QPolynomial, QRationalFn, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LambdaKind {
    /// `E^{x+y} = E^x sum lambda_{c,d} x^c y^d`
    Lambda,
    /// `e^{x+y} = e^x sum kappa_{c,d} x^c y^d`
    Kappa,
}

/// Memoized exact coefficients of the q-exponential addition decompositions.
///
/// `lambda_{c,d} = sum_{k=0}^{c} (-1)^{c-k} C(d+k, k) q^{(d+k)(d+k-1)} / ([d+k]_{q^2}! [c-k]_{q^2}!)`
/// and `kappa_{c,d}` is the same sum with exponent `(c-k)(c-k-1)`.
/// Safe to share across threads; entries are only ever inserted.
#[derive(Debug)]
pub struct LambdaTable {
    kind: LambdaKind,
    entries: RwLock<HashMap<(usize, usize), QRationalFn>>,
}

impl LambdaTable {
    pub fn new(kind: LambdaKind) -> Self {
        LambdaTable {
            kind,
            entries: RwLock::new(HashMap::new()),
        }
    }

    pub fn kind(&self) -> LambdaKind {
        self.kind
    }

    pub fn get(&self, c: usize, d: usize) -> QRationalFn {
        if let Some(v) = self
            .entries
            .read()
            .expect("lambda cache poisoned")
            .get(&(c, d))
        {
            return v.clone();
        }
        let v = self.compute(c, d);
        self.entries
            .write()
            .expect("lambda cache poisoned")
            .entry((c, d))
            .or_insert(v)
            .clone()
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("lambda cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Single summand `k` of the defining sum, unreduced into the common
    /// denominator `[c+d]_{q^2}!`: returns its numerator.
    fn summand_numerator(&self, c: usize, d: usize, k: usize) -> QPolynomial {
        let sign = if (c - k) % 2 == 0 { 1 } else { -1 };
        let coeff = binomial((d + k) as u64, k as u64) * Rational::from_integer(sign.into());
        let e = match self.kind {
            LambdaKind::Lambda => (d + k) * (d + k).saturating_sub(1),
            LambdaKind::Kappa => (c - k) * (c - k).saturating_sub(1),
        };
        // [c+d]! / ([d+k]! [c-k]!) is a Gaussian binomial in q^2
        let gauss = qmultinomial(&[d + k, c - k])
            .expect("q-multinomial divides exactly")
            .compose_q_power(2);
        gauss.shift(e).scale(&coeff)
    }

    fn compute(&self, c: usize, d: usize) -> QRationalFn {
        let (num, den) = lambda_parts(self.kind, c, d);
        QRationalFn::new(num, den).expect("q-factorial is nonzero")
    }
}

/// Unreduced `(numerator, [c+d]_{q^2}!)` of `lambda_{c,d}` / `kappa_{c,d}`.
///
/// Skips the gcd reduction, which dominates for large `c + d`; callers that
/// only need a truncated series or a value at `q = 1` should use this.
pub fn lambda_parts(kind: LambdaKind, c: usize, d: usize) -> (QPolynomial, QPolynomial) {
    let table = LambdaTable::new(kind);
    let num = (0..=c).fold(QPolynomial::zero(), |acc, k| {
        &acc + &table.summand_numerator(c, d, k)
    });
    (num, qfactorial_base(c + d, 2))
}

/// `lambda_{c,d}` (or `kappa_{c,d}`) from the table.
pub fn lambda_coeff(table: &LambdaTable, c: usize, d: usize) -> QRationalFn {
    table.get(c, d)
}

/// The `k`-th summand of `lambda_{c,d}` / `kappa_{c,d}` as a reduced rational
/// function; the summands add up to [`lambda_coeff`].
pub fn lambda_summand(kind: LambdaKind, c: usize, d: usize, k: usize) -> QRationalFn {
    assert!(k <= c, "summand index k = {k} exceeds c = {c}");
    let table = LambdaTable::new(kind);
    QRationalFn::new(table.summand_numerator(c, d, k), qfactorial_base(c + d, 2))
        .expect("q-factorial is nonzero")
}

/// `q^{n(n-1)} / [n]_{q^2}!` or `1 / [n]_{q^2}!`: the `z^n` coefficient of the
/// chosen q-exponential.
pub fn exp_coefficient(kind: super::ExpKind, n: usize) -> QRationalFn {
    let num = match kind {
        super::ExpKind::BigE => QPolynomial::q_pow(n * n.saturating_sub(1)),
        super::ExpKind::SmallE => QPolynomial::one(),
    };
    QRationalFn::new(num, qfactorial_base(n, 2)).expect("q-factorial is nonzero")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qarith::qrat_limit_at_one;
    use crate::qarith::rational::{int, rat};

    #[test]
    fn boundary_values() {
        let t = LambdaTable::new(LambdaKind::Lambda);
        assert_eq!(lambda_coeff(&t, 0, 0), QRationalFn::one());
        for c in 1..=6 {
            assert!(lambda_coeff(&t, c, 0).is_zero(), "lambda_({c},0)");
        }
        for d in 0..=5usize {
            let expected = QRationalFn::new(
                QPolynomial::q_pow(d * d.saturating_sub(1)),
                qfactorial_base(d, 2),
            )
            .unwrap();
            assert_eq!(lambda_coeff(&t, 0, d), expected);
        }
    }

    #[test]
    fn limit_at_one_is_delta() {
        let t = LambdaTable::new(LambdaKind::Lambda);
        let fact = |n: i64| (1..=n).product::<i64>();
        for c in 0..=4 {
            for d in 0..=4 {
                let lim = qrat_limit_at_one(&lambda_coeff(&t, c, d)).unwrap();
                let expected = if c == 0 {
                    rat(1, fact(d as i64))
                } else {
                    int(0)
                };
                assert_eq!(lim, expected, "c={c} d={d}");
            }
        }
    }

    #[test]
    fn summands_add_up() {
        for kind in [LambdaKind::Lambda, LambdaKind::Kappa] {
            let t = LambdaTable::new(kind);
            for c in 0..=3 {
                for d in 0..=3 {
                    let s: QRationalFn = (0..=c).map(|k| lambda_summand(kind, c, d, k)).sum();
                    assert_eq!(s, t.get(c, d));
                }
            }
        }
    }

    #[test]
    fn lambda_and_kappa_share_structure() {
        // the two tables differ only in the exponent; wherever the exponents
        // coincide for every k the coefficients must be identical
        let lam = LambdaTable::new(LambdaKind::Lambda);
        let kap = LambdaTable::new(LambdaKind::Kappa);
        let mut matched = 0;
        for c in 0..=3usize {
            for d in 0..=3usize {
                let same_exponents = (0..=c).all(|k| {
                    (d + k) * (d + k).saturating_sub(1) == (c - k) * (c - k).saturating_sub(1)
                });
                if same_exponents {
                    assert_eq!(lam.get(c, d), kap.get(c, d));
                    matched += 1;
                } else if c == d && c > 0 {
                    assert_ne!(lam.get(c, d), kap.get(c, d));
                }
            }
        }
        assert!(matched >= 3);
    }

    #[test]
    fn cache_is_filled_once() {
        let t = LambdaTable::new(LambdaKind::Kappa);
        assert!(t.is_empty());
        let a = t.get(2, 3);
        let b = t.get(2, 3);
        assert_eq!(a, b);
        assert_eq!(t.len(), 1);
    }
}
