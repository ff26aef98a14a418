use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::qarith::rational::int;
use crate::qarith::{QSeries, Rational};
use crate::qfunc::QContext;
use crate::report::float_value;

/// Truncation bounds and vertex amplitudes of the perturbative expansion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CouplingSpec {
    /// largest interaction order `j` of a coupling `g_j`
    pub j_max: usize,
    /// `h_1, ..., h_J`
    #[serde(serialize_with = "serialize_rationals")]
    pub h: Vec<Rational>,
    /// largest number of interaction vertices, i.e. g-degree
    pub d_max: usize,
    /// q-adic truncation order `M` of exact coefficients
    pub order: usize,
}

fn serialize_rationals<S: Serializer>(
    v: &[Rational],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

impl CouplingSpec {
    /// All `h_j = 1`.
    pub fn new(j_max: usize, d_max: usize, order: usize) -> Result<Self> {
        Self::with_h(j_max, vec![Rational::one(); j_max], d_max, order)
    }

    pub fn with_h(j_max: usize, h: Vec<Rational>, d_max: usize, order: usize) -> Result<Self> {
        if j_max == 0 {
            return Err(Error::Domain("J must be at least 1".into()));
        }
        if h.len() != j_max {
            return Err(Error::Domain(format!(
                "expected {j_max} vertex amplitudes h_1..h_J, got {}",
                h.len()
            )));
        }
        Ok(CouplingSpec {
            j_max,
            h,
            d_max,
            order,
        })
    }

    /// `h_j`, 1-based.
    pub fn h(&self, j: usize) -> &Rational {
        &self.h[j - 1]
    }

    /// `h_l = prod h_{l_i}`
    pub fn h_product(&self, parts: &[usize]) -> Rational {
        parts
            .iter()
            .fold(Rational::one(), |acc, &p| acc * self.h(p))
    }

    /// Every monomial `g_{l_1} ... g_{l_d}` with `d <= D` and `l_i <= J`, in
    /// increasing (degree, parts) order.
    pub fn monomials(&self) -> Vec<Monomial> {
        let mut out = vec![Monomial::one()];
        let mut layer = vec![Vec::<usize>::new()];
        for _ in 0..self.d_max {
            let mut next = Vec::new();
            for m in &layer {
                let lo = m.last().copied().unwrap_or(1);
                for p in lo..=self.j_max {
                    let mut n = m.clone();
                    n.push(p);
                    next.push(n);
                }
            }
            out.extend(next.iter().cloned().map(Monomial));
            layer = next;
        }
        out
    }
}

/// How coefficients are computed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    /// exact power series in `q`, truncated at the spec's order
    Exact,
    /// double-precision values at the context's `q`, `c`-sum truncated by
    /// the context's tolerance
    Float(QContext),
}

/// Commutative monomial in the couplings, stored as its sorted multiset of
/// interaction orders; `[3, 3]` is `g_3^2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Monomial(Vec<usize>);

impl Monomial {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Domain("coupling indices start at 1".into()));
        }
        parts.sort_unstable();
        Ok(Monomial(parts))
    }

    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// Number of factors `d`.
    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// Total x-degree `sum l_i`.
    pub fn weight(&self) -> usize {
        self.0.iter().sum()
    }

    /// Number of distinct orderings `d! / prod mult!`.
    pub fn orderings(&self) -> u128 {
        let mut acc: u128 = 1;
        let mut run = 0u128;
        for (i, p) in self.0.iter().enumerate() {
            run = if i > 0 && self.0[i - 1] == *p {
                run + 1
            } else {
                1
            };
            acc = acc * (i as u128 + 1) / run;
        }
        acc
    }

    /// Value at the given couplings; absent ones are zero.
    pub fn eval_f64(&self, g: &BTreeMap<usize, f64>) -> f64 {
        self.0
            .iter()
            .map(|p| g.get(p).copied().unwrap_or(0.0))
            .product()
    }

    pub fn eval_rational(&self, g: &BTreeMap<usize, Rational>) -> Rational {
        self.0.iter().fold(Rational::one(), |acc, p| {
            acc * g.get(p).cloned().unwrap_or_else(Rational::zero)
        })
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.0.len() {
            let p = self.0[i];
            let run = self.0[i..].iter().take_while(|&&x| x == p).count();
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if run == 1 {
                write!(f, "g{p}")?;
            } else {
                write!(f, "g{p}^{run}")?;
            }
            i += run;
        }
        Ok(())
    }
}

/// Coefficient of one g-monomial.
#[derive(Debug, Clone, PartialEq)]
pub enum GCoeff {
    Series(QSeries),
    Value(f64),
    /// exact value at `q = 1`
    Limit(Rational),
}

impl GCoeff {
    pub fn as_series(&self) -> Option<&QSeries> {
        match self {
            GCoeff::Series(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_value(&self) -> Option<f64> {
        match self {
            GCoeff::Value(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_limit(&self) -> Option<&Rational> {
        match self {
            GCoeff::Limit(r) => Some(r),
            _ => None,
        }
    }
}

/// Formal series in the couplings, truncated at g-degree `D`.
#[derive(Debug, Clone, PartialEq)]
pub struct GSeries {
    pub spec: CouplingSpec,
    pub terms: BTreeMap<Monomial, GCoeff>,
}

impl GSeries {
    pub fn coeff(&self, m: &Monomial) -> Option<&GCoeff> {
        self.terms.get(m)
    }

    /// Coefficient of `q^m` after substituting exact values for the couplings.
    pub fn chi(&self, m: usize, g: &BTreeMap<usize, Rational>) -> Result<Rational> {
        let mut total = int(0);
        for (mono, c) in &self.terms {
            let s = c
                .as_series()
                .ok_or_else(|| Error::Domain("q-coefficients need an exact-mode series".into()))?;
            let weight = mono.eval_rational(g);
            if !weight.is_zero() {
                total += s.coeff(m)? * weight;
            }
        }
        Ok(total)
    }

    /// The float-mode series evaluated at the given couplings.
    pub fn eval_f64(&self, g: &BTreeMap<usize, f64>) -> Result<f64> {
        let mut total = 0.0;
        for (mono, c) in &self.terms {
            let v = c.as_value().ok_or_else(|| {
                Error::Domain("numeric evaluation needs a float-mode series".into())
            })?;
            total += v * mono.eval_f64(g);
        }
        Ok(total)
    }
}

struct Entry<'a>(&'a Monomial, &'a GCoeff);

impl Serialize for Entry<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(3))?;
        map.serialize_entry("monomial", self.0)?;
        match self.1 {
            GCoeff::Series(series) => {
                let coeffs: Vec<String> = series.coeffs().iter().map(|c| c.to_string()).collect();
                map.serialize_entry("coeff_qseries", &coeffs)?;
                map.serialize_entry("order", &series.order())?;
            }
            GCoeff::Value(v) => map.serialize_entry("value", &float_value(*v))?,
            GCoeff::Limit(r) => map.serialize_entry("limit", &r.to_string())?,
        }
        map.end()
    }
}

impl Serialize for GSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.terms.iter().map(|(m, c)| Entry(m, c)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_enumeration() {
        let spec = CouplingSpec::new(3, 2, 4).unwrap();
        let m = spec.monomials();
        // 1 + 3 + 6
        assert_eq!(m.len(), 10);
        assert_eq!(m[0], Monomial::one());
        assert!(m.windows(2).all(|w| w[0].degree() <= w[1].degree()));
        assert!(CouplingSpec::new(0, 1, 1).is_err());
        assert!(CouplingSpec::with_h(2, vec![int(1)], 1, 1).is_err());
    }

    #[test]
    fn monomial_basics() {
        let m = Monomial::new(vec![4, 3, 3]).unwrap();
        assert_eq!(m.parts(), &[3, 3, 4]);
        assert_eq!(m.orderings(), 3);
        assert_eq!(m.weight(), 10);
        assert_eq!(m.to_string(), "g3^2*g4");
        assert_eq!(Monomial::one().to_string(), "1");
        assert_eq!(Monomial::new(vec![1, 2, 3]).unwrap().orderings(), 6);
        let g = BTreeMap::from([(3, 0.5), (4, 2.0)]);
        assert_eq!(m.eval_f64(&g), 0.5);
        assert!(Monomial::new(vec![0]).is_err());
    }

    #[test]
    fn json_entries() {
        let spec = CouplingSpec::new(4, 1, 2).unwrap();
        let mut terms = BTreeMap::new();
        terms.insert(
            Monomial::new(vec![3, 3]).unwrap(),
            GCoeff::Series(QSeries::new(
                vec![int(0), Rational::new(1.into(), 36.into())],
                2,
            )),
        );
        let s = GSeries {
            spec: spec.clone(),
            terms,
        };
        assert_eq!(
            serde_json::to_string(&s).unwrap(),
            r#"[{"monomial":[3,3],"coeff_qseries":["0","1/36","0"],"order":2}]"#
        );
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::new(vec![4]).unwrap(), GCoeff::Value(0.125));
        let s = GSeries { spec, terms };
        assert_eq!(
            serde_json::to_string(&s).unwrap(),
            r#"[{"monomial":[4],"value":1.2500000000000000e-1}]"#
        );
    }
}
