use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::expand::expand_monomials;
use super::types::{CouplingSpec, GCoeff, GSeries, Mode, Monomial};
use crate::error::{Error, Result};
use crate::jackson::try_jackson_symmetric;
use crate::qarith::rational::{binomial, double_factorial_odd, factorial, to_f64};
use crate::qarith::{
    pochhammer_qk, qfactorial, qfactorial_base, qint2_pow, qint_real, qmultinomial, Rational,
};
use crate::qfunc::{qexp, ExpForm, ExpKind, QContext};
use crate::report::serialize_f64;

fn big_rational(n: num_bigint::BigInt) -> Rational {
    Rational::from_integer(n)
}

/// Classical coefficient of `mono` for the Gaussian integral with
/// interaction `sum g_j h_j x^j / j!`:
/// `N h_l (2j-1)!! / (d! prod l_i!)`, zero for odd total degree.
pub fn classical_coefficient(spec: &CouplingSpec, mono: &Monomial) -> Rational {
    let total = mono.weight();
    if total % 2 == 1 {
        return Rational::zero();
    }
    let l = mono.parts();
    let den = l.iter().fold(factorial(l.len() as u64), |acc, &p| {
        acc * factorial(p as u64)
    });
    let pairings = big_rational(double_factorial_odd((total / 2) as u64));
    Rational::from_integer(mono.orderings().into()) * spec.h_product(l) * pairings
        / big_rational(den)
}

/// The `q -> 1` limit of the expansion as exact rationals.
pub fn classical_limit(spec: &CouplingSpec) -> GSeries {
    let terms = spec
        .monomials()
        .into_iter()
        .map(|m| {
            let v = classical_coefficient(spec, &m);
            (m, GCoeff::Limit(v))
        })
        .collect();
    GSeries {
        spec: spec.clone(),
        terms,
    }
}

/// Exact value at `q = 1` of the `c`-group of `mono`, summed over `k` and
/// over the orderings of its parts.
///
/// Every factor of a summand is a polynomial in `q`, and the denominator is a
/// product of q-integers, so the value is read off factor by factor at `q = 1`.
pub fn group_limit(spec: &CouplingSpec, mono: &Monomial, c: usize) -> Result<Rational> {
    if mono.weight() % 2 == 1 {
        return Ok(Rational::zero());
    }
    let l = mono.parts();
    let j = mono.weight() / 2;
    let d = l.len();
    let shared = Rational::from_integer(mono.orderings().into())
        * spec.h_product(l)
        * qmultinomial(l)?.at_one()
        * pochhammer_qk(1, c + j, 2).at_one()
        / (qint2_pow(c as u32).at_one() * qfactorial(2 * j).at_one());
    let mut total = Rational::zero();
    for k in 0..=c {
        let den = qfactorial_base(d + k, 2).at_one() * qfactorial_base(c - k, 2).at_one();
        if den.is_zero() {
            return Err(Error::Indeterminate);
        }
        let term = binomial((d + k) as u64, k as u64) / den;
        if k % 2 == 1 {
            total -= term;
        } else {
            total += term;
        }
    }
    Ok(shared * total)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitMismatch {
    pub monomial: Monomial,
    pub c: usize,
    pub expected: String,
    pub got: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QLimitReport {
    pub monomials: usize,
    pub groups: usize,
    pub failures: Vec<LimitMismatch>,
}

impl QLimitReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For every monomial of `spec` with total degree at most `max_weight`:
/// the `c = 0` group at `q = 1` must equal the classical coefficient and every
/// group `0 < c <= M/2` must vanish, all in exact rationals.
pub fn verify_q_to_one(spec: &CouplingSpec, max_weight: usize) -> Result<QLimitReport> {
    let mut monomials = 0;
    let mut groups = 0;
    let mut failures = Vec::new();
    for m in spec
        .monomials()
        .into_iter()
        .filter(|m| m.weight() <= max_weight)
    {
        monomials += 1;
        for c in 0..=spec.order / 2 {
            let got = group_limit(spec, &m, c)?;
            let expected = if c == 0 {
                classical_coefficient(spec, &m)
            } else {
                Rational::zero()
            };
            groups += 1;
            if got != expected {
                failures.push(LimitMismatch {
                    monomial: m.clone(),
                    c,
                    expected: expected.to_string(),
                    got: got.to_string(),
                });
            }
        }
    }
    Ok(QLimitReport {
        monomials,
        groups,
        failures,
    })
}

fn serialize_couplings<S: Serializer>(
    g: &BTreeMap<usize, f64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let mut map = s.serialize_map(Some(g.len()))?;
    for (j, v) in g {
        map.serialize_entry(&format!("g{j}"), &crate::report::float_value(*v))?;
    }
    map.end()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegrationReport {
    #[serde(serialize_with = "serialize_f64")]
    pub q: f64,
    pub d_max: usize,
    #[serde(serialize_with = "serialize_couplings")]
    pub g: BTreeMap<usize, f64>,
    /// normalized Jackson integral
    #[serde(serialize_with = "serialize_f64")]
    pub lhs: f64,
    /// float expansion through degree `D`
    #[serde(serialize_with = "serialize_f64")]
    pub rhs: f64,
    #[serde(serialize_with = "serialize_f64")]
    pub residual: f64,
    /// sum of the magnitudes of the degree `D+1` and `D+2` parts of the
    /// expansion at these couplings
    #[serde(serialize_with = "serialize_f64")]
    pub truncation_estimate: f64,
    /// allowance for double-precision rounding in both sides
    #[serde(serialize_with = "serialize_f64")]
    pub rounding_floor: f64,
    #[serde(serialize_with = "serialize_f64")]
    pub bound: f64,
    pub passed: bool,
}

/// All multisets of size `d` drawn from `support`.
fn monomials_of_degree(support: &[usize], d: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut idx = vec![0usize; d];
    if support.is_empty() {
        if d == 0 {
            out.push(Monomial::one());
        }
        return out;
    }
    loop {
        out.push(Monomial::new(idx.iter().map(|&i| support[i]).collect()).expect("positive"));
        // next non-decreasing index tuple
        let Some(pos) = (0..d).rev().find(|&p| idx[p] + 1 < support.len()) else {
            return out;
        };
        let v = idx[pos] + 1;
        for x in idx.iter_mut().skip(pos) {
            *x = v;
        }
    }
}

fn support(spec: &CouplingSpec, g: &BTreeMap<usize, f64>) -> Result<Vec<usize>> {
    for (&j, v) in g {
        if j == 0 || j > spec.j_max {
            return Err(Error::Domain(format!(
                "coupling g{j} outside 1..={}",
                spec.j_max
            )));
        }
        if !v.is_finite() {
            return Err(Error::Domain(format!("coupling g{j} = {v} is not finite")));
        }
    }
    Ok(g.iter()
        .filter(|(_, v)| **v != 0.0)
        .map(|(j, _)| *j)
        .collect())
}

fn degree_sum(
    spec: &CouplingSpec,
    ctx: &QContext,
    g: &BTreeMap<usize, f64>,
    sup: &[usize],
    d: usize,
) -> Result<f64> {
    let monos = monomials_of_degree(sup, d);
    expand_monomials(spec, Mode::Float(*ctx), &monos)?.eval_f64(g)
}

/// Normalized integral `int_{-nu}^{nu} E_{q,2}^{-q^2x^2/[2]_q + sum g_j h_j x^j/[j]_q!} d_qx`
/// divided by its value at `g = 0`.
pub fn normalized_integral(
    spec: &CouplingSpec,
    ctx: &QContext,
    g: &BTreeMap<usize, f64>,
) -> Result<f64> {
    let q = ctx.q();
    let two = ctx.qint2();
    let couplings: Vec<(i32, f64)> = g
        .iter()
        .map(|(&j, &v)| {
            let fact: f64 = (1..=j).map(|i| qint_real(q, i as f64)).product();
            (j as i32, v * to_f64(spec.h(j)) / fact)
        })
        .collect();
    let exponent = |x: f64, with_g: bool| {
        let mut z = -q * q * x * x / two;
        if with_g {
            z += couplings.iter().map(|&(j, c)| c * x.powi(j)).sum::<f64>();
        }
        z
    };
    let nu = ctx.nu();
    let full = try_jackson_symmetric(
        ctx,
        |x| qexp(ctx, ExpKind::BigE, exponent(x, true), ExpForm::Product),
        nu,
    )?;
    let free = try_jackson_symmetric(
        ctx,
        |x| qexp(ctx, ExpKind::BigE, exponent(x, false), ExpForm::Product),
        nu,
    )?;
    Ok(full.value / free.value)
}

/// Direct Jackson integration against the float expansion through degree
/// `D`, with an a-priori truncation bound.
///
/// Passes when the residual is below ten times the bound, the bound being the
/// size of the next two omitted g-degrees plus a rounding allowance.
pub fn verify_against_integration(
    spec: &CouplingSpec,
    ctx: &QContext,
    g: &BTreeMap<usize, f64>,
) -> Result<IntegrationReport> {
    let sup = support(spec, g)?;
    let lhs = normalized_integral(spec, ctx, g)?;
    let mut rhs = 0.0;
    for d in 0..=spec.d_max {
        rhs += degree_sum(spec, ctx, g, &sup, d)?;
    }
    let estimate = degree_sum(spec, ctx, g, &sup, spec.d_max + 1)?.abs()
        + degree_sum(spec, ctx, g, &sup, spec.d_max + 2)?.abs();
    let floor = 64.0 * f64::EPSILON * lhs.abs().max(1.0);
    let residual = (lhs - rhs).abs();
    let bound = estimate + floor;
    Ok(IntegrationReport {
        q: ctx.q(),
        d_max: spec.d_max,
        g: g.clone(),
        lhs,
        rhs,
        residual,
        truncation_estimate: estimate,
        rounding_floor: floor,
        bound,
        passed: residual <= 10.0 * bound,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    pub base: IntegrationReport,
    pub doubled: IntegrationReport,
    #[serde(serialize_with = "serialize_f64")]
    pub ratio: f64,
    /// `2^n` with `n` the lowest omitted g-degree that can contribute
    #[serde(serialize_with = "serialize_f64")]
    pub expected: f64,
    pub passed: bool,
}

/// Lowest degree above `D` with an even-weight monomial over `sup`; odd
/// weights integrate to zero.
fn leading_omitted_degree(d_max: usize, sup: &[usize]) -> usize {
    let n = d_max + 1;
    if sup.iter().any(|j| j % 2 == 0) || n % 2 == 0 {
        n
    } else {
        n + 1
    }
}

/// Residual at `g` and at `2g`; their ratio should be close to `2^n` with
/// `n` the leading omitted g-degree. Accepted within a factor 1.5.
pub fn integration_scaling(
    spec: &CouplingSpec,
    ctx: &QContext,
    g: &BTreeMap<usize, f64>,
) -> Result<ScalingReport> {
    let sup = support(spec, g)?;
    let base = verify_against_integration(spec, ctx, g)?;
    let g2: BTreeMap<usize, f64> = g.iter().map(|(&j, &v)| (j, 2.0 * v)).collect();
    let doubled = verify_against_integration(spec, ctx, &g2)?;
    let ratio = doubled.residual / base.residual;
    let expected = 2f64.powi(leading_omitted_degree(spec.d_max, &sup) as i32);
    let passed = ratio.is_finite() && ratio >= expected / 1.5 && ratio <= expected * 1.5;
    Ok(ScalingReport {
        base,
        doubled,
        ratio,
        expected,
        passed,
    })
}

/// Exact `g -> 0` check: the expansion's constant term is one.
pub fn constant_term_is_one(series: &GSeries) -> bool {
    match series.coeff(&Monomial::one()) {
        Some(GCoeff::Series(s)) => {
            s.coeffs().first().is_some_and(|c| c.is_one())
                && s.coeffs().iter().skip(1).all(|c| c.is_zero())
        }
        Some(GCoeff::Value(v)) => *v == 1.0,
        Some(GCoeff::Limit(r)) => r.is_one(),
        None => false,
    }
}
