use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_traits::One;
use rayon::prelude::*;

use super::types::{CouplingSpec, GCoeff, GSeries, Mode, Monomial};
use crate::combinat::{inv_generating, sum_pairing_weights};
use crate::error::{Error, Result};
use crate::qarith::rational::{binomial, to_f64};
use crate::qarith::{
    pochhammer_qk, qfactorial, qfactorial_base, qint2_pow, qint_real, qmultinomial, QPolynomial,
    QRationalFn, QSeries, Rational,
};
use crate::qfunc::{lambda_parts, LambdaKind, LambdaTable, QContext};

/// Largest number of g-monomials an expansion may touch.
pub const MAX_MONOMIALS: usize = 200_000;

/// Which closed form supplies `[2j; l]_q` and `[1]_{c+j,2}` inside a term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermSource {
    /// q-factorial quotient and Pochhammer product
    ClosedForm,
    /// inversion generating function and summed pairing weights
    Combinatorial,
}

pub(crate) fn lambda_table() -> &'static LambdaTable {
    static TABLE: OnceLock<LambdaTable> = OnceLock::new();
    TABLE.get_or_init(|| LambdaTable::new(LambdaKind::Lambda))
}

/// `[2]_q^c [2j]_q! [d+k]_{q^2}! [c-k]_{q^2}!`
pub fn aut_q(c: usize, d: usize, j: usize, k: usize) -> QPolynomial {
    assert!(k <= c, "k = {k} exceeds c = {c}");
    &(&qint2_pow(c as u32) * &qfactorial(2 * j))
        * &(&qfactorial_base(d + k, 2) * &qfactorial_base(c - k, 2))
}

fn half_weight(parts: &[usize]) -> Result<usize> {
    let total: usize = parts.iter().sum();
    if total % 2 == 1 {
        return Err(Error::Domain(format!(
            "odd total degree {total}: no term survives the symmetric integral"
        )));
    }
    Ok(total / 2)
}

fn sign(odd: bool) -> Rational {
    if odd {
        -Rational::one()
    } else {
        Rational::one()
    }
}

/// Unreduced numerator and denominator of one summand, for an ordered
/// composition `l` of `2j` into `d` parts:
///
/// `(-1)^k q^{(d+k)(d+k-1)+2c} C(d+k,k) [2j; l]_q [1]_{c+j,2} h_l / aut_q(c,d,j,k)`
pub fn term_parts(
    spec: &CouplingSpec,
    c: usize,
    k: usize,
    l: &[usize],
    source: TermSource,
) -> Result<(QPolynomial, QPolynomial)> {
    if k > c {
        return Err(Error::Domain(format!("k = {k} exceeds c = {c}")));
    }
    if l.iter().any(|&p| p == 0 || p > spec.j_max) {
        return Err(Error::Domain(format!(
            "parts {l:?} outside 1..={}",
            spec.j_max
        )));
    }
    let j = half_weight(l)?;
    let d = l.len();
    let (multi, moment) = match source {
        TermSource::ClosedForm => (qmultinomial(l)?, pochhammer_qk(1, c + j, 2)),
        TermSource::Combinatorial => (inv_generating(l)?, sum_pairing_weights(c + j)?),
    };
    let coeff = sign(k % 2 == 1) * binomial((d + k) as u64, k as u64) * spec.h_product(l);
    let num = (&multi * &moment)
        .shift((d + k) * (d + k).saturating_sub(1) + 2 * c)
        .scale(&coeff);
    Ok((num, aut_q(c, d, j, k)))
}

/// One summand as a reduced rational function; see [`term_parts`].
pub fn series_term(
    spec: &CouplingSpec,
    c: usize,
    k: usize,
    l: &[usize],
    source: TermSource,
) -> Result<QRationalFn> {
    let (num, den) = term_parts(spec, c, k, l, source)?;
    QRationalFn::new(num, den)
}

/// Shared factor `N h_l [2j; l]_q [1]_{c+j,2} / ([2]_q^c [2j]_q!)` of all
/// summands of a monomial at fixed `c`, with `N` the number of orderings.
fn group_factor(
    spec: &CouplingSpec,
    mono: &Monomial,
    c: usize,
) -> Result<(QPolynomial, QPolynomial)> {
    let l = mono.parts();
    let j = half_weight(l)?;
    let scale = Rational::from_integer(mono.orderings().into()) * spec.h_product(l);
    let num = (&qmultinomial(l)? * &pochhammer_qk(1, c + j, 2)).scale(&scale);
    let den = &qint2_pow(c as u32) * &qfactorial(2 * j);
    Ok((num, den))
}

/// Coefficient of `mono` restricted to a single `c`, summed over `k` and over
/// the orderings of the monomial's parts, as the reduced rational function
/// `(-1)^c q^{2c} lambda_{c,d} N h_l [2j; l]_q [1]_{c+j,2} / ([2]_q^c [2j]_q!)`.
///
/// Odd total degree gives zero.
pub fn coefficient_group(spec: &CouplingSpec, mono: &Monomial, c: usize) -> Result<QRationalFn> {
    if mono.weight() % 2 == 1 {
        return Ok(QRationalFn::zero());
    }
    let (num, den) = group_factor(spec, mono, c)?;
    let lambda = lambda_table().get(c, mono.degree());
    let factor = QRationalFn::new(num.shift(2 * c).scale(&sign(c % 2 == 1)), den)?;
    Ok(&lambda * &factor)
}

/// Unreduced numerator and denominator of [`coefficient_group`].
pub fn coefficient_group_parts(
    spec: &CouplingSpec,
    mono: &Monomial,
    c: usize,
) -> Result<(QPolynomial, QPolynomial)> {
    if mono.weight() % 2 == 1 {
        return Ok((QPolynomial::zero(), QPolynomial::one()));
    }
    let (num, den) = group_factor(spec, mono, c)?;
    let (lnum, lden) = lambda_parts(LambdaKind::Lambda, c, mono.degree());
    let num = (&num * &lnum).shift(2 * c).scale(&sign(c % 2 == 1));
    Ok((num, &den * &lden))
}

fn exact_coefficient(spec: &CouplingSpec, mono: &Monomial) -> Result<QSeries> {
    let m = spec.order;
    let mut total = QSeries::zero(m);
    if mono.weight() % 2 == 1 {
        return Ok(total);
    }
    // every summand carries q^{2c}
    for c in 0..=m / 2 {
        let (num, den) = coefficient_group_parts(spec, mono, c)?;
        total = &total + &QSeries::from_ratio(&num, &den, m)?;
    }
    Ok(total)
}

/// `[n]_q!` in double precision.
fn qfact_f64(q: f64, n: usize) -> f64 {
    (1..=n).map(|i| qint_real(q, i as f64)).product()
}

/// Float value of the `c`-group of `mono`, from the summand formula directly.
pub fn float_group(spec: &CouplingSpec, mono: &Monomial, ctx: &QContext, c: usize) -> f64 {
    let l = mono.parts();
    let total = mono.weight();
    if total % 2 == 1 {
        return 0.0;
    }
    let j = total / 2;
    let d = l.len();
    let q = ctx.q();
    let q2 = q * q;
    let multi = qfact_f64(q, 2 * j) / l.iter().map(|&p| qfact_f64(q, p)).product::<f64>();
    let moment: f64 = (0..c + j)
        .map(|i| qint_real(q, (2 * i + 1) as f64))
        .product();
    let prefactor = mono.orderings() as f64 * to_f64(&spec.h_product(l)) * multi * moment
        / (qint_real(q, 2.0).powi(c as i32) * qfact_f64(q, 2 * j));
    let mut sum = 0.0;
    for k in 0..=c {
        let e = ((d + k) * (d + k).saturating_sub(1) + 2 * c) as i32;
        let t = q.powi(e) * to_f64(&binomial((d + k) as u64, k as u64))
            / (qfact_f64(q2, d + k) * qfact_f64(q2, c - k));
        sum += if k % 2 == 1 { -t } else { t };
    }
    prefactor * sum
}

/// Float coefficient of `mono`, summing `c` until two consecutive groups fall
/// below `tol` relative to the running sum.
pub fn float_coefficient(spec: &CouplingSpec, mono: &Monomial, ctx: &QContext) -> Result<f64> {
    if mono.weight() % 2 == 1 {
        return Ok(0.0);
    }
    let mut sum = 0.0;
    let mut small = 0;
    for c in 0..ctx.max_terms() {
        let g = float_group(spec, mono, ctx, c);
        if !g.is_finite() {
            return Err(Error::NonFinite { x: ctx.q() });
        }
        sum += g;
        if g.abs() <= ctx.tol() * sum.abs().max(f64::MIN_POSITIVE) {
            small += 1;
            if small == 2 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NonConvergence {
        what: format!("c-sum of the {mono} coefficient"),
        terms: ctx.max_terms(),
    })
}

fn guarded_monomials(spec: &CouplingSpec) -> Result<Vec<Monomial>> {
    // multisets of size <= D from J values: C(J + D, D)
    let (n, d) = ((spec.j_max + spec.d_max) as u128, spec.d_max as u128);
    let predicted = (0..d).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1));
    if predicted > MAX_MONOMIALS as u128 {
        return Err(Error::SizeGuard {
            what: format!("g-monomials with J = {}, D = {}", spec.j_max, spec.d_max),
            predicted,
            limit: MAX_MONOMIALS as u128,
        });
    }
    Ok(spec.monomials())
}

/// Coefficients for an explicit list of monomials, in parallel; the result
/// map does not depend on scheduling.
pub fn expand_monomials(
    spec: &CouplingSpec,
    mode: Mode,
    monomials: &[Monomial],
) -> Result<GSeries> {
    let coeffs: Vec<Result<(Monomial, GCoeff)>> = monomials
        .par_iter()
        .map(|m| {
            let c = match mode {
                Mode::Exact => GCoeff::Series(exact_coefficient(spec, m)?),
                Mode::Float(ctx) => GCoeff::Value(float_coefficient(spec, m, &ctx)?),
            };
            Ok((m.clone(), c))
        })
        .collect();
    let mut terms = BTreeMap::new();
    for r in coeffs {
        let (m, c) = r?;
        terms.insert(m, c);
    }
    Ok(GSeries {
        spec: spec.clone(),
        terms,
    })
}

/// Normalized q-Gaussian expectation of `E_{q,2}` raised to the interaction
/// `sum_j g_j h_j x^j / [j]_q!`, as a series in the couplings through degree
/// `D`.
///
/// Exact mode truncates each coefficient at `q^M`, which only needs
/// `c <= M/2`. The normalization divides by the `g = 0` integral over
/// `[-nu, nu]`, so the empty monomial has coefficient 1.
pub fn expand_action(spec: &CouplingSpec, mode: Mode) -> Result<GSeries> {
    let monomials = guarded_monomials(spec)?;
    expand_monomials(spec, mode, &monomials)
}

/// Exact coefficient series of a single monomial.
pub fn exact_monomial_series(spec: &CouplingSpec, mono: &Monomial) -> Result<QSeries> {
    exact_coefficient(spec, mono)
}
