//! Exact coefficients of the expansion against an oracle that never touches
//! the decomposition coefficients, `aut_q` or the graph data: it expands
//! `E_{q,2}^{z+y}` in `y` directly and integrates powers of `x` over
//! `[-nu, nu]` with `nu^2 = 1/(1-q)`.

use std::collections::BTreeMap;

use qjackson::perturb::{exact_monomial_series, expand_action, CouplingSpec, Mode, Monomial};
use qjackson::qarith::rational::int;
use qjackson::qarith::{QPolynomial, QSeries};

/// `1 + q^b + ... + q^{b(n-1)}`
fn qint_base(n: usize, b: usize) -> QPolynomial {
    let mut c = vec![0i64; b * n.saturating_sub(1) + 1];
    for i in 0..n {
        c[b * i] = 1;
    }
    QPolynomial::from_ints(&c)
}

fn fact_base(n: usize, b: usize) -> QPolynomial {
    (1..=n).fold(QPolynomial::one(), |acc, i| &acc * &qint_base(i, b))
}

fn binom(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// `sum_n q^{n(n-1)} C(n,d) z^{n-d} / [n]_{q^2}!` with `z = -q^2 x^2/[2]_q`,
/// integrated against `x^{2j}` over `[-nu, nu]`, dropping the common factor
/// `2 (1-q) nu`. Uses `int x^{2m} d_qx = 2 (1-q) nu^{2m+1} / (1 - q^{2m+1})`.
fn y_power_integral(d: usize, j: usize, order: usize) -> QSeries {
    let one_minus_q = QPolynomial::from_ints(&[1, -1]);
    let mut total = QSeries::zero(order);
    let mut n = d;
    while n * n.saturating_sub(1) <= order {
        let e = n - d;
        let m = e + j;
        let sign = if e % 2 == 0 { 1 } else { -1 };
        let num = QPolynomial::monomial(n * n.saturating_sub(1) + 2 * e, int(sign * binom(n, d)));
        let mut odd = vec![0i64; 2 * m + 2];
        odd[0] = 1;
        odd[2 * m + 1] = -1;
        let den = &(&(&qint_base(2, 1).pow(e as u32) * &fact_base(n, 2))
            * &one_minus_q.pow(m as u32))
            * &QPolynomial::from_ints(&odd);
        total = &total + &QSeries::from_ratio(&num, &den, order).unwrap();
        n += 1;
    }
    total
}

fn oracle(mono: &Monomial, order: usize) -> QSeries {
    if mono.weight() % 2 == 1 {
        return QSeries::zero(order);
    }
    let d = mono.degree();
    let j = mono.weight() / 2;
    let fact = mono
        .parts()
        .iter()
        .fold(QPolynomial::one(), |acc, &l| &acc * &fact_base(l, 1));
    let n = QPolynomial::constant(int(mono.orderings() as i64));
    let prefactor = QSeries::from_ratio(&n, &fact, order).unwrap();
    let z = y_power_integral(0, 0, order).inverse().unwrap();
    &(&prefactor * &y_power_integral(d, j, order)) * &z
}

#[test]
fn oracle_reproduces_known_leading_terms() {
    let g4 = oracle(&Monomial::new(vec![4]).unwrap(), 6);
    let want: Vec<_> = [1, -2, 3, -4, 5, -6, 8].iter().map(|&c| int(c)).collect();
    assert_eq!(g4.coeffs(), &want[..]);
    let g2 = oracle(&Monomial::new(vec![2]).unwrap(), 4);
    assert_eq!(g2.coeff(0).unwrap(), &int(1));
}

#[test]
fn exact_series_match_oracle() {
    for (j_max, d_max, order) in [(4, 3, 12), (6, 2, 10), (2, 4, 8)] {
        let spec = CouplingSpec::new(j_max, d_max, order).unwrap();
        let series = expand_action(&spec, Mode::Exact).unwrap();
        assert_eq!(series.terms.len(), spec.monomials().len());
        for (mono, c) in &series.terms {
            let got = c.as_series().unwrap();
            assert_eq!(
                got,
                &oracle(mono, order),
                "{mono} with J={j_max} D={d_max} M={order}"
            );
        }
    }
}

#[test]
fn single_monomial_path_agrees() {
    let spec = CouplingSpec::new(5, 3, 10).unwrap();
    for parts in [vec![5, 5], vec![1, 3], vec![2, 2, 4], vec![1, 1, 2]] {
        let mono = Monomial::new(parts).unwrap();
        assert_eq!(
            exact_monomial_series(&spec, &mono).unwrap(),
            oracle(&mono, 10),
            "{mono}"
        );
    }
}

#[test]
fn chi_extraction() {
    // g2 = 1: chi_0 = 1 + [1]_{1,2} / [2]_q! at q = 0
    let spec = CouplingSpec::new(2, 1, 6).unwrap();
    let s = expand_action(&spec, Mode::Exact).unwrap();
    assert_eq!(s.chi(0, &BTreeMap::from([(2, int(1))])).unwrap(), int(2));
    assert_eq!(s.chi(0, &BTreeMap::new()).unwrap(), int(1));
    assert!(s.chi(7, &BTreeMap::new()).is_err());

    // g3 alone: chi_m - delta_{m0} is the g3^2 coefficient
    let spec = CouplingSpec::new(3, 2, 6).unwrap();
    let s = expand_action(&spec, Mode::Exact).unwrap();
    let g3g3 = s
        .coeff(&Monomial::new(vec![3, 3]).unwrap())
        .unwrap()
        .as_series()
        .unwrap();
    let g = BTreeMap::from([(3, int(1))]);
    for m in 0..=6 {
        let delta = if m == 0 { int(1) } else { int(0) };
        assert_eq!(
            s.chi(m, &g).unwrap() - delta,
            g3g3.coeff(m).unwrap().clone(),
            "m = {m}"
        );
    }
    // scaling g3 by 2 scales the quadratic part by 4
    let g = BTreeMap::from([(3, int(2))]);
    assert_eq!(s.chi(3, &g).unwrap(), g3g3.coeff(3).unwrap() * int(4));
}
