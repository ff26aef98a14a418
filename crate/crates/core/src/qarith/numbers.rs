//! q-integers and the products built from them.

use super::poly::QPolynomial;
use crate::error::Result;

/// `[t]_q = 1 + q + ... + q^(t-1)`; `[0]_q = 0`.
pub fn qint(t: usize) -> QPolynomial {
    QPolynomial::from_ints(&vec![1; t])
}

/// `[t]_q = (1 - q^t) / (1 - q)` for real `t`, with the `q -> 1` limit `t`.
pub fn qint_real(q: f64, t: f64) -> f64 {
    if q == 1.0 {
        t
    } else {
        (1.0 - q.powf(t)) / (1.0 - q)
    }
}

/// `[n]_q! = [n]_q [n-1]_q ... [1]_q`
pub fn qfactorial(n: usize) -> QPolynomial {
    (1..=n).fold(QPolynomial::one(), |acc, i| &acc * &qint(i))
}

/// `[n]_{q^k}!`, the q-factorial in the base `q^k`.
pub fn qfactorial_base(n: usize, k: usize) -> QPolynomial {
    qfactorial(n).compose_q_power(k)
}

/// `[t]_{n,k} = prod_{j<n} [t + j k]_q`
pub fn pochhammer_qk(t: usize, n: usize, k: usize) -> QPolynomial {
    (0..n).fold(QPolynomial::one(), |acc, j| &acc * &qint(t + j * k))
}

/// Float `[t]_{n,k}` for real `t`.
pub fn pochhammer_qk_real(q: f64, t: f64, n: usize, k: f64) -> f64 {
    (0..n).map(|j| qint_real(q, t + j as f64 * k)).product()
}

/// q-multinomial `[a_1 + ... + a_n; a_1, ..., a_n]_q`.
///
/// Computed as a quotient of q-factorials; the division is always exact, an
/// `InexactDivision` error would indicate an arithmetic bug.
pub fn qmultinomial(parts: &[usize]) -> Result<QPolynomial> {
    let total: usize = parts.iter().sum();
    let den = parts
        .iter()
        .fold(QPolynomial::one(), |acc, &a| &acc * &qfactorial(a));
    qfactorial(total).exact_div(&den)
}

/// `(1 + q)^c`, i.e. `[2]_q^c`.
pub fn qint2_pow(c: u32) -> QPolynomial {
    QPolynomial::from_ints(&[1, 1]).pow(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qarith::rational::int;

    fn p(s: &str) -> QPolynomial {
        QPolynomial::parse(s).unwrap()
    }

    #[test]
    fn q_integers() {
        assert!(qint(0).is_zero());
        assert_eq!(qint(1), QPolynomial::one());
        assert_eq!(qint(3), p("1 + q + q^2"));
        assert_eq!(qint(2).eval_f64(0.5), 1.5);
        assert_eq!(qint(3).at_one(), int(3));
        assert!((qint_real(0.5, 2.0) - 1.5).abs() < 1e-15);
        assert_eq!(qint_real(1.0, 2.5), 2.5);
    }

    #[test]
    fn q_factorials() {
        assert_eq!(qfactorial(0), QPolynomial::one());
        assert_eq!(qfactorial(2), p("1 + q"));
        // (1 + q)(1 + q + q^2)
        assert_eq!(qfactorial(3), p("1 + 2*q + 2*q^2 + q^3"));
        assert_eq!(qfactorial_base(2, 2), p("1 + q^2"));
    }

    #[test]
    fn pochhammer() {
        assert_eq!(pochhammer_qk(1, 0, 2), QPolynomial::one());
        assert_eq!(pochhammer_qk(1, 2, 2), p("1 + q + q^2"));
        let expected = &p("1 + q + q^2") * &p("1 + q + q^2 + q^3 + q^4");
        assert_eq!(pochhammer_qk(1, 3, 2), expected);
        assert_eq!(expected, p("1 + 2*q + 3*q^2 + 3*q^3 + 3*q^4 + 2*q^5 + q^6"));
        for n in 0..=10 {
            assert_eq!(
                pochhammer_qk(1, n + 1, 2),
                &qint(2 * n + 1) * &pochhammer_qk(1, n, 2)
            );
        }
        let x = pochhammer_qk_real(0.5, 1.0, 2, 2.0);
        assert!((x - 1.75).abs() < 1e-15);
    }

    #[test]
    fn multinomials() {
        assert_eq!(qmultinomial(&[5]).unwrap(), QPolynomial::one());
        assert_eq!(qmultinomial(&[1, 1]).unwrap(), p("1 + q"));
        assert_eq!(
            qmultinomial(&[2, 2]).unwrap(),
            p("1 + q + 2*q^2 + q^3 + q^4")
        );
        assert_eq!(qmultinomial(&[2, 2]).unwrap().at_one(), int(6));
        assert_eq!(qmultinomial(&[1, 1, 1]).unwrap(), qfactorial(3));
    }
}
