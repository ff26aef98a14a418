use serde::Serialize;

use crate::error::{Error, Result};
use crate::qarith::{rational::int, QPolynomial};

/// Largest `n` accepted by [`enumerate_pairings`]; `(2n-1)!!` pairings follow.
pub const MAX_PAIRING_N: usize = 10;

/// A perfect matching of `[[2n]] = {1, ..., 2n}` stored as pairs `(a_i, b_i)`
/// with `a_1 < a_2 < ... < a_n` and `a_i < b_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pairing {
    pairs: Vec<(usize, usize)>,
}

impl Pairing {
    /// Builds a pairing from arbitrary-order chords, orienting each chord and
    /// sorting by left endpoint.
    pub fn new(chords: &[(usize, usize)]) -> Result<Self> {
        let mut pairs: Vec<(usize, usize)> = chords
            .iter()
            .map(|&(x, y)| if x < y { (x, y) } else { (y, x) })
            .collect();
        pairs.sort_unstable();
        let size = 2 * pairs.len();
        let mut seen = vec![false; size + 1];
        for &(a, b) in &pairs {
            if a == b || a == 0 || b > size {
                return Err(Error::Domain(format!(
                    "chord ({a}, {b}) does not fit a pairing of [[{size}]]"
                )));
            }
            for v in [a, b] {
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Error::Domain(format!("element {v} used twice")));
                }
            }
        }
        Ok(Pairing { pairs })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Number of chords.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Exponent of the weight `w(alpha) = q^e`:
    /// `e = sum_i |((a_i, b_i)) \ {b_j : j < i}|`.
    pub fn weight_exponent(&self) -> usize {
        let mut used_right = vec![false; 2 * self.pairs.len() + 1];
        let mut e = 0;
        for &(a, b) in &self.pairs {
            e += (a + 1..b).filter(|&j| !used_right[j]).count();
            used_right[b] = true;
        }
        e
    }
}

/// Streams every pairing of `[[2n]]` once, in lexicographic order of the
/// sequence of right endpoints.
///
/// Each step pairs the smallest free element with one of the remaining free
/// elements, so the stream is a mixed-radix counter with radices
/// `2n-1, 2n-3, ..., 1`.
pub fn enumerate_pairings(n: usize) -> Result<PairingIter> {
    if n > MAX_PAIRING_N {
        return Err(Error::SizeGuard {
            what: format!("pairings of [[{}]], count (2n-1)!!", 2 * n),
            predicted: pairing_count(n),
            limit: pairing_count(MAX_PAIRING_N),
        });
    }
    Ok(PairingIter {
        n,
        digits: vec![0; n],
        done: false,
    })
}

/// `(2n-1)!!`
pub fn pairing_count(n: usize) -> u128 {
    (0..n as u128).map(|i| 2 * i + 1).product()
}

#[derive(Debug, Clone)]
pub struct PairingIter {
    n: usize,
    digits: Vec<usize>,
    done: bool,
}

impl PairingIter {
    fn decode(&self) -> Pairing {
        let mut free: Vec<usize> = (1..=2 * self.n).collect();
        let mut pairs = Vec::with_capacity(self.n);
        for &d in &self.digits {
            let a = free.remove(0);
            let b = free.remove(d);
            pairs.push((a, b));
        }
        Pairing { pairs }
    }
}

impl Iterator for PairingIter {
    type Item = Pairing;

    fn next(&mut self) -> Option<Pairing> {
        if self.done {
            return None;
        }
        let item = self.decode();
        // advance the counter, least significant digit last
        let mut i = self.n;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            let radix = 2 * (self.n - i) - 1;
            if self.digits[i] + 1 < radix {
                self.digits[i] += 1;
                break;
            }
            self.digits[i] = 0;
        }
        Some(item)
    }
}

/// `w(alpha)` as the monomial `q^e`.
pub fn pairing_weight(alpha: &Pairing) -> QPolynomial {
    QPolynomial::q_pow(alpha.weight_exponent())
}

/// `sum_{alpha in P([[2n]])} w(alpha)`, accumulated as an exponent histogram.
pub fn sum_pairing_weights(n: usize) -> Result<QPolynomial> {
    Ok(histogram_to_poly(&weight_histogram(
        enumerate_pairings(n)?.map(|a| a.weight_exponent()),
    )))
}

pub(crate) fn weight_histogram(exponents: impl Iterator<Item = usize>) -> Vec<i64> {
    let mut hist: Vec<i64> = Vec::new();
    for e in exponents {
        if hist.len() <= e {
            hist.resize(e + 1, 0);
        }
        hist[e] += 1;
    }
    hist
}

pub(crate) fn histogram_to_poly(hist: &[i64]) -> QPolynomial {
    QPolynomial::new(hist.iter().map(|&c| int(c)).collect())
}

#[derive(Serialize)]
struct PairingLine<'a> {
    pairs: &'a [(usize, usize)],
    weight_exp: usize,
}

/// One JSON line `{"pairs": [[1,3],[2,4]], "weight_exp": 1}`.
pub fn pairing_json_line(alpha: &Pairing) -> String {
    serde_json::to_string(&PairingLine {
        pairs: &alpha.pairs,
        weight_exp: alpha.weight_exponent(),
    })
    .expect("pairing serializes")
}
