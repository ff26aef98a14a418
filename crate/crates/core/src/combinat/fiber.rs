use crate::error::{Error, Result};
use crate::qarith::QPolynomial;

use super::pairing::{histogram_to_poly, weight_histogram};

/// Largest word length accepted by [`enumerate_fiber_maps`].
pub const MAX_FIBER_TOTAL: usize = 10;

/// A map `f: [[a]] -> [[n]]` with `|f^-1(i)| = parts[i-1]`, stored as the word
/// `f(1) f(2) ... f(a)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiberMap {
    values: Vec<usize>,
    parts: Vec<usize>,
}

impl FiberMap {
    pub fn new(values: Vec<usize>, parts: Vec<usize>) -> Result<Self> {
        let mut counts = vec![0usize; parts.len()];
        for &v in &values {
            if v == 0 || v > parts.len() {
                return Err(Error::Domain(format!(
                    "value {v} outside [[{}]]",
                    parts.len()
                )));
            }
            counts[v - 1] += 1;
        }
        if counts != parts {
            return Err(Error::Domain(format!(
                "fiber sizes {counts:?} do not match {parts:?}"
            )));
        }
        Ok(FiberMap { values, parts })
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }
}

/// `inv(f) = |{(i, j) : i < j, f(i) > f(j)}|`
pub fn inversions(f: &FiberMap) -> usize {
    word_inversions(&f.values)
}

pub(crate) fn word_inversions(w: &[usize]) -> usize {
    let mut count = 0;
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if w[i] > w[j] {
                count += 1;
            }
        }
    }
    count
}

fn multinomial_count(parts: &[usize]) -> u128 {
    let mut acc: u128 = 1;
    let mut n: u128 = 0;
    for &p in parts {
        for k in 1..=p as u128 {
            n += 1;
            acc = acc * n / k;
        }
    }
    acc
}

/// Streams all maps with the given fiber sizes, in lexicographic order of
/// their words.
pub fn enumerate_fiber_maps(parts: &[usize]) -> Result<FiberMapIter> {
    let total: usize = parts.iter().sum();
    if total > MAX_FIBER_TOTAL {
        return Err(Error::SizeGuard {
            what: format!("maps with fiber sizes {parts:?}, count = multinomial"),
            predicted: multinomial_count(parts),
            limit: multinomial_count(&[1; MAX_FIBER_TOTAL]),
        });
    }
    Ok(FiberMapIter::new(parts))
}

/// Multiset permutations of `1^parts[0] 2^parts[1] ...` via next-permutation.
#[derive(Debug, Clone)]
pub struct FiberMapIter {
    word: Vec<usize>,
    parts: Vec<usize>,
    done: bool,
}

impl FiberMapIter {
    pub(crate) fn new(parts: &[usize]) -> Self {
        let word = parts
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| std::iter::repeat(i + 1).take(p))
            .collect();
        FiberMapIter {
            word,
            parts: parts.to_vec(),
            done: false,
        }
    }
}

pub(crate) fn next_permutation(w: &mut [usize]) -> bool {
    if w.len() < 2 {
        return false;
    }
    let mut i = w.len() - 1;
    while i > 0 && w[i - 1] >= w[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = w.len() - 1;
    while w[j] <= w[i - 1] {
        j -= 1;
    }
    w.swap(i - 1, j);
    w[i..].reverse();
    true
}

impl Iterator for FiberMapIter {
    type Item = FiberMap;

    fn next(&mut self) -> Option<FiberMap> {
        if self.done {
            return None;
        }
        let item = FiberMap {
            values: self.word.clone(),
            parts: self.parts.clone(),
        };
        self.done = !next_permutation(&mut self.word);
        Some(item)
    }
}

/// `sum_f q^inv(f)` over all maps with the given fiber sizes.
pub fn inv_generating(parts: &[usize]) -> Result<QPolynomial> {
    let iter = enumerate_fiber_maps(parts)?;
    Ok(histogram_to_poly(&weight_histogram(
        iter.map(|f| inversions(&f)),
    )))
}
