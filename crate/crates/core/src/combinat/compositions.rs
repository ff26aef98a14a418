use crate::error::{Error, Result};

/// Largest total accepted by the composition and partition streams.
pub const MAX_COMPOSITION_TOTAL: usize = 24;

/// An ordered sequence of positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition {
    parts: Vec<usize>,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Domain("composition parts must be positive".into()));
        }
        Ok(Composition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The parts sorted ascending, i.e. the multiset the composition orders.
    pub fn sorted_parts(&self) -> Vec<usize> {
        let mut p = self.parts.clone();
        p.sort_unstable();
        p
    }
}

fn guard(total: usize) -> Result<()> {
    if total > MAX_COMPOSITION_TOTAL {
        return Err(Error::SizeGuard {
            what: format!("compositions of {total}, count 2^(total-1)"),
            predicted: 1u128 << (total - 1),
            limit: 1u128 << (MAX_COMPOSITION_TOTAL - 1),
        });
    }
    Ok(())
}

/// Ordered tuples of exactly `d` positive parts summing to `total`, in
/// lexicographic order. `compositions(0, 0)` yields the empty composition.
pub fn compositions(total: usize, d: usize) -> Result<CompositionIter> {
    guard(total)?;
    let next = if d == 0 {
        (total == 0).then(Vec::new)
    } else if d > total {
        None
    } else {
        let mut first = vec![1; d];
        first[d - 1] = total - (d - 1);
        Some(first)
    };
    Ok(CompositionIter { next })
}

#[derive(Debug, Clone)]
pub struct CompositionIter {
    next: Option<Vec<usize>>,
}

impl Iterator for CompositionIter {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        let current = self.next.take()?;
        let d = current.len();
        // rightmost i whose suffix can give up one unit while staying positive
        let mut suffix = 0;
        let mut advanced = None;
        for i in (0..d.saturating_sub(1)).rev() {
            suffix += current[i + 1];
            if suffix > d - 1 - i {
                let mut nxt = current.clone();
                nxt[i] += 1;
                for p in nxt.iter_mut().skip(i + 1) {
                    *p = 1;
                }
                nxt[d - 1] = suffix - 1 - (d - 2 - i);
                advanced = Some(nxt);
                break;
            }
        }
        self.next = advanced;
        Some(Composition { parts: current })
    }
}

/// Weakly decreasing tuples with at most `d` parts summing to `total`, in
/// reverse lexicographic order.
pub fn partitions_at_most(total: usize, d: usize) -> Result<PartitionIter> {
    guard(total)?;
    let next = if total == 0 {
        Some(Vec::new())
    } else {
        Some(vec![total])
    };
    Ok(PartitionIter { next, max_parts: d })
}

#[derive(Debug, Clone)]
pub struct PartitionIter {
    next: Option<Vec<usize>>,
    max_parts: usize,
}

fn next_partition(p: &[usize]) -> Option<Vec<usize>> {
    let pos = p.iter().rposition(|&x| x > 1)?;
    let mut out = p[..pos].to_vec();
    let m = p[pos] - 1;
    // units freed: the decremented one plus the trailing ones
    let mut rest = 1 + (p.len() - pos - 1);
    out.push(m);
    while rest > 0 {
        let take = rest.min(m);
        out.push(take);
        rest -= take;
    }
    Some(out)
}

impl Iterator for PartitionIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        loop {
            let current = self.next.take()?;
            self.next = next_partition(&current);
            if current.len() <= self.max_parts {
                return Some(current);
            }
        }
    }
}
