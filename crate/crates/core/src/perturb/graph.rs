use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::expand::{aut_q, series_term, TermSource};
use super::types::{CouplingSpec, Monomial};
use crate::combinat::{
    compositions, enumerate_fiber_maps, enumerate_pairings, histogram_to_poly, inversions,
    pairing_count, weight_histogram, Composition, FiberMap, Pairing, MAX_FIBER_TOTAL,
    MAX_PAIRING_N,
};
use crate::error::{Error, Result};
use crate::qarith::{QPolynomial, QRationalFn, Rational};

/// Largest number of graph classes a single enumeration may produce.
pub const MAX_GRAPH_ITEMS: u128 = 20_000_000;

/// Ranges of the graph parameters `c = |V^1|`, `d = |V^2|` and `j` with
/// `|F_o| = 2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GraphBounds {
    pub c_max: usize,
    pub d_max: usize,
    pub j_max: usize,
    /// bound on `c + j`, which fixes the pairing size
    pub cj_max: usize,
}

impl GraphBounds {
    pub fn new(c_max: usize, d_max: usize, j_max: usize, cj_max: usize) -> Self {
        GraphBounds {
            c_max,
            d_max,
            j_max,
            cj_max,
        }
    }

    /// The index ranges an exact expansion of `spec` touches.
    pub fn from_spec(spec: &CouplingSpec) -> Self {
        let j_max = spec.d_max * spec.j_max / 2;
        GraphBounds::new(spec.order / 2, spec.d_max, j_max, spec.order / 2 + j_max)
    }
}

/// Summation cell: every graph with these parameters shares `h_q` and
/// `aut_q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CellKey {
    pub c: usize,
    pub d: usize,
    pub j: usize,
    pub k: usize,
    /// ordered composition of `2j` into `d` parts, `l_i = val(o_i) - 1`
    pub l: Vec<usize>,
}

/// Canonical datum of one isomorphism class of planar q-graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QGraphIndex {
    pub c: usize,
    pub d: usize,
    pub j: usize,
    /// number of dotted edges `|E^2|`
    pub k: usize,
    pub l: Composition,
    /// half-edge labelling `f: [[2j]] -> [[d]]` with fibers of sizes `l`
    pub f: FiberMap,
    /// pairing on `[[2c + 2j]]`
    pub alpha: Pairing,
    /// the `k` positions among the `d + k` slots of `[d+k]_{q^2}!` that carry
    /// dotted edges, ascending and 1-based
    pub dotted: Vec<usize>,
}

/// `(-1)^{|E^2|} q^{exponent} g_l` without the coupling symbols evaluated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaQ {
    pub sign: i8,
    /// `2c + (d+k)(d+k-1) + w(alpha) + inv(f)`
    pub q_exponent: usize,
    pub monomial: Monomial,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QGraphWeights {
    pub h_q: Rational,
    pub omega_q: OmegaQ,
    pub aut_q: Arc<QPolynomial>,
}

impl QGraphWeights {
    /// `h_q omega_q / aut_q` as a rational function, couplings stripped.
    pub fn contribution(&self) -> QRationalFn {
        let mut num = QPolynomial::q_pow(self.omega_q.q_exponent).scale(&self.h_q);
        if self.omega_q.sign < 0 {
            num = -num;
        }
        QRationalFn::new(num, (*self.aut_q).clone()).expect("aut_q is nonzero")
    }
}

fn check_bounds(spec: &CouplingSpec, b: &GraphBounds) -> Result<()> {
    let pairing_n = b.cj_max.min(b.c_max + b.j_max);
    if pairing_n > MAX_PAIRING_N {
        return Err(Error::SizeGuard {
            what: format!("pairings on [[{}]]", 2 * pairing_n),
            predicted: pairing_count(pairing_n),
            limit: pairing_count(MAX_PAIRING_N),
        });
    }
    if 2 * b.j_max.min(b.cj_max) > MAX_FIBER_TOTAL && b.d_max > 0 && spec.j_max > 0 {
        return Err(Error::SizeGuard {
            what: format!("half-edge maps on [[{}]]", 2 * b.j_max),
            predicted: 2 * b.j_max as u128,
            limit: MAX_FIBER_TOTAL as u128,
        });
    }
    Ok(())
}

/// All cells within the bounds, in lexicographic order of `(c, d, j, k, l)`.
pub fn graph_cells(spec: &CouplingSpec, b: &GraphBounds) -> Result<Vec<CellKey>> {
    check_bounds(spec, b)?;
    let mut cells = Vec::new();
    for c in 0..=b.c_max {
        for d in 0..=b.d_max {
            for j in 0..=b.j_max {
                if c + j > b.cj_max {
                    break;
                }
                for k in 0..=c {
                    for l in compositions(2 * j, d)? {
                        if l.parts().iter().all(|&p| p <= spec.j_max) {
                            cells.push(CellKey {
                                c,
                                d,
                                j,
                                k,
                                l: l.parts().to_vec(),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(cells)
}

fn multinomial_count(parts: &[usize]) -> u128 {
    let mut acc: u128 = 1;
    let mut n: u128 = 0;
    for &p in parts {
        for i in 1..=p as u128 {
            n += 1;
            acc = acc * n / i;
        }
    }
    acc
}

fn choose(n: usize, k: usize) -> u128 {
    (0..k as u128).fold(1u128, |acc, i| acc * (n as u128 - i) / (i + 1))
}

fn cell_count(key: &CellKey) -> u128 {
    pairing_count(key.c + key.j) * multinomial_count(&key.l) * choose(key.d + key.k, key.k)
}

/// Number of classes [`qgraph_enumerate`] would produce.
pub fn predicted_items(spec: &CouplingSpec, b: &GraphBounds) -> Result<u128> {
    Ok(graph_cells(spec, b)?.iter().map(cell_count).sum())
}

/// `k`-subsets of `[[n]]`, lexicographic.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (1..=k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - (k - 1 - i)) else {
            return out;
        };
        cur[i] += 1;
        for t in i + 1..k {
            cur[t] = cur[t - 1] + 1;
        }
    }
}

fn cell_items(
    spec: &CouplingSpec,
    key: &CellKey,
) -> Result<impl Iterator<Item = (QGraphIndex, QGraphWeights)>> {
    let CellKey { c, d, j, k, ref l } = *key;
    let pairings: Vec<Pairing> = enumerate_pairings(c + j)?.collect();
    let fibers: Vec<FiberMap> = enumerate_fiber_maps(l)?.collect();
    let dotted = subsets(d + k, k);
    let aut = Arc::new(aut_q(c, d, j, k));
    let h_q = spec.h_product(l);
    let monomial = Monomial::new(l.clone())?;
    let composition = Composition::new(l.clone())?;
    let base = 2 * c + (d + k) * (d + k).saturating_sub(1);
    let sign: i8 = if k % 2 == 1 { -1 } else { 1 };
    let (np, ns) = (pairings.len(), dotted.len());
    let total = fibers.len() * np * ns;
    Ok((0..total).map(move |idx| {
        let f = &fibers[idx / (np * ns)];
        let alpha = &pairings[(idx / ns) % np];
        let subset = &dotted[idx % ns];
        let q_exponent = base + alpha.weight_exponent() + inversions(f);
        (
            QGraphIndex {
                c,
                d,
                j,
                k,
                l: composition.clone(),
                f: f.clone(),
                alpha: alpha.clone(),
                dotted: subset.clone(),
            },
            QGraphWeights {
                h_q: h_q.clone(),
                omega_q: OmegaQ {
                    sign,
                    q_exponent,
                    monomial: monomial.clone(),
                },
                aut_q: Arc::clone(&aut),
            },
        )
    }))
}

fn guard_items(spec: &CouplingSpec, b: &GraphBounds) -> Result<Vec<CellKey>> {
    let cells = graph_cells(spec, b)?;
    let predicted: u128 = cells.iter().map(cell_count).sum();
    if predicted > MAX_GRAPH_ITEMS {
        return Err(Error::SizeGuard {
            what: "planar q-graph classes".into(),
            predicted,
            limit: MAX_GRAPH_ITEMS,
        });
    }
    Ok(cells)
}

/// Streams one item per isomorphism class `(c, d, j, k, l, f, alpha, dotted)`
/// within the bounds, cells in lexicographic order and, inside a cell, `f`
/// outermost and the dotted subset innermost.
pub fn qgraph_enumerate(
    spec: &CouplingSpec,
    bounds: &GraphBounds,
) -> Result<impl Iterator<Item = (QGraphIndex, QGraphWeights)>> {
    let cells = guard_items(spec, bounds)?;
    let mut streams = Vec::with_capacity(cells.len());
    for key in &cells {
        streams.push(cell_items(spec, key)?);
    }
    Ok(streams.into_iter().flatten())
}

/// Graph sum of one cell: the signed exponent histogram over its items,
/// times `h_q`, over `aut_q`.
fn cell_sum(spec: &CouplingSpec, key: &CellKey) -> Result<(QRationalFn, u128)> {
    let mut items = 0u128;
    let mut shared: Option<(i8, Rational, Arc<QPolynomial>)> = None;
    let hist = weight_histogram(cell_items(spec, key)?.map(|(_, w)| {
        items += 1;
        if shared.is_none() {
            shared = Some((w.omega_q.sign, w.h_q.clone(), Arc::clone(&w.aut_q)));
        }
        w.omega_q.q_exponent
    }));
    let Some((sign, h, aut)) = shared else {
        return Ok((QRationalFn::zero(), 0));
    };
    // sign, h_q and aut_q are constant on a cell
    let num = histogram_to_poly(&hist).scale(&(h * Rational::from_integer(sign.into())));
    Ok((QRationalFn::new(num, (*aut).clone())?, items))
}

/// Per-cell sums of `h_q omega_q / aut_q`, computed in parallel over cells.
pub fn graph_sum(
    spec: &CouplingSpec,
    bounds: &GraphBounds,
) -> Result<BTreeMap<CellKey, QRationalFn>> {
    let cells = guard_items(spec, bounds)?;
    let sums: Vec<Result<(QRationalFn, u128)>> =
        cells.par_iter().map(|key| cell_sum(spec, key)).collect();
    let mut out = BTreeMap::new();
    for (key, r) in cells.into_iter().zip(sums) {
        out.insert(key, r?.0);
    }
    Ok(out)
}

/// Graph sum aggregated to g-monomials.
pub fn graph_sum_by_monomial(
    spec: &CouplingSpec,
    bounds: &GraphBounds,
) -> Result<BTreeMap<Monomial, QRationalFn>> {
    let mut out: BTreeMap<Monomial, QRationalFn> = BTreeMap::new();
    for (key, v) in graph_sum(spec, bounds)? {
        let m = Monomial::new(key.l)?;
        let entry = out.entry(m).or_insert_with(QRationalFn::zero);
        *entry = &*entry + &v;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellMismatch {
    pub cell: CellKey,
    pub graph: String,
    pub series: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphSumReport {
    pub bounds: GraphBounds,
    pub cells: usize,
    pub items: u128,
    pub failures: Vec<CellMismatch>,
}

impl GraphSumReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Compares every cell's graph sum with the matching summand of the
/// expansion, exactly.
pub fn verify_graph_sum(spec: &CouplingSpec, bounds: &GraphBounds) -> Result<GraphSumReport> {
    let cells = guard_items(spec, bounds)?;
    let results: Vec<Result<(u128, Option<CellMismatch>)>> = cells
        .par_iter()
        .map(|key| {
            let (graph, items) = cell_sum(spec, key)?;
            let series = series_term(spec, key.c, key.k, &key.l, TermSource::ClosedForm)?;
            let mismatch = (graph != series).then(|| CellMismatch {
                cell: key.clone(),
                graph: graph.to_string(),
                series: series.to_string(),
            });
            Ok((items, mismatch))
        })
        .collect();
    let mut items = 0;
    let mut failures = Vec::new();
    for r in results {
        let (n, m) = r?;
        items += n;
        failures.extend(m);
    }
    Ok(GraphSumReport {
        bounds: *bounds,
        cells: cells.len(),
        items,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qarith::{qfactorial, qint};

    #[test]
    fn empty_graph() {
        let spec = CouplingSpec::new(2, 0, 0).unwrap();
        let items: Vec<_> = qgraph_enumerate(&spec, &GraphBounds::new(0, 0, 0, 0))
            .unwrap()
            .collect();
        assert_eq!(items.len(), 1);
        assert_eq!(items[0].1.contribution(), QRationalFn::one());
    }

    #[test]
    fn single_two_vertex() {
        let spec = CouplingSpec::new(2, 1, 0).unwrap();
        let items: Vec<_> = qgraph_enumerate(&spec, &GraphBounds::new(0, 1, 1, 1))
            .unwrap()
            .filter(|(i, _)| i.d == 1)
            .collect();
        assert_eq!(items.len(), 1);
    }

    #[test]
    fn four_vertex_reproduces_leading_coefficient() {
        let spec = CouplingSpec::new(4, 1, 0).unwrap();
        let items: Vec<_> = qgraph_enumerate(&spec, &GraphBounds::new(0, 1, 2, 2))
            .unwrap()
            .filter(|(i, _)| i.l.parts() == [4])
            .collect();
        assert_eq!(items.len(), 3);
        let mut exps: Vec<_> = items.iter().map(|(_, w)| w.omega_q.q_exponent).collect();
        exps.sort_unstable();
        assert_eq!(exps, vec![0, 1, 2]);
        let total: QRationalFn = items.iter().map(|(_, w)| w.contribution()).sum();
        assert_eq!(total, QRationalFn::new(qint(3), qfactorial(4)).unwrap());
    }

    #[test]
    fn dotted_subsets_counted() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(subsets(3, 3), vec![vec![1, 2, 3]]);
        let spec = CouplingSpec::new(2, 1, 2).unwrap();
        let b = GraphBounds::new(1, 1, 1, 2);
        let n = qgraph_enumerate(&spec, &b).unwrap().count() as u128;
        assert_eq!(n, predicted_items(&spec, &b).unwrap());
    }

    #[test]
    fn small_bounds_agree() {
        let spec = CouplingSpec::new(4, 2, 4).unwrap();
        let r = verify_graph_sum(&spec, &GraphBounds::new(2, 2, 2, 3)).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert!(r.cells > 10);
    }

    #[test]
    fn guard_reports_prediction() {
        let spec = CouplingSpec::new(4, 3, 30).unwrap();
        assert!(matches!(
            graph_cells(&spec, &GraphBounds::new(15, 3, 6, 21)),
            Err(Error::SizeGuard { .. })
        ));
    }
}
