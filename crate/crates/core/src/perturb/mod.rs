//! Perturbative expansion of the normalized q-Gaussian integral of
//! `E_{q,2}` with polynomial interactions, its planar q-graph expansion, and
//! the checks against the classical limit and direct Jackson integration.

mod expand;
mod graph;
mod types;
mod verify;

pub use expand::{
    aut_q, coefficient_group, coefficient_group_parts, exact_monomial_series, expand_action,
    expand_monomials, float_coefficient, float_group, series_term, term_parts, TermSource,
    MAX_MONOMIALS,
};
pub use graph::{
    graph_cells, graph_sum, graph_sum_by_monomial, predicted_items, qgraph_enumerate,
    verify_graph_sum, CellKey, CellMismatch, GraphBounds, GraphSumReport, OmegaQ, QGraphIndex,
    QGraphWeights, MAX_GRAPH_ITEMS,
};
pub use types::{CouplingSpec, GCoeff, GSeries, Mode, Monomial};
pub use verify::{
    classical_coefficient, classical_limit, constant_term_is_one, group_limit, integration_scaling,
    normalized_integral, verify_against_integration, verify_q_to_one, IntegrationReport,
    LimitMismatch, QLimitReport, ScalingReport,
};
