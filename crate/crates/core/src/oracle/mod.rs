//! Desk-scale ground truth: exhaustive term enumeration, β-reduction graphs
//! and bounded type inference, combined into a cross-check of the
//! characterization theorems.

mod crosscheck;
mod enumerate;
mod graph;
mod infer;

pub use crosscheck::{
    crosscheck_characterization, crosscheck_term, crosscheck_terms, CrosscheckRecord, CrosscheckReport,
    CrosscheckSummary, GraphBudgets, Violation, REPORT_HEADER,
};
pub use enumerate::{enumerate_terms, free_name};
pub use graph::{reduction_graph, Classification, GraphStats, ReductionGraph};
pub use infer::{infer_bounded, infer_top_free_boundary, infer_with, InferOutcome, SearchBounds, SearchOptions};
