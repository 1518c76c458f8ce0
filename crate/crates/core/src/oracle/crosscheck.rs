use std::fmt;

use rayon::prelude::*;

use super::{enumerate_terms, infer_bounded, infer_top_free_boundary, reduction_graph, SearchBounds};
use crate::derivation::SystemId;
use crate::syntax::Term;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphBudgets {
    pub node_budget: usize,
    pub step_budget: usize,
}

impl Default for GraphBudgets {
    fn default() -> Self {
        GraphBudgets {
            node_budget: 10_000,
            step_budget: 100_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    /// D-typable within bounds but not classified SN.
    Soundness,
    /// ⊤-free-boundary DΩ derivation found, but leftmost reduction did not
    /// reach a normal form.
    Leftmost,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Violation::Soundness => "soundness",
            Violation::Leftmost => "leftmost",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrosscheckRecord {
    pub term: Term,
    pub size: usize,
    pub d_typable: bool,
    pub domega_topfree_typable: bool,
    pub sn: bool,
    pub leftmost_norm: bool,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CrosscheckSummary {
    pub terms: usize,
    pub d_typable: usize,
    pub domega_topfree_typable: usize,
    pub sn: usize,
    pub leftmost_norm: usize,
    pub soundness_violations: usize,
    pub leftmost_violations: usize,
    /// SN terms for which a D-derivation was found.
    pub sn_with_d_derivation: usize,
}

impl CrosscheckSummary {
    /// Fraction of SN terms with a D-derivation found; 1 when there are none.
    pub fn completeness_hit_rate(&self) -> f64 {
        if self.sn == 0 {
            1.0
        } else {
            self.sn_with_d_derivation as f64 / self.sn as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrosscheckReport {
    pub records: Vec<CrosscheckRecord>,
    pub summary: CrosscheckSummary,
}

pub const REPORT_HEADER: &str = "# term, size, d_typable, domega_topfree_typable, sn, leftmost_norm, violations";

impl fmt::Display for CrosscheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{REPORT_HEADER}")?;
        for r in &self.records {
            let violations = if r.violations.is_empty() {
                "none".to_string()
            } else {
                r.violations.iter().map(Violation::to_string).collect::<Vec<_>>().join(";")
            };
            writeln!(
                f,
                "{}, {}, {}, {}, {}, {}, {}",
                r.term, r.size, r.d_typable, r.domega_topfree_typable, r.sn, r.leftmost_norm, violations
            )?;
        }
        let s = &self.summary;
        writeln!(f, "# summary")?;
        writeln!(f, "terms: {}", s.terms)?;
        writeln!(f, "d_typable: {}", s.d_typable)?;
        writeln!(f, "domega_topfree_typable: {}", s.domega_topfree_typable)?;
        writeln!(f, "sn: {}", s.sn)?;
        writeln!(f, "leftmost_norm: {}", s.leftmost_norm)?;
        writeln!(f, "soundness_violations: {}", s.soundness_violations)?;
        writeln!(f, "leftmost_violations: {}", s.leftmost_violations)?;
        writeln!(
            f,
            "completeness_hit_rate: {}/{} ({:.1}%)",
            s.sn_with_d_derivation,
            s.sn,
            100.0 * s.completeness_hit_rate()
        )
    }
}

/// Checks one term against both characterization theorems.
pub fn crosscheck_term(t: &Term, bounds: &SearchBounds, budgets: &GraphBudgets) -> CrosscheckRecord {
    let d_typable = infer_bounded(t, SystemId::D, bounds).is_some();
    let domega_topfree_typable = infer_top_free_boundary(t, bounds).is_some();
    let graph = reduction_graph(t, budgets.node_budget, budgets.step_budget);
    let sn = graph.is_sn();
    let leftmost_norm = graph.leftmost_normalizes();
    let mut violations = Vec::new();
    if d_typable && !sn {
        violations.push(Violation::Soundness);
    }
    if domega_topfree_typable && !leftmost_norm {
        violations.push(Violation::Leftmost);
    }
    CrosscheckRecord {
        term: t.clone(),
        size: t.size(),
        d_typable,
        domega_topfree_typable,
        sn,
        leftmost_norm,
        violations,
    }
}

/// Runs [`crosscheck_term`] over every closed term up to `max_size`, in
/// parallel; records keep enumeration order.
pub fn crosscheck_characterization(max_size: usize, bounds: &SearchBounds, budgets: &GraphBudgets) -> CrosscheckReport {
    let terms: Vec<Term> = enumerate_terms(max_size, true).collect();
    crosscheck_terms(&terms, bounds, budgets)
}

pub fn crosscheck_terms(terms: &[Term], bounds: &SearchBounds, budgets: &GraphBudgets) -> CrosscheckReport {
    let records: Vec<CrosscheckRecord> = terms.par_iter().map(|t| crosscheck_term(t, bounds, budgets)).collect();
    let mut summary = CrosscheckSummary {
        terms: records.len(),
        ..CrosscheckSummary::default()
    };
    for r in &records {
        summary.d_typable += r.d_typable as usize;
        summary.domega_topfree_typable += r.domega_topfree_typable as usize;
        summary.sn += r.sn as usize;
        summary.leftmost_norm += r.leftmost_norm as usize;
        summary.sn_with_d_derivation += (r.sn && r.d_typable) as usize;
        for v in &r.violations {
            match v {
                Violation::Soundness => summary.soundness_violations += 1,
                Violation::Leftmost => summary.leftmost_violations += 1,
            }
        }
    }
    CrosscheckReport { records, summary }
}
