//! Natural-deduction presentation of the intersection type systems D and DΩ.
//!
//! * [`syntax`]: λ-terms, intersection types, substitution and term-level
//!   reduction strategies.
//! * [`derivation`]: typing derivations, the checker, composition and the
//!   S-expression / LaTeX formats.
//! * [`deriv_reduction`]: the reduction relation on derivations (redex
//!   contraction, ∧-normalization, one-step enumeration).
//! * [`subject_reduction`]: derivation-carrying β-steps and normalization
//!   by leftmost reduction.
//! * [`oracle`]: term enumeration, reduction graphs and bounded type
//!   inference for desk-scale cross-checks.

pub mod deriv_reduction;
pub mod derivation;
pub mod oracle;
pub mod subject_reduction;
pub mod syntax;

pub use derivation::{Context, Derivation, Judgement, SystemId};
pub use syntax::{IType, Term, TermPath, VarName};
