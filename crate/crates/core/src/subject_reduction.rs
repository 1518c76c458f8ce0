//! Derivation-carrying β-steps. [`subject_reduce`] handles any redex of a
//! D-derivation; [`leftmost_subject_reduce`] handles the leftmost redex in
//! DΩ; [`normalize_by_leftmost`] iterates the latter to a β-normal form.
//!
//! Each operation first ∧-normalizes and then performs exactly one ↝ step,
//! built by descending the derivation along the redex path.

use crate::derivation::{CheckCode, CheckError, Derivation, SystemId};
use crate::deriv_reduction::{
    and_normalize, introduce_decompose, subformula_check, DerivReduceError, RawStep, ReductionTrace, RuleKind,
};
use crate::syntax::{PathStep, ReduceError, Term, TermPath};

/// Default cap on ↝ steps in [`normalize_by_leftmost`].
pub const DEFAULT_STEP_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SRResult {
    pub derivation: Derivation,
    pub trace: ReductionTrace,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SRError {
    #[error("BadPath: {0} does not resolve in the subject")]
    BadPath(TermPath),
    #[error("NotARedex: subterm at {0} is not a β-redex")]
    NotARedex(TermPath),
    #[error("SystemViolation: derivation uses the top axiom at {0}")]
    SystemViolation(crate::derivation::DerivPath),
    #[error("InvalidDerivation: {0}")]
    InvalidDerivation(CheckError),
    #[error("PreconditionViolated: {0}")]
    PreconditionViolated(String),
    #[error("BudgetExceeded: no normal form within {0} steps")]
    BudgetExceeded(usize),
    #[error("Cancelled")]
    Cancelled,
    /// A case the lemmas rule out. Seeing this means a library bug.
    #[error("internal error: {0}")]
    Internal(String),
}

impl From<DerivReduceError> for SRError {
    fn from(e: DerivReduceError) -> Self {
        match e {
            DerivReduceError::PreconditionViolated(m) => SRError::PreconditionViolated(m),
            other => SRError::Internal(other.to_string()),
        }
    }
}

impl From<ReduceError> for SRError {
    fn from(e: ReduceError) -> Self {
        match e {
            ReduceError::BadPath(p) => SRError::BadPath(p),
            ReduceError::NotARedex(p) => SRError::NotARedex(p),
        }
    }
}

fn internal(message: impl Into<String>) -> SRError {
    SRError::Internal(message.into())
}

/// →-redex contraction at the root of `d`, whose function premise must end
/// in →-introduction once ∧-normal.
fn contract_root(d: &Derivation) -> Result<RawStep, SRError> {
    let Derivation::ArrowElim(fun, arg) = d else {
        return Err(internal(format!("redex typed by `{}`", d.rule_name())));
    };
    let (x, _, _, body) = introduce_decompose(fun).map_err(|e| internal(format!("function of a redex: {e}")))?;
    Ok(RawStep {
        rule: RuleKind::ArrowRedex,
        at: Vec::new(),
        result: body.compose_raw(&x, arg),
    })
}

/// Both premises of an ∧-introduction step to the same subject.
fn pair(d: &Derivation, left: RawStep, right: RawStep) -> Result<RawStep, SRError> {
    if left.result.subject() != right.result.subject() {
        return Err(internal(format!("∧-introduction premises diverge in {d}")));
    }
    Ok(RawStep::pair(left, right))
}

/// Closes a single step taken from `start` (∧-normal, the end of `prefix`).
fn finish(mut prefix: ReductionTrace, step: RawStep, expected: &Term) -> Result<SRResult, SRError> {
    let (label, derivation) = step.finish();
    if derivation.subject() != *expected {
        return Err(internal(format!(
            "derivation subject {} differs from the term reduct {expected}",
            derivation.subject()
        )));
    }
    prefix.push(label, derivation.clone());
    Ok(SRResult {
        derivation,
        trace: prefix,
    })
}

/// One β-step at `path` carried by a D-derivation.
pub fn subject_reduce(d: &Derivation, path: &TermPath) -> Result<SRResult, SRError> {
    if let Err(e) = d.check(SystemId::D) {
        return Err(match e.code {
            CheckCode::TopInSystemD => SRError::SystemViolation(e.path),
            _ => SRError::InvalidDerivation(e),
        });
    }
    let subject = d.subject();
    let expected = subject.beta_step_at(path)?;
    let prefix = and_normalize(d);
    let step = descend(prefix.last(), path.steps())?;
    finish(prefix, step, &expected)
}

fn descend(d: &Derivation, path: &[PathStep]) -> Result<RawStep, SRError> {
    match (d, path.split_first()) {
        (Derivation::AndIntro(l, r), _) => pair(d, descend(l, path)?, descend(r, path)?),
        (Derivation::AndElim(_, sub), _) => Ok(descend(sub, path)?.lift(d, 0)),
        (Derivation::ArrowElim(..), None) => contract_root(d),
        (Derivation::ArrowIntro(_, _, body), Some((PathStep::IntoBody, rest))) => Ok(descend(body, rest)?.lift(d, 0)),
        (Derivation::ArrowElim(f, _), Some((PathStep::IntoFun, rest))) => Ok(descend(f, rest)?.lift(d, 0)),
        (Derivation::ArrowElim(_, a), Some((PathStep::IntoArg, rest))) => Ok(descend(a, rest)?.lift(d, 1)),
        _ => Err(internal(format!("`{}` does not match the redex path", d.rule_name()))),
    }
}

/// The two hypotheses under which the leftmost redex can be followed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// Weak-head redex, last rule not ∧-introduction.
    WeakHead,
    /// ⊤-free boundary.
    TopFree,
}

fn boundary_violation(d: &Derivation, ty: &crate::syntax::IType) -> Option<&'static str> {
    if !ty.top_free() {
        Some("conclusion type contains top")
    } else if !d.context().top_free() {
        Some("context type contains top")
    } else {
        None
    }
}

/// One leftmost β-step carried by a DΩ-derivation.
pub fn leftmost_subject_reduce(d: &Derivation) -> Result<SRResult, SRError> {
    let judgement = d
        .check(SystemId::DOmega)
        .map_err(|e| SRError::PreconditionViolated(format!("derivation does not check: {e}")))?;
    if judgement.ty == crate::syntax::IType::Top {
        return Err(SRError::PreconditionViolated("conclusion type is top".to_string()));
    }
    let Some(path) = judgement.subject.leftmost_redex() else {
        return Err(SRError::PreconditionViolated("subject is β-normal".to_string()));
    };
    let boundary = boundary_violation(d, &judgement.ty);
    let prefix = and_normalize(d);
    let normal = prefix.last();
    let mode = if judgement.subject.weak_head_redex().is_some() && !matches!(normal, Derivation::AndIntro(..)) {
        Mode::WeakHead
    } else if let Some(reason) = boundary {
        return Err(SRError::PreconditionViolated(reason.to_string()));
    } else {
        Mode::TopFree
    };
    let expected = judgement.subject.beta_step_at(&path)?;
    let step = leftmost_step(normal, mode)?;
    finish(prefix, step, &expected)
}

/// The case analysis on the last rule of an ∧-normal derivation.
fn leftmost_step(d: &Derivation, mode: Mode) -> Result<RawStep, SRError> {
    match d {
        Derivation::VarAxiom(x, _) => Err(internal(format!("variable {x} reached by the leftmost descent"))),
        Derivation::TopAxiom(t) => Err(internal(format!("top axiom for {t} reached by the leftmost descent"))),
        Derivation::ArrowIntro(_, _, body) => {
            if mode == Mode::WeakHead {
                return Err(internal("abstraction has no weak-head redex"));
            }
            Ok(leftmost_step(body, Mode::TopFree)?.lift(d, 0))
        }
        Derivation::ArrowElim(fun, arg) => {
            let subject = d.subject();
            if subject.weak_head_redex().is_some() {
                let Term::App(u, _) = &subject else { unreachable!() };
                if u.is_abs() {
                    contract_root(d)
                } else {
                    Ok(leftmost_step(fun, Mode::WeakHead)?.lift(d, 0))
                }
            } else {
                if mode == Mode::WeakHead {
                    return Err(internal("head-variable application under weak-head descent"));
                }
                require_top_free_head(fun)?;
                let path = subject
                    .leftmost_redex()
                    .ok_or_else(|| internal("normal subject reached by the leftmost descent"))?;
                match path.steps().first() {
                    Some(PathStep::IntoFun) => Ok(leftmost_step(fun, Mode::TopFree)?.lift(d, 0)),
                    Some(PathStep::IntoArg) => Ok(leftmost_step(arg, Mode::TopFree)?.lift(d, 1)),
                    _ => Err(internal("head-variable application is not a redex")),
                }
            }
        }
        Derivation::AndIntro(l, r) => {
            if mode == Mode::WeakHead {
                return Err(internal("∧-introduction under weak-head descent"));
            }
            pair(d, leftmost_step(l, Mode::TopFree)?, leftmost_step(r, Mode::TopFree)?)
        }
        Derivation::AndElim(_, sub) => {
            let subject = d.subject();
            let sub_mode = if subject.weak_head_redex().is_some() {
                Mode::WeakHead
            } else if subject.is_abs() {
                return Err(internal("abstraction derived by ∧-elimination in an ∧-normal derivation"));
            } else {
                if mode == Mode::WeakHead {
                    return Err(internal("head-variable term under weak-head descent"));
                }
                require_top_free_head(sub)?;
                Mode::TopFree
            };
            Ok(leftmost_step(sub, sub_mode)?.lift(d, 0))
        }
    }
}

/// Subformula property on a head-variable premise: its type is a subformula
/// of a ⊤-free declaration, so the descent may stay in ⊤-free mode.
fn require_top_free_head(d: &Derivation) -> Result<(), SRError> {
    let w = subformula_check(d).map_err(|e| internal(format!("subformula property: {e}")))?;
    if !w.witness.top_free() {
        return Err(internal(format!(
            "head declaration {}: {} contains top under a ⊤-free boundary",
            w.entry.0, w.witness
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalization {
    pub normal: Term,
    pub derivation: Derivation,
    pub trace: ReductionTrace,
    /// Number of leftmost β-steps taken.
    pub leftmost_steps: usize,
    /// The final ∧-normal derivation contains no ⊤ axiom.
    pub is_system_d: bool,
}

/// Options for [`normalize_by_leftmost_with`].
pub struct NormalizeOptions<'a> {
    /// Cap on the total number of ↝ steps.
    pub budget: usize,
    /// Polled between steps; returning `true` aborts with [`SRError::Cancelled`].
    pub cancel: Option<&'a dyn Fn() -> bool>,
}

impl Default for NormalizeOptions<'_> {
    fn default() -> Self {
        NormalizeOptions {
            budget: DEFAULT_STEP_BUDGET,
            cancel: None,
        }
    }
}

pub fn normalize_by_leftmost(d: &Derivation) -> Result<Normalization, SRError> {
    normalize_by_leftmost_with(d, &NormalizeOptions::default())
}

/// Alternates ∧-normalization and leftmost subject reduction until the
/// subject is β-normal.
pub fn normalize_by_leftmost_with(d: &Derivation, options: &NormalizeOptions<'_>) -> Result<Normalization, SRError> {
    let judgement = d
        .check(SystemId::DOmega)
        .map_err(|e| SRError::PreconditionViolated(format!("derivation does not check: {e}")))?;
    if let Some(reason) = boundary_violation(d, &judgement.ty) {
        return Err(SRError::PreconditionViolated(reason.to_string()));
    }
    let mut trace = ReductionTrace::new(d.clone());
    let mut leftmost_steps = 0;
    loop {
        if options.cancel.is_some_and(|cancel| cancel()) {
            return Err(SRError::Cancelled);
        }
        let prefix = and_normalize(trace.last());
        trace.append(prefix);
        if trace.len() > options.budget {
            return Err(SRError::BudgetExceeded(options.budget));
        }
        if trace.last().subject().is_normal() {
            break;
        }
        let step = leftmost_subject_reduce(trace.last())?;
        trace.append(step.trace);
        leftmost_steps += 1;
        if trace.len() > options.budget {
            return Err(SRError::BudgetExceeded(options.budget));
        }
    }
    let derivation = trace.last().clone();
    Ok(Normalization {
        normal: derivation.subject(),
        is_system_d: !derivation.contains_top(),
        derivation,
        trace,
        leftmost_steps,
    })
}
