//! The one-step reduction relation ↝ on typing derivations: →-redex and
//! ∧-redex contraction plus the five congruence schemes.
//!
//! Under ∧-introduction both premises must reach the same subject. Steps
//! contracting an ∧-redex leave the subject unchanged, so one premise may
//! take such a step while the other stays put; otherwise both premises step
//! together. Every step returned here is freshened, like term-level β.

use std::fmt;
use std::str::FromStr;

use crate::derivation::{parse_derivation, serialize_derivation, DerivPath, Derivation, Side, SystemId};
use crate::syntax::{IType, SyntaxError, VarName};

/// Which rule scheme produced a step, read at the root of the derivation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    ArrowRedex,
    AndRedex(Side),
    CongAbs,
    CongAndElim,
    CongAndIntro,
    CongAppFun,
    CongAppArg,
}

impl RuleKind {
    pub const ALL: [RuleKind; 8] = [
        RuleKind::ArrowRedex,
        RuleKind::AndRedex(Side::First),
        RuleKind::AndRedex(Side::Second),
        RuleKind::CongAbs,
        RuleKind::CongAndElim,
        RuleKind::CongAndIntro,
        RuleKind::CongAppFun,
        RuleKind::CongAppArg,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleKind::ArrowRedex => "ArrowRedex",
            RuleKind::AndRedex(Side::First) => "AndRedex1",
            RuleKind::AndRedex(Side::Second) => "AndRedex2",
            RuleKind::CongAbs => "CongAbs",
            RuleKind::CongAndElim => "CongAndElim",
            RuleKind::CongAndIntro => "CongAndIntro",
            RuleKind::CongAppFun => "CongAppFun",
            RuleKind::CongAppArg => "CongAppArg",
        }
    }

    /// The congruence scheme for a step taken inside child `index` of `d`.
    fn congruence(d: &Derivation, index: usize) -> RuleKind {
        match (d, index) {
            (Derivation::ArrowIntro(..), _) => RuleKind::CongAbs,
            (Derivation::AndElim(..), _) => RuleKind::CongAndElim,
            (Derivation::AndIntro(..), _) => RuleKind::CongAndIntro,
            (Derivation::ArrowElim(..), 0) => RuleKind::CongAppFun,
            _ => RuleKind::CongAppArg,
        }
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown rule `{s}`"))
    }
}

/// `rule` is the outermost scheme of the step. `path` locates the node
/// where the step happens: the contracted redex, or the topmost
/// ∧-introduction whose premises step together.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DerivStepLabel {
    pub rule: RuleKind,
    pub path: DerivPath,
}

impl fmt::Display for DerivStepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.rule, self.path)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DerivReduceError {
    #[error("NotArrowRedex: no →-redex at {0}")]
    NotArrowRedex(DerivPath),
    #[error("NotAndRedex: no ∧-redex at {0}")]
    NotAndRedex(DerivPath),
    #[error("PreconditionViolated: {0}")]
    PreconditionViolated(String),
    /// A case the propositions rule out. Seeing this means a library bug.
    #[error("internal error: {0}")]
    Internal(String),
}

/// A ↝-sequence with every intermediate derivation stored in full.
#[derive(Clone, PartialEq, Eq)]
pub struct ReductionTrace {
    pub start: Derivation,
    pub steps: Vec<(DerivStepLabel, Derivation)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TraceParseError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: {source}")]
    Derivation { line: usize, source: SyntaxError },
}

impl ReductionTrace {
    pub fn new(start: Derivation) -> Self {
        ReductionTrace { start, steps: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn last(&self) -> &Derivation {
        self.steps.last().map(|(_, d)| d).unwrap_or(&self.start)
    }

    pub fn into_last(self) -> Derivation {
        match self.steps.into_iter().last() {
            Some((_, d)) => d,
            None => self.start,
        }
    }

    pub fn push(&mut self, label: DerivStepLabel, d: Derivation) {
        self.steps.push((label, d));
    }

    /// Appends `other`, whose start must be the current last derivation.
    pub fn append(&mut self, other: ReductionTrace) {
        debug_assert!(other.start == *self.last());
        self.steps.extend(other.steps);
    }

    /// All derivations in order, starting with `start`.
    pub fn derivations(&self) -> impl Iterator<Item = &Derivation> {
        std::iter::once(&self.start).chain(self.steps.iter().map(|(_, d)| d))
    }

    /// Line format: `start <derivation>`, then one `<rule> <path> <derivation>`
    /// line per step.
    pub fn serialize(&self) -> String {
        let mut out = format!("start {}\n", serialize_derivation(&self.start));
        for (label, d) in &self.steps {
            out.push_str(&format!("{} {} {}\n", label.rule, label.path, serialize_derivation(d)));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, TraceParseError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let malformed = |line: usize, message: &str| TraceParseError::Malformed {
            line: line + 1,
            message: message.to_string(),
        };
        let (n, first) = lines.next().ok_or_else(|| malformed(0, "empty trace"))?;
        let rest = first.strip_prefix("start ").ok_or_else(|| malformed(n, "expected `start`"))?;
        let start = parse_derivation(rest).map_err(|source| TraceParseError::Derivation { line: n + 1, source })?;
        let mut trace = ReductionTrace::new(start);
        for (n, line) in lines {
            let mut parts = line.splitn(3, ' ');
            let (Some(rule), Some(path), Some(d)) = (parts.next(), parts.next(), parts.next()) else {
                return Err(malformed(n, "expected `<rule> <path> <derivation>`"));
            };
            let rule = rule.parse::<RuleKind>().map_err(|m| malformed(n, &m))?;
            let path = path.parse::<DerivPath>().map_err(|e| malformed(n, &e.to_string()))?;
            let d = parse_derivation(d).map_err(|source| TraceParseError::Derivation { line: n + 1, source })?;
            trace.push(DerivStepLabel { rule, path }, d);
        }
        Ok(trace)
    }
}

impl fmt::Debug for ReductionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

/// A step computed bottom-up: the scheme at this node, the decisive path
/// relative to this node, and the unfreshened result.
#[derive(Clone)]
pub(crate) struct RawStep {
    pub(crate) rule: RuleKind,
    pub(crate) at: Vec<usize>,
    pub(crate) result: Derivation,
}

impl RawStep {
    /// Wraps a step of child `index` of `parent`, rebuilding `parent`.
    pub(crate) fn lift(self, parent: &Derivation, index: usize) -> RawStep {
        let rule = RuleKind::congruence(parent, index);
        let result = match parent {
            Derivation::ArrowIntro(x, ty, _) => Derivation::ArrowIntro(x.clone(), ty.clone(), Box::new(self.result)),
            Derivation::AndElim(side, _) => Derivation::and_elim(*side, self.result),
            Derivation::ArrowElim(f, a) => match index {
                0 => Derivation::arrow_elim(self.result, (**a).clone()),
                _ => Derivation::arrow_elim((**f).clone(), self.result),
            },
            Derivation::AndIntro(l, r) => match index {
                0 => Derivation::and_intro(self.result, (**r).clone()),
                _ => Derivation::and_intro((**l).clone(), self.result),
            },
            Derivation::VarAxiom(..) | Derivation::TopAxiom(_) => unreachable!("axioms have no premises"),
        };
        let mut at = vec![index];
        at.extend(self.at);
        RawStep { rule, at, result }
    }

    /// Both premises of an ∧-introduction stepping together.
    pub(crate) fn pair(left: RawStep, right: RawStep) -> RawStep {
        RawStep {
            rule: RuleKind::CongAndIntro,
            at: Vec::new(),
            result: Derivation::and_intro(left.result, right.result),
        }
    }

    /// Label and freshened result, as seen from the root.
    pub(crate) fn finish(self) -> (DerivStepLabel, Derivation) {
        (
            DerivStepLabel {
                rule: self.rule,
                path: DerivPath(self.at),
            },
            self.result.freshen(),
        )
    }
}

fn arrow_contractum(d: &Derivation) -> Option<Derivation> {
    match d {
        Derivation::ArrowElim(f, e) => match &**f {
            Derivation::ArrowIntro(x, _, body) => Some(body.compose_raw(x, e)),
            _ => None,
        },
        _ => None,
    }
}

fn and_contractum(d: &Derivation) -> Option<(Side, Derivation)> {
    match d {
        Derivation::AndElim(side, sub) => match &**sub {
            Derivation::AndIntro(l, r) => Some((*side, side.pick(&**l, &**r).clone())),
            _ => None,
        },
        _ => None,
    }
}

/// Contracts the →-redex at `path`, grafting the argument derivation into
/// the body. The result checks whenever `d` does and no ∧-introduction lies
/// strictly above `path`; below an ∧-introduction use [`enumerate_steps`].
pub fn contract_arrow_redex(d: &Derivation, path: &DerivPath) -> Result<Derivation, DerivReduceError> {
    let not_redex = || DerivReduceError::NotArrowRedex(path.clone());
    d.replace_at(&path.0, |node| arrow_contractum(node).ok_or_else(not_redex))
        .ok_or_else(not_redex)?
        .map(|out| out.freshen())
}

/// Replaces the ∧-redex at `path` by the selected premise. Subject and
/// type at `path` are unchanged.
pub fn contract_and_redex(d: &Derivation, path: &DerivPath) -> Result<Derivation, DerivReduceError> {
    let not_redex = || DerivReduceError::NotAndRedex(path.clone());
    d.replace_at(&path.0, |node| and_contractum(node).map(|(_, out)| out).ok_or_else(not_redex))
        .ok_or_else(not_redex)?
}

/// Label for a single contraction of kind `rule` at `path`.
fn label_at(d: &Derivation, path: &DerivPath, rule: RuleKind) -> DerivStepLabel {
    let rule = match path.0.first() {
        None => rule,
        Some(&i) => RuleKind::congruence(d, i),
    };
    DerivStepLabel {
        rule,
        path: path.clone(),
    }
}

/// Path of the outermost-leftmost ∧-redex.
pub fn first_and_redex(d: &Derivation) -> Option<DerivPath> {
    d.nodes().into_iter().find(|(_, n)| n.is_and_redex()).map(|(p, _)| p)
}

/// Contracts outermost-leftmost ∧-redexes until none remain.
pub fn and_normalize(d: &Derivation) -> ReductionTrace {
    let mut trace = ReductionTrace::new(d.clone());
    let mut current = d.clone();
    while let Some(path) = first_and_redex(&current) {
        let side = match current.at(&path) {
            Some(Derivation::AndElim(side, _)) => *side,
            _ => unreachable!("first_and_redex returns an ∧-elimination"),
        };
        let next = contract_and_redex(&current, &path).expect("path holds an ∧-redex");
        trace.push(label_at(&current, &path, RuleKind::AndRedex(side)), next.clone());
        current = next;
    }
    trace
}

fn raw_steps(d: &Derivation) -> Vec<RawStep> {
    let mut out = Vec::new();
    if let Some(result) = arrow_contractum(d) {
        out.push(RawStep {
            rule: RuleKind::ArrowRedex,
            at: Vec::new(),
            result,
        });
    }
    if let Some((side, result)) = and_contractum(d) {
        out.push(RawStep {
            rule: RuleKind::AndRedex(side),
            at: Vec::new(),
            result,
        });
    }
    match d {
        Derivation::VarAxiom(..) | Derivation::TopAxiom(_) => {}
        Derivation::AndIntro(l, r) => {
            let subject = l.subject();
            let left: Vec<_> = raw_steps(l)
                .into_iter()
                .map(|s| {
                    let t = s.result.subject();
                    (s, t)
                })
                .collect();
            let right: Vec<_> = raw_steps(r)
                .into_iter()
                .map(|s| {
                    let t = s.result.subject();
                    (s, t)
                })
                .collect();
            for (ls, lt) in &left {
                for (rs, rt) in &right {
                    if lt == rt {
                        out.push(RawStep::pair(ls.clone(), rs.clone()));
                    }
                }
            }
            for (ls, lt) in left {
                if lt == subject {
                    out.push(ls.lift(d, 0));
                }
            }
            for (rs, rt) in right {
                if rt == subject {
                    out.push(rs.lift(d, 1));
                }
            }
        }
        _ => {
            for (i, child) in d.children().into_iter().enumerate() {
                out.extend(raw_steps(child).into_iter().map(|s| s.lift(d, i)));
            }
        }
    }
    out
}

/// Every `d′` with `d ↝ d′` in one step, with its label. Empty iff `d` is
/// ↝-normal. Identical results reached by different schemes are listed once
/// per label.
pub fn enumerate_steps(d: &Derivation) -> Vec<(DerivStepLabel, Derivation)> {
    let mut out: Vec<(DerivStepLabel, Derivation)> = Vec::new();
    for step in raw_steps(d) {
        let entry = step.finish();
        if !out.contains(&entry) {
            out.push(entry);
        }
    }
    out
}

/// Whether `next` is reachable from `d` in one ↝ step.
pub fn is_one_step(d: &Derivation, next: &Derivation) -> bool {
    raw_steps(d).into_iter().any(|s| s.result.freshen() == *next)
}

fn precondition(message: &str) -> DerivReduceError {
    DerivReduceError::PreconditionViolated(message.to_string())
}

/// Shared hypotheses of the two structural propositions: `d` checks in DΩ,
/// is ∧-normal, concludes a non-⊤ type, and does not end in ∧-introduction.
fn structural_preconditions(d: &Derivation) -> Result<IType, DerivReduceError> {
    let judgement = d
        .check(SystemId::DOmega)
        .map_err(|e| DerivReduceError::PreconditionViolated(format!("derivation does not check: {e}")))?;
    if !d.is_and_normal() {
        return Err(precondition("derivation is not ∧-normal"));
    }
    if judgement.ty == IType::Top {
        return Err(precondition("conclusion type is top"));
    }
    if matches!(d, Derivation::AndIntro(..)) {
        return Err(precondition("last rule is ∧-introduction"));
    }
    Ok(judgement.ty)
}

/// An ∧-normal derivation of an abstraction with non-⊤ type whose last rule
/// is not ∧-introduction ends in →-introduction. Returns `(x, A, B, body)`
/// for the conclusion `λx.u : A → B`.
pub fn introduce_decompose(d: &Derivation) -> Result<(VarName, IType, IType, Derivation), DerivReduceError> {
    if !d.subject().is_abs() {
        return Err(precondition("subject is not an abstraction"));
    }
    let ty = structural_preconditions(d)?;
    match d {
        Derivation::ArrowIntro(x, a, body) => {
            let b = ty.as_arrow().map(|(_, b)| b.clone()).ok_or_else(|| {
                DerivReduceError::Internal("→-introduction without an arrow type".to_string())
            })?;
            Ok((x.clone(), a.clone(), b, (**body).clone()))
        }
        other => Err(DerivReduceError::Internal(format!(
            "abstraction derived by `{}` in an ∧-normal derivation",
            other.rule_name()
        ))),
    }
}

/// Result of [`subformula_check`]: the conclusion type is a subformula of
/// the type declared for the head variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubformulaWitness {
    pub conclusion: IType,
    pub witness: IType,
    pub entry: (VarName, IType),
}

/// For an ∧-normal derivation of `x t₁ … tₙ : A` (A ≠ ⊤, last rule not ∧I),
/// finds the context entry `x : Aᵢ` with `A` a subformula of `Aᵢ`, following
/// the leaf, →-elimination and ∧-elimination cases.
pub fn subformula_check(d: &Derivation) -> Result<SubformulaWitness, DerivReduceError> {
    if d.subject().head_var().is_none() {
        return Err(precondition("subject is not headed by a variable"));
    }
    let conclusion = structural_preconditions(d)?;
    let entry = head_leaf(d)?;
    if !conclusion.is_subformula_of(&entry.1) {
        return Err(DerivReduceError::Internal(format!(
            "{conclusion} is not a subformula of {}",
            entry.1
        )));
    }
    Ok(SubformulaWitness {
        conclusion,
        witness: entry.1.clone(),
        entry,
    })
}

fn head_leaf(d: &Derivation) -> Result<(VarName, IType), DerivReduceError> {
    match d {
        Derivation::VarAxiom(x, ty) => Ok((x.clone(), ty.clone())),
        Derivation::ArrowElim(f, _) => head_leaf(f),
        Derivation::AndElim(_, sub) => head_leaf(sub),
        other => Err(DerivReduceError::Internal(format!(
            "`{}` on the spine of a head-variable derivation",
            other.rule_name()
        ))),
    }
}
