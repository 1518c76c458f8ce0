//! λ-terms, intersection types and term paths.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

pub(crate) mod ops;
mod parse;
mod pretty;

pub use ops::{ReduceError, MAX_LEFTMOST_STEPS};
pub use parse::{parse_term, parse_type, SyntaxError};
pub use pretty::{pretty_term, pretty_term_unicode, pretty_type, pretty_type_unicode};

/// A term variable. Names match `[a-zA-Z][a-zA-Z0-9_']*`; `Ord` is lexicographic.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarName(String);

impl VarName {
    pub fn new(name: impl Into<String>) -> Result<Self, InvalidName> {
        let name = name.into();
        if is_identifier(&name) {
            Ok(VarName(name))
        } else {
            Err(InvalidName(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Next name in the priming sequence: `x`, `x'`, `x''`, ...
    pub fn primed(&self) -> VarName {
        VarName(format!("{}'", self.0))
    }

    /// First primed variant of `self` (including `self`) rejected by `taken`.
    pub fn fresh(&self, mut taken: impl FnMut(&VarName) -> bool) -> VarName {
        let mut candidate = self.clone();
        while taken(&candidate) {
            candidate = candidate.primed();
        }
        candidate
    }
}

/// Panics on invalid names; intended for literals.
impl From<&str> for VarName {
    fn from(name: &str) -> Self {
        VarName::new(name).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid variable name {0:?}")]
pub struct InvalidName(pub String);

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// Untyped λ-term.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(VarName),
    Abs(VarName, Box<Term>),
    App(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: impl Into<VarName>) -> Term {
        Term::Var(name.into())
    }

    pub fn abs(binder: impl Into<VarName>, body: Term) -> Term {
        Term::Abs(binder.into(), Box::new(body))
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Box::new(fun), Box::new(arg))
    }

    /// Left-nested application `head a1 ... an`.
    pub fn apps(head: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(head, Term::app)
    }

    pub fn is_abs(&self) -> bool {
        matches!(self, Term::Abs(..))
    }

    /// Node count.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Abs(_, body) => 1 + body.size(),
            Term::App(fun, arg) => 1 + fun.size() + arg.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<VarName> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a VarName>, out: &mut BTreeSet<VarName>) {
        match self {
            Term::Var(x) => {
                if !bound.contains(&x) {
                    out.insert(x.clone());
                }
            }
            Term::Abs(x, body) => {
                bound.push(x);
                body.collect_free(bound, out);
                bound.pop();
            }
            Term::App(fun, arg) => {
                fun.collect_free(bound, out);
                arg.collect_free(bound, out);
            }
        }
    }

    pub fn has_free(&self, x: &VarName) -> bool {
        match self {
            Term::Var(y) => y == x,
            Term::Abs(y, body) => y != x && body.has_free(x),
            Term::App(fun, arg) => fun.has_free(x) || arg.has_free(x),
        }
    }

    /// Every binder occurring in the term, with repetitions collapsed.
    pub fn binders(&self) -> BTreeSet<VarName> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| {
            if let Term::Abs(x, _) = t {
                out.insert(x.clone());
            }
        });
        out
    }

    /// Every variable name occurring in the term, free or bound.
    pub fn all_vars(&self) -> BTreeSet<VarName> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| match t {
            Term::Var(x) | Term::Abs(x, _) => {
                out.insert(x.clone());
            }
            Term::App(..) => {}
        });
        out
    }

    pub(crate) fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        f(self);
        match self {
            Term::Var(_) => {}
            Term::Abs(_, body) => body.visit(f),
            Term::App(fun, arg) => {
                fun.visit(f);
                arg.visit(f);
            }
        }
    }

    /// Splits `h t1 ... tn` into its head and arguments.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut head = self;
        while let Term::App(fun, arg) = head {
            args.push(&**arg);
            head = fun;
        }
        args.reverse();
        (head, args)
    }

    /// The head variable when the term has shape `x t1 ... tn` (n ≥ 0).
    pub fn head_var(&self) -> Option<&VarName> {
        match self.spine().0 {
            Term::Var(x) => Some(x),
            _ => None,
        }
    }

    pub fn is_redex(&self) -> bool {
        matches!(self, Term::App(fun, _) if fun.is_abs())
    }

    pub fn subterm(&self, path: &TermPath) -> Option<&Term> {
        path.steps().iter().try_fold(self, |t, step| match (step, t) {
            (PathStep::IntoBody, Term::Abs(_, body)) => Some(&**body),
            (PathStep::IntoFun, Term::App(fun, _)) => Some(&**fun),
            (PathStep::IntoArg, Term::App(_, arg)) => Some(&**arg),
            _ => None,
        })
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty_term(self))
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty_term(self))
    }
}

impl FromStr for Term {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_term(s)
    }
}

/// Intersection type. Equality is syntactic: `∧` is not quotiented by
/// associativity, commutativity or idempotence.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IType {
    TVar(String),
    Top,
    Arrow(Box<IType>, Box<IType>),
    And(Box<IType>, Box<IType>),
}

impl IType {
    pub fn tvar(name: impl Into<String>) -> IType {
        IType::TVar(name.into())
    }

    pub fn arrow(left: IType, right: IType) -> IType {
        IType::Arrow(Box::new(left), Box::new(right))
    }

    pub fn and(left: IType, right: IType) -> IType {
        IType::And(Box::new(left), Box::new(right))
    }

    /// Left-nested conjunction of a nonempty list.
    pub fn and_all(parts: impl IntoIterator<Item = IType>) -> Option<IType> {
        parts.into_iter().reduce(IType::and)
    }

    pub fn size(&self) -> usize {
        match self {
            IType::TVar(_) | IType::Top => 1,
            IType::Arrow(l, r) | IType::And(l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn top_free(&self) -> bool {
        match self {
            IType::TVar(_) => true,
            IType::Top => false,
            IType::Arrow(l, r) | IType::And(l, r) => l.top_free() && r.top_free(),
        }
    }

    pub fn as_arrow(&self) -> Option<(&IType, &IType)> {
        match self {
            IType::Arrow(l, r) => Some((l, r)),
            _ => None,
        }
    }

    pub fn as_and(&self) -> Option<(&IType, &IType)> {
        match self {
            IType::And(l, r) => Some((l, r)),
            _ => None,
        }
    }

    /// Reflexive-transitive subterms, preorder.
    pub fn subformulas(&self) -> Vec<&IType> {
        let mut out = vec![self];
        let mut i = 0;
        while i < out.len() {
            if let IType::Arrow(l, r) | IType::And(l, r) = out[i] {
                out.push(l);
                out.push(r);
            }
            i += 1;
        }
        out
    }

    pub fn is_subformula_of(&self, other: &IType) -> bool {
        self == other
            || match other {
                IType::Arrow(l, r) | IType::And(l, r) => {
                    self.is_subformula_of(l) || self.is_subformula_of(r)
                }
                _ => false,
            }
    }
}

impl fmt::Display for IType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty_type(self))
    }
}

impl fmt::Debug for IType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty_type(self))
    }
}

impl FromStr for IType {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_type(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PathStep {
    IntoBody,
    IntoFun,
    IntoArg,
}

impl PathStep {
    fn name(self) -> &'static str {
        match self {
            PathStep::IntoBody => "body",
            PathStep::IntoFun => "fun",
            PathStep::IntoArg => "arg",
        }
    }
}

/// A position in a term. Rendered as `root` or a dotted list such as
/// `fun.arg.body`.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermPath(Vec<PathStep>);

impl TermPath {
    pub fn root() -> Self {
        TermPath(Vec::new())
    }

    pub fn steps(&self) -> &[PathStep] {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, step: PathStep) -> TermPath {
        let mut steps = self.0.clone();
        steps.push(step);
        TermPath(steps)
    }

    /// Splits off the first step.
    pub fn split_first(&self) -> Option<(PathStep, TermPath)> {
        self.0
            .split_first()
            .map(|(first, rest)| (*first, TermPath(rest.to_vec())))
    }
}

impl From<Vec<PathStep>> for TermPath {
    fn from(steps: Vec<PathStep>) -> Self {
        TermPath(steps)
    }
}

impl fmt::Display for TermPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        let names: Vec<_> = self.0.iter().map(|s| s.name()).collect();
        f.write_str(&names.join("."))
    }
}

impl fmt::Debug for TermPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid term path {0:?}: expected `root` or a dotted list of body/fun/arg")]
pub struct InvalidPath(pub String);

impl FromStr for TermPath {
    type Err = InvalidPath;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "root" || s == "." {
            return Ok(TermPath::root());
        }
        s.split('.')
            .map(|part| match part {
                "body" | "b" => Ok(PathStep::IntoBody),
                "fun" | "f" => Ok(PathStep::IntoFun),
                "arg" | "a" => Ok(PathStep::IntoArg),
                _ => Err(InvalidPath(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(TermPath)
    }
}
