//! Typing derivations for D and DΩ.
//!
//! A [`Derivation`] stores only what the rules cannot recompute: leaves carry
//! their variable and type, the ⊤ axiom carries its subject, and
//! →-introduction carries the discharged variable with its type. Every other
//! subject and type is computed bottom-up by [`Derivation::conclusion`].

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::syntax::{pretty_term_unicode, IType, Term, VarName};

mod compose;
mod latex;
mod sexpr;

pub use compose::ComposeError;
pub use latex::{render_latex, render_latex_fragment};
pub use sexpr::{parse_derivation, serialize_derivation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemId {
    D,
    DOmega,
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SystemId::D => "D",
            SystemId::DOmega => "DΩ",
        })
    }
}

/// Which conjunct an ∧-elimination projects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    First,
    Second,
}

impl Side {
    pub fn index(self) -> u8 {
        match self {
            Side::First => 1,
            Side::Second => 2,
        }
    }

    pub fn pick<T>(self, first: T, second: T) -> T {
        match self {
            Side::First => first,
            Side::Second => second,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Derivation {
    /// Leaf `x : A`.
    VarAxiom(VarName, IType),
    /// Leaf `t : ⊤` (DΩ only).
    TopAxiom(Term),
    /// `λx.u : A → B` from `u : B`, discharging the leaves `x : A`.
    ArrowIntro(VarName, IType, Box<Derivation>),
    /// `t u : B` from `t : A → B` and `u : A`.
    ArrowElim(Box<Derivation>, Box<Derivation>),
    /// `t : A ∧ B` from `t : A` and `t : B`.
    AndIntro(Box<Derivation>, Box<Derivation>),
    /// `t : Aᵢ` from `t : A₁ ∧ A₂`.
    AndElim(Side, Box<Derivation>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Judgement {
    pub subject: Term,
    pub ty: IType,
}

impl fmt::Display for Judgement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : {}", pretty_term_unicode(&self.subject), self.ty)
    }
}

/// Child-index path into a derivation tree. Children are numbered left to
/// right: the body of →I and the premise of ∧E are child 0.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DerivPath(pub Vec<usize>);

impl DerivPath {
    pub fn root() -> Self {
        DerivPath(Vec::new())
    }

    pub fn child(&self, index: usize) -> DerivPath {
        let mut v = self.0.clone();
        v.push(index);
        DerivPath(v)
    }
}

impl fmt::Display for DerivPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<_> = self.0.iter().map(usize::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl fmt::Debug for DerivPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid derivation path {0:?}")]
pub struct InvalidDerivPath(pub String);

impl FromStr for DerivPath {
    type Err = InvalidDerivPath;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| InvalidDerivPath(s.to_string()))?;
        if inner.trim().is_empty() {
            return Ok(DerivPath::root());
        }
        inner
            .split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map(DerivPath)
            .map_err(|_| InvalidDerivPath(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckCode {
    /// Function premise of →E does not have an arrow type.
    NotAnArrow,
    /// Argument type differs from the domain of the function premise.
    ArgTypeMismatch,
    /// Premise of ∧E does not have a conjunction type.
    NotAConjunction,
    SubjectMismatchInAndIntro,
    /// A discharged leaf `x : B` with `B` different from the →I annotation.
    BadArrowIntroLeafType,
    TopInSystemD,
    BarendregtViolation,
}

impl fmt::Display for CheckCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{code} at {path}")]
pub struct CheckError {
    pub path: DerivPath,
    pub code: CheckCode,
}

/// Finite set of declarations. A variable may be declared with several types.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Context(pub BTreeSet<(VarName, IType)>);

impl Context {
    pub fn iter(&self) -> impl Iterator<Item = &(VarName, IType)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: &VarName, ty: &IType) -> bool {
        self.0.contains(&(x.clone(), ty.clone()))
    }

    pub fn is_subset(&self, other: &Context) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn top_free(&self) -> bool {
        self.0.iter().all(|(_, ty)| ty.top_free())
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("∅");
        }
        let parts: Vec<_> = self.0.iter().map(|(x, ty)| format!("{x}: {ty}")).collect();
        f.write_str(&parts.join(", "))
    }
}

impl Derivation {
    pub fn var(x: impl Into<VarName>, ty: IType) -> Derivation {
        Derivation::VarAxiom(x.into(), ty)
    }

    pub fn top(t: Term) -> Derivation {
        Derivation::TopAxiom(t)
    }

    pub fn arrow_intro(x: impl Into<VarName>, ty: IType, body: Derivation) -> Derivation {
        Derivation::ArrowIntro(x.into(), ty, Box::new(body))
    }

    pub fn arrow_elim(fun: Derivation, arg: Derivation) -> Derivation {
        Derivation::ArrowElim(Box::new(fun), Box::new(arg))
    }

    pub fn and_intro(left: Derivation, right: Derivation) -> Derivation {
        Derivation::AndIntro(Box::new(left), Box::new(right))
    }

    pub fn and_elim(side: Side, sub: Derivation) -> Derivation {
        Derivation::AndElim(side, Box::new(sub))
    }

    pub fn children(&self) -> Vec<&Derivation> {
        match self {
            Derivation::VarAxiom(..) | Derivation::TopAxiom(_) => vec![],
            Derivation::ArrowIntro(_, _, body) => vec![body],
            Derivation::AndElim(_, sub) => vec![sub],
            Derivation::ArrowElim(l, r) | Derivation::AndIntro(l, r) => vec![l, r],
        }
    }

    pub fn rule_name(&self) -> &'static str {
        match self {
            Derivation::VarAxiom(..) => "var",
            Derivation::TopAxiom(_) => "top",
            Derivation::ArrowIntro(..) => "absI",
            Derivation::ArrowElim(..) => "appE",
            Derivation::AndIntro(..) => "andI",
            Derivation::AndElim(Side::First, _) => "andE1",
            Derivation::AndElim(Side::Second, _) => "andE2",
        }
    }

    /// Node count.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Derivation::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self
            .children()
            .into_iter()
            .map(Derivation::depth)
            .max()
            .unwrap_or(0)
    }

    pub fn at(&self, path: &DerivPath) -> Option<&Derivation> {
        path.0
            .iter()
            .try_fold(self, |d, &i| d.children().get(i).copied())
    }

    /// Rebuilds the tree with the node at `path` replaced by `f(node)`.
    pub fn replace_at<E>(
        &self,
        path: &[usize],
        f: impl FnOnce(&Derivation) -> Result<Derivation, E>,
    ) -> Option<Result<Derivation, E>> {
        let Some((&i, rest)) = path.split_first() else {
            return Some(f(self));
        };
        Some(match (self, i) {
            (Derivation::ArrowIntro(x, ty, body), 0) => body
                .replace_at(rest, f)?
                .map(|b| Derivation::ArrowIntro(x.clone(), ty.clone(), Box::new(b))),
            (Derivation::AndElim(side, sub), 0) => sub
                .replace_at(rest, f)?
                .map(|s| Derivation::AndElim(*side, Box::new(s))),
            (Derivation::ArrowElim(l, r), 0) => l
                .replace_at(rest, f)?
                .map(|l| Derivation::arrow_elim(l, (**r).clone())),
            (Derivation::ArrowElim(l, r), 1) => r
                .replace_at(rest, f)?
                .map(|r| Derivation::arrow_elim((**l).clone(), r)),
            (Derivation::AndIntro(l, r), 0) => l
                .replace_at(rest, f)?
                .map(|l| Derivation::and_intro(l, (**r).clone())),
            (Derivation::AndIntro(l, r), 1) => r
                .replace_at(rest, f)?
                .map(|r| Derivation::and_intro((**l).clone(), r)),
            _ => return None,
        })
    }

    /// Subject of the conclusion, read off structurally. For ∧I the left
    /// premise's subject is used; `check` verifies both agree.
    pub fn subject(&self) -> Term {
        match self {
            Derivation::VarAxiom(x, _) => Term::Var(x.clone()),
            Derivation::TopAxiom(t) => t.clone(),
            Derivation::ArrowIntro(x, _, body) => Term::Abs(x.clone(), Box::new(body.subject())),
            Derivation::ArrowElim(f, a) => Term::app(f.subject(), a.subject()),
            Derivation::AndIntro(l, _) => l.subject(),
            Derivation::AndElim(_, sub) => sub.subject(),
        }
    }

    /// Type of the conclusion, or `None` if some node on the way is
    /// ill-shaped.
    pub fn conclusion_type(&self) -> Option<IType> {
        Some(match self {
            Derivation::VarAxiom(_, ty) => ty.clone(),
            Derivation::TopAxiom(_) => IType::Top,
            Derivation::ArrowIntro(_, ty, body) => IType::arrow(ty.clone(), body.conclusion_type()?),
            Derivation::ArrowElim(f, _) => f.conclusion_type()?.as_arrow()?.1.clone(),
            Derivation::AndIntro(l, r) => IType::and(l.conclusion_type()?, r.conclusion_type()?),
            Derivation::AndElim(side, sub) => {
                let ty = sub.conclusion_type()?;
                let (a, b) = ty.as_and()?;
                side.pick(a, b).clone()
            }
        })
    }

    /// Root judgement, computed bottom-up. Fails on local shape violations.
    pub fn conclusion(&self) -> Result<Judgement, CheckError> {
        self.judge(&mut Vec::new(), None)
    }

    /// Validates every rule instance. With `SystemId::D` the ⊤ axiom is
    /// rejected. The root subject must respect the Barendregt discipline.
    pub fn check(&self, sys: SystemId) -> Result<Judgement, CheckError> {
        let judgement = self.judge(&mut Vec::new(), Some(sys))?;
        if judgement.subject.barendregt_violation().is_some() {
            return Err(CheckError {
                path: DerivPath::root(),
                code: CheckCode::BarendregtViolation,
            });
        }
        Ok(judgement)
    }

    pub fn is_valid(&self, sys: SystemId) -> bool {
        self.check(sys).is_ok()
    }

    fn judge(&self, path: &mut Vec<usize>, sys: Option<SystemId>) -> Result<Judgement, CheckError> {
        let fail = |path: &Vec<usize>, code| {
            Err(CheckError {
                path: DerivPath(path.clone()),
                code,
            })
        };
        let premise = |d: &Derivation, i: usize, path: &mut Vec<usize>| {
            path.push(i);
            let j = d.judge(path, sys);
            path.pop();
            j
        };
        match self {
            Derivation::VarAxiom(x, ty) => Ok(Judgement {
                subject: Term::Var(x.clone()),
                ty: ty.clone(),
            }),
            Derivation::TopAxiom(t) => {
                if sys == Some(SystemId::D) {
                    return fail(path, CheckCode::TopInSystemD);
                }
                Ok(Judgement {
                    subject: t.clone(),
                    ty: IType::Top,
                })
            }
            Derivation::ArrowIntro(x, ty, body) => {
                let j = premise(body, 0, path)?;
                if sys.is_some() && body.discharged_types(x).any(|leaf| leaf != ty) {
                    return fail(path, CheckCode::BadArrowIntroLeafType);
                }
                Ok(Judgement {
                    subject: Term::Abs(x.clone(), Box::new(j.subject)),
                    ty: IType::arrow(ty.clone(), j.ty),
                })
            }
            Derivation::ArrowElim(f, a) => {
                let jf = premise(f, 0, path)?;
                let ja = premise(a, 1, path)?;
                let Some((dom, cod)) = jf.ty.as_arrow() else {
                    return fail(path, CheckCode::NotAnArrow);
                };
                if *dom != ja.ty {
                    return fail(path, CheckCode::ArgTypeMismatch);
                }
                Ok(Judgement {
                    ty: cod.clone(),
                    subject: Term::app(jf.subject, ja.subject),
                })
            }
            Derivation::AndIntro(l, r) => {
                let jl = premise(l, 0, path)?;
                let jr = premise(r, 1, path)?;
                if jl.subject != jr.subject {
                    return fail(path, CheckCode::SubjectMismatchInAndIntro);
                }
                Ok(Judgement {
                    subject: jl.subject,
                    ty: IType::and(jl.ty, jr.ty),
                })
            }
            Derivation::AndElim(side, sub) => {
                let j = premise(sub, 0, path)?;
                let Some((a, b)) = j.ty.as_and() else {
                    return fail(path, CheckCode::NotAConjunction);
                };
                Ok(Judgement {
                    ty: side.pick(a, b).clone(),
                    subject: j.subject,
                })
            }
        }
    }

    /// Types of the leaves for `x` that are free in `self`.
    pub fn discharged_types<'a>(&'a self, x: &'a VarName) -> impl Iterator<Item = &'a IType> + 'a {
        let mut out = Vec::new();
        self.collect_leaves(x, &mut out);
        out.into_iter()
    }

    fn collect_leaves<'a>(&'a self, x: &VarName, out: &mut Vec<&'a IType>) {
        match self {
            Derivation::VarAxiom(y, ty) if y == x => out.push(ty),
            Derivation::VarAxiom(..) | Derivation::TopAxiom(_) => {}
            Derivation::ArrowIntro(y, _, _) if y == x => {}
            _ => {
                for child in self.children() {
                    child.collect_leaves(x, out);
                }
            }
        }
    }

    /// Undischarged leaves `(x, A)`.
    pub fn context(&self) -> Context {
        fn go<'a>(d: &'a Derivation, bound: &mut Vec<&'a VarName>, out: &mut BTreeSet<(VarName, IType)>) {
            match d {
                Derivation::VarAxiom(x, ty) => {
                    if !bound.contains(&x) {
                        out.insert((x.clone(), ty.clone()));
                    }
                }
                Derivation::TopAxiom(_) => {}
                Derivation::ArrowIntro(x, _, body) => {
                    bound.push(x);
                    go(body, bound, out);
                    bound.pop();
                }
                _ => {
                    for child in d.children() {
                        go(child, bound, out);
                    }
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        Context(out)
    }

    pub fn contains_top(&self) -> bool {
        matches!(self, Derivation::TopAxiom(_)) || self.children().into_iter().any(Derivation::contains_top)
    }

    pub fn is_and_redex(&self) -> bool {
        matches!(self, Derivation::AndElim(_, sub) if matches!(**sub, Derivation::AndIntro(..)))
    }

    pub fn is_arrow_redex(&self) -> bool {
        matches!(self, Derivation::ArrowElim(f, _) if matches!(**f, Derivation::ArrowIntro(..)))
    }

    pub fn is_and_normal(&self) -> bool {
        !self.is_and_redex() && self.children().into_iter().all(Derivation::is_and_normal)
    }

    /// Preorder traversal with paths.
    pub fn nodes(&self) -> Vec<(DerivPath, &Derivation)> {
        fn go<'a>(d: &'a Derivation, here: &mut Vec<usize>, out: &mut Vec<(DerivPath, &'a Derivation)>) {
            out.push((DerivPath(here.clone()), d));
            for (i, child) in d.children().into_iter().enumerate() {
                here.push(i);
                go(child, here, out);
                here.pop();
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_derivation(self))
    }
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_derivation(self))
    }
}

impl FromStr for Derivation {
    type Err = crate::syntax::SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_derivation(s)
    }
}
