//! Bounded search for ∧-normal derivations.
//!
//! The search fixes the derivation shape from the term and leaves types to
//! first-order unification over metavariables:
//!
//! * a binder is declared as a left-nested intersection of up to
//!   `max_and_per_var` fresh conjuncts, and each occurrence projects one
//!   conjunct out with ∧-eliminations;
//! * an argument is derived up to `max_and_per_var` times, at independent
//!   types, and the copies are joined by ∧-introduction; in DΩ it may
//!   instead be typed by the ⊤ axiom;
//! * a free variable occurrence is a leaf at whatever type is required.
//!
//! Choices are tried depth-first in a fixed order, so results are
//! deterministic. Metavariables left open become `a`, `b`, `c`, … in order
//! of first occurrence.

use std::collections::HashMap;

use crate::derivation::{Derivation, Side, SystemId};
use crate::syntax::{IType, Term, VarName};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBounds {
    /// Largest type (in nodes) allowed anywhere in the derivation.
    pub max_type_size: usize,
    /// Most conjuncts declared for one bound variable, and most copies of
    /// one argument.
    pub max_and_per_var: usize,
    pub max_depth: usize,
    /// Unification attempts before the search gives up.
    pub time_budget: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_type_size: 12,
            max_and_per_var: 2,
            max_depth: 20,
            time_budget: 1_000_000,
        }
    }
}

/// Extra controls for [`infer_with`].
#[derive(Default, Clone, Copy)]
pub struct SearchOptions<'a> {
    /// In DΩ, try the ⊤ axiom for arguments before typing them.
    pub top_first: bool,
    /// Only derivations satisfying this predicate are returned.
    pub accept: Option<&'a dyn Fn(&Derivation) -> bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InferOutcome {
    pub derivation: Option<Derivation>,
    /// The search stopped on `time_budget` rather than finishing.
    pub budget_exhausted: bool,
    pub unifications: usize,
}

/// A checked derivation of `t` within `bounds`, if the search finds one.
/// `None` means none within bounds, not that `t` is untypable.
pub fn infer_bounded(t: &Term, sys: SystemId, bounds: &SearchBounds) -> Option<Derivation> {
    infer_with(t, sys, bounds, SearchOptions::default()).derivation
}

/// A DΩ derivation whose conclusion type and context are ⊤-free, trying
/// ⊤-typed arguments first.
pub fn infer_top_free_boundary(t: &Term, bounds: &SearchBounds) -> Option<Derivation> {
    let accept = |d: &Derivation| d.conclusion_type().is_some_and(|ty| ty.top_free()) && d.context().top_free();
    let options = SearchOptions {
        top_first: true,
        accept: Some(&accept),
    };
    infer_with(t, SystemId::DOmega, bounds, options).derivation
}

pub fn infer_with(t: &Term, sys: SystemId, bounds: &SearchBounds, options: SearchOptions<'_>) -> InferOutcome {
    let mut search = Search {
        t,
        sys,
        bounds: *bounds,
        options,
        bindings: Vec::new(),
        trail: Vec::new(),
        unifications: 0,
        exhausted: false,
        found: None,
    };
    let root = search.fresh();
    search.derive(t, &Vec::new(), root, bounds.max_depth, &mut |s, d| s.finish(d));
    InferOutcome {
        derivation: search.found,
        budget_exhausted: search.exhausted,
        unifications: search.unifications,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum MType {
    Meta(usize),
    Top,
    Arrow(Box<MType>, Box<MType>),
    And(Box<MType>, Box<MType>),
}

impl MType {
    fn arrow(a: MType, b: MType) -> MType {
        MType::Arrow(Box::new(a), Box::new(b))
    }

    /// Left-nested intersection of `parts` (non-empty).
    fn nest(parts: &[MType]) -> MType {
        let (last, init) = parts.split_last().expect("at least one conjunct");
        if init.is_empty() {
            last.clone()
        } else {
            MType::And(Box::new(MType::nest(init)), Box::new(last.clone()))
        }
    }
}

#[derive(Debug, Clone)]
enum MDeriv {
    Var(VarName, MType),
    Top(Term),
    Abs(VarName, MType, Box<MDeriv>),
    App(Box<MDeriv>, Box<MDeriv>),
    AndI(Box<MDeriv>, Box<MDeriv>),
    AndE(Side, Box<MDeriv>),
}

impl MDeriv {
    /// ∧-introduction over the copies, nested like [`MType::nest`].
    fn nest(parts: Vec<MDeriv>) -> MDeriv {
        let mut it = parts.into_iter();
        let first = it.next().expect("at least one copy");
        it.fold(first, |acc, d| MDeriv::AndI(Box::new(acc), Box::new(d)))
    }
}

/// Bound variables in scope, innermost last, with their conjuncts.
type Env = Vec<(VarName, Vec<MType>)>;

type Cont<'k, T> = &'k mut dyn FnMut(&mut Search<'_>, T) -> bool;

struct Search<'a> {
    t: &'a Term,
    sys: SystemId,
    bounds: SearchBounds,
    options: SearchOptions<'a>,
    bindings: Vec<Option<MType>>,
    trail: Vec<usize>,
    unifications: usize,
    exhausted: bool,
    found: Option<Derivation>,
}

impl Search<'_> {
    fn fresh(&mut self) -> MType {
        self.bindings.push(None);
        MType::Meta(self.bindings.len() - 1)
    }

    fn mark(&self) -> (usize, usize) {
        (self.trail.len(), self.bindings.len())
    }

    fn undo(&mut self, (trail, bindings): (usize, usize)) {
        for m in self.trail.drain(trail..) {
            self.bindings[m] = None;
        }
        self.bindings.truncate(bindings);
    }

    fn walk(&self, t: &MType) -> MType {
        let mut t = t.clone();
        while let MType::Meta(m) = t {
            match &self.bindings[m] {
                Some(next) => t = next.clone(),
                None => break,
            }
        }
        t
    }

    fn size(&self, t: &MType) -> usize {
        match self.walk(t) {
            MType::Arrow(a, b) | MType::And(a, b) => 1 + self.size(&a) + self.size(&b),
            _ => 1,
        }
    }

    fn occurs(&self, m: usize, t: &MType) -> bool {
        match self.walk(t) {
            MType::Meta(n) => n == m,
            MType::Top => false,
            MType::Arrow(a, b) | MType::And(a, b) => self.occurs(m, &a) || self.occurs(m, &b),
        }
    }

    fn bind(&mut self, m: usize, t: MType) -> bool {
        if self.occurs(m, &t) {
            return false;
        }
        self.bindings[m] = Some(t);
        self.trail.push(m);
        true
    }

    fn unify(&mut self, a: &MType, b: &MType) -> bool {
        self.unifications += 1;
        if self.unifications > self.bounds.time_budget {
            self.exhausted = true;
            return false;
        }
        self.unify_inner(a, b)
    }

    fn unify_inner(&mut self, a: &MType, b: &MType) -> bool {
        match (self.walk(a), self.walk(b)) {
            (MType::Meta(m), MType::Meta(n)) if m == n => true,
            (MType::Meta(m), t) | (t, MType::Meta(m)) => self.bind(m, t),
            (MType::Top, MType::Top) => true,
            (MType::Arrow(a1, b1), MType::Arrow(a2, b2)) | (MType::And(a1, b1), MType::And(a2, b2)) => {
                self.unify_inner(&a1, &a2) && self.unify_inner(&b1, &b2)
            }
            _ => false,
        }
    }

    /// Tries to derive `t : want`, calling `k` on each candidate until it
    /// returns `true`. Returns `true` once the search should stop.
    fn derive(&mut self, t: &Term, env: &Env, want: MType, depth: usize, k: Cont<'_, MDeriv>) -> bool {
        if self.exhausted {
            return true;
        }
        if depth == 0 {
            return false;
        }
        match t {
            Term::Var(x) => match env.iter().rev().find(|(y, _)| y == x) {
                None => k(self, MDeriv::Var(x.clone(), want)),
                Some((_, parts)) => {
                    let declared = MType::nest(parts);
                    for i in 0..parts.len() {
                        let projections = projections(i, parts.len());
                        if projections.len() + 1 > depth {
                            continue;
                        }
                        let mark = self.mark();
                        if self.unify(&want, &parts[i]) && self.size(&declared) <= self.bounds.max_type_size {
                            let leaf = MDeriv::Var(x.clone(), declared.clone());
                            let d = projections
                                .into_iter()
                                .fold(leaf, |d, side| MDeriv::AndE(side, Box::new(d)));
                            if k(self, d) {
                                return true;
                            }
                        }
                        self.undo(mark);
                        if self.exhausted {
                            return true;
                        }
                    }
                    false
                }
            },
            Term::Abs(x, body) => {
                for n in 1..=self.bounds.max_and_per_var {
                    let mark = self.mark();
                    let parts: Vec<MType> = (0..n).map(|_| self.fresh()).collect();
                    let declared = MType::nest(&parts);
                    let result = self.fresh();
                    if self.unify(&want, &MType::arrow(declared.clone(), result.clone()))
                        && self.size(&want) <= self.bounds.max_type_size
                    {
                        let mut inner = env.clone();
                        inner.push((x.clone(), parts));
                        let stop = self.derive(body, &inner, result, depth - 1, &mut |s, b| {
                            k(s, MDeriv::Abs(x.clone(), declared.clone(), Box::new(b)))
                        });
                        if stop {
                            return true;
                        }
                    }
                    self.undo(mark);
                    if self.exhausted {
                        return true;
                    }
                }
                false
            }
            Term::App(fun, arg) => {
                let top_allowed = self.sys == SystemId::DOmega;
                let mut choices: Vec<Option<usize>> = (1..=self.bounds.max_and_per_var).map(Some).collect();
                if top_allowed {
                    if self.options.top_first {
                        choices.insert(0, None);
                    } else {
                        choices.push(None);
                    }
                }
                for choice in choices {
                    let mark = self.mark();
                    let stop = match choice {
                        None => self.derive(fun, env, MType::arrow(MType::Top, want.clone()), depth - 1, &mut |s, f| {
                            k(s, MDeriv::App(Box::new(f), Box::new(MDeriv::Top((**arg).clone()))))
                        }),
                        Some(n) => {
                            let parts: Vec<MType> = (0..n).map(|_| self.fresh()).collect();
                            let declared = MType::nest(&parts);
                            self.derive(fun, env, MType::arrow(declared, want.clone()), depth - 1, &mut |s, f| {
                                s.derive_copies(arg, env, &parts, depth - 1, Vec::new(), &mut |s, copies| {
                                    k(s, MDeriv::App(Box::new(f.clone()), Box::new(MDeriv::nest(copies))))
                                })
                            })
                        }
                    };
                    if stop {
                        return true;
                    }
                    self.undo(mark);
                    if self.exhausted {
                        return true;
                    }
                }
                false
            }
        }
    }

    fn derive_copies(
        &mut self,
        t: &Term,
        env: &Env,
        parts: &[MType],
        depth: usize,
        done: Vec<MDeriv>,
        k: Cont<'_, Vec<MDeriv>>,
    ) -> bool {
        if done.len() == parts.len() {
            return k(self, done);
        }
        let want = parts[done.len()].clone();
        self.derive(t, env, want, depth, &mut |s, d| {
            let mut next = done.clone();
            next.push(d);
            s.derive_copies(t, env, parts, depth, next, k)
        })
    }

    /// Grounds a candidate and keeps it if it checks and meets the bounds.
    fn finish(&mut self, d: MDeriv) -> bool {
        let mut names = HashMap::new();
        let d = self.ground(&d, &mut names);
        let Ok(judgement) = d.check(self.sys) else {
            return false;
        };
        debug_assert_eq!(judgement.subject, *self.t);
        if d.depth() > self.bounds.max_depth || largest_type(&d) > self.bounds.max_type_size {
            return false;
        }
        if let Some(accept) = self.options.accept {
            if !accept(&d) {
                return false;
            }
        }
        self.found = Some(d);
        true
    }

    fn ground(&self, d: &MDeriv, names: &mut HashMap<usize, IType>) -> Derivation {
        match d {
            MDeriv::Var(x, ty) => Derivation::VarAxiom(x.clone(), self.ground_type(ty, names)),
            MDeriv::Top(t) => Derivation::TopAxiom(t.clone()),
            MDeriv::Abs(x, ty, body) => {
                let ty = self.ground_type(ty, names);
                Derivation::ArrowIntro(x.clone(), ty, Box::new(self.ground(body, names)))
            }
            MDeriv::App(f, a) => {
                let f = self.ground(f, names);
                Derivation::arrow_elim(f, self.ground(a, names))
            }
            MDeriv::AndI(l, r) => {
                let l = self.ground(l, names);
                Derivation::and_intro(l, self.ground(r, names))
            }
            MDeriv::AndE(side, sub) => Derivation::and_elim(*side, self.ground(sub, names)),
        }
    }

    fn ground_type(&self, ty: &MType, names: &mut HashMap<usize, IType>) -> IType {
        match self.walk(ty) {
            MType::Meta(m) => {
                let next = names.len();
                names.entry(m).or_insert_with(|| IType::tvar(type_var_name(next))).clone()
            }
            MType::Top => IType::Top,
            MType::Arrow(a, b) => {
                let a = self.ground_type(&a, names);
                IType::arrow(a, self.ground_type(&b, names))
            }
            MType::And(a, b) => {
                let a = self.ground_type(&a, names);
                IType::and(a, self.ground_type(&b, names))
            }
        }
    }
}

/// ∧-eliminations selecting conjunct `i` of a left-nested intersection of
/// `n`, innermost first.
fn projections(i: usize, n: usize) -> Vec<Side> {
    if n == 1 {
        Vec::new()
    } else if i == n - 1 {
        vec![Side::Second]
    } else {
        let mut out = vec![Side::First];
        out.extend(projections(i, n - 1));
        out
    }
}

fn type_var_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("t{i}")
    }
}

fn largest_type(d: &Derivation) -> usize {
    let own = match d {
        Derivation::VarAxiom(_, ty) | Derivation::ArrowIntro(_, ty, _) => ty.size(),
        _ => 0,
    };
    let here = d.conclusion_type().map(|t| t.size()).unwrap_or(0);
    d.children().into_iter().map(largest_type).fold(own.max(here), usize::max)
}
