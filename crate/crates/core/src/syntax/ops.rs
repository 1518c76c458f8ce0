//! Substitution, α-machinery and term-level β-reduction.
//!
//! Every reduction in this module returns a `freshen`ed term: binders are
//! kept distinct from free variables and from enclosing binders. Parallel
//! subtrees may share binder names.

use std::collections::BTreeSet;

use super::{PathStep, Term, TermPath, VarName};

/// Default step cap for [`Term::leftmost_normalize`].
pub const MAX_LEFTMOST_STEPS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReduceError {
    #[error("path {0} does not resolve in the term")]
    BadPath(TermPath),
    #[error("subterm at {0} is not a β-redex")]
    NotARedex(TermPath),
}

/// Renaming needed when substituting under binder `y` (with body `body`)
/// for `x`, given the free variables of the substituted term.
pub(crate) fn subst_binder_rename(
    y: &VarName,
    x: &VarName,
    fv_arg: &BTreeSet<VarName>,
    body: &Term,
) -> Option<VarName> {
    if y == x || !fv_arg.contains(y) || !body.has_free(x) {
        return None;
    }
    let body_vars = body.all_vars();
    Some(y.fresh(|n| fv_arg.contains(n) || body_vars.contains(n) || n == x))
}

/// Renaming chosen by `freshen` for binder `x` with body `body` when `avoid`
/// holds the free variables of the whole term and the enclosing binders.
pub(crate) fn freshen_binder_rename(
    x: &VarName,
    avoid: &BTreeSet<VarName>,
    body: &Term,
) -> Option<VarName> {
    if !avoid.contains(x) {
        return None;
    }
    let body_vars = body.all_vars();
    Some(x.fresh(|n| avoid.contains(n) || body_vars.contains(n)))
}

/// Canonical binder names by nesting depth, skipping the free variables.
pub(crate) struct CanonicalNames {
    names: Vec<VarName>,
}

impl CanonicalNames {
    const BASE: [&'static str; 6] = ["x", "y", "z", "u", "v", "w"];

    pub(crate) fn new(free: &BTreeSet<VarName>, max_depth: usize) -> Self {
        let names = (0..)
            .map(|i| match Self::BASE.get(i) {
                Some(name) => VarName((*name).to_string()),
                None => VarName(format!("x{i}")),
            })
            .filter(|n| !free.contains(n))
            .take(max_depth)
            .collect();
        CanonicalNames { names }
    }

    pub(crate) fn at(&self, depth: usize) -> &VarName {
        &self.names[depth]
    }
}

impl Term {
    /// Capture-avoiding substitution `self[arg/x]`.
    pub fn subst(&self, arg: &Term, x: &VarName) -> Term {
        let fv_arg = arg.free_vars();
        self.subst_with(arg, x, &fv_arg)
    }

    pub(crate) fn subst_with(&self, arg: &Term, x: &VarName, fv_arg: &BTreeSet<VarName>) -> Term {
        match self {
            Term::Var(y) if y == x => arg.clone(),
            Term::Var(_) => self.clone(),
            Term::App(fun, a) => Term::app(fun.subst_with(arg, x, fv_arg), a.subst_with(arg, x, fv_arg)),
            Term::Abs(y, _) if y == x => self.clone(),
            Term::Abs(y, body) => match subst_binder_rename(y, x, fv_arg, body) {
                Some(fresh) => {
                    let renamed = body.rename_free(y, &fresh);
                    Term::Abs(fresh, Box::new(renamed.subst_with(arg, x, fv_arg)))
                }
                None => Term::Abs(y.clone(), Box::new(body.subst_with(arg, x, fv_arg))),
            },
        }
    }

    /// Replaces free occurrences of `from` by `to`. `to` must not occur in
    /// `self`, so no capture can happen.
    pub(crate) fn rename_free(&self, from: &VarName, to: &VarName) -> Term {
        match self {
            Term::Var(y) if y == from => Term::Var(to.clone()),
            Term::Var(_) => self.clone(),
            Term::Abs(y, _) if y == from => self.clone(),
            Term::Abs(y, body) => Term::Abs(y.clone(), Box::new(body.rename_free(from, to))),
            Term::App(f, a) => Term::app(f.rename_free(from, to), a.rename_free(from, to)),
        }
    }

    /// Renames binders so that none equals a free variable of the term or an
    /// enclosing binder. The identity on terms that already comply.
    pub fn freshen(&self) -> Term {
        let mut avoid = self.free_vars();
        self.freshen_in(&mut avoid)
    }

    pub(crate) fn freshen_in(&self, avoid: &mut BTreeSet<VarName>) -> Term {
        match self {
            Term::Var(_) => self.clone(),
            Term::App(f, a) => Term::app(f.freshen_in(avoid), a.freshen_in(avoid)),
            Term::Abs(x, body) => {
                let (x, body) = match freshen_binder_rename(x, avoid, body) {
                    Some(fresh) => {
                        let renamed = body.rename_free(x, &fresh);
                        (fresh, renamed)
                    }
                    None => (x.clone(), (**body).clone()),
                };
                avoid.insert(x.clone());
                let body = body.freshen_in(avoid);
                avoid.remove(&x);
                Term::Abs(x, Box::new(body))
            }
        }
    }

    /// First binder that clashes with a free variable or shadows an
    /// enclosing binder.
    pub fn barendregt_violation(&self) -> Option<VarName> {
        fn go(t: &Term, avoid: &mut BTreeSet<VarName>) -> Option<VarName> {
            match t {
                Term::Var(_) => None,
                Term::App(f, a) => go(f, avoid).or_else(|| go(a, avoid)),
                Term::Abs(x, body) => {
                    if !avoid.insert(x.clone()) {
                        return Some(x.clone());
                    }
                    let found = go(body, avoid);
                    avoid.remove(x);
                    found
                }
            }
        }
        go(self, &mut self.free_vars())
    }

    pub fn is_barendregt(&self) -> bool {
        self.barendregt_violation().is_none()
    }

    /// Equality up to consistent renaming of bound variables.
    pub fn alpha_eq(&self, other: &Term) -> bool {
        fn lookup(stack: &[&VarName], x: &VarName) -> Option<usize> {
            stack.iter().rev().position(|y| *y == x)
        }
        fn go<'a>(t: &'a Term, u: &'a Term, lt: &mut Vec<&'a VarName>, lu: &mut Vec<&'a VarName>) -> bool {
            match (t, u) {
                (Term::Var(x), Term::Var(y)) => match (lookup(lt, x), lookup(lu, y)) {
                    (Some(i), Some(j)) => i == j,
                    (None, None) => x == y,
                    _ => false,
                },
                (Term::Abs(x, b), Term::Abs(y, c)) => {
                    lt.push(x);
                    lu.push(y);
                    let eq = go(b, c, lt, lu);
                    lt.pop();
                    lu.pop();
                    eq
                }
                (Term::App(f, a), Term::App(g, b)) => go(f, g, lt, lu) && go(a, b, lt, lu),
                _ => false,
            }
        }
        go(self, other, &mut Vec::new(), &mut Vec::new())
    }

    /// α-canonical representative: the binder at nesting depth d gets the
    /// d-th name of `x, y, z, u, v, w, x6, ...` that is not free in the term.
    pub fn canonical(&self) -> Term {
        fn depth(t: &Term) -> usize {
            match t {
                Term::Var(_) => 0,
                Term::Abs(_, b) => 1 + depth(b),
                Term::App(f, a) => depth(f).max(depth(a)),
            }
        }
        fn go<'a>(t: &'a Term, names: &CanonicalNames, env: &mut Vec<&'a VarName>) -> Term {
            match t {
                Term::Var(x) => match env.iter().rposition(|y| *y == x) {
                    Some(d) => Term::Var(names.at(d).clone()),
                    None => t.clone(),
                },
                Term::Abs(x, b) => {
                    let d = env.len();
                    env.push(x);
                    let body = go(b, names, env);
                    env.pop();
                    Term::Abs(names.at(d).clone(), Box::new(body))
                }
                Term::App(f, a) => Term::app(go(f, names, env), go(a, names, env)),
            }
        }
        let names = CanonicalNames::new(&self.free_vars(), depth(self));
        go(self, &names, &mut Vec::new())
    }

    /// Returns a copy with the subterm at `path` replaced by `f(subterm)`.
    pub(crate) fn replace_at<E>(
        &self,
        path: &[PathStep],
        f: impl FnOnce(&Term) -> Result<Term, E>,
    ) -> Option<Result<Term, E>> {
        let Some((step, rest)) = path.split_first() else {
            return Some(f(self));
        };
        match (step, self) {
            (PathStep::IntoBody, Term::Abs(x, body)) => Some(
                body.replace_at(rest, f)?
                    .map(|b| Term::Abs(x.clone(), Box::new(b))),
            ),
            (PathStep::IntoFun, Term::App(fun, arg)) => {
                Some(fun.replace_at(rest, f)?.map(|g| Term::app(g, (**arg).clone())))
            }
            (PathStep::IntoArg, Term::App(fun, arg)) => {
                Some(arg.replace_at(rest, f)?.map(|b| Term::app((**fun).clone(), b)))
            }
            _ => None,
        }
    }

    /// Contracts the β-redex at `path` without freshening the result.
    pub(crate) fn beta_step_at_raw(&self, path: &TermPath) -> Result<Term, ReduceError> {
        self.replace_at(path.steps(), |sub| match sub {
            Term::App(fun, arg) => match &**fun {
                Term::Abs(x, body) => Ok(body.subst(arg, x)),
                _ => Err(ReduceError::NotARedex(path.clone())),
            },
            _ => Err(ReduceError::NotARedex(path.clone())),
        })
        .ok_or_else(|| ReduceError::BadPath(path.clone()))?
    }

    /// Contracts the β-redex at `path`.
    pub fn beta_step_at(&self, path: &TermPath) -> Result<Term, ReduceError> {
        Ok(self.beta_step_at_raw(path)?.freshen())
    }

    /// All β-redex paths, in preorder with function before argument.
    pub fn redexes(&self) -> Vec<TermPath> {
        fn go(t: &Term, here: &mut Vec<PathStep>, out: &mut Vec<TermPath>) {
            match t {
                Term::Var(_) => {}
                Term::Abs(_, body) => {
                    here.push(PathStep::IntoBody);
                    go(body, here, out);
                    here.pop();
                }
                Term::App(fun, arg) => {
                    if fun.is_abs() {
                        out.push(TermPath(here.clone()));
                    }
                    here.push(PathStep::IntoFun);
                    go(fun, here, out);
                    here.pop();
                    here.push(PathStep::IntoArg);
                    go(arg, here, out);
                    here.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_normal(&self) -> bool {
        match self {
            Term::Var(_) => true,
            Term::Abs(_, body) => body.is_normal(),
            Term::App(fun, arg) => !fun.is_abs() && fun.is_normal() && arg.is_normal(),
        }
    }

    /// Path of the leftmost-outermost β-redex.
    pub fn leftmost_redex(&self) -> Option<TermPath> {
        fn go(t: &Term, here: &mut Vec<PathStep>) -> bool {
            match t {
                Term::Var(_) => false,
                Term::Abs(_, body) => {
                    here.push(PathStep::IntoBody);
                    if go(body, here) {
                        return true;
                    }
                    here.pop();
                    false
                }
                Term::App(fun, arg) => {
                    if fun.is_abs() {
                        return true;
                    }
                    here.push(PathStep::IntoFun);
                    if go(fun, here) {
                        return true;
                    }
                    here.pop();
                    here.push(PathStep::IntoArg);
                    if go(arg, here) {
                        return true;
                    }
                    here.pop();
                    false
                }
            }
        }
        let mut here = Vec::new();
        go(self, &mut here).then_some(TermPath(here))
    }

    /// Path of the weak-head redex of `(λx.u) v t1 ... tn`.
    pub fn weak_head_redex(&self) -> Option<TermPath> {
        let mut path = Vec::new();
        let mut t = self;
        while let Term::App(fun, _) = t {
            if fun.is_abs() {
                return Some(TermPath(path));
            }
            path.push(PathStep::IntoFun);
            t = fun;
        }
        None
    }

    /// `(λx.u) v t1 ... tn ↦ u[v/x] t1 ... tn`.
    pub fn weak_head_step(&self) -> Option<Term> {
        let path = self.weak_head_redex()?;
        self.beta_step_at(&path).ok()
    }

    pub fn leftmost_step(&self) -> Option<Term> {
        let path = self.leftmost_redex()?;
        self.beta_step_at(&path).ok()
    }

    /// Follows leftmost reduction to a normal form. Returns the normal form
    /// and the number of steps, or `None` when `budget` steps did not suffice.
    pub fn leftmost_normalize(&self, budget: usize) -> Option<(Term, usize)> {
        let mut t = self.clone();
        for steps in 0..=budget {
            match t.leftmost_step() {
                None => return Some((t, steps)),
                Some(next) => t = next,
            }
        }
        None
    }
}
