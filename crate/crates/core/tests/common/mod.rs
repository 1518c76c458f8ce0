//! Random generator of checked derivations, shared by the integration tests.

#![allow(dead_code)]

use intersect_nd::derivation::Side;
use intersect_nd::{Derivation, IType, SystemId, Term, VarName};
use rand::seq::SliceRandom;
use rand::Rng;

const ATOMS: [&str; 3] = ["a", "b", "c"];

pub fn random_type<R: Rng>(rng: &mut R, depth: usize) -> IType {
    if depth == 0 || rng.gen_bool(0.5) {
        return IType::tvar(*ATOMS.choose(rng).unwrap());
    }
    let l = random_type(rng, depth - 1);
    let r = random_type(rng, depth - 1);
    if rng.gen_bool(0.6) {
        IType::arrow(l, r)
    } else {
        IType::and(l, r)
    }
}

/// Builds derivations bottom-up so that every rule application is valid.
/// Binder names are never reused along a branch, so results satisfy the
/// Barendregt convention; ∧-introductions pair copies of one subderivation.
pub struct DerivGen<'r, R: Rng> {
    pub rng: &'r mut R,
    /// Free variables available at leaves, with a fixed type or `None` for a
    /// fresh random type per leaf.
    pub free: Vec<(VarName, Option<IType>)>,
    /// Names tried first for binders before falling back to `prefix{n}`.
    pub binder_pool: Vec<VarName>,
    pub prefix: &'static str,
    pub allow_top: bool,
    next: usize,
}

impl<'r, R: Rng> DerivGen<'r, R> {
    pub fn new(rng: &'r mut R, free: Vec<(VarName, Option<IType>)>, prefix: &'static str) -> Self {
        DerivGen {
            rng,
            free,
            binder_pool: Vec::new(),
            prefix,
            allow_top: false,
            next: 0,
        }
    }

    fn binder(&mut self) -> VarName {
        if !self.binder_pool.is_empty() && self.rng.gen_bool(0.5) {
            return self.binder_pool.remove(0);
        }
        self.next += 1;
        VarName::new(format!("{}{}", self.prefix, self.next)).unwrap()
    }

    fn leaf(&mut self, env: &[(VarName, IType)]) -> Derivation {
        if self.allow_top && self.rng.gen_bool(0.1) {
            let x = match env.choose(self.rng) {
                Some((x, _)) => x.clone(),
                None => self.free.choose(self.rng).unwrap().0.clone(),
            };
            return Derivation::top(Term::Var(x));
        }
        if !env.is_empty() && self.rng.gen_bool(0.6) {
            let (x, ty) = env.choose(self.rng).unwrap().clone();
            return Derivation::var(x, ty);
        }
        let (x, ty) = self.free.choose(self.rng).unwrap().clone();
        let ty = ty.unwrap_or_else(|| random_type(self.rng, 2));
        Derivation::var(x, ty)
    }

    /// Same subject, possibly a different type: `d`, `d ∧ d` or a
    /// projection of `d ∧ d`.
    fn variant(&mut self, d: Derivation) -> Derivation {
        match self.rng.gen_range(0..3) {
            0 => d,
            1 => Derivation::and_intro(d.clone(), d),
            _ => {
                let side = if self.rng.gen_bool(0.5) { Side::First } else { Side::Second };
                Derivation::and_elim(side, Derivation::and_intro(d.clone(), d))
            }
        }
    }

    pub fn derivation(&mut self, budget: usize, env: &mut Vec<(VarName, IType)>) -> Derivation {
        if budget <= 1 {
            return self.leaf(env);
        }
        match self.rng.gen_range(0..7) {
            0 => self.leaf(env),
            1 => {
                let x = self.binder();
                let a = random_type(self.rng, 2);
                env.push((x.clone(), a.clone()));
                let body = self.derivation(budget - 1, env);
                env.pop();
                Derivation::arrow_intro(x, a, body)
            }
            2 => {
                // →-redex
                let arg = self.derivation(budget / 2, env);
                let b = arg.conclusion_type().unwrap();
                let y = self.binder();
                env.push((y.clone(), b.clone()));
                let body = self.derivation(budget.saturating_sub(budget / 2 + 2).max(1), env);
                env.pop();
                Derivation::arrow_elim(Derivation::arrow_intro(y, b, body), arg)
            }
            3 => {
                let fun_budget = self.rng.gen_range(1..budget);
                let arg = self.derivation(budget - fun_budget, env);
                let b = arg.conclusion_type().unwrap();
                let fun = self.derivation(fun_budget, env);
                match fun.conclusion_type().unwrap() {
                    IType::Arrow(dom, _) if *dom == b => Derivation::arrow_elim(fun, arg),
                    _ => {
                        let (g, _) = self.free.choose(self.rng).unwrap().clone();
                        match self.free.iter().find(|(n, _)| *n == g).and_then(|(_, t)| t.clone()) {
                            // a fixed-type free variable cannot serve as head
                            Some(_) => arg,
                            None => {
                                let c = random_type(self.rng, 1);
                                Derivation::arrow_elim(Derivation::var(g, IType::arrow(b, c)), arg)
                            }
                        }
                    }
                }
            }
            4 => {
                let d = self.derivation((budget - 1) / 2, env);
                let right = self.variant(d.clone());
                Derivation::and_intro(d, right)
            }
            5 => {
                let d = self.derivation(budget - 1, env);
                let side = if self.rng.gen_bool(0.5) { Side::First } else { Side::Second };
                match d.conclusion_type().unwrap() {
                    IType::And(..) => Derivation::and_elim(side, d),
                    _ => Derivation::and_elim(side, Derivation::and_intro(d.clone(), d)),
                }
            }
            _ => {
                // ∧-redex over a pair with the same subject
                let d = self.derivation((budget - 1) / 2, env);
                let right = self.variant(d.clone());
                let side = if self.rng.gen_bool(0.5) { Side::First } else { Side::Second };
                Derivation::and_elim(side, Derivation::and_intro(d, right))
            }
        }
    }
}

/// A derivation with at most `max_nodes` nodes that checks in `sys`.
pub fn random_checked<R: Rng>(gen: &mut DerivGen<'_, R>, max_nodes: usize, sys: SystemId) -> Derivation {
    loop {
        let budget = gen.rng.gen_range(1..=max_nodes);
        let d = gen.derivation(budget, &mut Vec::new());
        if d.size() > max_nodes {
            continue;
        }
        if let Err(e) = d.check(sys) {
            panic!("generator produced an invalid derivation: {e}\n{d:?}");
        }
        return d;
    }
}

/// Type of the proof obtained by forgetting subjects, or `None` if the
/// proof is not a valid natural-deduction proof.
pub fn erased_type(d: &Derivation, allow_top: bool) -> Option<IType> {
    fn go(d: &Derivation, allow_top: bool, scope: &mut Vec<(VarName, IType)>) -> Option<IType> {
        match d {
            Derivation::VarAxiom(x, a) => match scope.iter().rev().find(|(y, _)| y == x) {
                Some((_, declared)) if declared != a => None,
                _ => Some(a.clone()),
            },
            Derivation::TopAxiom(_) => allow_top.then_some(IType::Top),
            Derivation::ArrowIntro(x, a, body) => {
                scope.push((x.clone(), a.clone()));
                let b = go(body, allow_top, scope);
                scope.pop();
                Some(IType::arrow(a.clone(), b?))
            }
            Derivation::ArrowElim(f, a) => match go(f, allow_top, scope)? {
                IType::Arrow(dom, cod) if *dom == go(a, allow_top, scope)? => Some(*cod),
                _ => None,
            },
            Derivation::AndIntro(l, r) => Some(IType::and(go(l, allow_top, scope)?, go(r, allow_top, scope)?)),
            Derivation::AndElim(side, sub) => match go(sub, allow_top, scope)? {
                IType::And(a, b) => Some(side.pick(*a, *b)),
                _ => None,
            },
        }
    }
    go(d, allow_top, &mut Vec::new())
}

pub fn name(s: &str) -> VarName {
    VarName::new(s).unwrap()
}
