//! Derivation composition and the derivation-level mirrors of term
//! substitution, renaming and freshening. Each mirror takes exactly the
//! renaming decisions its term-level counterpart takes on the subject, so
//! subjects of the results coincide syntactically with the term operations.

use std::collections::BTreeSet;

use super::{CheckError, DerivPath, Derivation, SystemId};
use crate::syntax::ops::{freshen_binder_rename, subst_binder_rename};
use crate::syntax::{IType, VarName};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComposeError {
    #[error("leaf for {var} at {path} has type {found}, but the grafted derivation concludes {expected}")]
    TypeMismatchAtLeaf {
        var: VarName,
        path: DerivPath,
        expected: IType,
        found: IType,
    },
    #[error("input derivation does not check: {0}")]
    InvalidInput(CheckError),
}

impl Derivation {
    /// Grafts `e` (a derivation of `t : A`) at every free leaf `x : A` of
    /// `self`, substituting `t` for `x` in every subject. The result is
    /// freshened; its subject is `u[t/x]` up to binder names and equal to
    /// `freshen(u[t/x])`.
    pub fn compose(&self, x: &VarName, e: &Derivation) -> Result<Derivation, ComposeError> {
        self.check(SystemId::DOmega).map_err(ComposeError::InvalidInput)?;
        let expected = e.check(SystemId::DOmega).map_err(ComposeError::InvalidInput)?.ty;
        for (path, node) in self.free_leaves(x) {
            if let Derivation::VarAxiom(_, found) = node {
                if *found != expected {
                    return Err(ComposeError::TypeMismatchAtLeaf {
                        var: x.clone(),
                        path,
                        expected,
                        found: found.clone(),
                    });
                }
            }
        }
        Ok(self.compose_raw(x, e).freshen())
    }

    /// Composition without validation or freshening.
    pub(crate) fn compose_raw(&self, x: &VarName, e: &Derivation) -> Derivation {
        let t = e.subject();
        let fv_t = t.free_vars();
        self.graft(x, e, &t, &fv_t)
    }

    fn graft(
        &self,
        x: &VarName,
        e: &Derivation,
        t: &crate::syntax::Term,
        fv_t: &BTreeSet<VarName>,
    ) -> Derivation {
        match self {
            Derivation::VarAxiom(y, _) if y == x => e.clone(),
            Derivation::VarAxiom(..) => self.clone(),
            Derivation::TopAxiom(s) => Derivation::TopAxiom(s.subst_with(t, x, fv_t)),
            Derivation::ArrowIntro(y, _, _) if y == x => self.clone(),
            Derivation::ArrowIntro(y, ty, body) => {
                match subst_binder_rename(y, x, fv_t, &body.subject()) {
                    Some(fresh) => {
                        let renamed = body.rename_free(y, &fresh);
                        Derivation::ArrowIntro(fresh, ty.clone(), Box::new(renamed.graft(x, e, t, fv_t)))
                    }
                    None => Derivation::ArrowIntro(y.clone(), ty.clone(), Box::new(body.graft(x, e, t, fv_t))),
                }
            }
            Derivation::ArrowElim(f, a) => Derivation::arrow_elim(f.graft(x, e, t, fv_t), a.graft(x, e, t, fv_t)),
            Derivation::AndIntro(l, r) => Derivation::and_intro(l.graft(x, e, t, fv_t), r.graft(x, e, t, fv_t)),
            Derivation::AndElim(side, sub) => Derivation::and_elim(*side, sub.graft(x, e, t, fv_t)),
        }
    }

    /// Leaves for `x` not discharged inside `self`.
    pub fn free_leaves(&self, x: &VarName) -> Vec<(DerivPath, &Derivation)> {
        fn go<'a>(d: &'a Derivation, x: &VarName, here: &mut Vec<usize>, out: &mut Vec<(DerivPath, &'a Derivation)>) {
            match d {
                Derivation::VarAxiom(y, _) if y == x => out.push((DerivPath(here.clone()), d)),
                Derivation::ArrowIntro(y, _, _) if y == x => {}
                _ => {
                    for (i, child) in d.children().into_iter().enumerate() {
                        here.push(i);
                        go(child, x, here, out);
                        here.pop();
                    }
                }
            }
        }
        let mut out = Vec::new();
        go(self, x, &mut Vec::new(), &mut out);
        out
    }

    /// Renames free occurrences of `from` to `to`, which must not occur in
    /// the subject.
    pub(crate) fn rename_free(&self, from: &VarName, to: &VarName) -> Derivation {
        match self {
            Derivation::VarAxiom(y, ty) if y == from => Derivation::VarAxiom(to.clone(), ty.clone()),
            Derivation::VarAxiom(..) => self.clone(),
            Derivation::TopAxiom(s) => Derivation::TopAxiom(s.rename_free(from, to)),
            Derivation::ArrowIntro(y, _, _) if y == from => self.clone(),
            Derivation::ArrowIntro(y, ty, body) => {
                Derivation::ArrowIntro(y.clone(), ty.clone(), Box::new(body.rename_free(from, to)))
            }
            Derivation::ArrowElim(f, a) => Derivation::arrow_elim(f.rename_free(from, to), a.rename_free(from, to)),
            Derivation::AndIntro(l, r) => Derivation::and_intro(l.rename_free(from, to), r.rename_free(from, to)),
            Derivation::AndElim(side, sub) => Derivation::and_elim(*side, sub.rename_free(from, to)),
        }
    }

    /// Derivation-level [`Term::freshen`](crate::syntax::Term::freshen):
    /// the subject of the result is `self.subject().freshen()`.
    pub fn freshen(&self) -> Derivation {
        let mut avoid = self.subject().free_vars();
        self.freshen_in(&mut avoid)
    }

    fn freshen_in(&self, avoid: &mut BTreeSet<VarName>) -> Derivation {
        match self {
            Derivation::VarAxiom(..) => self.clone(),
            Derivation::TopAxiom(s) => Derivation::TopAxiom(s.freshen_in(avoid)),
            Derivation::ArrowIntro(x, ty, body) => {
                let rename = if avoid.contains(x) {
                    freshen_binder_rename(x, avoid, &body.subject())
                } else {
                    None
                };
                let (x, body) = match rename {
                    Some(fresh) => {
                        let renamed = body.rename_free(x, &fresh);
                        (fresh, renamed)
                    }
                    None => (x.clone(), (**body).clone()),
                };
                avoid.insert(x.clone());
                let body = body.freshen_in(avoid);
                avoid.remove(&x);
                Derivation::ArrowIntro(x, ty.clone(), Box::new(body))
            }
            Derivation::ArrowElim(f, a) => Derivation::arrow_elim(f.freshen_in(avoid), a.freshen_in(avoid)),
            Derivation::AndIntro(l, r) => Derivation::and_intro(l.freshen_in(avoid), r.freshen_in(avoid)),
            Derivation::AndElim(side, sub) => Derivation::and_elim(*side, sub.freshen_in(avoid)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::parse_derivation;
    use crate::syntax::{parse_term, parse_type, Term};

    fn ty(s: &str) -> IType {
        parse_type(s).unwrap()
    }

    fn d(s: &str) -> Derivation {
        parse_derivation(s).unwrap()
    }

    #[test]
    fn grafting_a_variable() {
        let out = d("(var x a)").compose(&"x".into(), &d("(var y a)")).unwrap();
        assert_eq!(out, d("(var y a)"));
        assert_eq!(out.subject(), Term::var("y"));
    }

    #[test]
    fn leaves_of_different_types_reject_any_single_graft() {
        let both = d("(andI (var x a) (var x b))");
        for e in [d("(var y a)"), d("(var y b)")] {
            assert!(matches!(
                both.compose(&"x".into(), &e),
                Err(ComposeError::TypeMismatchAtLeaf { .. })
            ));
        }
    }

    #[test]
    fn self_application_body_grafts_twice() {
        // x x : b from x : (a -> b) /\ a, both leaves typed (a -> b) /\ a
        let body = d("(appE (andE1 (var x ((a -> b) /\\ a))) (andE2 (var x ((a -> b) /\\ a))))");
        assert_eq!(body.check(SystemId::D).unwrap().ty, ty("b"));
        // v = \y. y typed (a -> b) /\ a needs a = ... ; use a free variable v instead
        let e = d("(var v ((a -> b) /\\ a))");
        let out = body.compose(&"x".into(), &e).unwrap();
        let j = out.check(SystemId::D).unwrap();
        assert_eq!(j.subject, parse_term("v v").unwrap());
        assert_eq!(j.ty, ty("b"));
        assert_eq!(out.free_leaves(&"v".into()).len(), 2);

        // grafting a closed derivation of the intersection
        let id_a = d("(absI z a (var z a))");
        let body2 = d("(appE (andE1 (var x (((a -> a) -> a -> a) /\\ (a -> a)))) (andE2 (var x (((a -> a) -> a -> a) /\\ (a -> a)))))");
        // the second conjunct is a -> a, built from the identity twice
        let e2 = Derivation::and_intro(d("(absI z (a -> a) (var z (a -> a)))"), id_a);
        let out2 = body2.compose(&"x".into(), &e2).unwrap();
        let j2 = out2.check(SystemId::D).unwrap();
        assert_eq!(j2.subject, parse_term("(\\z. z) (\\z. z)").unwrap());
        assert_eq!(j2.ty, ty("a -> a"));
    }

    #[test]
    fn composition_renames_capturing_binders() {
        // (λy. x y)[y/x] on derivations
        let dd = d("(absI y a (appE (var x (a -> b)) (var y a)))");
        let e = d("(var y (a -> b))");
        let out = dd.compose(&"x".into(), &e).unwrap();
        let j = out.check(SystemId::D).unwrap();
        assert_eq!(j.subject, parse_term("\\y'. y y'").unwrap());
        assert_eq!(j.ty, ty("a -> b"));
        assert!(out.context().contains(&"y".into(), &ty("a -> b")));
    }

    #[test]
    fn composition_freshens_shadowing() {
        // λz. x z with x := λz. z grafts a z-binder under the outer z
        let dd = d("(absI z a (appE (var x (a -> a)) (var z a)))");
        let e = d("(absI z a (var z a))");
        let raw = dd.compose_raw(&"x".into(), &e);
        assert!(!raw.subject().is_barendregt());
        let out = dd.compose(&"x".into(), &e).unwrap();
        let j = out.check(SystemId::D).unwrap();
        assert!(j.subject.alpha_eq(&raw.subject()));
        assert_eq!(j.subject, raw.subject().freshen());
    }

    #[test]
    fn top_subjects_are_substituted() {
        let dd = d("(appE (absI w top (var y a)) (top (x x)))");
        let e = d("(var z c)");
        let out = dd.compose(&"x".into(), &e).unwrap();
        assert_eq!(out.subject(), parse_term("(\\w. y) (z z)").unwrap());
        assert_eq!(out.check(SystemId::DOmega).unwrap().ty, ty("a"));
    }

    #[test]
    fn discharged_leaves_are_not_grafted() {
        let dd = d("(appE (absI x a (var x a)) (var x a))");
        // input violates the Barendregt discipline
        assert!(matches!(
            dd.compose(&"x".into(), &d("(var q a)")),
            Err(ComposeError::InvalidInput(_))
        ));
        let ok = d("(absI x a (var x a))");
        assert_eq!(ok.compose(&"x".into(), &d("(var q b)")).unwrap(), ok);
    }
}
