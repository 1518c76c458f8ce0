use std::collections::BTreeSet;

use crate::syntax::ops::CanonicalNames;
use crate::syntax::{Term, VarName};

/// Name of the `i`-th distinct free variable in an enumerated term.
pub fn free_name(i: usize) -> VarName {
    VarName::new(format!("f{i}")).expect("valid identifier")
}

struct Generator {
    binders: CanonicalNames,
    closed: bool,
}

impl Generator {
    /// Terms of exactly `size` nodes under `depth` binders, given `free`
    /// free variables already named; each comes with its updated free count.
    fn terms(&self, size: usize, depth: usize, free: usize) -> Vec<(Term, usize)> {
        let mut out = Vec::new();
        if size == 1 {
            for d in 0..depth {
                out.push((Term::Var(self.binders.at(d).clone()), free));
            }
            if !self.closed {
                for i in 0..=free {
                    out.push((Term::Var(free_name(i)), free.max(i + 1)));
                }
            }
            return out;
        }
        for (body, f) in self.terms(size - 1, depth + 1, free) {
            out.push((Term::Abs(self.binders.at(depth).clone(), Box::new(body)), f));
        }
        for fun_size in 1..size - 1 {
            for (fun, f1) in self.terms(fun_size, depth, free) {
                for (arg, f2) in self.terms(size - 1 - fun_size, depth, f1) {
                    out.push((Term::app(fun.clone(), arg), f2));
                }
            }
        }
        out
    }
}

/// All α-canonical terms with at most `max_size` nodes, smallest first.
/// Binders are named by nesting depth (`x`, `y`, `z`, …) and free variables
/// `f0`, `f1`, … by first occurrence, so each α-class (and each renaming of
/// free variables) appears exactly once.
pub fn enumerate_terms(max_size: usize, closed: bool) -> impl Iterator<Item = Term> {
    let generator = Generator {
        binders: CanonicalNames::new(&BTreeSet::new(), max_size),
        closed,
    };
    (1..=max_size).flat_map(move |size| {
        generator
            .terms(size, 0, 0)
            .into_iter()
            .map(|(t, _)| t)
            .collect::<Vec<_>>()
    })
}
