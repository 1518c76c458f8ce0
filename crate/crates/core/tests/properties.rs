mod common;

use intersect_nd::deriv_reduction::{and_normalize, is_one_step, ReductionTrace};
use intersect_nd::derivation::{parse_derivation, serialize_derivation};
use intersect_nd::subject_reduction::subject_reduce;
use intersect_nd::{Derivation, IType, SystemId};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{erased_type, name, random_checked, random_type, DerivGen};

fn derivation(seed: u64, sys: SystemId) -> Derivation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gen = DerivGen::new(&mut rng, vec![(name("f"), None), (name("g"), None)], "v");
    gen.allow_top = sys == SystemId::DOmega;
    random_checked(&mut gen, 30, sys)
}

fn assert_steps_valid(trace: &ReductionTrace) {
    let mut prev = &trace.start;
    for (label, next) in &trace.steps {
        assert!(is_one_step(prev, next), "{label} is not a ↝ step");
        prev = next;
    }
}

/// Replaces the type of the `k`-th leaf (in preorder) by `ty`.
fn retype_leaf(d: &Derivation, k: &mut usize, ty: &IType) -> Derivation {
    match d {
        Derivation::VarAxiom(x, _) if *k == 0 => {
            *k = usize::MAX;
            Derivation::var(x.clone(), ty.clone())
        }
        Derivation::VarAxiom(..) | Derivation::TopAxiom(_) => {
            *k = k.saturating_sub(1);
            d.clone()
        }
        Derivation::ArrowIntro(x, a, b) => Derivation::arrow_intro(x.clone(), a.clone(), retype_leaf(b, k, ty)),
        Derivation::ArrowElim(f, a) => {
            let f = retype_leaf(f, k, ty);
            Derivation::arrow_elim(f, retype_leaf(a, k, ty))
        }
        Derivation::AndIntro(l, r) => {
            let l = retype_leaf(l, k, ty);
            Derivation::and_intro(l, retype_leaf(r, k, ty))
        }
        Derivation::AndElim(s, sub) => Derivation::and_elim(*s, retype_leaf(sub, k, ty)),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn serialization_round_trips(seed in any::<u64>()) {
        let d = derivation(seed, SystemId::DOmega);
        prop_assert_eq!(parse_derivation(&serialize_derivation(&d)).unwrap(), d);
    }

    #[test]
    fn and_normalization_steps_are_one_step_reductions(seed in any::<u64>()) {
        let d = derivation(seed, SystemId::DOmega);
        let trace = and_normalize(&d);
        assert_steps_valid(&trace);
        let out = trace.last();
        prop_assert!(out.is_and_normal());
        prop_assert_eq!(out.check(SystemId::DOmega).unwrap(), d.check(SystemId::DOmega).unwrap());
        // the number of ∧-eliminations bounds the number of steps
        let elims = d.nodes().iter().filter(|(_, n)| matches!(n, Derivation::AndElim(..))).count();
        prop_assert!(trace.len() <= elims);
    }

    #[test]
    fn subject_reduction_on_random_derivations(seed in any::<u64>()) {
        let d = derivation(seed, SystemId::D);
        let j = d.check(SystemId::D).unwrap();
        let ctx = d.context();
        for path in d.subject().redexes() {
            let r = subject_reduce(&d, &path).unwrap();
            let out = r.derivation.check(SystemId::D).unwrap();
            prop_assert_eq!(&out.ty, &j.ty);
            prop_assert_eq!(r.derivation.subject(), d.subject().beta_step_at(&path).unwrap());
            prop_assert!(r.derivation.context().is_subset(&ctx));
            assert_steps_valid(&r.trace);
        }
    }

    #[test]
    fn retyped_leaves_agree_with_erased_proof_check(seed in any::<u64>()) {
        let d = derivation(seed, SystemId::D);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let leaves = d.nodes().iter().filter(|(_, n)| matches!(n, Derivation::VarAxiom(..))).count();
        let mut k = rng.gen_range(0..leaves);
        let ty = random_type(&mut rng, 2);
        let mutated = retype_leaf(&d, &mut k, &ty);
        // only types changed, so the subject-blind proof check must agree
        let library = mutated.check(SystemId::D).ok().map(|j| j.ty);
        prop_assert_eq!(library, erased_type(&mutated, false));
    }

    #[test]
    fn composition_matches_substitution(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = {
            let mut gen = DerivGen::new(&mut rng, vec![(name("f"), None), (name("g"), None)], "e");
            random_checked(&mut gen, 10, SystemId::D)
        };
        let a = e.conclusion_type().unwrap();
        let x = name("x");
        let d = {
            let mut gen = DerivGen::new(&mut rng, vec![(x.clone(), Some(a)), (name("h"), None)], "b");
            gen.binder_pool = vec![name("f"), name("g")];
            random_checked(&mut gen, 20, SystemId::D)
        };
        let c = d.compose(&x, &e).unwrap();
        prop_assert_eq!(c.check(SystemId::D).unwrap().ty, d.conclusion_type().unwrap());
        let expected = d.subject().subst(&e.subject(), &x);
        prop_assert!(c.subject().alpha_eq(&expected));
        prop_assert_eq!(c.subject(), expected.freshen());
        prop_assert!(c.free_leaves(&x).is_empty() || e.subject().has_free(&x));
    }
}
