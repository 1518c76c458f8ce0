//! Acceptance suite. Runs without the libtest harness so that each criterion
//! prints one PASS/FAIL line; the process exits non-zero if any fails.

mod common;

use std::collections::HashSet;
use std::time::Instant;

use intersect_nd::deriv_reduction::{
    and_normalize, enumerate_steps, introduce_decompose, subformula_check, ReductionTrace,
};
use intersect_nd::oracle::{
    crosscheck_characterization, enumerate_terms, infer_bounded, infer_top_free_boundary, infer_with,
    reduction_graph, GraphBudgets, SearchBounds, SearchOptions,
};
use intersect_nd::subject_reduction::{normalize_by_leftmost, subject_reduce, SRResult};
use intersect_nd::syntax::{parse_term, MAX_LEFTMOST_STEPS};
use intersect_nd::{Derivation, IType, SystemId, Term};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{name, random_checked, DerivGen};

const CORPUS_SIZE: usize = 6;
/// Reducts explored per corpus term beyond the inferred derivation.
const REDUCT_CAP: usize = 64;

struct Outcome {
    pass: bool,
    detail: String,
    failures: Vec<String>,
}

impl Outcome {
    fn new(failures: Vec<String>, detail: String) -> Self {
        Outcome {
            pass: failures.is_empty(),
            detail,
            failures,
        }
    }
}

/// Artifacts shared between criteria.
#[derive(Default)]
struct Pool {
    /// ∧-normal derivations seen anywhere.
    and_normal: Vec<Derivation>,
    sr_results: Vec<SRResult>,
    normalization_traces: Vec<ReductionTrace>,
}

impl Pool {
    fn keep(&mut self, d: &Derivation) {
        if d.is_and_normal() {
            self.and_normal.push(d.clone());
        }
    }

    fn keep_trace(&mut self, trace: &ReductionTrace) {
        for d in trace.derivations() {
            self.keep(d);
        }
    }
}

fn corpus() -> Vec<Term> {
    enumerate_terms(CORPUS_SIZE, true).collect()
}

fn omega() -> Term {
    parse_term("(\\x. x x) (\\x. x x)").unwrap()
}

/// Subject reduction at every redex of every D-typable corpus term, and of
/// the reducts reached that way.
fn criterion_1(typed: &[(Term, Derivation)], pool: &mut Pool) -> Outcome {
    let mut failures = Vec::new();
    let mut reductions = 0;
    for (t, d0) in typed {
        pool.keep(d0);
        let mut seen = HashSet::from([d0.clone()]);
        let mut work = vec![d0.clone()];
        while let Some(d) = work.pop() {
            let input = d.check(SystemId::D).expect("worklist derivations check");
            let input_ctx = d.context();
            let subject = d.subject();
            for path in subject.redexes() {
                reductions += 1;
                let r = match subject_reduce(&d, &path) {
                    Ok(r) => r,
                    Err(e) => {
                        failures.push(format!("{t} at {path}: {e}"));
                        continue;
                    }
                };
                let out = &r.derivation;
                match out.check(SystemId::D) {
                    Err(e) => failures.push(format!("{t} at {path}: result does not check: {e}")),
                    Ok(j) if j.ty != input.ty => {
                        failures.push(format!("{t} at {path}: type {} became {}", input.ty, j.ty))
                    }
                    Ok(_) => {}
                }
                let reduct = subject.beta_step_at(&path).unwrap();
                if out.subject() != reduct {
                    failures.push(format!("{t} at {path}: subject {} is not {reduct}", out.subject()));
                }
                if !out.context().is_subset(&input_ctx) {
                    failures.push(format!("{t} at {path}: context grew"));
                }
                pool.keep_trace(&r.trace);
                if seen.len() < REDUCT_CAP && seen.insert(out.clone()) {
                    work.push(out.clone());
                }
                pool.sr_results.push(r);
            }
        }
    }
    Outcome::new(
        failures,
        format!("{} typable terms, {reductions} subject reductions", typed.len()),
    )
}

fn criterion_2(typed: &[(Term, Derivation)]) -> Outcome {
    let budgets = GraphBudgets::default();
    let mut failures = Vec::new();
    for (t, _) in typed {
        let g = reduction_graph(t, budgets.node_budget, budgets.step_budget);
        if !g.is_sn() {
            failures.push(format!("{t}: classified {:?}", g.classification));
        }
    }
    let omega = omega();
    let search = infer_with(&omega, SystemId::D, &SearchBounds::default(), SearchOptions::default());
    if search.derivation.is_some() {
        failures.push("Ω received a D-derivation".to_string());
    }
    let g = reduction_graph(&omega, budgets.node_budget, budgets.step_budget);
    if !g.edges.iter().any(|(a, _, b)| a == b) {
        failures.push("Ω graph has no self-loop".to_string());
    }
    Outcome::new(
        failures,
        format!(
            "{} typable terms SN; Ω untyped after {} unifications{}, self-loop found",
            typed.len(),
            search.unifications,
            if search.budget_exhausted { " (budget hit)" } else { "" }
        ),
    )
}

fn criterion_3(corpus: &[Term], pool: &mut Pool) -> Outcome {
    let bounds = SearchBounds::default();
    let witness = parse_term("(\\x. y) ((\\x. x x) (\\x. x x))").unwrap();
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut erased_top = 0;
    let terms = corpus.iter().chain(std::iter::once(&witness));
    for t in terms {
        let Some(d) = infer_top_free_boundary(t, &bounds) else { continue };
        checked += 1;
        erased_top += d.contains_top() as usize;
        let n = match normalize_by_leftmost(&d) {
            Ok(n) => n,
            Err(e) => {
                failures.push(format!("{t}: {e}"));
                continue;
            }
        };
        if !n.normal.is_normal() || n.derivation.subject() != n.normal {
            failures.push(format!("{t}: final subject {} is not β-normal", n.derivation.subject()));
        }
        if !n.is_system_d || n.derivation.contains_top() || !n.derivation.is_and_normal() {
            failures.push(format!("{t}: final derivation keeps ⊤ or an ∧-redex"));
        }
        if n.derivation.check(SystemId::D).is_err() {
            failures.push(format!("{t}: final derivation does not check in D"));
        }
        match t.leftmost_normalize(MAX_LEFTMOST_STEPS) {
            Some((nf, steps)) if steps == n.leftmost_steps && nf.alpha_eq(&n.normal) => {}
            other => failures.push(format!(
                "{t}: {} derivation steps against term engine {other:?}",
                n.leftmost_steps
            )),
        }
        if *t == witness && n.leftmost_steps != 1 {
            failures.push(format!("(λx.y)Ω took {} steps", n.leftmost_steps));
        }
        pool.keep_trace(&n.trace);
        pool.normalization_traces.push(n.trace);
    }
    if !pool.normalization_traces.iter().any(|tr| tr.start.subject() == witness) {
        failures.push("no ⊤-free-boundary derivation found for (λx.y)Ω".to_string());
    }
    Outcome::new(
        failures,
        format!("{checked} derivations normalized ({erased_top} using ⊤), witness in 1 step"),
    )
}

fn criterion_4(pool: &mut Pool) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let free = vec![(name("f"), None), (name("g"), None), (name("h"), None)];
    let mut gen = DerivGen::new(&mut rng, free, "v");
    gen.allow_top = true;
    let mut failures = Vec::new();
    let mut and_steps = 0;
    let mut with_redex = 0;
    for i in 0..10_000 {
        let d = random_checked(&mut gen, 30, SystemId::DOmega);
        let j = d.check(SystemId::DOmega).unwrap();
        with_redex += !d.is_and_normal() as usize;
        let trace = and_normalize(&d);
        and_steps += trace.len();
        let out = trace.last();
        if !out.is_and_normal() {
            failures.push(format!("#{i}: output keeps an ∧-redex"));
        }
        match out.check(SystemId::DOmega) {
            Ok(j2) if j2.ty == j.ty && out.subject() == d.subject() => {}
            Ok(j2) => failures.push(format!("#{i}: judgement changed to {j2:?}")),
            Err(e) => failures.push(format!("#{i}: output does not check: {e}")),
        }
        if !out.context().is_subset(&d.context()) {
            failures.push(format!("#{i}: context grew"));
        }
        pool.keep(out);
    }
    Outcome::new(
        failures,
        format!("10000 derivations ({with_redex} with ∧-redexes), {and_steps} ∧-steps"),
    )
}

fn criterion_5(pool: &Pool) -> Outcome {
    let mut failures = Vec::new();
    let mut seen = HashSet::new();
    let (mut intro, mut sub) = (0, 0);
    for d in &pool.and_normal {
        for (_, node) in d.nodes() {
            if !seen.insert(node.clone()) || node.check(SystemId::DOmega).is_err() {
                continue;
            }
            let ty = node.conclusion_type().unwrap();
            let qualifies = ty != IType::Top && !matches!(node, Derivation::AndIntro(..));
            if !qualifies {
                continue;
            }
            let subject = node.subject();
            if subject.is_abs() {
                intro += 1;
                if let Err(e) = introduce_decompose(node) {
                    failures.push(format!("introduce_decompose on {subject}: {e}"));
                }
            } else if subject.head_var().is_some() {
                sub += 1;
                match subformula_check(node) {
                    Ok(w) if w.conclusion.is_subformula_of(&w.witness) && node.context().contains(&w.entry.0, &w.entry.1) => {}
                    Ok(w) => failures.push(format!("subformula_check on {subject}: bad witness {w:?}")),
                    Err(e) => failures.push(format!("subformula_check on {subject}: {e}")),
                }
            }
        }
    }
    Outcome::new(
        failures,
        format!("{intro} abstraction and {sub} head-variable subderivations"),
    )
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut failures = Vec::new();
    let mut grafted = 0;
    for i in 0..1_000 {
        let e = {
            let free = vec![(name("f"), None), (name("g"), None)];
            let mut gen = DerivGen::new(&mut rng, free, "e");
            random_checked(&mut gen, 12, SystemId::DOmega)
        };
        let a = e.conclusion_type().unwrap();
        let x = name("x");
        let d = {
            let free = vec![(x.clone(), Some(a.clone())), (name("h"), None)];
            let mut gen = DerivGen::new(&mut rng, free, "b");
            // binders named after e's free variables force capture-avoiding renames
            gen.binder_pool = vec![name("f"), name("g")];
            random_checked(&mut gen, 20, SystemId::DOmega)
        };
        grafted += d.free_leaves(&x).len();
        let expected = d.subject().subst(&e.subject(), &x);
        let ty = d.conclusion_type().unwrap();
        match d.compose(&x, &e) {
            Err(err) => failures.push(format!("#{i}: {err}")),
            Ok(c) => {
                match c.check(SystemId::DOmega) {
                    Ok(j) if j.ty == ty => {}
                    Ok(j) => failures.push(format!("#{i}: type {ty} became {}", j.ty)),
                    Err(err) => failures.push(format!("#{i}: composite does not check: {err}")),
                }
                if !c.subject().alpha_eq(&expected) || c.subject() != expected.freshen() {
                    failures.push(format!("#{i}: subject {} is not {expected}", c.subject()));
                }
            }
        }
    }
    Outcome::new(failures, format!("1000 pairs, {grafted} leaves grafted"))
}

fn criterion_7(pool: &Pool) -> Outcome {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    // the corpus has few redexes, so random D-derivations widen the pool
    let mut candidates: Vec<SRResult> = pool.sr_results.clone();
    let mut gen_rng = ChaCha8Rng::seed_from_u64(70);
    let free = vec![(name("f"), None), (name("g"), None)];
    let mut gen = DerivGen::new(&mut gen_rng, free, "v");
    while candidates.len() < 1_000 {
        let d = random_checked(&mut gen, 30, SystemId::D);
        for path in d.subject().redexes() {
            match subject_reduce(&d, &path) {
                Ok(r) => candidates.push(r),
                Err(e) => failures.push(format!("{} at {path}: {e}", d.subject())),
            }
        }
    }
    let sample: Vec<&SRResult> = candidates.choose_multiple(&mut rng, 100).collect();
    let traces = sample
        .iter()
        .map(|r| &r.trace)
        .chain(pool.normalization_traces.iter());
    let mut pairs = 0;
    for trace in traces {
        let mut prev = &trace.start;
        for (label, next) in &trace.steps {
            pairs += 1;
            if !enumerate_steps(prev).iter().any(|(l, d)| l == label && d == next) {
                failures.push(format!("step {label} from {} not enumerated", prev.subject()));
            }
            prev = next;
        }
    }
    if sample.len() < 100 {
        failures.push(format!("only {} SRResults available", sample.len()));
    }

    let report = crosscheck_characterization(5, &SearchBounds::default(), &GraphBudgets::default());
    let s = report.summary;
    let misses: Vec<String> = report
        .records
        .iter()
        .filter(|r| r.sn && !r.d_typable)
        .map(|r| r.term.to_string())
        .collect();
    let mut detail = format!(
        "{} of {} SRResults and {} normalizations, {pairs} steps; completeness at size ≤ 5: {}/{} ({:.1}%)",
        sample.len(),
        candidates.len(),
        pool.normalization_traces.len(),
        s.sn_with_d_derivation,
        s.sn,
        100.0 * s.completeness_hit_rate()
    );
    if !misses.is_empty() {
        detail.push_str(&format!(", bounds artifacts: {}", misses.join("; ")));
    }
    Outcome::new(failures, detail)
}

fn main() {
    let started = Instant::now();
    let corpus = corpus();
    let bounds = SearchBounds::default();
    let typed: Vec<(Term, Derivation)> = corpus
        .iter()
        .filter_map(|t| infer_bounded(t, SystemId::D, &bounds).map(|d| (t.clone(), d)))
        .collect();
    let mut pool = Pool::default();

    let outcomes = [
        ("1 subject reduction", criterion_1(&typed, &mut pool)),
        ("2 strong normalization", criterion_2(&typed)),
        ("3 leftmost normalization", criterion_3(&corpus, &mut pool)),
        ("4 ∧-normalization", criterion_4(&mut pool)),
        ("5 structural properties", criterion_5(&pool)),
        ("6 composition", criterion_6()),
        ("7 trace validity", criterion_7(&pool)),
    ];

    let mut all = true;
    for (label, o) in &outcomes {
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {label}: {}", o.detail);
        for f in o.failures.iter().take(10) {
            println!("    {f}");
        }
        if o.failures.len() > 10 {
            println!("    ... {} more", o.failures.len() - 10);
        }
        all &= o.pass;
    }
    println!(
        "corpus: {} closed terms of size ≤ {CORPUS_SIZE}, finished in {:.1}s",
        corpus.len(),
        started.elapsed().as_secs_f64()
    );
    if !all {
        std::process::exit(1);
    }
}

