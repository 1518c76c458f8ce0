use std::collections::{HashMap, VecDeque};

use crate::syntax::{Term, TermPath};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// The whole reduction graph was explored, it is acyclic, so every
    /// reduction path ends in a normal form.
    SN,
    /// Not shown SN, but the leftmost reduction path reaches a normal form.
    LeftmostNormalizing,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GraphStats {
    pub nodes: usize,
    pub edges: usize,
    /// β-steps performed while exploring.
    pub steps: usize,
}

/// β-reduction graph of a term up to α-equivalence, explored breadth-first.
#[derive(Debug, Clone)]
pub struct ReductionGraph {
    /// α-canonical nodes in discovery order; `nodes[0]` is the start term.
    pub nodes: Vec<Term>,
    /// `(from, redex path, to)` as indices into `nodes`.
    pub edges: Vec<(usize, TermPath, usize)>,
    pub classification: Classification,
    /// Every reachable node was expanded.
    pub complete: bool,
    pub cycle_found: bool,
    /// Normal form and step count of the leftmost path, if it terminated
    /// within the step budget.
    pub leftmost: Option<(Term, usize)>,
    pub stats: GraphStats,
}

impl ReductionGraph {
    pub fn edge_terms(&self) -> impl Iterator<Item = (&Term, &TermPath, &Term)> {
        self.edges.iter().map(|(a, p, b)| (&self.nodes[*a], p, &self.nodes[*b]))
    }

    pub fn is_sn(&self) -> bool {
        self.classification == Classification::SN
    }

    pub fn leftmost_normalizes(&self) -> bool {
        self.leftmost.is_some()
    }
}

/// Explores every one-step reduct of `t` up to `node_budget` distinct nodes
/// and `step_budget` β-steps. A self-loop stops the exploration at once;
/// other cycles are found on the explored part afterwards.
pub fn reduction_graph(t: &Term, node_budget: usize, step_budget: usize) -> ReductionGraph {
    let start = t.canonical();
    let mut nodes = vec![start.clone()];
    let mut index: HashMap<Term, usize> = HashMap::from([(start, 0)]);
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    let mut steps = 0;
    let mut complete = true;
    let mut cycle_found = false;

    'explore: while let Some(i) = queue.pop_front() {
        for path in nodes[i].redexes() {
            if steps == step_budget {
                complete = false;
                break 'explore;
            }
            steps += 1;
            let next = nodes[i].beta_step_at(&path).expect("redex path").canonical();
            let j = match index.get(&next) {
                Some(&j) => j,
                None if nodes.len() < node_budget => {
                    nodes.push(next.clone());
                    index.insert(next, nodes.len() - 1);
                    queue.push_back(nodes.len() - 1);
                    nodes.len() - 1
                }
                None => {
                    complete = false;
                    continue;
                }
            };
            edges.push((i, path, j));
            if i == j {
                cycle_found = true;
                complete = false;
                break 'explore;
            }
        }
    }
    if !cycle_found {
        cycle_found = has_cycle(nodes.len(), &edges);
    }

    let leftmost = t.leftmost_normalize(step_budget);
    let classification = if complete && !cycle_found {
        Classification::SN
    } else if leftmost.is_some() {
        Classification::LeftmostNormalizing
    } else {
        Classification::Inconclusive
    };
    ReductionGraph {
        stats: GraphStats {
            nodes: nodes.len(),
            edges: edges.len(),
            steps,
        },
        nodes,
        edges,
        classification,
        complete,
        cycle_found,
        leftmost,
    }
}

fn has_cycle(n: usize, edges: &[(usize, TermPath, usize)]) -> bool {
    let mut succ = vec![Vec::new(); n];
    for (a, _, b) in edges {
        succ[*a].push(*b);
    }
    // 0 unvisited, 1 on the stack, 2 done
    let mut state = vec![0u8; n];
    for root in 0..n {
        if state[root] != 0 {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        state[root] = 1;
        while let Some((v, k)) = stack.pop() {
            if let Some(&w) = succ[v].get(k) {
                stack.push((v, k + 1));
                match state[w] {
                    0 => {
                        state[w] = 1;
                        stack.push((w, 0));
                    }
                    1 => return true,
                    _ => {}
                }
            } else {
                state[v] = 2;
            }
        }
    }
    false
}
