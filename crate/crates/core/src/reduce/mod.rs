//! Redex enumeration, single steps and bounded evaluation.
//!
//! Paths follow the kernel's child numbering. For administrative terms the
//! path addresses the call inside the body of the top declaration, and the
//! definition site is the index of the consumed top-level binding. For
//! processes both are process paths, the site pointing at the restriction.

mod adm;
mod lam;
mod pi;

use std::collections::{HashMap, VecDeque};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::kernel::{LamTerm, Term};
use crate::types::Calculus;

pub const DEFAULT_STEP_BUDGET: usize = 100_000;
pub const DEFAULT_GRAPH_BUDGET: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    BetaV,
    BetaVAdm,
    PiBang,
    PiOnce,
}

impl Rule {
    pub fn tag(self) -> &'static str {
        match self {
            Rule::BetaV => "beta-v",
            Rule::BetaVAdm => "beta-v-adm",
            Rule::PiBang => "pi-bang",
            Rule::PiOnce => "pi-once",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RedexDescriptor {
    pub path: Vec<usize>,
    pub rule: Rule,
    pub definition_site: Option<Vec<usize>>,
}

impl RedexDescriptor {
    /// Path rendered as `0.1.1`, or `.` for the root.
    pub fn path_string(&self) -> String {
        render_path(&self.path)
    }
}

pub fn render_path(path: &[usize]) -> String {
    if path.is_empty() {
        ".".to_string()
    } else {
        path.iter().map(ToString::to_string).collect::<Vec<_>>().join(".")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepBudget {
    max_steps: usize,
}

impl StepBudget {
    /// `None` for a zero budget.
    pub fn new(max_steps: usize) -> Option<Self> {
        (max_steps >= 1).then_some(StepBudget { max_steps })
    }

    pub fn max_steps(self) -> usize {
        self.max_steps
    }
}

impl Default for StepBudget {
    fn default() -> Self {
        StepBudget { max_steps: DEFAULT_STEP_BUDGET }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    EnumerateAll,
    Seeded(u64),
}

/// Knobs for deliberately wrong contractions, used to check that the
/// simulation checks notice them.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepConfig {
    pub skip_usage_decrement: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("no redex {} at path {}", .0.rule, .0.path_string())]
    StaleRedex(RedexDescriptor),
    #[error("a {sort} term does not belong to calculus {calculus}")]
    WrongCalculus { calculus: Calculus, sort: &'static str },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionGraph {
    /// Canonical congruence forms; node 0 is the start.
    pub nodes: Vec<Term>,
    pub edges: Vec<(usize, usize, RedexDescriptor)>,
    /// False when the node budget stopped the exploration.
    pub complete: bool,
}

impl ReductionGraph {
    /// Nodes without outgoing edges.
    pub fn normal_forms(&self) -> Vec<usize> {
        let mut has_out = vec![false; self.nodes.len()];
        for (from, _, _) in &self.edges {
            has_out[*from] = true;
        }
        (0..self.nodes.len()).filter(|&i| !has_out[i]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    NormalForm { term: Term, steps: usize, trace: Vec<RedexDescriptor> },
    BudgetExhausted { term: Term, steps: usize, trace: Vec<RedexDescriptor> },
    ReductionGraph(ReductionGraph),
}

impl Outcome {
    pub fn is_normal_form(&self) -> bool {
        matches!(self, Outcome::NormalForm { .. })
    }
}

fn sort_matches(t: &Term, which: Calculus) -> bool {
    match t {
        Term::Lam(_) => which.is_lambda(),
        Term::Adm(_) => which.is_admin(),
        Term::Pi(_) => which == Calculus::Pi,
    }
}

/// Every redex in evaluation position, leftmost-outermost first.
pub fn find_redexes(t: &Term, which: Calculus) -> Vec<RedexDescriptor> {
    if !sort_matches(t, which) {
        return Vec::new();
    }
    match t {
        Term::Lam(m) => lam::redexes(m),
        Term::Adm(d) => adm::redexes(d),
        Term::Pi(p) => pi::redexes(p),
    }
}

pub fn step_at(t: &Term, which: Calculus, r: &RedexDescriptor) -> Result<Term, ReduceError> {
    step_at_with(t, which, r, StepConfig::default())
}

pub fn step_at_with(t: &Term, which: Calculus, r: &RedexDescriptor, cfg: StepConfig) -> Result<Term, ReduceError> {
    if !sort_matches(t, which) {
        return Err(ReduceError::WrongCalculus { calculus: which, sort: t.sort() });
    }
    if !find_redexes(t, which).contains(r) {
        return Err(ReduceError::StaleRedex(r.clone()));
    }
    Ok(match t {
        Term::Lam(m) => Term::Lam(lam::contract(m, r)),
        Term::Adm(d) => Term::Adm(adm::contract(d, r, cfg)),
        Term::Pi(p) => Term::Pi(pi::contract(p, r)),
    })
}

/// Every one-step reduct, in redex order.
pub fn successors(t: &Term, which: Calculus) -> Vec<(RedexDescriptor, Term)> {
    successors_with(t, which, StepConfig::default())
}

pub fn successors_with(t: &Term, which: Calculus, cfg: StepConfig) -> Vec<(RedexDescriptor, Term)> {
    find_redexes(t, which)
        .into_iter()
        .map(|r| {
            let next = step_at_with(t, which, &r, cfg).expect("redex just enumerated");
            (r, next)
        })
        .collect()
}

pub fn evaluate(t: &Term, which: Calculus, strategy: Strategy, budget: StepBudget) -> Outcome {
    match strategy {
        Strategy::Leftmost => run(t, which, budget, |_| 0),
        Strategy::Seeded(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            run(t, which, budget, move |n| rng.gen_range(0..n))
        }
        Strategy::EnumerateAll => Outcome::ReductionGraph(explore(t, which, budget.max_steps)),
    }
}

fn run(t: &Term, which: Calculus, budget: StepBudget, mut pick: impl FnMut(usize) -> usize) -> Outcome {
    let mut cur = t.clone();
    let mut trace = Vec::new();
    loop {
        let redexes = find_redexes(&cur, which);
        if redexes.is_empty() {
            return Outcome::NormalForm { steps: trace.len(), term: cur, trace };
        }
        if trace.len() >= budget.max_steps {
            return Outcome::BudgetExhausted { steps: trace.len(), term: cur, trace };
        }
        let r = redexes[pick(redexes.len())].clone();
        cur = step_at(&cur, which, &r).expect("redex just enumerated");
        trace.push(r);
    }
}

fn explore(t: &Term, which: Calculus, max_nodes: usize) -> ReductionGraph {
    let start = t.normalize();
    let mut index: HashMap<Term, usize> = HashMap::new();
    index.insert(start.clone(), 0);
    let mut graph = ReductionGraph { nodes: vec![start], edges: Vec::new(), complete: true };
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let here = graph.nodes[i].clone();
        for (r, next) in successors(&here, which) {
            let next = next.normalize();
            let j = match index.get(&next) {
                Some(&j) => j,
                None => {
                    if graph.nodes.len() >= max_nodes {
                        graph.complete = false;
                        continue;
                    }
                    graph.nodes.push(next.clone());
                    index.insert(next, graph.nodes.len() - 1);
                    queue.push_back(graph.nodes.len() - 1);
                    graph.nodes.len() - 1
                }
            };
            graph.edges.push((i, j, r));
        }
    }
    graph
}

/// Call-by-value redexes of λ_p: anywhere not under an abstraction.
pub fn find_weak_redexes(t: &LamTerm) -> Vec<RedexDescriptor> {
    lam::weak_redexes(t)
}

pub fn step_weak(t: &LamTerm, r: &RedexDescriptor) -> Result<LamTerm, ReduceError> {
    if !lam::weak_redexes(t).contains(r) {
        return Err(ReduceError::StaleRedex(r.clone()));
    }
    Ok(lam::contract(t, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_adm, parse_lam, parse_pi};
    use crate::types::Usage;

    fn budget(n: usize) -> StepBudget {
        StepBudget::new(n).unwrap()
    }

    #[test]
    fn beta_v_at_root() {
        let t = Term::Lam(parse_lam("(\\x:Unit. x) *").unwrap());
        let rs = find_redexes(&t, Calculus::Lam);
        assert_eq!(rs.len(), 1);
        assert!(rs[0].path.is_empty());
        assert_eq!(step_at(&t, Calculus::Lam, &rs[0]).unwrap(), Term::Lam(LamTerm::Star));
    }

    #[test]
    fn zero_usage_is_inert() {
        let t = Term::Adm(parse_adm("let[0] x = \\y:Ch[Unit]. y in @(x, z)").unwrap());
        assert!(find_redexes(&t, Calculus::AdmPar).is_empty());
    }

    #[test]
    fn only_the_first_non_identifier_argument_is_evaluated() {
        let t = Term::Adm(
            parse_adm(
                "let f = \\u:Ch[Unit], v:Ch[Unit]. u in let g = \\u:Ch[Unit]. u in let h = \\u:Ch[Unit]. u in \
                 let a = * in let b = * in @(f, @(g, a), @(h, b))",
            )
            .unwrap(),
        );
        let rs = find_redexes(&t, Calculus::Adm);
        assert_eq!(rs.len(), 1);
        assert_eq!(rs[0].path, vec![1]);
    }

    #[test]
    fn once_usage_decrements() {
        let t = Term::Adm(parse_adm("let[1] x = \\y:Ch[Unit]. y in @(x, z)").unwrap());
        let r = &find_redexes(&t, Calculus::AdmPar)[0];
        let next = step_at(&t, Calculus::AdmPar, r).unwrap();
        let expected = Term::Adm(parse_adm("let[0] x = \\y:Ch[Unit]. y in z").unwrap());
        assert!(next.alpha_equal(&expected), "{next}");
        let faulty = step_at_with(&t, Calculus::AdmPar, r, StepConfig { skip_usage_decrement: true }).unwrap();
        let Term::Adm(d) = faulty else { unreachable!() };
        assert_eq!(d.bindings[0].usage, Usage::One);
    }

    #[test]
    fn pi_rules() {
        let once = Term::Pi(parse_pi("new x (x(y).w!(y) | x!(z))").unwrap());
        let r = &find_redexes(&once, Calculus::Pi)[0];
        assert_eq!(r.rule, Rule::PiOnce);
        let got = step_at(&once, Calculus::Pi, r).unwrap();
        assert!(got.alpha_equal(&Term::Pi(parse_pi("new x (w!(z))").unwrap())), "{got}");

        let bang = Term::Pi(parse_pi("new x (!x(y).w!(y) | x!(z))").unwrap());
        let r = &find_redexes(&bang, Calculus::Pi)[0];
        assert_eq!(r.rule, Rule::PiBang);
        let got = step_at(&bang, Calculus::Pi, r).unwrap();
        assert!(got.alpha_equal(&Term::Pi(parse_pi("new x (!x(y).w!(y) | w!(z))").unwrap())), "{got}");
    }

    #[test]
    fn stale_redex_is_reported() {
        let t = Term::Lam(parse_lam("(\\x:Unit. x) *").unwrap());
        let r = find_redexes(&t, Calculus::Lam)[0].clone();
        let next = step_at(&t, Calculus::Lam, &r).unwrap();
        assert!(matches!(step_at(&next, Calculus::Lam, &r), Err(ReduceError::StaleRedex(_))));
    }

    #[test]
    fn evaluation_outcomes() {
        assert_eq!(
            evaluate(&Term::Lam(LamTerm::Star), Calculus::Lam, Strategy::Leftmost, budget(1)),
            Outcome::NormalForm { term: Term::Lam(LamTerm::Star), steps: 0, trace: vec![] }
        );
        let p1 = Term::Pi(parse_pi("new x (!x(y).x!(y) | x!(z))").unwrap());
        assert!(matches!(evaluate(&p1, Calculus::Pi, Strategy::Leftmost, budget(100)), Outcome::BudgetExhausted { steps: 100, .. }));
        let p2 = Term::Pi(parse_pi("new x (!x(y).x'!(y) | new x' (!x'(y).x!(y) | x!(y)))").unwrap());
        assert!(matches!(evaluate(&p2, Calculus::Pi, Strategy::Leftmost, budget(100)), Outcome::BudgetExhausted { .. }));
    }

    #[test]
    fn parallel_choices_show_up_in_the_graph() {
        let t = Term::Adm(
            parse_adm("let x = * in let[1] f = \\u:Ch[Unit]. @(a, u) in @(f, x) | @(f, x)").unwrap(),
        );
        let Outcome::ReductionGraph(g) = evaluate(&t, Calculus::AdmPar, Strategy::EnumerateAll, budget(100)) else {
            panic!()
        };
        assert!(g.complete);
        // both calls compete for the single use
        assert_eq!(g.nodes.len(), 3);
        assert_eq!(g.normal_forms().len(), 2);
    }

    #[test]
    fn weak_reduction_skips_bodies() {
        let t = parse_lam("\\z:Unit. (\\x:Unit. x) z").unwrap();
        assert!(find_weak_redexes(&t).is_empty());
        let t = parse_lam("p ((\\x:Unit. x) *)").unwrap();
        assert_eq!(find_weak_redexes(&t).len(), 1);
    }
}
