use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{check_diagram_with, gen_typed_term, DiagramError, DiagramKind, Faults, GenConfig, Verdict};
use crate::kernel::Term;
use crate::translate::{to_admin, to_admin_type};
use crate::typecheck::TypingContext;
use crate::types::TypeExpr;

/// Counterexamples kept per kind.
const KEPT: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterExampleRecord {
    pub item: usize,
    pub seed: u64,
    pub trace: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KindReport {
    pub kind: DiagramKind,
    pub pass: usize,
    pub fail: usize,
    pub not_applicable: usize,
    pub max_depth_used: usize,
    pub max_steps: usize,
    pub counterexamples: Vec<CounterExampleRecord>,
}

impl KindReport {
    pub fn total(&self) -> usize {
        self.pass + self.fail
    }

    pub fn summary_line(&self) -> String {
        format!("{} {}/{} maxDepthUsed={}", self.kind, self.pass, self.total(), self.max_depth_used)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CampaignReport {
    pub kinds: Vec<KindReport>,
}

impl CampaignReport {
    pub fn is_success(&self) -> bool {
        self.kinds.iter().all(|k| k.fail == 0)
    }

    pub fn get(&self, kind: DiagramKind) -> Option<&KindReport> {
        self.kinds.iter().find(|k| k.kind == kind)
    }

    /// One `<kind> <pass>/<total> maxDepthUsed=<n>` line per kind.
    pub fn summary(&self) -> String {
        self.kinds.iter().map(|k| k.summary_line() + "\n").collect()
    }
}

impl fmt::Display for CampaignReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in &self.kinds {
            writeln!(f, "{} notApplicable={} maxSteps={}", k.summary_line(), k.not_applicable, k.max_steps)?;
            for c in &k.counterexamples {
                writeln!(f, "  counterexample item={} seed={}", c.item, c.seed)?;
                for line in &c.trace {
                    writeln!(f, "    {line}")?;
                }
            }
        }
        Ok(())
    }
}

/// Seed of corpus item `i`.
fn item_seed(seed: u64, i: usize) -> u64 {
    ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)).gen()
}

/// Monadic terms come from translating λ-terms.
fn prepare(kind: DiagramKind, t: Term, ctx: TypingContext, ty: TypeExpr) -> (Term, TypingContext, TypeExpr) {
    match (kind, &t) {
        (DiagramKind::MonadicLifting, Term::Lam(m)) => {
            let actx = TypingContext::from_entries(ctx.entries().iter().map(|(x, t)| (x.clone(), to_admin_type(t))));
            match actx {
                Ok(actx) => (Term::Adm(to_admin(m)), actx, to_admin_type(&ty)),
                Err(_) => (t, ctx, ty),
            }
        }
        _ => (t, ctx, ty),
    }
}

pub fn run_campaign(kinds: &[DiagramKind], corpus_size: usize, cfg: &GenConfig) -> CampaignReport {
    run_campaign_with(kinds, corpus_size, cfg, Faults::default())
}

/// Items are generated and checked in parallel; the report is assembled in
/// item order, so it depends only on the arguments.
pub fn run_campaign_with(kinds: &[DiagramKind], corpus_size: usize, cfg: &GenConfig, faults: Faults) -> CampaignReport {
    let results: Vec<(u64, Vec<Result<Verdict, DiagramError>>)> = (0..corpus_size)
        .into_par_iter()
        .map(|i| {
            let seed = item_seed(cfg.seed, i);
            let (t, ctx, ty) = gen_typed_term(&cfg.with_seed(seed));
            let verdicts = kinds
                .iter()
                .map(|&kind| {
                    let (t, ctx, ty) = prepare(kind, t.clone(), ctx.clone(), ty.clone());
                    check_diagram_with(kind, &t, &ctx, &ty, faults)
                })
                .collect();
            (seed, verdicts)
        })
        .collect();
    let mut reports: Vec<KindReport> = kinds
        .iter()
        .map(|&kind| KindReport { kind, pass: 0, fail: 0, not_applicable: 0, max_depth_used: 0, max_steps: 0, counterexamples: Vec::new() })
        .collect();
    for (item, (seed, verdicts)) in results.into_iter().enumerate() {
        for (report, v) in reports.iter_mut().zip(verdicts) {
            match v {
                Ok(Verdict::Pass { depth, steps }) => {
                    report.pass += 1;
                    report.max_depth_used = report.max_depth_used.max(depth);
                    report.max_steps = report.max_steps.max(steps);
                }
                Ok(Verdict::CounterExample { trace }) => {
                    report.fail += 1;
                    if report.counterexamples.len() < KEPT {
                        report.counterexamples.push(CounterExampleRecord { item, seed, trace });
                    }
                }
                Err(DiagramError::NotApplicable(_)) => report.not_applicable += 1,
            }
        }
    }
    CampaignReport { kinds: reports }
}
