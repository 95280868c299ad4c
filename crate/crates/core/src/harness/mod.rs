//! Random well-typed terms and executable checks of the translation
//! properties: retraction, simulation, typing preservation, the π
//! correspondence and termination.

mod campaign;
mod diagram;
mod gen;

use std::fmt;

use thiserror::Error;

pub use campaign::{run_campaign, run_campaign_with, CampaignReport, CounterExampleRecord, KindReport};
pub use diagram::{check_diagram, check_diagram_with};
pub use gen::gen_typed_term;

use crate::types::Calculus;

/// Marks a simulation counterexample whose redex sits in a call hole
/// preceded by two or more components.
pub const CURRIED_PREFIX: &str = "non-value curried prefix";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UsagePolicy {
    AllInfinite,
    /// Usages drawn from `inf`, `1` and `0`; `let[0]` values may be ill-typed.
    Mixed,
}

/// Generation is a pure function of this configuration. A `max_size` of 0
/// is treated as 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GenConfig {
    pub seed: u64,
    pub max_size: usize,
    pub calculus: Calculus,
    pub usage_policy: UsagePolicy,
    pub arity_cap: usize,
    pub type_depth_cap: usize,
}

impl GenConfig {
    pub fn new(seed: u64, max_size: usize, calculus: Calculus) -> Self {
        GenConfig { seed, max_size: max_size.max(1), calculus, usage_policy: UsagePolicy::AllInfinite, arity_cap: 3, type_depth_cap: 3 }
    }

    pub fn with_usage_policy(mut self, policy: UsagePolicy) -> Self {
        self.usage_policy = policy;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DiagramKind {
    Retraction,
    AdmSimulation,
    MonadicLifting,
    CpsSimulation,
    PiRoundtrip,
    TypingPreservation,
    Termination,
}

impl DiagramKind {
    pub const ALL: [DiagramKind; 7] = [
        DiagramKind::Retraction,
        DiagramKind::AdmSimulation,
        DiagramKind::MonadicLifting,
        DiagramKind::CpsSimulation,
        DiagramKind::PiRoundtrip,
        DiagramKind::TypingPreservation,
        DiagramKind::Termination,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DiagramKind::Retraction => "retraction",
            DiagramKind::AdmSimulation => "adm-simulation",
            DiagramKind::MonadicLifting => "monadic-lifting",
            DiagramKind::CpsSimulation => "cps-simulation",
            DiagramKind::PiRoundtrip => "pi-roundtrip",
            DiagramKind::TypingPreservation => "typing-preservation",
            DiagramKind::Termination => "termination",
        }
    }

    pub fn from_name(s: &str) -> Option<DiagramKind> {
        DiagramKind::ALL.into_iter().find(|k| k.name() == s)
    }
}

impl fmt::Display for DiagramKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Deliberate implementation faults. Each should make some diagram fail.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Faults {
    /// Source steps leave the usage of the fired definition unchanged.
    pub skip_usage_decrement: bool,
    /// Read-back substitutes the bindings first to last.
    pub swap_readback_order: bool,
    /// The CPS diagram may only use one target step.
    pub drop_admin_cps_step: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// `depth` is the deepest target search needed, `steps` the longest
    /// evaluation observed.
    Pass { depth: usize, steps: usize },
    CounterExample { trace: Vec<String> },
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("not applicable: {0}")]
    NotApplicable(String),
}
