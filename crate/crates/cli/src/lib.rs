//! The `picomp` command line: parse, check, evaluate, translate, expand and
//! verify terms of the administrative, CPS and π calculi.

use std::io::Read;
use std::path::Path;

use clap::{Parser, ValueEnum};
use thiserror::Error;

use picomp_core::encodings::{expand_encoding, EncodingArg, EncodingError, EncodingName};
use picomp_core::harness::{gen_typed_term, run_campaign, DiagramKind, GenConfig, UsagePolicy};
use picomp_core::ident::{Ident, NameSupply};
use picomp_core::kernel::{AdmValue, Term};
use picomp_core::reduce::{evaluate, step_at, Outcome, StepBudget, Strategy};
use picomp_core::syntax::{locate_ident, parse_adm, parse_term, parse_type, pretty_term, print_term, ParseError};
use picomp_core::translate::{cps_transform, embed_parallel, from_pi, readback, saturate_usages, to_admin, to_pi, TranslateError};
use picomp_core::typecheck::{infer_type, TypeError, TypingContext};
use picomp_core::types::Calculus;

pub const SEED_ENV: &str = "PICOMP_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Verb {
    Check,
    Eval,
    Adm,
    Readback,
    Cps,
    ToPi,
    FromPi,
    Embed,
    Saturate,
    Expand,
    Verify,
    Gen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Pretty,
    Trace,
    Summary,
    Source,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Leftmost,
    All,
    Seeded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Inf,
    Mixed,
}

#[derive(Debug, Parser)]
#[command(name = "picomp", version, about = "Typed λ, administrative, CPS and π calculi: checks, translations and simulation campaigns")]
pub struct Cli {
    pub verb: Verb,
    /// A file, `-` for stdin, or the term itself. `expand` takes the
    /// encoding name here.
    pub input: Option<String>,
    /// lam, lam-par, adm, adm-par, cps, cps-par or pi. Defaults to the
    /// natural source calculus of the verb.
    #[arg(short, long, value_parser = parse_calculus)]
    pub calculus: Option<Calculus>,
    /// Typing assumption `name:Type`; repeatable.
    #[arg(long = "var", value_name = "NAME:TYPE")]
    pub vars: Vec<String>,
    /// Encoding argument for `expand`, in signature order; repeatable.
    #[arg(long = "arg", value_name = "TERM")]
    pub args: Vec<String>,
    #[arg(long, value_enum, default_value = "leftmost")]
    pub strategy: StrategyArg,
    #[arg(long, default_value_t = 100_000)]
    pub budget: usize,
    /// Overridden by the PICOMP_SEED environment variable.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub corpus_size: usize,
    #[arg(long, default_value_t = 15)]
    pub max_size: usize,
    #[arg(long, value_enum, default_value = "inf")]
    pub usages: PolicyArg,
    /// Diagram to check with `verify`; repeatable, all by default.
    #[arg(long = "kind", value_parser = parse_kind)]
    pub kinds: Vec<DiagramKind>,
    #[arg(long, value_enum, default_value = "pretty")]
    pub format: Format,
}

fn parse_calculus(s: &str) -> Result<Calculus, String> {
    Calculus::from_name(s).ok_or_else(|| format!("unknown calculus `{s}`"))
}

fn parse_kind(s: &str) -> Result<DiagramKind, String> {
    DiagramKind::from_name(s).ok_or_else(|| format!("unknown diagram `{s}`"))
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read input: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("{kind}: {error}{}", span.map(|(l, c)| format!("\n  at {l}:{c}")).unwrap_or_default())]
    Type { kind: String, error: Box<TypeError>, span: Option<(usize, usize)> },
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Encoding(#[from] EncodingError),
    #[error("{0}")]
    Usage(String),
}

/// What a command printed and whether it found nothing wrong.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub success: bool,
}

impl Output {
    fn ok(text: impl Into<String>) -> Self {
        Output { text: text.into(), success: true }
    }
}

impl Cli {
    fn seed(&self) -> Result<u64, CliError> {
        match std::env::var(SEED_ENV) {
            Ok(s) => s.trim().parse().map_err(|_| CliError::Usage(format!("{SEED_ENV} is not a number: `{s}`"))),
            Err(_) => Ok(self.seed),
        }
    }

    fn calculus_or(&self, default: Calculus, allowed: &[Calculus]) -> Result<Calculus, CliError> {
        let c = self.calculus.unwrap_or(default);
        if allowed.contains(&c) {
            Ok(c)
        } else {
            let names: Vec<&str> = allowed.iter().map(|c| c.name()).collect();
            Err(CliError::Usage(format!("{} is not defined on {c} input (expects {})", verb_name(self.verb), names.join(", "))))
        }
    }

    fn source(&self) -> Result<String, CliError> {
        let Some(input) = &self.input else {
            return Err(CliError::Usage(format!("{} needs an input", verb_name(self.verb))));
        };
        if input == "-" {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            Ok(s)
        } else if Path::new(input).is_file() {
            Ok(std::fs::read_to_string(input)?)
        } else {
            Ok(input.clone())
        }
    }

    fn context(&self) -> Result<TypingContext, CliError> {
        let mut entries = Vec::new();
        for v in &self.vars {
            let (x, t) = v.split_once(':').ok_or_else(|| CliError::Usage(format!("expected NAME:TYPE, got `{v}`")))?;
            entries.push((Ident::parse(x.trim()), parse_type(t)?));
        }
        TypingContext::from_entries(entries).map_err(|e| type_error(e, ""))
    }

    fn render(&self, t: &Term) -> String {
        match self.format {
            Format::Source => print_term(t),
            _ => pretty_term(t),
        }
    }
}

fn verb_name(v: Verb) -> String {
    v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
}

fn type_error(error: TypeError, src: &str) -> CliError {
    let debug = format!("{error:?}");
    let kind = debug.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default().to_string();
    let span = error.culprit().and_then(|x| locate_ident(src, &x.to_string()));
    CliError::Type { kind, error: Box::new(error), span }
}

const LAMS: [Calculus; 2] = [Calculus::Lam, Calculus::LamPar];
const ADMS: [Calculus; 4] = [Calculus::Adm, Calculus::AdmPar, Calculus::Cps, Calculus::CpsPar];

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    match cli.verb {
        Verb::Check => check(cli),
        Verb::Eval => eval(cli),
        Verb::Adm => {
            cli.calculus_or(Calculus::LamPar, &LAMS)?;
            let Term::Lam(m) = parse_term(&cli.source()?, Calculus::LamPar)? else { unreachable!() };
            Ok(Output::ok(cli.render(&Term::Adm(to_admin(&m)))))
        }
        Verb::Readback => {
            cli.calculus_or(Calculus::AdmPar, &ADMS)?;
            let d = parse_adm(&cli.source()?)?;
            Ok(Output::ok(cli.render(&Term::Lam(readback(&d)?))))
        }
        Verb::Cps => {
            let calc = cli.calculus_or(Calculus::AdmPar, &[Calculus::Adm, Calculus::AdmPar])?;
            let src = cli.source()?;
            let d = parse_adm(&src)?;
            let ctx = cli.context()?;
            let mut supply = NameSupply::avoiding(d.free_vars().iter().chain(ctx.entries().keys()));
            let k = supply.fresh("k");
            Ok(Output::ok(cli.render(&Term::Adm(cps_transform(&d, &k, &ctx, calc)?))))
        }
        Verb::ToPi => {
            cli.calculus_or(Calculus::CpsPar, &[Calculus::CpsPar])?;
            let d = parse_adm(&cli.source()?)?;
            Ok(Output::ok(cli.render(&Term::Pi(to_pi(&d)?))))
        }
        Verb::FromPi => {
            cli.calculus_or(Calculus::Pi, &[Calculus::Pi])?;
            let Term::Pi(p) = parse_term(&cli.source()?, Calculus::Pi)? else { unreachable!() };
            Ok(Output::ok(cli.render(&Term::Adm(from_pi(&p, &cli.context()?)?))))
        }
        Verb::Embed => {
            cli.calculus_or(Calculus::LamPar, &LAMS)?;
            let Term::Lam(m) = parse_term(&cli.source()?, Calculus::LamPar)? else { unreachable!() };
            let p = NameSupply::avoiding(m.free_vars().iter()).fresh("p");
            Ok(Output::ok(cli.render(&Term::Lam(embed_parallel(&m, &p)?))))
        }
        Verb::Saturate => {
            cli.calculus_or(Calculus::AdmPar, &[Calculus::AdmPar])?;
            let d = parse_adm(&cli.source()?)?;
            Ok(Output::ok(cli.render(&Term::Adm(saturate_usages(&d, &cli.context()?)?))))
        }
        Verb::Expand => expand(cli),
        Verb::Verify => verify(cli),
        Verb::Gen => gen(cli),
    }
}

fn check(cli: &Cli) -> Result<Output, CliError> {
    let calc = cli.calculus_or(Calculus::LamPar, &Calculus::ALL)?;
    let src = cli.source()?;
    let t = parse_term(&src, calc)?;
    let ty = infer_type(&cli.context()?, &t, calc).map_err(|e| type_error(e, &src))?;
    Ok(Output::ok(ty.to_string()))
}

fn eval(cli: &Cli) -> Result<Output, CliError> {
    let calc = cli.calculus_or(Calculus::LamPar, &Calculus::ALL)?;
    let t = parse_term(&cli.source()?, calc)?;
    let strategy = match cli.strategy {
        StrategyArg::Leftmost => Strategy::Leftmost,
        StrategyArg::All => Strategy::EnumerateAll,
        StrategyArg::Seeded => Strategy::Seeded(cli.seed()?),
    };
    let budget = StepBudget::new(cli.budget).ok_or_else(|| CliError::Usage("the budget must be at least 1".into()))?;
    let text = match evaluate(&t, calc, strategy, budget) {
        Outcome::NormalForm { trace, .. } | Outcome::BudgetExhausted { trace, .. } if cli.format == Format::Trace => {
            let mut current = t.clone();
            let mut lines = Vec::new();
            for (i, r) in trace.iter().enumerate() {
                current = step_at(&current, calc, r).map_err(|e| CliError::Usage(e.to_string()))?;
                lines.push(format!("{}\t{}\t{}\t{}", i + 1, r.rule, r.path_string(), print_term(&current)));
            }
            lines.join("\n")
        }
        Outcome::NormalForm { term, steps, .. } => match cli.format {
            Format::Summary => format!("NormalForm steps={steps}"),
            _ => format!("{}\nNormalForm after {steps} steps", cli.render(&term)),
        },
        Outcome::BudgetExhausted { term, steps, .. } => match cli.format {
            Format::Summary => format!("BudgetExhausted steps={steps}"),
            _ => format!("{}\nBudgetExhausted after {steps} steps", cli.render(&term)),
        },
        Outcome::ReductionGraph(g) => {
            let finals: Vec<&Term> = (0..g.nodes.len()).filter(|i| !g.edges.iter().any(|e| e.0 == *i)).map(|i| &g.nodes[i]).collect();
            let mut lines = vec![format!("ReductionGraph nodes={} edges={} complete={} normalForms={}", g.nodes.len(), g.edges.len(), g.complete, finals.len())];
            if cli.format != Format::Summary {
                lines.extend(finals.into_iter().map(|t| cli.render(t)));
            }
            lines.join("\n")
        }
    };
    Ok(Output::ok(text))
}

fn expand(cli: &Cli) -> Result<Output, CliError> {
    let name = cli.input.as_deref().ok_or_else(|| CliError::Usage("expand needs an encoding name".into()))?;
    let which = EncodingName::from_name(name).ok_or_else(|| {
        let known: Vec<&str> = EncodingName::ALL.iter().map(|e| e.name()).collect();
        CliError::Usage(format!("unknown encoding `{name}` (one of {})", known.join(", ")))
    })?;
    let n = cli.args.len();
    let args = cli
        .args
        .iter()
        .enumerate()
        .map(|(i, a)| encoding_arg(argument_kind(which, i, n), a))
        .collect::<Result<Vec<_>, _>>()?;
    let d = expand_encoding(which, &args, &cli.context()?)?;
    Ok(Output::ok(cli.render(&Term::Adm(d))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ArgKind {
    Name,
    Value,
    Decl,
}

/// Kind of argument `i` of `n`, read off the encoding's signature.
fn argument_kind(which: EncodingName, i: usize, n: usize) -> ArgKind {
    use ArgKind::*;
    if i + 1 == n {
        return Decl;
    }
    match which {
        EncodingName::OutputPrefix | EncodingName::CcsChannel => Name,
        EncodingName::InternalChoice | EncodingName::ExternalChoice => Decl,
        EncodingName::LockUnlock => Name,
        EncodingName::MultiDef if i == 0 => Name,
        EncodingName::MultiDef => Value,
        EncodingName::JoinedDef if i.is_multiple_of(2) => Name,
        EncodingName::JoinedDef => Value,
    }
}

fn encoding_arg(kind: ArgKind, text: &str) -> Result<EncodingArg, CliError> {
    Ok(match kind {
        ArgKind::Name => EncodingArg::Name(Ident::parse(text.trim())),
        ArgKind::Decl => EncodingArg::Decl(parse_adm(text)?),
        ArgKind::Value => {
            let holder = Ident::parse("value_holder");
            let d = parse_adm(&format!("let[inf] {holder} = {text} in {holder}"))?;
            let value: AdmValue = d.bindings.into_iter().next().map(|b| b.value).expect("one binding");
            EncodingArg::Value(value)
        }
    })
}

fn gen_config(cli: &Cli) -> Result<GenConfig, CliError> {
    let calc = cli.calculus.unwrap_or(Calculus::LamPar);
    let policy = match cli.usages {
        PolicyArg::Inf => UsagePolicy::AllInfinite,
        PolicyArg::Mixed => UsagePolicy::Mixed,
    };
    Ok(GenConfig::new(cli.seed()?, cli.max_size, calc).with_usage_policy(policy))
}

fn verify(cli: &Cli) -> Result<Output, CliError> {
    let cfg = gen_config(cli)?;
    let kinds = if cli.kinds.is_empty() { DiagramKind::ALL.to_vec() } else { cli.kinds.clone() };
    let report = run_campaign(&kinds, cli.corpus_size, &cfg);
    let text = match cli.format {
        Format::Summary => report.summary(),
        _ => report.to_string(),
    };
    Ok(Output { text: text.trim_end().to_string(), success: report.is_success() })
}

fn gen(cli: &Cli) -> Result<Output, CliError> {
    let (t, ctx, ty) = gen_typed_term(&gen_config(cli)?);
    let text = match cli.format {
        Format::Source => print_term(&t),
        _ => format!("context: {ctx}\nterm: {}\ntype: {ty}", pretty_term(&t)),
    };
    Ok(Output::ok(text))
}
