//! Type-directed random generation. Every candidate is run through the
//! type checker before it is returned; failed attempts are retried with the
//! same generator state, so the output depends only on the configuration.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{GenConfig, UsagePolicy};
use crate::ident::{Ident, NameSupply};
use crate::kernel::{AdmDecl, AdmTerm, AdmValue, Binding, LamTerm, Param, PiProc, Term};
use crate::translate::{cps_transform, cps_type, cont_type, to_pi};
use crate::typecheck::{check_adm, check_lam, check_pi, TypingContext};
use crate::types::{Calculus, TypeExpr, Usage};

const ATTEMPTS: usize = 200;
const FUEL: usize = 400;

/// A term of the configured calculus together with a context and type it
/// checks at. Processes are reported at type `#b`.
pub fn gen_typed_term(cfg: &GenConfig) -> (Term, TypingContext, TypeExpr) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let max = cfg.max_size.max(1);
    match cfg.calculus {
        Calculus::Lam | Calculus::LamPar => {
            let (m, ctx, ty) = gen_lam(&mut rng, cfg, max);
            (Term::Lam(m), ctx, ty)
        }
        Calculus::Adm | Calculus::AdmPar => {
            let (d, ctx, ty) = gen_adm(&mut rng, cfg, max);
            (Term::Adm(d), ctx, ty)
        }
        Calculus::Cps | Calculus::CpsPar => {
            let (d, ctx, ty) = gen_cps(&mut rng, cfg, max);
            (Term::Adm(d), ctx, ty)
        }
        Calculus::Pi => {
            let (p, ctx) = gen_pi(&mut rng, cfg, max);
            (Term::Pi(p), ctx, TypeExpr::Behavior)
        }
    }
}

/// Picks an index with probability proportional to its weight, or `None`
/// when every weight is zero.
fn pick_weighted(rng: &mut ChaCha8Rng, weights: &[u32]) -> Option<usize> {
    let total: u32 = weights.iter().sum();
    if total == 0 {
        return None;
    }
    let mut r = rng.gen_range(0..total);
    for (i, w) in weights.iter().enumerate() {
        if r < *w {
            return Some(i);
        }
        r -= w;
    }
    None
}

/// Splits `n` into two positive parts when possible.
fn split(rng: &mut ChaCha8Rng, n: usize) -> (usize, usize) {
    if n < 2 {
        return (n, 0);
    }
    let l = rng.gen_range(1..n);
    (l, n - l)
}

fn ctx_name(i: usize) -> Ident {
    Ident::new(["a", "b", "c", "d", "e"][i % 5], (i / 5) as u32)
}

// ---------------------------------------------------------------- λ / λ_∥

struct LamGen<'r> {
    rng: &'r mut ChaCha8Rng,
    par: bool,
    depth_cap: usize,
    supply: NameSupply,
    fuel: usize,
}

#[derive(Clone, Copy)]
enum LamMove {
    Var,
    Star,
    Abs,
    Redex,
    Call,
    Par,
}

impl LamGen<'_> {
    fn value_type(&mut self, depth: usize) -> TypeExpr {
        if depth == 0 || self.rng.gen_bool(0.55) {
            TypeExpr::Unit
        } else {
            let a = self.value_type(depth - 1);
            let c = self.codomain(depth - 1);
            TypeExpr::arrow(a, c)
        }
    }

    fn codomain(&mut self, depth: usize) -> TypeExpr {
        if self.par && self.rng.gen_bool(0.3) {
            TypeExpr::Behavior
        } else {
            self.value_type(depth)
        }
    }

    /// Names whose curried codomain reaches `ty`, with the argument types.
    fn heads(env: &[(Ident, TypeExpr)], ty: &TypeExpr) -> Vec<(Ident, Vec<TypeExpr>)> {
        let mut out = Vec::new();
        for (x, t) in env {
            let mut args = Vec::new();
            let mut cur = t;
            while let TypeExpr::Arrow(dom, cod) = cur {
                args.push(dom[0].clone());
                cur = cod;
                if cur == ty {
                    out.push((x.clone(), args.clone()));
                }
            }
        }
        out
    }

    fn term(&mut self, env: &mut Vec<(Ident, TypeExpr)>, ty: &TypeExpr, budget: usize) -> Option<LamTerm> {
        if budget == 0 || self.fuel == 0 {
            return None;
        }
        self.fuel -= 1;
        let vars: Vec<Ident> = env.iter().filter(|(_, t)| t == ty).map(|(x, _)| x.clone()).collect();
        let heads = Self::heads(env, ty);
        let arrow = matches!(ty, TypeExpr::Arrow(..));
        let mut weights = [
            if vars.is_empty() { 0 } else { 2 },
            if *ty == TypeExpr::Unit { 2 } else { 0 },
            if arrow && budget >= 2 { 3 } else { 0 },
            if budget >= 4 && *ty != TypeExpr::Behavior { 4 } else { 0 },
            if heads.is_empty() || budget < 2 { 0 } else { 3 },
            if self.par && *ty == TypeExpr::Behavior && budget >= 5 { 2 } else { 0 },
        ];
        let moves = [LamMove::Var, LamMove::Star, LamMove::Abs, LamMove::Redex, LamMove::Call, LamMove::Par];
        while let Some(i) = pick_weighted(self.rng, &weights) {
            weights[i] = 0;
            if let Some(t) = self.attempt(moves[i], env, ty, budget, &vars, &heads) {
                return Some(t);
            }
        }
        None
    }

    fn attempt(
        &mut self,
        mv: LamMove,
        env: &mut Vec<(Ident, TypeExpr)>,
        ty: &TypeExpr,
        budget: usize,
        vars: &[Ident],
        heads: &[(Ident, Vec<TypeExpr>)],
    ) -> Option<LamTerm> {
        match mv {
            LamMove::Var => Some(LamTerm::Var(vars.choose(self.rng)?.clone())),
            LamMove::Star => Some(LamTerm::Star),
            LamMove::Abs => {
                let TypeExpr::Arrow(dom, cod) = ty else { return None };
                let x = self.supply.fresh("x");
                env.push((x.clone(), dom[0].clone()));
                let body = self.term(env, cod, budget - 1);
                env.pop();
                Some(LamTerm::abs(x, dom[0].clone(), body?))
            }
            LamMove::Redex => {
                // (λx:A. M) N
                let a = self.value_type(1);
                let x = self.supply.fresh("x");
                let (fb, ab) = split(self.rng, budget - 2);
                env.push((x.clone(), a.clone()));
                let body = self.term(env, ty, fb);
                env.pop();
                let arg = self.term(env, &a, ab.max(1))?;
                Some(LamTerm::app(LamTerm::abs(x, a, body?), arg))
            }
            LamMove::Call => {
                let (f, args) = heads.choose(self.rng)?.clone();
                let mut t = LamTerm::Var(f);
                let mut left = budget.saturating_sub(1);
                for (i, a) in args.iter().enumerate() {
                    let share = (left / (args.len() - i)).max(1);
                    let arg = self.term(env, a, share)?;
                    left = left.saturating_sub(arg.size() + 1);
                    t = LamTerm::app(t, arg);
                }
                Some(t)
            }
            LamMove::Par => {
                let (l, r) = split(self.rng, budget - 1);
                let l = self.term(env, ty, l)?;
                let r = self.term(env, ty, r)?;
                Some(LamTerm::par(l, r))
            }
        }
    }
}

fn gen_lam(rng: &mut ChaCha8Rng, cfg: &GenConfig, max: usize) -> (LamTerm, TypingContext, TypeExpr) {
    let fallback = (LamTerm::Star, TypingContext::new(), TypeExpr::Unit);
    if max == 1 {
        return fallback;
    }
    let par = cfg.calculus == Calculus::LamPar;
    for _ in 0..ATTEMPTS {
        let mut g = LamGen { rng: &mut *rng, par, depth_cap: cfg.type_depth_cap, supply: NameSupply::avoiding(&[ctx_name(10)]), fuel: FUEL };
        let mut env = Vec::new();
        if par {
            env.push((Ident::new("o", 0), TypeExpr::arrow(TypeExpr::Unit, TypeExpr::Behavior)));
        }
        for i in 0..g.rng.gen_range(0..=2) {
            let t = g.value_type(2);
            env.push((ctx_name(i), t));
        }
        let ty = g.codomain(g.depth_cap);
        let Some(m) = g.term(&mut env, &ty, max) else { continue };
        if m.size() > max {
            continue;
        }
        let free = m.free_vars();
        let ctx = TypingContext::from_entries(env.into_iter().filter(|(x, _)| free.contains(x))).expect("distinct names");
        if check_lam(&ctx, &m, cfg.calculus).as_ref() == Ok(&ty) {
            return (m, ctx, ty);
        }
    }
    fallback
}

// ---------------------------------------------------------------- λᵃ / λᵃ_∥

struct AdmGen<'r> {
    rng: &'r mut ChaCha8Rng,
    par: bool,
    mixed: bool,
    arity_cap: usize,
    depth_cap: usize,
    supply: NameSupply,
    fuel: usize,
}

type Scope = Vec<(Ident, TypeExpr)>;

#[derive(Clone, Copy)]
enum AdmMove {
    Var,
    NewVar,
    Call,
    NewCall,
    Par,
}

impl AdmGen<'_> {
    fn value_type(&mut self, depth: usize) -> TypeExpr {
        if depth == 0 || self.rng.gen_bool(0.5) {
            TypeExpr::chan_unit()
        } else {
            let n = self.rng.gen_range(1..=self.arity_cap.max(1));
            let dom = (0..n).map(|_| self.value_type(depth - 1)).collect();
            let cod = self.codomain(depth - 1);
            TypeExpr::chan_fn(dom, cod)
        }
    }

    fn codomain(&mut self, depth: usize) -> TypeExpr {
        if self.par && self.rng.gen_bool(0.4) {
            TypeExpr::Behavior
        } else {
            self.value_type(depth)
        }
    }

    fn usage(&mut self) -> Usage {
        if !self.mixed {
            return Usage::Infinite;
        }
        match self.rng.gen_range(0..20) {
            0..=9 => Usage::Infinite,
            10..=16 => Usage::One,
            _ => Usage::Zero,
        }
    }

    /// Function type returning `cod`, with small argument types.
    fn fn_type_to(&mut self, cod: &TypeExpr) -> TypeExpr {
        let n = self.rng.gen_range(1..=self.arity_cap.max(1));
        let dom = (0..n).map(|_| self.value_type(1)).collect();
        TypeExpr::chan_fn(dom, cod.clone())
    }

    fn decl(&mut self, scope: &mut Scope, ty: &TypeExpr, budget: usize) -> Option<AdmDecl> {
        let base = scope.len();
        let mut bindings = Vec::new();
        let mut left = budget;
        if budget > 8 {
            for _ in 0..self.rng.gen_range(0..=2) {
                let t = if self.rng.gen_bool(0.6) { self.fn_type_to(ty) } else { self.value_type(2) };
                let share = left / 3;
                if let Some(b) = self.binding(scope, &t, share) {
                    left = left.saturating_sub(1 + b.value.size());
                    scope.push((b.name.clone(), t));
                    bindings.push(b);
                }
            }
        }
        let body = self.term(scope, &mut bindings, ty, left.max(1));
        scope.truncate(base);
        Some(AdmDecl::new(bindings, body?))
    }

    fn binding(&mut self, scope: &mut Scope, t: &TypeExpr, budget: usize) -> Option<Binding> {
        let Some((dom, cod)) = t.as_chan_fn() else {
            return Some(Binding::new(Usage::Infinite, self.supply.fresh("x"), AdmValue::Star));
        };
        let (dom, cod) = (dom.to_vec(), cod.clone());
        let usage = self.usage();
        let name = self.supply.fresh("f");
        let params: Vec<Param> = dom.iter().map(|a| Param::new(self.supply.fresh("y"), a.clone())).collect();
        let base = scope.len();
        scope.extend(params.iter().map(|p| (p.name.clone(), p.ty.clone())));
        // A usage-0 value is never typed, so it may be given a body at the
        // wrong type.
        let body_ty = if usage == Usage::Zero && self.rng.gen_bool(0.5) { self.codomain(1) } else { cod };
        let body = self.decl(scope, &body_ty, budget.saturating_sub(1 + params.len()).max(1));
        scope.truncate(base);
        Some(Binding::new(usage, name, AdmValue::abs(params, body?)))
    }

    /// Callable names producing `ty`: a head and the argument lists to
    /// apply it to, outermost last.
    fn heads(scope: &Scope, ty: &TypeExpr) -> Vec<(Ident, Vec<Vec<TypeExpr>>)> {
        let mut out = Vec::new();
        for (x, t) in scope {
            let mut lists = Vec::new();
            let mut cur = t;
            while let Some((dom, cod)) = cur.as_chan_fn() {
                lists.push(dom.to_vec());
                if cod == ty {
                    out.push((x.clone(), lists.clone()));
                }
                cur = cod;
                if lists.len() == 2 {
                    break;
                }
            }
        }
        out
    }

    fn term(&mut self, scope: &mut Scope, bindings: &mut Vec<Binding>, ty: &TypeExpr, budget: usize) -> Option<AdmTerm> {
        if budget == 0 || self.fuel == 0 {
            return None;
        }
        self.fuel -= 1;
        let vars: Vec<Ident> = scope.iter().filter(|(_, t)| t == ty).map(|(x, _)| x.clone()).collect();
        let heads = Self::heads(scope, ty);
        let value = *ty != TypeExpr::Behavior;
        let b_source = !Self::heads(scope, &TypeExpr::Behavior).is_empty();
        let mut weights = [
            if vars.is_empty() { 0 } else { 2 },
            if value { 1 } else { 0 },
            if heads.is_empty() || budget < 2 { 0 } else { 4 },
            if budget >= 6 && (value || b_source) { 3 } else { 0 },
            if self.par && !value && budget >= 5 { 2 } else { 0 },
        ];
        let moves = [AdmMove::Var, AdmMove::NewVar, AdmMove::Call, AdmMove::NewCall, AdmMove::Par];
        while let Some(i) = pick_weighted(self.rng, &weights) {
            weights[i] = 0;
            let (nb, ns) = (bindings.len(), scope.len());
            if let Some(t) = self.attempt(moves[i], scope, bindings, ty, budget, &vars, &heads) {
                return Some(t);
            }
            bindings.truncate(nb);
            scope.truncate(ns);
        }
        None
    }

    #[allow(clippy::too_many_arguments)]
    fn attempt(
        &mut self,
        mv: AdmMove,
        scope: &mut Scope,
        bindings: &mut Vec<Binding>,
        ty: &TypeExpr,
        budget: usize,
        vars: &[Ident],
        heads: &[(Ident, Vec<Vec<TypeExpr>>)],
    ) -> Option<AdmTerm> {
        match mv {
            AdmMove::Var => Some(AdmTerm::Var(vars.choose(self.rng)?.clone())),
            AdmMove::NewVar => {
                let b = self.binding(scope, ty, budget / 2)?;
                let x = b.name.clone();
                scope.push((x.clone(), ty.clone()));
                bindings.push(b);
                Some(AdmTerm::Var(x))
            }
            AdmMove::Call => {
                let (f, lists) = heads.choose(self.rng)?.clone();
                self.call(scope, bindings, AdmTerm::Var(f), &lists, budget - 1)
            }
            AdmMove::NewCall => {
                let t = self.fn_type_to(ty);
                let b = self.binding(scope, &t, budget / 2)?;
                let f = b.name.clone();
                let left = budget.saturating_sub(1 + b.value.size());
                scope.push((f.clone(), t.clone()));
                bindings.push(b);
                let dom = t.as_chan_fn().expect("function type").0.to_vec();
                self.call(scope, bindings, AdmTerm::Var(f), &[dom], left.max(1))
            }
            AdmMove::Par => {
                let (l, r) = split(self.rng, budget - 1);
                let l = self.term(scope, bindings, ty, l)?;
                let r = self.term(scope, bindings, ty, r)?;
                Some(AdmTerm::par(l, r))
            }
        }
    }

    fn call(&mut self, scope: &mut Scope, bindings: &mut Vec<Binding>, head: AdmTerm, lists: &[Vec<TypeExpr>], budget: usize) -> Option<AdmTerm> {
        let mut t = head;
        let mut left = budget;
        for dom in lists {
            let mut args = Vec::with_capacity(dom.len());
            for a in dom {
                let nested = left >= 4 && self.rng.gen_bool(0.3);
                let arg = if nested {
                    let share = left / 2;
                    match self.nested(scope, bindings, a, share) {
                        Some(arg) => arg,
                        None => self.var_of(scope, bindings, a, left)?,
                    }
                } else {
                    self.var_of(scope, bindings, a, left)?
                };
                left = left.saturating_sub(arg.size());
                args.push(arg);
            }
            t = AdmTerm::app(t, args);
        }
        Some(t)
    }

    /// A call producing `a`, for use in argument position.
    fn nested(&mut self, scope: &mut Scope, bindings: &mut Vec<Binding>, a: &TypeExpr, budget: usize) -> Option<AdmTerm> {
        let heads = Self::heads(scope, a);
        if let Some((f, lists)) = heads.choose(self.rng).cloned() {
            return self.call(scope, bindings, AdmTerm::Var(f), &lists, budget);
        }
        let t = self.fn_type_to(a);
        let b = self.binding(scope, &t, budget / 2)?;
        let f = b.name.clone();
        scope.push((f.clone(), t.clone()));
        bindings.push(b);
        let dom = t.as_chan_fn().expect("function type").0.to_vec();
        self.call(scope, bindings, AdmTerm::Var(f), &[dom], budget / 2)
    }

    fn var_of(&mut self, scope: &mut Scope, bindings: &mut Vec<Binding>, a: &TypeExpr, budget: usize) -> Option<AdmTerm> {
        let vars: Vec<Ident> = scope.iter().filter(|(_, t)| t == a).map(|(x, _)| x.clone()).collect();
        if let Some(x) = vars.choose(self.rng) {
            if self.rng.gen_bool(0.8) {
                return Some(AdmTerm::Var(x.clone()));
            }
        }
        let b = self.binding(scope, a, budget / 2)?;
        let x = b.name.clone();
        scope.push((x.clone(), a.clone()));
        bindings.push(b);
        Some(AdmTerm::Var(x))
    }
}

fn gen_adm(rng: &mut ChaCha8Rng, cfg: &GenConfig, max: usize) -> (AdmDecl, TypingContext, TypeExpr) {
    let par = matches!(cfg.calculus, Calculus::AdmPar | Calculus::CpsPar | Calculus::Pi);
    let calc = if par { Calculus::AdmPar } else { Calculus::Adm };
    let mixed = par && cfg.usage_policy == UsagePolicy::Mixed;
    for _ in 0..ATTEMPTS {
        let mut g = AdmGen {
            rng: &mut *rng,
            par,
            mixed,
            arity_cap: cfg.arity_cap,
            depth_cap: cfg.type_depth_cap,
            supply: NameSupply::avoiding(&[ctx_name(10)]),
            fuel: FUEL,
        };
        let mut scope = Vec::new();
        if par {
            scope.push((Ident::new("o", 0), TypeExpr::chan_fn(vec![TypeExpr::chan_unit()], TypeExpr::Behavior)));
        }
        for i in 0..g.rng.gen_range(0..=2) {
            let t = g.value_type(2);
            scope.push((ctx_name(i), t));
        }
        let ty = g.codomain(g.depth_cap);
        let env = scope.clone();
        let Some(d) = g.decl(&mut scope, &ty, max) else { continue };
        if d.size() > max {
            continue;
        }
        let free = d.free_vars();
        let ctx = TypingContext::from_entries(env.into_iter().filter(|(x, _)| free.contains(x))).expect("distinct names");
        if matches!(check_adm(&ctx, &d, calc), Ok(t) if t.ty == ty) {
            return (d, ctx, ty);
        }
    }
    let x = ctx_name(0);
    (AdmDecl::term(AdmTerm::Var(x.clone())), TypingContext::new().extend(x, TypeExpr::chan_unit()).expect("empty"), TypeExpr::chan_unit())
}

// ---------------------------------------------------------------- λᵃᵏ / π

/// The CPS image of a generated source term, with `⌈Γ⌉, k : K(α)`.
fn gen_cps(rng: &mut ChaCha8Rng, cfg: &GenConfig, max: usize) -> (AdmDecl, TypingContext, TypeExpr) {
    let concurrent = cfg.calculus != Calculus::Cps;
    let (src, target) = if concurrent { (Calculus::AdmPar, Calculus::CpsPar) } else { (Calculus::Adm, Calculus::Cps) };
    let answer = if concurrent { TypeExpr::Behavior } else { TypeExpr::Result };
    let mut last = None;
    for attempt in 0..ATTEMPTS {
        // CPS images are larger than their sources; shrink the source
        // budget as attempts fail.
        let budget = (max * 2 / 3).saturating_sub(attempt / 10).max(1);
        let sub = GenConfig { calculus: src, seed: rng.gen(), ..*cfg };
        let mut inner = ChaCha8Rng::seed_from_u64(sub.seed);
        let (d, ctx, ty) = gen_adm(&mut inner, &sub, budget);
        let Some((image, kctx, _)) = cps_image(&d, &ctx, &ty, src) else { continue };
        let image = (image, kctx);
        let ok = matches!(check_adm(&image.1, &image.0, target), Ok(t) if t.ty == answer);
        if ok && image.0.size() <= max {
            return (image.0, image.1, answer);
        }
        if ok {
            last = Some(image);
        }
    }
    match last {
        Some((d, ctx)) => (d, ctx, answer),
        None => {
            let x = ctx_name(0);
            let d = AdmDecl::term(AdmTerm::Var(x.clone()));
            let ctx = TypingContext::new().extend(x, TypeExpr::chan_unit()).expect("empty");
            let (d, ctx, _) = cps_image(&d, &ctx, &TypeExpr::chan_unit(), src).expect("variable translates");
            (d, ctx, answer)
        }
    }
}

/// `D : k` and its context, for a fresh `k`.
pub(super) fn cps_image(d: &AdmDecl, ctx: &TypingContext, ty: &TypeExpr, src: Calculus) -> Option<(AdmDecl, TypingContext, Ident)> {
    let concurrent = src == Calculus::AdmPar;
    let mut names: Vec<Ident> = ctx.entries().keys().cloned().collect();
    d.idents(&mut names);
    let k = NameSupply::avoiding(names.iter()).fresh("k");
    let image = cps_transform(d, &k, ctx, src).ok()?;
    let mut entries: Vec<(Ident, TypeExpr)> = ctx.entries().iter().map(|(x, t)| (x.clone(), cps_type(t, concurrent))).collect();
    entries.push((k.clone(), cont_type(ty, concurrent)));
    Some((image, TypingContext::from_entries(entries).ok()?, k))
}

fn gen_pi(rng: &mut ChaCha8Rng, cfg: &GenConfig, max: usize) -> (PiProc, TypingContext) {
    let sub = GenConfig { calculus: Calculus::CpsPar, ..*cfg };
    let (d, ctx, _) = gen_cps(rng, &sub, max);
    let p = to_pi(&d).expect("CPS images have the CPS shape");
    let mut mutated = p.clone();
    if rng.gen_bool(0.5) {
        mutated = swap_some_par(&mutated, rng);
    }
    if rng.gen_bool(0.3) {
        let z = p.supply().fresh("z");
        mutated = PiProc::nu(z, mutated);
    }
    if mutated.size() <= max.max(p.size()) && check_pi(&ctx, &mutated).is_ok() {
        (mutated, ctx)
    } else {
        (p, ctx)
    }
}

/// Exchanges the operands of one parallel composition chosen at random.
fn swap_some_par(p: &PiProc, rng: &mut ChaCha8Rng) -> PiProc {
    fn count(p: &PiProc) -> usize {
        match p {
            PiProc::Nu(_, g, rest) => g.as_ref().map_or(0, |g| count(&g.body)) + count(rest),
            PiProc::Out(..) => 0,
            PiProc::Par(l, r) => 1 + count(l) + count(r),
        }
    }
    fn go(p: &PiProc, target: &mut isize) -> PiProc {
        match p {
            PiProc::Nu(x, g, rest) => {
                let g = g.as_ref().map(|g| crate::kernel::InputGuard::new(g.replicated, g.params.clone(), go(&g.body, target)));
                PiProc::Nu(x.clone(), g, Box::new(go(rest, target)))
            }
            PiProc::Out(..) => p.clone(),
            PiProc::Par(l, r) => {
                *target -= 1;
                if *target == -1 {
                    PiProc::par((**r).clone(), (**l).clone())
                } else {
                    let l = go(l, target);
                    PiProc::par(l, go(r, target))
                }
            }
        }
    }
    let n = count(p);
    if n == 0 {
        return p.clone();
    }
    let mut target = rng.gen_range(0..n) as isize;
    go(p, &mut target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::typecheck::infer_type;

    #[test]
    fn size_one_lambda_is_unit() {
        let (t, ctx, ty) = gen_typed_term(&GenConfig::new(7, 1, Calculus::Lam));
        assert_eq!(t, Term::Lam(LamTerm::Star));
        assert!(ctx.is_empty());
        assert_eq!(ty, TypeExpr::Unit);
    }

    #[test]
    fn deterministic() {
        for calc in [Calculus::LamPar, Calculus::AdmPar, Calculus::CpsPar, Calculus::Pi] {
            let cfg = GenConfig::new(99, 15, calc).with_usage_policy(UsagePolicy::Mixed);
            assert_eq!(gen_typed_term(&cfg), gen_typed_term(&cfg));
        }
    }

    #[test]
    fn seed_42_adm_par_typechecks() {
        let cfg = GenConfig::new(42, 12, Calculus::AdmPar).with_usage_policy(UsagePolicy::Mixed);
        let (t, ctx, ty) = gen_typed_term(&cfg);
        assert_eq!(infer_type(&ctx, &t, Calculus::AdmPar).unwrap().ty(), Some(&ty));
    }
}
