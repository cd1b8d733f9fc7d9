//! Executable law suites over seeded samples.
//!
//! Every law compares two computations by structural equality and, where
//! the result should live in a known family, also checks its sort. Case `i`
//! reseeds the sampler with `seed + i`; the seed of the first failing case
//! is part of its counterexample.

use serde_json::{json, Value};

use super::engine::{eta, tau};
use super::{
    elem_sort, from_term, naive_bind, naive_subst, render_elem, render_tm, tm_sort, Assignment, Elem, Engine, Family,
    Layer, PointedEndo, PtdMor, SubstError, Tm,
};
use crate::family::{sweep_adjunctions, Context, Renaming};
use crate::sample::Sampler;
use crate::signature::{OpId, Signature, Sort};
use crate::term::{print_term, rename, Term};
use crate::verdict::{Tally, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LawConfig {
    pub samples: usize,
    pub seed: u64,
    /// Height bound for sampled terms.
    pub max_height: usize,
}

impl Default for LawConfig {
    fn default() -> Self {
        LawConfig { samples: 1000, seed: 0, max_height: 4 }
    }
}

const CTX_MAX: usize = 3;
const IMAGE_HEIGHT: usize = 2;
const ATTEMPTS: usize = 64;

type Outcome = Result<(), Value>;

/// The representative endofunctors: identity, one option layer per sort, a
/// two-layer option list, the empty option list and `T`.
pub fn base_endos(sig: &Signature) -> Vec<PointedEndo> {
    let mut out = vec![PointedEndo::Identity];
    out.extend(sig.sorts.iter().cloned().map(PointedEndo::OptionSort));
    if let (Some(first), Some(last)) = (sig.sorts.first(), sig.sorts.last()) {
        out.push(PointedEndo::OptionList(vec![first.clone(), last.clone()]));
    }
    out.push(PointedEndo::OptionList(Vec::new()));
    out.push(PointedEndo::TheMonadT);
    out
}

fn same<T: PartialEq>(lhs: &T, rhs: &T, cx: impl FnOnce() -> Value) -> Outcome {
    if lhs == rhs {
        Ok(())
    } else {
        Err(cx())
    }
}

fn show_result(sig: &Signature, r: &Result<Term, SubstError>) -> String {
    match r {
        Ok(t) => print_term(sig, t),
        Err(e) => format!("error: {e}"),
    }
}

fn unwrap_term(e: &Elem) -> Tm {
    match e {
        Elem::Term(t) => (**t).clone(),
        other => Tm::Var(other.clone()),
    }
}

fn concat(a: &Context, b: &Context) -> Context {
    a.entries().iter().chain(b.entries()).cloned().collect()
}

struct Suite<'e, 's> {
    engine: &'e Engine<'s>,
    sig: &'s Signature,
    sampler: Sampler<'s>,
    cfg: LawConfig,
    endos: Vec<PointedEndo>,
    /// Sorts with a closed term of height at most 3.
    closed_sorts: Vec<Sort>,
}

impl<'e, 's> Suite<'e, 's> {
    fn new(engine: &'e Engine<'s>, cfg: &LawConfig) -> Self {
        let sig = engine.sig();
        let mut sampler = Sampler::new(sig, cfg.seed);
        let empty = Family::Ctx(Context::empty());
        let closed_sorts = sig.sorts.iter().filter(|s| sampler.inhabited(&empty, s, 3)).cloned().collect();
        Suite { engine, sig, sampler, cfg: *cfg, endos: base_endos(sig), closed_sorts }
    }

    /// Runs `n` cases starting at case index `first`. A case that cannot
    /// be instantiated within a bounded number of draws is not counted.
    fn drive_from(
        &mut self,
        tally: &mut Tally,
        first: usize,
        n: usize,
        mut case: impl FnMut(&mut Self) -> Option<Outcome>,
    ) {
        if self.sig.sorts.is_empty() {
            return;
        }
        for i in first..first + n {
            let case_seed = self.cfg.seed.wrapping_add(i as u64);
            self.sampler.reseed(case_seed);
            let outcome = (0..ATTEMPTS).find_map(|_| case(self));
            if let Some(outcome) = outcome {
                tally.record(outcome.is_ok(), || {
                    let mut cx = outcome.err().unwrap_or(Value::Null);
                    if let Value::Object(map) = &mut cx {
                        map.insert("case_seed".into(), case_seed.into());
                    }
                    cx
                });
            }
        }
    }

    fn drive(&mut self, law: &str, case: impl FnMut(&mut Self) -> Option<Outcome>) -> Verdict {
        let mut tally = Tally::new(law);
        let n = self.cfg.samples;
        self.drive_from(&mut tally, 0, n, case);
        tally.finish()
    }

    /// Spreads the samples over every ordered pair of base endofunctors.
    fn drive_pairs(
        &mut self,
        law: &str,
        mut case: impl FnMut(&mut Self, &PointedEndo, &PointedEndo) -> Option<Outcome>,
    ) -> Verdict {
        let mut tally = Tally::new(law);
        let endos = self.endos.clone();
        let pairs = endos.len() * endos.len();
        let per_pair = self.cfg.samples.div_ceil(pairs.max(1));
        let mut first = 0;
        for outer in &endos {
            for inner in &endos {
                self.drive_from(&mut tally, first, per_pair, |s| case(s, outer, inner));
                first += per_pair;
            }
        }
        tally.finish()
    }

    fn ctx_term(&mut self, min_len: usize) -> Option<(Context, Sort, Term)> {
        let ctx = self.sampler.context(min_len, CTX_MAX);
        let sort = self.sampler.inhabited_sort(&ctx, self.cfg.max_height)?;
        let t = self.sampler.term(&ctx, &sort, self.cfg.max_height)?;
        Some((ctx, sort, t))
    }

    fn binder_list(&mut self, min: usize, max: usize) -> Vec<Sort> {
        let len = min + self.sampler.below(max - min + 1);
        (0..len).map(|_| self.sampler.sort()).collect()
    }

    fn endo(&mut self) -> PointedEndo {
        let i = self.sampler.below(self.endos.len());
        self.endos[i].clone()
    }

    fn closed_tm(&mut self, s: &Sort) -> Option<Tm> {
        self.sampler.tm(&Family::Ctx(Context::empty()), s, 3)
    }

    fn instantiate(&mut self) -> Option<PtdMor> {
        let n = 1 + self.sampler.below(2);
        let mut sorts = Vec::new();
        let mut closed = Vec::new();
        for _ in 0..n {
            let s = self.sampler.pick(&self.closed_sorts)?.clone();
            closed.push(self.closed_tm(&s)?);
            sorts.push(s);
        }
        Some(PtdMor::Instantiate(sorts, closed))
    }

    /// Pointed morphisms into `T`, for the bracket.
    fn bracket_input(&mut self) -> Option<PtdMor> {
        let identity_t = PtdMor::Identity(PointedEndo::TheMonadT);
        match self.sampler.below(6) {
            0 => Some(PtdMor::Point(PointedEndo::TheMonadT)),
            1 => Some(identity_t),
            2 => Some(PtdMor::Join),
            3 => self.instantiate(),
            4 => Some(PtdMor::Mult(Box::new(self.instantiate()?), Box::new(identity_t))),
            _ => Some(PtdMor::Mult(Box::new(identity_t), Box::new(self.instantiate()?))),
        }
    }

    /// Pointed morphisms between base endofunctors and `T`.
    fn pointed_morphism(&mut self) -> Option<PtdMor> {
        match self.sampler.below(4) {
            0 => Some(PtdMor::Point(self.endo())),
            1 => Some(PtdMor::Join),
            2 => Some(PtdMor::Identity(self.endo())),
            _ => self.instantiate(),
        }
    }

    /// A layer of `H X` at `inner`: an operation whose argument `j` is an
    /// element of `X(option l_j inner)`. Non-nullary operations are
    /// preferred.
    fn layer(&mut self, x: &PointedEndo, inner: &Family) -> Option<Layer> {
        let sig = self.sig;
        let arg_family = |binders: &[Sort]| x.apply(Family::opt_list(binders, inner.clone()));
        let feasible: Vec<OpId> = sig
            .op_ids()
            .filter(|&id| sig.op(id).args.iter().all(|a| self.sampler.elem_inhabited(&arg_family(&a.binders), &a.sort)))
            .collect();
        let with_args: Vec<OpId> = feasible.iter().copied().filter(|&id| sig.op(id).arity() > 0).collect();
        let op = *self.sampler.pick(if with_args.is_empty() { &feasible } else { &with_args })?;
        let mut args = Vec::new();
        for a in &sig.op(op).args {
            args.push(self.sampler.elem(&arg_family(&a.binders), &a.sort)?);
        }
        Some(Layer { op, args })
    }

    fn show_layer(&self, layer: &Layer) -> Value {
        json!({
            "op": self.sig.op(layer.op).name,
            "args": layer.args.iter().map(|a| render_elem(self.sig, a)).collect::<Vec<_>>(),
        })
    }

    /// Whether argument `j` of `layer` lies in `x(option l_j inner)` at the
    /// declared sort.
    fn layer_sorted(&self, x: &PointedEndo, inner: &Family, layer: &Layer) -> bool {
        let decl = self.sig.op(layer.op);
        decl.args.len() == layer.args.len()
            && decl.args.iter().zip(&layer.args).all(|(a, e)| {
                let fam = x.apply(Family::opt_list(&a.binders, inner.clone()));
                elem_sort(self.sig, &fam, e).as_ref() == Some(&a.sort)
            })
    }

    // Monad laws in bind form.

    fn right_unit(&mut self) -> Verdict {
        self.drive("monad.right_unit", |s| {
            let (ctx, _, t) = s.ctx_term(0)?;
            let out = s.engine.bind(&Assignment::identity(&ctx), &t);
            Some(same(&out, &Ok(t.clone()), || {
                json!({"context": ctx.to_string(), "term": print_term(s.sig, &t), "result": show_result(s.sig, &out)})
            }))
        })
    }

    fn left_unit(&mut self) -> Verdict {
        self.drive("monad.left_unit", |s| {
            let ctx = s.sampler.context(1, CTX_MAX);
            let target = s.sampler.covering_context(&ctx, CTX_MAX);
            let f = s.sampler.assignment(&ctx, &target, IMAGE_HEIGHT)?;
            let i = s.sampler.below(ctx.len());
            let out = s.engine.bind(&f, &Term::Var(i));
            let expected = f.images()[i].clone();
            Some(same(&out, &Ok(expected), || {
                json!({
                    "context": ctx.to_string(), "target": target.to_string(), "index": i,
                    "assignment": f.to_json(s.sig), "result": show_result(s.sig, &out),
                })
            }))
        })
    }

    fn bind_associativity(&mut self) -> Verdict {
        self.drive("monad.associativity", |s| {
            let (ctx, _, t) = s.ctx_term(0)?;
            let mid = s.sampler.covering_context(&ctx, CTX_MAX);
            let g = s.sampler.assignment(&ctx, &mid, IMAGE_HEIGHT)?;
            let last = s.sampler.covering_context(&mid, CTX_MAX);
            let f = s.sampler.assignment(&mid, &last, IMAGE_HEIGHT)?;
            let cx = |detail: String| {
                json!({
                    "context": ctx.to_string(), "term": print_term(s.sig, &t),
                    "g": g.to_json(s.sig), "f": f.to_json(s.sig), "detail": detail,
                })
            };
            let run = || -> Result<(Term, Term), String> {
                let lhs =
                    s.engine.bind(&f, &s.engine.bind(&g, &t).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
                let fg = g.images().iter().map(|gi| s.engine.bind(&f, gi)).collect::<Result<Vec<_>, _>>();
                let fg = fg.map_err(|e| e.to_string())?;
                let fg = Assignment::new(s.sig, ctx.clone(), last.clone(), fg).map_err(|e| e.to_string())?;
                let rhs = s.engine.bind(&fg, &t).map_err(|e| e.to_string())?;
                Ok((lhs, rhs))
            };
            Some(match run() {
                Ok((lhs, rhs)) => {
                    same(&lhs, &rhs, || cx(format!("{} vs {}", print_term(s.sig, &lhs), print_term(s.sig, &rhs))))
                }
                Err(e) => Err(cx(e)),
            })
        })
    }

    // The two diagrams for join: unit and constructor squares, the second
    // unit law and associativity.

    fn join_triangle(&mut self) -> Verdict {
        self.drive("join.triangle", |s| {
            let (ctx, _, t) = s.ctx_term(0)?;
            let tm = from_term(s.sig, &t);
            let out = s.engine.join(&Tm::Var(Elem::term(tm.clone())));
            Some(same(
                &out,
                &tm,
                || json!({"context": ctx.to_string(), "term": print_term(s.sig, &t), "result": render_tm(s.sig, &out)}),
            ))
        })
    }

    fn join_unit(&mut self) -> Verdict {
        self.drive("join.unit", |s| {
            let (ctx, _, t) = s.ctx_term(0)?;
            let tm = from_term(s.sig, &t);
            let out = s.engine.join(&s.engine.relabel(&tm, &eta));
            Some(same(
                &out,
                &tm,
                || json!({"context": ctx.to_string(), "term": print_term(s.sig, &t), "result": render_tm(s.sig, &out)}),
            ))
        })
    }

    fn join_rectangle(&mut self) -> Verdict {
        self.drive("join.rectangle", |s| {
            let ctx = s.sampler.context(0, CTX_MAX);
            let base = Family::Ctx(ctx.clone());
            let t = PointedEndo::TheMonadT;
            let layer = s.layer(&t, &t.apply(base.clone()))?;
            let lhs = s.engine.join(&tau(&layer));
            let moved = s.engine.theta(&t, &t, &layer);
            let joined = moved.args.iter().map(|a| Elem::term(s.engine.join(&unwrap_term(a)))).collect();
            let rhs = tau(&Layer { op: layer.op, args: joined });
            let sorted = tm_sort(s.sig, &base, &lhs).as_ref() == Some(&s.sig.op(layer.op).result);
            Some(same(&(sorted, &lhs), &(true, &rhs), || {
                json!({
                    "context": ctx.to_string(), "layer": s.show_layer(&layer),
                    "lhs": render_tm(s.sig, &lhs), "rhs": render_tm(s.sig, &rhs), "well_sorted": sorted,
                })
            }))
        })
    }

    fn join_associativity(&mut self) -> Verdict {
        self.drive("join.associativity", |s| {
            let ctx = s.sampler.context(0, CTX_MAX);
            let base = Family::Ctx(ctx.clone());
            let fam = Family::terms(Family::terms(base.clone()));
            let sorts: Vec<Sort> = s.sig.sorts.clone();
            let sort = s.sampler.pick(&sorts)?.clone();
            let ttt = s.sampler.tm(&fam, &sort, 3)?;
            let lhs = s.engine.join(&s.engine.relabel(&ttt, &|e| s.engine.apply_mor(&PtdMor::Join, e)));
            let rhs = s.engine.join(&s.engine.join(&ttt));
            let sorted = tm_sort(s.sig, &base, &lhs).as_ref() == Some(&sort);
            Some(same(&(sorted, &lhs), &(true, &rhs), || {
                json!({
                    "context": ctx.to_string(), "term": render_tm(s.sig, &ttt),
                    "lhs": render_tm(s.sig, &lhs), "rhs": render_tm(s.sig, &rhs), "well_sorted": sorted,
                })
            }))
        })
    }

    // The bracket diagram for pointed morphisms into T.

    fn bracket_pointed(&mut self) -> Verdict {
        self.drive("bracket.pointed", |s| {
            let phi = s.bracket_input()?;
            let ctx = s.sampler.context(1, CTX_MAX);
            let x = Elem::Idx(s.sampler.below(ctx.len()));
            let lhs = s.engine.apply_mor(&phi, &s.engine.point(&phi.source(), &x));
            Some(same(
                &lhs,
                &eta(&x),
                || json!({"morphism": phi.to_string(), "context": ctx.to_string(), "result": render_elem(s.sig, &lhs)}),
            ))
        })
    }

    fn bracket_triangle(&mut self) -> Verdict {
        self.drive("bracket.triangle", |s| {
            let phi = s.bracket_input()?;
            let ctx = s.sampler.context(0, CTX_MAX);
            let base = Family::Ctx(ctx.clone());
            let (sort, z) = s.sampler.any_elem(&phi.source().apply(base.clone()))?;
            let lhs = s.engine.bracket(&phi, &Tm::Var(z.clone()));
            let rhs = unwrap_term(&s.engine.apply_mor(&phi, &z));
            let sorted = tm_sort(s.sig, &base, &lhs).as_ref() == Some(&sort);
            Some(same(&(sorted, &lhs), &(true, &rhs), || {
                json!({
                    "morphism": phi.to_string(), "context": ctx.to_string(), "variable": render_elem(s.sig, &z),
                    "lhs": render_tm(s.sig, &lhs), "rhs": render_tm(s.sig, &rhs), "well_sorted": sorted,
                })
            }))
        })
    }

    fn bracket_rectangle(&mut self) -> Verdict {
        self.drive("bracket.rectangle", |s| {
            let phi = s.bracket_input()?;
            let z = phi.source();
            let ctx = s.sampler.context(0, CTX_MAX);
            let base = Family::Ctx(ctx.clone());
            let t = PointedEndo::TheMonadT;
            let layer = s.layer(&t, &z.apply(base.clone()))?;
            let lhs = s.engine.bracket(&phi, &tau(&layer));
            let moved = s.engine.theta(&t, &z, &layer);
            let args = moved.args.iter().map(|a| Elem::term(s.engine.bracket(&phi, &unwrap_term(a)))).collect();
            let rhs = tau(&Layer { op: layer.op, args });
            let sorted = tm_sort(s.sig, &base, &lhs).as_ref() == Some(&s.sig.op(layer.op).result);
            Some(same(&(sorted, &lhs), &(true, &rhs), || {
                json!({
                    "morphism": phi.to_string(), "context": ctx.to_string(), "layer": s.show_layer(&layer),
                    "lhs": render_tm(s.sig, &lhs), "rhs": render_tm(s.sig, &rhs), "well_sorted": sorted,
                })
            }))
        })
    }

    // Comparison with the textbook implementation.

    fn oracle_bind(&mut self) -> Verdict {
        self.drive("oracle.bind", |s| {
            let (ctx, _, t) = s.ctx_term(0)?;
            let target = s.sampler.covering_context(&ctx, CTX_MAX);
            let f = s.sampler.assignment(&ctx, &target, IMAGE_HEIGHT)?;
            let out = s.engine.bind(&f, &t);
            let expected = naive_bind(s.sig, f.images(), &t);
            Some(same(&out, &Ok(expected.clone()), || {
                json!({
                    "context": ctx.to_string(), "term": print_term(s.sig, &t), "assignment": f.to_json(s.sig),
                    "result": show_result(s.sig, &out), "expected": print_term(s.sig, &expected),
                })
            }))
        })
    }

    fn oracle_subst(&mut self) -> Verdict {
        self.drive("oracle.subst", |s| {
            let x = s.sampler.context(0, CTX_MAX);
            let y = s.sampler.covering_context(&x, CTX_MAX);
            let whole = concat(&x, &y);
            let sort = s.sampler.inhabited_sort(&whole, s.cfg.max_height)?;
            let t = s.sampler.term(&whole, &sort, s.cfg.max_height)?;
            let f = s.sampler.assignment(&x, &y, IMAGE_HEIGHT)?;
            let out = s.engine.subst(&f, &t);
            let expected = naive_subst(s.sig, f.images(), &t);
            Some(same(&out, &Ok(expected.clone()), || {
                json!({
                    "x": x.to_string(), "y": y.to_string(), "term": print_term(s.sig, &t),
                    "assignment": f.to_json(s.sig), "result": show_result(s.sig, &out),
                    "expected": print_term(s.sig, &expected),
                })
            }))
        })
    }

    // Strength.

    fn strength_identity(&mut self) -> Verdict {
        self.drive("strength.identity", |s| {
            let x = s.endo();
            let ctx = s.sampler.context(0, CTX_MAX);
            let layer = s.layer(&x, &Family::Ctx(ctx.clone()))?;
            let out = s.engine.theta(&x, &PointedEndo::Identity, &layer);
            Some(same(&out, &layer, || {
                json!({
                    "x": x.to_string(), "context": ctx.to_string(),
                    "layer": s.show_layer(&layer), "result": s.show_layer(&out),
                })
            }))
        })
    }

    fn strength_composite(&mut self) -> Verdict {
        self.drive_pairs("strength.composite", |s, outer, inner| {
            let x = s.endo();
            let ctx = s.sampler.context(0, CTX_MAX);
            let base = Family::Ctx(ctx.clone());
            let layer = s.layer(&x, &outer.apply(inner.apply(base.clone())))?;
            let both = PointedEndo::composite(outer.clone(), inner.clone());
            let lhs = s.engine.theta(&x, &both, &layer);
            let x_outer = PointedEndo::composite(x.clone(), outer.clone());
            let rhs = s.engine.theta(&x_outer, inner, &s.engine.theta(&x, outer, &layer));
            let sorted = s.layer_sorted(&PointedEndo::composite(x_outer, inner.clone()), &base, &lhs);
            Some(same(&(sorted, &lhs), &(true, &rhs), || {
                json!({
                    "x": x.to_string(), "outer": outer.to_string(), "inner": inner.to_string(),
                    "context": ctx.to_string(), "layer": s.show_layer(&layer),
                    "lhs": s.show_layer(&lhs), "rhs": s.show_layer(&rhs), "well_sorted": sorted,
                })
            }))
        })
    }

    fn strength_naturality_x(&mut self) -> Verdict {
        self.drive("strength.naturality_x", |s| {
            let beta = match s.sampler.below(3) {
                0 => PtdMor::Point(s.endo()),
                1 => PtdMor::Join,
                _ => PtdMor::Identity(PointedEndo::TheMonadT),
            };
            let (x, x2) = (beta.source(), beta.target());
            let z = s.endo();
            let ctx = s.sampler.context(0, CTX_MAX);
            let layer = s.layer(&x, &z.apply(Family::Ctx(ctx.clone())))?;
            let map =
                |l: &Layer| Layer { op: l.op, args: l.args.iter().map(|a| s.engine.apply_mor(&beta, a)).collect() };
            let lhs = s.engine.theta(&x2, &z, &map(&layer));
            let rhs = map(&s.engine.theta(&x, &z, &layer));
            Some(same(&lhs, &rhs, || {
                json!({
                    "transformation": beta.to_string(), "z": z.to_string(), "context": ctx.to_string(),
                    "layer": s.show_layer(&layer), "lhs": s.show_layer(&lhs), "rhs": s.show_layer(&rhs),
                })
            }))
        })
    }

    fn strength_naturality_z(&mut self) -> Verdict {
        self.drive("strength.naturality_z", |s| {
            let phi = s.pointed_morphism()?;
            let (z, z2) = (phi.source(), phi.target());
            let x = s.endo();
            let ctx = s.sampler.context(0, CTX_MAX);
            let layer = s.layer(&x, &z.apply(Family::Ctx(ctx.clone())))?;
            let e = s.engine;
            let sig = s.sig;
            let moved_args = layer
                .args
                .iter()
                .enumerate()
                .map(|(j, a)| {
                    let binders = PointedEndo::OptionList(sig.op(layer.op).args[j].binders.clone());
                    e.fmap(&x, &|y| e.fmap(&binders, &|w| e.apply_mor(&phi, w), y), a)
                })
                .collect();
            let lhs = e.theta(&x, &z2, &Layer { op: layer.op, args: moved_args });
            let th = e.theta(&x, &z, &layer);
            let rhs =
                Layer { op: th.op, args: th.args.iter().map(|a| e.fmap(&x, &|y| e.apply_mor(&phi, y), a)).collect() };
            Some(same(&lhs, &rhs, || {
                json!({
                    "morphism": phi.to_string(), "x": x.to_string(), "context": ctx.to_string(),
                    "layer": s.show_layer(&layer), "lhs": s.show_layer(&lhs), "rhs": s.show_layer(&rhs),
                })
            }))
        })
    }

    // Distributive laws and points.

    fn dist_identity(&mut self) -> Verdict {
        self.drive("distlaw.identity", |s| {
            let ctx = s.sampler.context(0, CTX_MAX);
            let binders = s.binder_list(0, 2);
            let (_, x) = s.sampler.any_elem(&Family::opt_list(&binders, Family::Ctx(ctx.clone())))?;
            let out = s.engine.dist(&PointedEndo::Identity, &binders, &x);
            Some(same(&out, &x, || {
                json!({
                    "context": ctx.to_string(), "binders": PointedEndo::OptionList(binders.clone()).to_string(),
                    "element": render_elem(s.sig, &x), "result": render_elem(s.sig, &out),
                })
            }))
        })
    }

    fn dist_composite(&mut self) -> Verdict {
        self.drive_pairs("distlaw.composite", |s, outer, inner| {
            let ctx = s.sampler.context(0, CTX_MAX);
            let base = Family::Ctx(ctx.clone());
            let binders = s.binder_list(1, 2);
            let (sort, x) = s.sampler.any_elem(&Family::opt_list(&binders, outer.apply(inner.apply(base.clone()))))?;
            let e = s.engine;
            let both = PointedEndo::composite(outer.clone(), inner.clone());
            let lhs = e.dist(&both, &binders, &x);
            let rhs = e.fmap(outer, &|y| e.dist(inner, &binders, y), &e.dist(outer, &binders, &x));
            let target = both.apply(Family::opt_list(&binders, base));
            let sorted = elem_sort(s.sig, &target, &lhs).as_ref() == Some(&sort);
            Some(same(&(sorted, &lhs), &(true, &rhs), || {
                json!({
                    "outer": outer.to_string(), "inner": inner.to_string(), "context": ctx.to_string(),
                    "binders": PointedEndo::OptionList(binders.clone()).to_string(),
                    "element": render_elem(s.sig, &x), "lhs": render_elem(s.sig, &lhs),
                    "rhs": render_elem(s.sig, &rhs), "well_sorted": sorted,
                })
            }))
        })
    }

    /// The law for a list of binders against the composite of one-layer
    /// laws.
    fn dist_option_list(&mut self) -> Verdict {
        fn composed(e: &Engine<'_>, z: &PointedEndo, binders: &[Sort], x: &Elem) -> Elem {
            let Some((first, rest)) = binders.split_first() else {
                return x.clone();
            };
            let one = PointedEndo::OptionSort(first.clone());
            let inner = e.fmap(&one, &|w| composed(e, z, rest, w), x);
            e.dist(z, std::slice::from_ref(first), &inner)
        }
        self.drive("distlaw.option_list", |s| {
            let z = s.endo();
            let ctx = s.sampler.context(0, CTX_MAX);
            let base = Family::Ctx(ctx.clone());
            let binders = s.binder_list(2, 3);
            let (sort, x) = s.sampler.any_elem(&Family::opt_list(&binders, z.apply(base.clone())))?;
            let lhs = s.engine.dist(&z, &binders, &x);
            let rhs = composed(s.engine, &z, &binders, &x);
            let sorted = elem_sort(s.sig, &z.apply(Family::opt_list(&binders, base)), &lhs).as_ref() == Some(&sort);
            Some(same(&(sorted, &lhs), &(true, &rhs), || {
                json!({
                    "z": z.to_string(), "context": ctx.to_string(),
                    "binders": PointedEndo::OptionList(binders.clone()).to_string(),
                    "element": render_elem(s.sig, &x), "lhs": render_elem(s.sig, &lhs),
                    "rhs": render_elem(s.sig, &rhs), "well_sorted": sorted,
                })
            }))
        })
    }

    fn dist_point(&mut self) -> Verdict {
        self.drive("distlaw.point", |s| {
            let z = s.endo();
            let ctx = s.sampler.context(0, CTX_MAX);
            let binders = s.binder_list(0, 2);
            let (_, x) = s.sampler.any_elem(&Family::opt_list(&binders, Family::Ctx(ctx.clone())))?;
            let e = s.engine;
            let layers = PointedEndo::OptionList(binders.clone());
            let lhs = e.dist(&z, &binders, &e.fmap(&layers, &|y| e.point(&z, y), &x));
            let rhs = e.point(&z, &x);
            Some(same(&lhs, &rhs, || {
                json!({
                    "z": z.to_string(), "context": ctx.to_string(), "binders": layers.to_string(),
                    "element": render_elem(s.sig, &x), "lhs": render_elem(s.sig, &lhs), "rhs": render_elem(s.sig, &rhs),
                })
            }))
        })
    }

    fn dist_naturality(&mut self) -> Verdict {
        self.drive("distlaw.naturality", |s| {
            let phi = s.pointed_morphism()?;
            let (z, z2) = (phi.source(), phi.target());
            let ctx = s.sampler.context(0, CTX_MAX);
            let binders = s.binder_list(1, 2);
            let (_, x) = s.sampler.any_elem(&Family::opt_list(&binders, z.apply(Family::Ctx(ctx.clone()))))?;
            let e = s.engine;
            let layers = PointedEndo::OptionList(binders.clone());
            let lhs = e.dist(&z2, &binders, &e.fmap(&layers, &|y| e.apply_mor(&phi, y), &x));
            let rhs = e.apply_mor(&phi, &e.dist(&z, &binders, &x));
            Some(same(&lhs, &rhs, || {
                json!({
                    "morphism": phi.to_string(), "context": ctx.to_string(), "binders": layers.to_string(),
                    "element": render_elem(s.sig, &x), "lhs": render_elem(s.sig, &lhs), "rhs": render_elem(s.sig, &rhs),
                })
            }))
        })
    }

    fn point_naturality(&mut self) -> Verdict {
        self.drive("point.naturality", |s| {
            let z = if s.sampler.below(2) == 0 { s.endo() } else { PointedEndo::composite(s.endo(), s.endo()) };
            let ctx = s.sampler.context(1, CTX_MAX);
            let target = s.sampler.covering_context(&ctx, CTX_MAX);
            let rho = s.sampler.renaming(&ctx, &target)?;
            let x = s.sampler.below(ctx.len());
            let e = s.engine;
            let lhs = e.point(&z, &Elem::Idx(rho.apply(x)));
            let rename_elem = |y: &Elem| match y {
                Elem::Idx(i) if *i < rho.source().len() => Elem::Idx(rho.apply(*i)),
                other => other.clone(),
            };
            let rhs = e.fmap(&z, &rename_elem, &e.point(&z, &Elem::Idx(x)));
            Some(same(&lhs, &rhs, || {
                json!({
                    "z": z.to_string(), "context": ctx.to_string(), "target": target.to_string(),
                    "renaming": rho.as_slice(), "index": x,
                    "lhs": render_elem(s.sig, &lhs), "rhs": render_elem(s.sig, &rhs),
                })
            }))
        })
    }

    // Interchange of substitutions on disjoint blocks.

    fn interchange(&mut self) -> Verdict {
        self.drive("interchange", |s| {
            let x = s.sampler.context(1, 2);
            let y = s.sampler.context(1, 2);
            let w = s.sampler.covering_context(&concat(&x, &y), CTX_MAX);
            let whole = concat(&concat(&x, &y), &w);
            let sort = s.sampler.inhabited_sort(&whole, s.cfg.max_height)?;
            let t = s.sampler.term(&whole, &sort, s.cfg.max_height)?;
            let f = s.sampler.assignment(&x, &w, IMAGE_HEIGHT)?;
            let g = s.sampler.assignment(&y, &w, IMAGE_HEIGHT)?;
            Some(s.interchange_case(&x, &y, &w, &t, &f, &g))
        })
    }

    fn interchange_case(
        &self,
        x: &Context,
        y: &Context,
        w: &Context,
        t: &Term,
        f: &Assignment,
        g: &Assignment,
    ) -> Outcome {
        let sig = self.sig;
        let (nx, ny) = (x.len(), y.len());
        let cx = |detail: String| {
            json!({
                "x": x.to_string(), "y": y.to_string(), "w": w.to_string(), "term": print_term(sig, t),
                "f": f.to_json(sig), "g": g.to_json(sig), "detail": detail,
            })
        };
        let err = |e: SubstError| cx(e.to_string());
        let weaken = |images: &[Term], front: &Context| -> Result<Vec<Term>, Value> {
            let target = concat(front, w);
            let rho = Renaming::new(w.clone(), target, (0..w.len()).map(|j| front.len() + j).collect())
                .map_err(|e| cx(e.to_string()))?;
            Ok(images.iter().map(|i| rename(sig, i, &rho)).collect())
        };
        // X first: substitute f weakened past Y, then g.
        let f_up = Assignment::new(sig, x.clone(), concat(y, w), weaken(f.images(), y)?).map_err(err)?;
        let lhs = self.engine.subst(g, &self.engine.subst(&f_up, t).map_err(err)?).map_err(err)?;
        // Y first: move Y to the front, substitute g weakened past X, then f.
        let whole = concat(&concat(x, y), w);
        let swapped = concat(&concat(y, x), w);
        let swap: Vec<usize> = (0..whole.len())
            .map(|i| {
                if i < nx {
                    ny + i
                } else if i < nx + ny {
                    i - nx
                } else {
                    i
                }
            })
            .collect();
        let swap = Renaming::new(whole.clone(), swapped, swap).map_err(|e| cx(e.to_string()))?;
        let g_up = Assignment::new(sig, y.clone(), concat(x, w), weaken(g.images(), x)?).map_err(err)?;
        let rhs = self.engine.subst(f, &self.engine.subst(&g_up, &rename(sig, t, &swap)).map_err(err)?).map_err(err)?;
        // Both equal the simultaneous substitution.
        let all: Vec<Term> = f.images().iter().chain(g.images()).cloned().chain((0..w.len()).map(Term::Var)).collect();
        let all = Assignment::new(sig, whole, w.clone(), all).map_err(err)?;
        let both = self.engine.bind(&all, t).map_err(err)?;
        if lhs == rhs && rhs == both {
            Ok(())
        } else {
            Err(cx(format!(
                "x first {}, y first {}, simultaneous {}",
                print_term(sig, &lhs),
                print_term(sig, &rhs),
                print_term(sig, &both)
            )))
        }
    }
}

/// Unit and associativity laws of `bind`, both diagrams for `join`, and
/// the bracket diagram for sampled pointed morphisms.
pub fn check_monad_laws(engine: &Engine<'_>, cfg: &LawConfig) -> Vec<Verdict> {
    let mut s = Suite::new(engine, cfg);
    vec![
        s.left_unit(),
        s.right_unit(),
        s.bind_associativity(),
        s.join_triangle(),
        s.join_rectangle(),
        s.join_unit(),
        s.join_associativity(),
        s.bracket_pointed(),
        s.bracket_triangle(),
        s.bracket_rectangle(),
    ]
}

/// `bind` and `subst` against the textbook implementation.
pub fn check_oracle(engine: &Engine<'_>, cfg: &LawConfig) -> Vec<Verdict> {
    let mut s = Suite::new(engine, cfg);
    vec![s.oracle_bind(), s.oracle_subst()]
}

pub fn check_strength_laws(engine: &Engine<'_>, cfg: &LawConfig) -> Vec<Verdict> {
    let mut s = Suite::new(engine, cfg);
    vec![s.strength_identity(), s.strength_composite(), s.strength_naturality_x(), s.strength_naturality_z()]
}

pub fn check_distlaws(engine: &Engine<'_>, cfg: &LawConfig) -> Vec<Verdict> {
    let mut s = Suite::new(engine, cfg);
    vec![
        s.dist_identity(),
        s.dist_composite(),
        s.dist_option_list(),
        s.dist_point(),
        s.dist_naturality(),
        s.point_naturality(),
    ]
}

pub fn check_interchange(engine: &Engine<'_>, cfg: &LawConfig) -> Vec<Verdict> {
    let mut s = Suite::new(engine, cfg);
    vec![s.interchange()]
}

/// Exhaustive checks of both adjunctions around projection, over the
/// first `max_sorts` sorts of `sig` with every carrier of size at most
/// `bound`.
pub fn check_adjunctions(sig: &Signature, bound: usize, max_sorts: usize) -> Vec<Verdict> {
    let universe = &sig.sorts[..sig.sorts.len().min(max_sorts)];
    let mut hat_proj = Tally::new("adjunction.hat_proj");
    let mut proj_underline = Tally::new("adjunction.proj_underline");
    match sweep_adjunctions(universe, bound) {
        Ok(sweep) => {
            let failure = sweep.failure.unwrap_or_default();
            let (bad_hat, bad_under) = (failure.starts_with("hat/proj"), failure.starts_with("proj/underline"));
            for i in 0..sweep.hat_proj_cases {
                hat_proj.record(!(bad_hat && i + 1 == sweep.hat_proj_cases), || json!({"detail": failure}));
            }
            for i in 0..sweep.proj_underline_cases {
                proj_underline
                    .record(!(bad_under && i + 1 == sweep.proj_underline_cases), || json!({"detail": failure}));
            }
        }
        Err(e) => {
            hat_proj.record(false, || json!({"error": e.to_string()}));
            proj_underline.record(false, || json!({"error": e.to_string()}));
        }
    }
    vec![hat_proj.finish(), proj_underline.finish()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::stlc_finitized;
    use crate::subst::Mutation;

    fn small() -> LawConfig {
        LawConfig { samples: 60, seed: 7, max_height: 4 }
    }

    fn all(engine: &Engine<'_>, cfg: &LawConfig) -> Vec<Verdict> {
        let mut v = check_monad_laws(engine, cfg);
        v.extend(check_oracle(engine, cfg));
        v.extend(check_strength_laws(engine, cfg));
        v.extend(check_distlaws(engine, cfg));
        v.extend(check_interchange(engine, cfg));
        v
    }

    #[test]
    fn stlc_passes_every_law() {
        let sig = stlc_finitized(&[Sort::new("b")], 1);
        for v in all(&Engine::new(&sig), &small()) {
            assert!(v.passed(), "{}", v.to_json_line());
            assert!(v.samples > 0, "{} ran no samples", v.law);
        }
    }

    #[test]
    fn no_operations_passes_trivially() {
        let sig = Signature::empty(vec![Sort::new("b")]);
        for v in all(&Engine::new(&sig), &small()) {
            assert!(v.passed(), "{}", v.to_json_line());
        }
    }

    #[test]
    fn every_mutation_is_caught() {
        let sig = stlc_finitized(&[Sort::new("b")], 1);
        for m in Mutation::ALL {
            let failing: Vec<String> = all(&Engine::with_mutation(&sig, Some(m)), &small())
                .into_iter()
                .filter(|v| !v.passed())
                .map(|v| v.law)
                .collect();
            assert!(!failing.is_empty(), "{} went unnoticed", m.name());
        }
    }

    #[test]
    fn adjunctions_over_two_sorts() {
        let sig = stlc_finitized(&[Sort::new("b")], 1);
        let v = check_adjunctions(&sig, 2, 3);
        assert_eq!(v.len(), 2);
        for v in v {
            assert!(v.passed() && v.samples > 0, "{}", v.to_json_line());
        }
    }
}
