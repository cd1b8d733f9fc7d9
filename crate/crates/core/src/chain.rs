//! Finite stages of the initial-algebra chain `0 -> (Id+H)0 -> (Id+H)^2 0
//! -> ...`, evaluated pointwise at a context and a sort.
//!
//! Stages are built from sets of skeletons by coproducts and cartesian
//! products, without going through the term module, and then compared
//! with `enumerate`.

use std::collections::{HashMap, HashSet};
use std::rc::Rc;

use serde_json::json;
use thiserror::Error;

use crate::family::Context;
use crate::signature::{OpId, Signature, Sort};
use crate::term::{enumerate_with, mk_op, var, Limits, SortedTerm, Term, TermError};
use crate::verdict::{Tally, Verdict};

pub const DEFAULT_LEVEL_BOUND: usize = 6;
/// Largest stage that is materialized at a single `(context, sort)`.
pub const DEFAULT_LEVEL_BUDGET: u128 = 5_000_000;

/// An element of a stage: a left injection of a variable, or a right
/// injection of an operation applied to elements of the previous stage.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Skeleton {
    Inl(usize),
    Inr(OpId, Vec<Rc<Skeleton>>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("level {requested} exceeds the bound {bound}")]
    Bound { requested: usize, bound: usize },
    #[error("unknown sort {0}")]
    UnknownSort(Sort),
    #[error("level {n} at ({context}) {sort} has {size} elements, over the budget of {budget}")]
    TooLarge { n: usize, context: Context, sort: Sort, size: u128, budget: u128 },
}

pub type Stage = Rc<Vec<Rc<Skeleton>>>;

type Key = (usize, Context, Sort);

pub struct Chain<'s> {
    sig: &'s Signature,
    pub bound: usize,
    pub budget: u128,
    levels: HashMap<Key, Stage>,
    sizes: HashMap<Key, u128>,
}

impl<'s> Chain<'s> {
    pub fn new(sig: &'s Signature) -> Self {
        Chain {
            sig,
            bound: DEFAULT_LEVEL_BOUND,
            budget: DEFAULT_LEVEL_BUDGET,
            levels: HashMap::new(),
            sizes: HashMap::new(),
        }
    }

    pub fn with_limits(sig: &'s Signature, bound: usize, budget: u128) -> Self {
        Chain { bound, budget, ..Chain::new(sig) }
    }

    fn guard(&self, n: usize, s: &Sort) -> Result<(), ChainError> {
        if n > self.bound {
            return Err(ChainError::Bound { requested: n, bound: self.bound });
        }
        if !self.sig.has_sort(s) {
            return Err(ChainError::UnknownSort(s.clone()));
        }
        Ok(())
    }

    /// Cardinality of level `n` at `(ctx, s)`, saturating.
    pub fn size(&mut self, n: usize, ctx: &Context, s: &Sort) -> Result<u128, ChainError> {
        self.guard(n, s)?;
        Ok(self.size_unchecked(n, ctx, s))
    }

    fn size_unchecked(&mut self, n: usize, ctx: &Context, s: &Sort) -> u128 {
        if n == 0 {
            return 0;
        }
        let key = (n, ctx.clone(), s.clone());
        if let Some(&k) = self.sizes.get(&key) {
            return k;
        }
        let sig = self.sig;
        let mut total = ctx.count_of(s) as u128;
        for id in sig.ops_with_result(s) {
            let product = sig.op(id).args.iter().fold(1u128, |acc, a| {
                acc.saturating_mul(self.size_unchecked(n - 1, &ctx.extended(&a.binders), &a.sort))
            });
            total = total.saturating_add(product);
        }
        self.sizes.insert(key, total);
        total
    }

    /// Level `n` at `(ctx, s)`: the variables of sort `s`, then `eval_h` of
    /// level `n - 1`.
    pub fn level(&mut self, n: usize, ctx: &Context, s: &Sort) -> Result<Stage, ChainError> {
        self.guard(n, s)?;
        let size = self.size_unchecked(n, ctx, s);
        if size > self.budget {
            return Err(ChainError::TooLarge { n, context: ctx.clone(), sort: s.clone(), size, budget: self.budget });
        }
        Ok(self.level_unchecked(n, ctx, s))
    }

    fn level_unchecked(&mut self, n: usize, ctx: &Context, s: &Sort) -> Stage {
        if n == 0 {
            return Rc::new(Vec::new());
        }
        let key = (n, ctx.clone(), s.clone());
        if let Some(found) = self.levels.get(&key) {
            return found.clone();
        }
        let mut out: Vec<Rc<Skeleton>> = ctx.vars_of(s).map(|i| Rc::new(Skeleton::Inl(i))).collect();
        out.extend(self.eval_h(n - 1, ctx, s));
        let out = Rc::new(out);
        self.levels.insert(key, out.clone());
        out
    }

    /// `H` applied to level `prev`, at `(ctx, s)`: a coproduct over the
    /// operations with result `s` of the product of their argument stages.
    pub fn eval_h(&mut self, prev: usize, ctx: &Context, s: &Sort) -> Vec<Rc<Skeleton>> {
        let sig = self.sig;
        let mut out = Vec::new();
        for id in sig.ops_with_result(s) {
            let factors: Vec<Stage> = sig
                .op(id)
                .args
                .iter()
                .map(|a| self.level_unchecked(prev, &ctx.extended(&a.binders), &a.sort))
                .collect();
            for tuple in product(&factors) {
                out.push(Rc::new(Skeleton::Inr(id, tuple)));
            }
        }
        out
    }
}

/// Cartesian product, first factor most significant. The empty product
/// has one element.
fn product(factors: &[Stage]) -> Vec<Vec<Rc<Skeleton>>> {
    let mut acc: Vec<Vec<Rc<Skeleton>>> = vec![Vec::new()];
    for f in factors {
        acc = acc
            .iter()
            .flat_map(|prefix| f.iter().map(move |x| [prefix.as_slice(), std::slice::from_ref(x)].concat()))
            .collect();
    }
    acc
}

/// The structure-preserving map into terms, checked constructor by
/// constructor.
pub fn to_sorted_term(sig: &Signature, ctx: &Context, sk: &Skeleton) -> Result<SortedTerm, TermError> {
    match sk {
        Skeleton::Inl(i) => var(ctx, *i),
        Skeleton::Inr(id, subs) => {
            let decl = sig.op(*id);
            let args = subs
                .iter()
                .zip(&decl.args)
                .map(|(sub, a)| to_sorted_term(sig, &ctx.extended(&a.binders), sub))
                .collect::<Result<Vec<_>, _>>()?;
            mk_op(sig, ctx, &decl.name, args)
        }
    }
}

/// Result of comparing level `n` at `(context, sort)` with `enumerate`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainCheck {
    pub n: usize,
    pub context: Context,
    pub sort: Sort,
    pub size: u128,
    /// First reason the comparison failed, if it did.
    pub failure: Option<String>,
}

impl ChainCheck {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks that the map from level `n` to terms is a bijection onto
/// `enumerate` at height `n`, and that level `n - 1` sits inside level `n`
/// compatibly with the map.
pub fn check_against_terms(chain: &mut Chain<'_>, ctx: &Context, s: &Sort, n: usize) -> ChainCheck {
    let mut check = ChainCheck { n, context: ctx.clone(), sort: s.clone(), size: 0, failure: None };
    if let Err(e) = compare(chain, ctx, s, n, &mut check.size) {
        check.failure = Some(e);
    }
    check
}

fn compare(chain: &mut Chain<'_>, ctx: &Context, s: &Sort, n: usize, size: &mut u128) -> Result<(), String> {
    let sig = chain.sig;
    *size = chain.size(n, ctx, s).map_err(|e| e.to_string())?;
    let level = chain.level(n, ctx, s).map_err(|e| e.to_string())?;
    let mut image: HashSet<Term> = HashSet::with_capacity(level.len());
    for sk in level.iter() {
        let t = to_sorted_term(sig, ctx, sk).map_err(|e| format!("skeleton {sk:?} does not map to a term: {e}"))?;
        if t.sort() != s {
            return Err(format!("skeleton {sk:?} maps to sort {}", t.sort()));
        }
        if !image.insert(t.into_term()) {
            return Err(format!("two skeletons map to the same term as {sk:?}"));
        }
    }
    let limits = Limits { max_height: chain.bound, max_terms: chain.budget };
    let terms = enumerate_with(sig, ctx, s, n, limits).map_err(|e| e.to_string())?;
    if terms.len() != image.len() {
        return Err(format!("level has {} elements, enumerate gives {} terms", image.len(), terms.len()));
    }
    if let Some(t) = terms.iter().find(|t| !image.contains(t)) {
        return Err(format!("enumerated term {t:?} is not in the image of the level"));
    }
    if n > 0 {
        let below = chain.level(n - 1, ctx, s).map_err(|e| e.to_string())?;
        let members: HashSet<&Skeleton> = level.iter().map(|k| k.as_ref()).collect();
        for sk in below.iter() {
            if !members.contains(sk.as_ref()) {
                return Err(format!("{sk:?} from level {} is missing at level {n}", n - 1));
            }
            let t = to_sorted_term(sig, ctx, sk).map_err(|e| e.to_string())?;
            if !image.contains(t.term()) {
                return Err(format!("inclusion of {sk:?} does not commute with the map to terms"));
            }
        }
    }
    Ok(())
}

/// Every context of length at most `max_len` over the sorts of `sig`,
/// shortest first.
pub fn small_contexts(sig: &Signature, max_len: usize) -> Vec<Context> {
    let mut out = vec![Context::empty()];
    let mut frontier = vec![Context::empty()];
    for _ in 0..max_len {
        frontier = frontier
            .iter()
            .flat_map(|c| sig.sorts.iter().map(move |s| c.entries().iter().chain([s]).cloned().collect::<Context>()))
            .collect();
        out.extend(frontier.iter().cloned());
    }
    out
}

/// Runs `check_against_terms` at every context of length at most `max_len`,
/// every sort and every level `0..=max_n`.
pub fn sweep(sig: &Signature, max_len: usize, max_n: usize) -> Vec<ChainCheck> {
    let mut chain = Chain::new(sig);
    let mut out = Vec::new();
    for ctx in small_contexts(sig, max_len) {
        for s in &sig.sorts {
            for n in 0..=max_n {
                out.push(check_against_terms(&mut chain, &ctx, s, n));
            }
        }
    }
    out
}

/// The sweep as a single verdict named `chain.bijection`.
pub fn check_chain(sig: &Signature, max_len: usize, max_n: usize) -> Verdict {
    let mut tally = Tally::new("chain.bijection");
    for c in sweep(sig, max_len, max_n) {
        tally.record(c.passed(), || {
            json!({
                "n": c.n, "context": c.context.to_string(), "sort": c.sort.name(),
                "detail": c.failure.clone().unwrap_or_default(),
            })
        });
    }
    tally.finish()
}

/// Writes rows `(n, context, sort, count)` under the header
/// `n,context,sort,count`.
pub fn write_counts_csv<'a>(rows: impl IntoIterator<Item = (usize, &'a Context, &'a Sort, u128)>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "context", "sort", "count"]).expect("writing to memory");
    for (n, ctx, s, count) in rows {
        w.write_record([n.to_string(), ctx.to_string(), s.name().to_string(), count.to_string()])
            .expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("records are UTF-8")
}

/// Count report for every context, sort and level `0..=max_n`. Sizes come
/// from the chain without materializing it.
pub fn counts_csv(sig: &Signature, contexts: &[Context], max_n: usize) -> Result<String, ChainError> {
    let mut chain = Chain::new(sig);
    let mut rows = Vec::new();
    for ctx in contexts {
        for s in &sig.sorts {
            for n in 0..=max_n {
                rows.push((n, ctx, s, chain.size(n, ctx, s)?));
            }
        }
    }
    Ok(write_counts_csv(rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::stlc_finitized;

    fn stlc() -> Signature {
        stlc_finitized(&[Sort::new("b")], 1)
    }

    fn b() -> Context {
        Context::new(vec![Sort::new("b")])
    }

    #[test]
    fn level_zero_is_empty() {
        let sig = stlc();
        let mut chain = Chain::new(&sig);
        for s in &sig.sorts {
            assert!(chain.level(0, &b(), s).unwrap().is_empty());
            assert!(check_against_terms(&mut chain, &b(), s, 0).passed());
        }
    }

    #[test]
    fn level_one_is_variables() {
        let sig = stlc();
        let mut chain = Chain::new(&sig);
        let ctx = Context::new(vec![Sort::new("b"), Sort::new("b->b"), Sort::new("b")]);
        let level = chain.level(1, &ctx, &Sort::new("b")).unwrap();
        assert_eq!(
            level.iter().map(|k| k.as_ref().clone()).collect::<Vec<_>>(),
            vec![Skeleton::Inl(0), Skeleton::Inl(2)]
        );
    }

    #[test]
    fn h_at_level_one() {
        let sig = stlc();
        let mut chain = Chain::new(&sig);
        // lam over each b-variable of [b, b]
        assert_eq!(chain.eval_h(1, &b(), &Sort::new("b->b")).len(), 2);
        assert!(chain.eval_h(0, &b(), &Sort::new("b")).is_empty());
    }

    #[test]
    fn only_nullary_operations_survive_level_zero() {
        let sig = crate::examples::coc_example();
        let mut chain = Chain::new(&sig);
        let h = chain.eval_h(0, &Context::empty(), &Sort::new("ty"));
        assert_eq!(h.len(), 1);
        assert!(chain.eval_h(0, &Context::empty(), &Sort::new("el")).is_empty());
    }

    #[test]
    fn stlc_level_two() {
        let sig = stlc();
        let mut chain = Chain::new(&sig);
        assert_eq!(chain.level(2, &b(), &Sort::new("b->b")).unwrap().len(), 2);
        let c = check_against_terms(&mut chain, &b(), &Sort::new("b"), 2);
        assert!(c.passed(), "{c:?}");
        assert_eq!(c.size, 1);
    }

    #[test]
    fn bounds() {
        let sig = stlc();
        let mut chain = Chain::with_limits(&sig, 3, 1);
        assert!(matches!(chain.level(4, &b(), &Sort::new("b")), Err(ChainError::Bound { .. })));
        assert!(matches!(chain.level(1, &b(), &Sort::new("c")), Err(ChainError::UnknownSort(_))));
        assert!(matches!(chain.level(2, &b(), &Sort::new("b->b")), Err(ChainError::TooLarge { size: 2, .. })));
    }

    #[test]
    fn csv_report() {
        let sig = stlc();
        let csv = counts_csv(&sig, &[b()], 2).unwrap();
        assert!(csv.starts_with("n,context,sort,count\n"));
        assert!(csv.contains("2,b,b,1\n"));
        assert!(csv.contains("2,b,b->b,2\n"));
        let two = counts_csv(&sig, &[Context::new(vec![Sort::new("b"), Sort::new("b")])], 1).unwrap();
        assert!(two.contains("1,\"b,b\",b,2\n"));
    }

    #[test]
    fn contexts_up_to_length_two() {
        assert_eq!(small_contexts(&stlc(), 2).len(), 1 + 2 + 4);
    }
}
