//! Seeded random generation of contexts, terms and family elements.
//!
//! All randomness goes through one `ChaCha8Rng`. Case `i` of a run with
//! seed `s` reseeds it with `s + i`, so every case can be replayed alone.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::family::{Context, Renaming};
use crate::signature::{Signature, Sort};
use crate::subst::{to_term, Assignment, Elem, Family, Tm};
use crate::term::Term;

pub struct Sampler<'s> {
    sig: &'s Signature,
    rng: ChaCha8Rng,
    /// Height bound for terms that occur as elements of a family.
    pub elem_height: usize,
    inhabited: HashMap<(Family, Sort, usize), bool>,
}

impl<'s> Sampler<'s> {
    pub fn new(sig: &'s Signature, seed: u64) -> Self {
        Sampler { sig, rng: ChaCha8Rng::seed_from_u64(seed), elem_height: 2, inhabited: HashMap::new() }
    }

    pub fn reseed(&mut self, seed: u64) {
        self.rng = ChaCha8Rng::seed_from_u64(seed);
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> Option<&'a T> {
        items.choose(&mut self.rng)
    }

    pub fn sort(&mut self) -> Sort {
        self.sig.sorts[self.below(self.sig.sorts.len())].clone()
    }

    /// A context whose length is uniform in `min..=max`.
    pub fn context(&mut self, min: usize, max: usize) -> Context {
        let len = self.rng.gen_range(min..=max);
        (0..len).map(|_| self.sort()).collect()
    }

    /// A context containing every sort of `needed`, padded with random sorts
    /// up to length `max` and shuffled.
    pub fn covering_context(&mut self, needed: &Context, max: usize) -> Context {
        let mut sorts: Vec<Sort> = Vec::new();
        for s in needed.entries() {
            if !sorts.contains(s) {
                sorts.push(s.clone());
            }
        }
        let extra = max.saturating_sub(sorts.len());
        let extra = self.rng.gen_range(0..=extra);
        for _ in 0..extra {
            sorts.push(self.sort());
        }
        sorts.shuffle(&mut self.rng);
        Context::new(sorts)
    }

    pub fn elem_inhabited(&mut self, fam: &Family, sort: &Sort) -> bool {
        match fam {
            Family::Ctx(c) => c.count_of(sort) > 0,
            Family::Opt(s, inner) => s == sort || self.elem_inhabited(inner, sort),
            Family::Terms(inner) => {
                let h = self.elem_height;
                self.inhabited(inner, sort, h)
            }
        }
    }

    /// Whether some term of height at most `h` exists at `(fam, sort)`.
    pub fn inhabited(&mut self, fam: &Family, sort: &Sort, h: usize) -> bool {
        if h == 0 {
            return false;
        }
        let key = (fam.clone(), sort.clone(), h);
        if let Some(&b) = self.inhabited.get(&key) {
            return b;
        }
        let sig = self.sig;
        let found = self.elem_inhabited(fam, sort)
            || sig.ops_with_result(sort).any(|id| {
                sig.op(id).args.iter().all(|a| {
                    let inner = Family::opt_list(&a.binders, fam.clone());
                    self.inhabited(&inner, &a.sort, h - 1)
                })
            });
        self.inhabited.insert(key, found);
        found
    }

    fn least_height(&mut self, fam: &Family, sort: &Sort, h: usize) -> Option<usize> {
        (1..=h).find(|&k| self.inhabited(fam, sort, k))
    }

    /// A random element of `fam` at `sort`.
    pub fn elem(&mut self, fam: &Family, sort: &Sort) -> Option<Elem> {
        match fam {
            Family::Ctx(c) => {
                let vars: Vec<usize> = c.vars_of(sort).collect();
                self.pick(&vars).map(|&i| Elem::Idx(i))
            }
            Family::Opt(s, inner) => {
                let fresh = s == sort;
                let old = self.elem_inhabited(inner, sort);
                match (fresh, old) {
                    (true, true) if self.rng.gen_bool(0.5) => Some(Elem::Fresh),
                    (true, false) => Some(Elem::Fresh),
                    (_, true) => self.elem(inner, sort).map(Elem::old),
                    (false, false) => None,
                }
            }
            Family::Terms(inner) => {
                let h = self.elem_height;
                self.tm(inner, sort, h).map(Elem::term)
            }
        }
    }

    /// A random element of `fam` at a random sort it inhabits.
    pub fn any_elem(&mut self, fam: &Family) -> Option<(Sort, Elem)> {
        let sig = self.sig;
        let sorts: Vec<Sort> = sig.sorts.iter().filter(|s| self.elem_inhabited(fam, s)).cloned().collect();
        let s = self.pick(&sorts)?.clone();
        let e = self.elem(fam, &s)?;
        Some((s, e))
    }

    /// A random term of height at most `h`, with height drawn uniformly
    /// from the feasible range.
    pub fn tm(&mut self, fam: &Family, sort: &Sort, h: usize) -> Option<Tm> {
        let least = self.least_height(fam, sort, h)?;
        let h = self.rng.gen_range(least..=h);
        self.tm_exact_bound(fam, sort, h)
    }

    fn tm_exact_bound(&mut self, fam: &Family, sort: &Sort, h: usize) -> Option<Tm> {
        let sig = self.sig;
        let var = self.elem_inhabited(fam, sort);
        let ops: Vec<_> = sig
            .ops_with_result(sort)
            .filter(|&id| {
                sig.op(id).args.iter().all(|a| {
                    let inner = Family::opt_list(&a.binders, fam.clone());
                    self.inhabited(&inner, &a.sort, h - 1)
                })
            })
            .collect();
        let choices = ops.len() + usize::from(var);
        if choices == 0 {
            return None;
        }
        let k = self.below(choices);
        if k == ops.len() {
            return self.elem(fam, sort).map(Tm::Var);
        }
        let id = ops[k];
        let mut args = Vec::new();
        for a in &sig.op(id).args {
            let inner = Family::opt_list(&a.binders, fam.clone());
            let least = self.least_height(&inner, &a.sort, h - 1)?;
            let sub_h = self.rng.gen_range(least..=h - 1);
            args.push(self.tm_exact_bound(&inner, &a.sort, sub_h)?);
        }
        Some(Tm::Op(id, args))
    }

    pub fn term(&mut self, ctx: &Context, sort: &Sort, h: usize) -> Option<Term> {
        self.tm(&Family::Ctx(ctx.clone()), sort, h).as_ref().and_then(to_term)
    }

    /// A sort inhabited at height `h` in `ctx`, if any.
    pub fn inhabited_sort(&mut self, ctx: &Context, h: usize) -> Option<Sort> {
        let fam = Family::Ctx(ctx.clone());
        let sig = self.sig;
        let sorts: Vec<Sort> = sig.sorts.iter().filter(|s| self.inhabited(&fam, s, h)).cloned().collect();
        self.pick(&sorts).cloned()
    }

    /// A random assignment, or `None` if some source sort has no term over
    /// `target`.
    pub fn assignment(&mut self, source: &Context, target: &Context, h: usize) -> Option<Assignment> {
        let images = source.entries().iter().map(|s| self.term(target, s, h)).collect::<Option<Vec<_>>>()?;
        Assignment::new(self.sig, source.clone(), target.clone(), images).ok()
    }

    /// A random sort-preserving renaming.
    pub fn renaming(&mut self, source: &Context, target: &Context) -> Option<Renaming> {
        let mut map = Vec::with_capacity(source.len());
        for s in source.entries() {
            let vars: Vec<usize> = target.vars_of(s).collect();
            map.push(*self.pick(&vars)?);
        }
        Renaming::new(source.clone(), target.clone(), map).ok()
    }
}
