use std::collections::HashMap;
use std::rc::Rc;

use super::{Term, TermError};
use crate::family::Context;
use crate::signature::{OpId, Signature, Sort};

pub const DEFAULT_HEIGHT_BOUND: usize = 6;
pub const DEFAULT_TERM_BUDGET: u128 = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_height: usize,
    /// Largest number of terms a single enumeration may return.
    pub max_terms: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_height: DEFAULT_HEIGHT_BOUND, max_terms: DEFAULT_TERM_BUDGET }
    }
}

/// All well-sorted terms of height at most `max_height` at `(ctx, s)`:
/// variables by index, then operations in declaration order, with argument
/// tuples in lexicographic order of their own enumerations.
pub fn enumerate(sig: &Signature, ctx: &Context, s: &Sort, max_height: usize) -> Result<Vec<Term>, TermError> {
    enumerate_with(sig, ctx, s, max_height, Limits::default())
}

pub fn enumerate_with(
    sig: &Signature,
    ctx: &Context,
    s: &Sort,
    max_height: usize,
    limits: Limits,
) -> Result<Vec<Term>, TermError> {
    if max_height > limits.max_height {
        return Err(TermError::HeightBound { requested: max_height, bound: limits.max_height });
    }
    if !sig.has_sort(s) {
        return Err(TermError::UnknownSort(s.clone()));
    }
    let count = count_terms(sig, ctx, s, max_height);
    if count > limits.max_terms {
        return Err(TermError::SizeBound { count, budget: limits.max_terms });
    }
    let mut search = Search { sig, memo: HashMap::new() };
    Ok(search.terms(ctx, s, max_height).as_ref().clone())
}

struct Search<'a> {
    sig: &'a Signature,
    memo: HashMap<(Context, Sort, usize), Rc<Vec<Term>>>,
}

impl Search<'_> {
    fn terms(&mut self, ctx: &Context, s: &Sort, height: usize) -> Rc<Vec<Term>> {
        let key = (ctx.clone(), s.clone(), height);
        if let Some(found) = self.memo.get(&key) {
            return found.clone();
        }
        let mut out = Vec::new();
        if height >= 1 {
            out.extend(ctx.vars_of(s).map(Term::Var));
            let sig = self.sig;
            for id in sig.ops_with_result(s) {
                let decl = sig.op(id);
                if decl.args.is_empty() {
                    out.push(Term::Op(id, Vec::new()));
                    continue;
                }
                let columns: Vec<Rc<Vec<Term>>> =
                    decl.args.iter().map(|a| self.terms(&ctx.extended(&a.binders), &a.sort, height - 1)).collect();
                push_tuples(id, &columns, &mut out);
            }
        }
        let out = Rc::new(out);
        self.memo.insert(key, out.clone());
        out
    }
}

fn push_tuples(id: OpId, columns: &[Rc<Vec<Term>>], out: &mut Vec<Term>) {
    if columns.iter().any(|c| c.is_empty()) {
        return;
    }
    let mut cursor = vec![0usize; columns.len()];
    loop {
        out.push(Term::Op(id, cursor.iter().zip(columns).map(|(&i, c)| c[i].clone()).collect()));
        let mut k = columns.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            cursor[k] += 1;
            if cursor[k] < columns[k].len() {
                break;
            }
            cursor[k] = 0;
        }
    }
}

/// Number of well-sorted terms of height at most `height` at `(ctx, s)`,
/// saturating at `u128::MAX`.
pub fn count_terms(sig: &Signature, ctx: &Context, s: &Sort, height: usize) -> u128 {
    let mut memo = HashMap::new();
    count_rec(sig, ctx, s, height, &mut memo)
}

fn count_rec(
    sig: &Signature,
    ctx: &Context,
    s: &Sort,
    height: usize,
    memo: &mut HashMap<(Context, Sort, usize), u128>,
) -> u128 {
    if height == 0 {
        return 0;
    }
    let key = (ctx.clone(), s.clone(), height);
    if let Some(&n) = memo.get(&key) {
        return n;
    }
    let mut total = ctx.count_of(s) as u128;
    for id in sig.ops_with_result(s) {
        let mut product: u128 = 1;
        for a in &sig.op(id).args {
            let n = count_rec(sig, &ctx.extended(&a.binders), &a.sort, height - 1, memo);
            product = product.saturating_mul(n);
            if product == 0 {
                break;
            }
        }
        total = total.saturating_add(product);
    }
    memo.insert(key, total);
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::stlc_finitized;
    use crate::term::{height, infer};

    fn stlc() -> Signature {
        stlc_finitized(&[Sort::new("b")], 1)
    }
    fn ctx(names: &[&str]) -> Context {
        names.iter().map(|n| Sort::new(*n)).collect()
    }

    #[test]
    fn base_sort_at_height_two() {
        let terms = enumerate(&stlc(), &ctx(&["b"]), &Sort::new("b"), 2).unwrap();
        assert_eq!(terms, vec![Term::Var(0)]);
    }

    #[test]
    fn arrow_sort_at_height_two() {
        let terms = enumerate(&stlc(), &ctx(&["b"]), &Sort::new("b->b"), 2).unwrap();
        let lam = OpId(1);
        assert_eq!(terms, vec![Term::Op(lam, vec![Term::Var(0)]), Term::Op(lam, vec![Term::Var(1)])]);
    }

    #[test]
    fn no_operations_means_variables_only() {
        let sig = Signature::empty(vec![Sort::new("b"), Sort::new("c")]);
        let g = ctx(&["b", "c", "b"]);
        for h in 1..=5 {
            assert_eq!(enumerate(&sig, &g, &Sort::new("b"), h).unwrap(), vec![Term::Var(0), Term::Var(2)]);
        }
    }

    #[test]
    fn enumeration_is_sound_and_duplicate_free() {
        let sig = stlc();
        for g in [ctx(&[]), ctx(&["b"]), ctx(&["b->b", "b"])] {
            for s in &sig.sorts {
                for h in 0..=4 {
                    let terms = enumerate(&sig, &g, s, h).unwrap();
                    let unique: std::collections::HashSet<_> = terms.iter().collect();
                    assert_eq!(unique.len(), terms.len());
                    assert_eq!(terms.len() as u128, count_terms(&sig, &g, s, h));
                    for t in &terms {
                        assert_eq!(&infer(&sig, &g, t).unwrap(), s);
                        assert!(height(t) <= h);
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_is_deterministic() {
        let sig = stlc();
        let a = enumerate(&sig, &ctx(&["b"]), &Sort::new("b"), 4).unwrap();
        let b = enumerate(&sig, &ctx(&["b"]), &Sort::new("b"), 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bounds_are_enforced() {
        let sig = stlc();
        assert!(matches!(
            enumerate(&sig, &ctx(&["b"]), &Sort::new("b"), 7),
            Err(TermError::HeightBound { requested: 7, bound: 6 })
        ));
        let tight = Limits { max_height: 6, max_terms: 3 };
        assert!(matches!(
            enumerate_with(&sig, &ctx(&["b"]), &Sort::new("b"), 4, tight),
            Err(TermError::SizeBound { .. })
        ));
        assert!(matches!(enumerate(&sig, &ctx(&[]), &Sort::new("q"), 2), Err(TermError::UnknownSort(_))));
    }
}
