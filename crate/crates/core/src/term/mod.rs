//! Well-sorted terms over contexts, in de Bruijn form.
//!
//! A [`Term`] is a bare tree; [`SortedTerm`] pairs it with the context and
//! sort it was checked against. Variables are the unit of the syntax and
//! operation nodes are its constructors: argument `j` of an operation lives
//! in the context extended by that argument's binders.

mod enumerate;
mod sexpr;

use std::fmt;

use thiserror::Error;

use crate::family::{Context, Renaming};
use crate::signature::{OpId, Signature, Sort};

pub use enumerate::{count_terms, enumerate, enumerate_with, Limits, DEFAULT_HEIGHT_BOUND, DEFAULT_TERM_BUDGET};
pub use sexpr::{parse_term, print_term};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(usize),
    Op(OpId, Vec<Term>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TermError {
    #[error("variable index {index} out of range for a context of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("unknown operation {0}")]
    UnknownOp(String),
    #[error("unknown sort {0}")]
    UnknownSort(Sort),
    #[error("operation {op} takes {expected} arguments, got {found}")]
    Arity { op: String, expected: usize, found: usize },
    #[error(
        "argument {arg} of {op}: expected sort {expected} in context [{expected_ctx}], \
         found sort {found} in context [{found_ctx}]"
    )]
    SortMismatch { op: String, arg: usize, expected: Sort, found: Sort, expected_ctx: Context, found_ctx: Context },
    #[error("expected a term of sort {expected}, found sort {found}")]
    UnexpectedSort { expected: Sort, found: Sort },
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("height {requested} exceeds the bound {bound}")]
    HeightBound { requested: usize, bound: usize },
    #[error("{count} terms exceed the enumeration budget of {budget}")]
    SizeBound { count: u128, budget: u128 },
}

/// A term together with the context and sort it is well-sorted at.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SortedTerm {
    term: Term,
    ctx: Context,
    sort: Sort,
}

impl SortedTerm {
    /// Checks `term` in `ctx` and records its sort.
    pub fn check(sig: &Signature, ctx: &Context, term: Term) -> Result<Self, TermError> {
        let sort = infer(sig, ctx, &term)?;
        Ok(SortedTerm { term, ctx: ctx.clone(), sort })
    }

    pub fn term(&self) -> &Term {
        &self.term
    }

    pub fn into_term(self) -> Term {
        self.term
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn sort(&self) -> &Sort {
        &self.sort
    }
}

/// The variable `i` of `ctx`.
pub fn var(ctx: &Context, i: usize) -> Result<SortedTerm, TermError> {
    match ctx.get(i) {
        Some(s) => Ok(SortedTerm { term: Term::Var(i), ctx: ctx.clone(), sort: s.clone() }),
        None => Err(TermError::IndexOutOfRange { index: i, len: ctx.len() }),
    }
}

/// Applies the operation `op_name` in `ctx`. Argument `j` must already be
/// checked in `ctx` extended by the binders of argument `j`.
pub fn mk_op(sig: &Signature, ctx: &Context, op_name: &str, args: Vec<SortedTerm>) -> Result<SortedTerm, TermError> {
    let id = sig.op_id(op_name).ok_or_else(|| TermError::UnknownOp(op_name.to_string()))?;
    let decl = sig.op(id);
    if decl.args.len() != args.len() {
        return Err(TermError::Arity { op: decl.name.clone(), expected: decl.args.len(), found: args.len() });
    }
    let mut terms = Vec::with_capacity(args.len());
    for (j, (arg, want)) in args.into_iter().zip(&decl.args).enumerate() {
        let expected_ctx = ctx.extended(&want.binders);
        if arg.sort != want.sort || arg.ctx != expected_ctx {
            return Err(TermError::SortMismatch {
                op: decl.name.clone(),
                arg: j,
                expected: want.sort.clone(),
                found: arg.sort,
                expected_ctx,
                found_ctx: arg.ctx,
            });
        }
        terms.push(arg.term);
    }
    Ok(SortedTerm { term: Term::Op(id, terms), ctx: ctx.clone(), sort: decl.result.clone() })
}

/// Infers the sort of `term` in `ctx`, checking well-sortedness throughout.
pub fn infer(sig: &Signature, ctx: &Context, term: &Term) -> Result<Sort, TermError> {
    match term {
        Term::Var(i) => ctx.get(*i).cloned().ok_or(TermError::IndexOutOfRange { index: *i, len: ctx.len() }),
        Term::Op(id, args) => {
            let decl = sig.ops.get(id.0).ok_or_else(|| TermError::UnknownOp(format!("#{}", id.0)))?;
            if decl.args.len() != args.len() {
                return Err(TermError::Arity { op: decl.name.clone(), expected: decl.args.len(), found: args.len() });
            }
            for (j, (arg, want)) in args.iter().zip(&decl.args).enumerate() {
                let inner = ctx.extended(&want.binders);
                let found = infer(sig, &inner, arg)?;
                if found != want.sort {
                    return Err(TermError::SortMismatch {
                        op: decl.name.clone(),
                        arg: j,
                        expected: want.sort.clone(),
                        found,
                        expected_ctx: inner.clone(),
                        found_ctx: inner,
                    });
                }
            }
            Ok(decl.result.clone())
        }
    }
}

/// Checks that `term` has sort `sort` in `ctx`.
pub fn check(sig: &Signature, ctx: &Context, term: &Term, sort: &Sort) -> Result<(), TermError> {
    let found = infer(sig, ctx, term)?;
    if &found == sort {
        Ok(())
    } else {
        Err(TermError::UnexpectedSort { expected: sort.clone(), found })
    }
}

/// Number of nodes on the longest root-to-leaf path; variables and
/// constants have height 1.
pub fn height(term: &Term) -> usize {
    match term {
        Term::Var(_) => 1,
        Term::Op(_, args) => 1 + args.iter().map(height).max().unwrap_or(0),
    }
}

/// Functorial action of a renaming. Under `k` binders indices below `k`
/// are fixed and the rest go through `rho`, shifted by `k`.
pub fn rename(sig: &Signature, term: &Term, rho: &Renaming) -> Term {
    rename_under(sig, term, rho.as_slice(), 0)
}

fn rename_under(sig: &Signature, term: &Term, map: &[usize], depth: usize) -> Term {
    match term {
        Term::Var(i) if *i < depth => Term::Var(*i),
        Term::Var(i) => Term::Var(map[i - depth] + depth),
        Term::Op(id, args) => Term::Op(
            *id,
            args.iter()
                .zip(&sig.op(*id).args)
                .map(|(a, want)| rename_under(sig, a, map, depth + want.binders.len()))
                .collect(),
        ),
    }
}

/// Displays a term with operation names from its signature.
pub struct Display<'a> {
    pub sig: &'a Signature,
    pub term: &'a Term,
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self.sig, self.term))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::coproduct;
    use crate::signature::stlc_finitized;

    fn stlc() -> Signature {
        stlc_finitized(&[Sort::new("b")], 1)
    }
    fn ctx(names: &[&str]) -> Context {
        names.iter().map(|n| Sort::new(*n)).collect()
    }

    #[test]
    fn variables() {
        let v = var(&ctx(&["b"]), 0).unwrap();
        assert_eq!((v.term(), v.sort().name()), (&Term::Var(0), "b"));
        let v = var(&ctx(&["b", "b->b"]), 1).unwrap();
        assert_eq!(v.sort().name(), "b->b");
        assert_eq!(var(&ctx(&[]), 0), Err(TermError::IndexOutOfRange { index: 0, len: 0 }));
    }

    #[test]
    fn lambda_over_innermost_variable() {
        let sig = stlc();
        let body = var(&ctx(&["b", "b"]), 0).unwrap();
        let lam = mk_op(&sig, &ctx(&["b"]), "lam_b_b", vec![body]).unwrap();
        assert_eq!(lam.sort().name(), "b->b");
        assert_eq!(lam.term(), &Term::Op(OpId(1), vec![Term::Var(0)]));
    }

    #[test]
    fn application_at_base_sort() {
        let sig = stlc();
        let g = ctx(&["b"]);
        let body = var(&ctx(&["b", "b"]), 1).unwrap();
        let f = mk_op(&sig, &g, "lam_b_b", vec![body]).unwrap();
        let x = var(&g, 0).unwrap();
        let app = mk_op(&sig, &g, "app_b_b", vec![f, x]).unwrap();
        assert_eq!(app.sort().name(), "b");
        assert_eq!(infer(&sig, &g, app.term()).unwrap().name(), "b");
    }

    #[test]
    fn constructor_errors() {
        let sig = stlc();
        let g = ctx(&["b"]);
        let wrong = var(&ctx(&["b->b", "b"]), 0).unwrap();
        let err = mk_op(&sig, &g, "lam_b_b", vec![wrong]).unwrap_err();
        assert!(matches!(err, TermError::SortMismatch { arg: 0, .. }), "{err:?}");
        assert!(matches!(mk_op(&sig, &g, "lam_b_b", vec![]), Err(TermError::Arity { expected: 1, found: 0, .. })));
        assert!(matches!(mk_op(&sig, &g, "nope", vec![]), Err(TermError::UnknownOp(_))));
        let x = var(&g, 0).unwrap();
        let err = mk_op(&sig, &g, "app_b_b", vec![x.clone(), x]).unwrap_err();
        assert!(matches!(err, TermError::SortMismatch { arg: 0, .. }), "{err:?}");
    }

    #[test]
    fn heights() {
        let lam = Term::Op(OpId(1), vec![Term::Var(0)]);
        assert_eq!(height(&Term::Var(0)), 1);
        assert_eq!(height(&lam), 2);
        assert_eq!(height(&Term::Op(OpId(0), vec![lam, Term::Var(0)])), 3);
    }

    #[test]
    fn weakening_along_left_injection() {
        let sig = stlc();
        let (_, left, _) = coproduct(&ctx(&["b"]), &ctx(&["b->b"]));
        assert_eq!(rename(&sig, &Term::Var(0), &left), Term::Var(0));
    }

    #[test]
    fn renaming_skips_bound_variables() {
        let sig = stlc();
        let (_, _, right) = coproduct(&ctx(&["b"]), &ctx(&["b"]));
        // lam (app ?) over [b]: body Var 0 is bound, Var 1 is free.
        let t = Term::Op(OpId(1), vec![Term::Var(1)]);
        assert_eq!(rename(&sig, &t, &right), Term::Op(OpId(1), vec![Term::Var(2)]));
        let t = Term::Op(OpId(1), vec![Term::Var(0)]);
        assert_eq!(rename(&sig, &t, &right), t);
    }
}
