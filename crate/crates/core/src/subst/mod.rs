//! Monadic substitution generated from a signature.
//!
//! Terms are first lifted into a nested representation where each binder
//! adds an explicit option layer and a context may hold terms as its
//! elements. In that form the distributive laws, the strength, the bracket
//! and `join` are plain structural maps, and `bind`/`subst` on ordinary
//! de Bruijn terms are derived from them.

mod engine;
pub mod laws;
mod naive;
mod ops;

use std::fmt::Write as _;

use crate::family::Context;
use crate::signature::{OpId, Signature, Sort};
use crate::term::Term;

pub use engine::{Engine, Layer, Mutation, PointedEndo, PtdMor};
pub use naive::{naive_bind, naive_subst};
pub use ops::{Assignment, SubstError};

/// An element of a [`Family`]. Which variants are meaningful depends on
/// the family: `Idx` for a context, `Fresh`/`Old` for an option layer,
/// `Term` for a family of terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Elem {
    Idx(usize),
    Fresh,
    Old(Box<Elem>),
    Term(Box<Tm>),
}

/// A term whose variables are elements of some family.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Tm {
    Var(Elem),
    Op(OpId, Vec<Tm>),
}

/// A sorted family built from a context by option layers and term
/// formation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Ctx(Context),
    Opt(Sort, Box<Family>),
    Terms(Box<Family>),
}

impl Elem {
    pub fn old(self) -> Elem {
        Elem::Old(Box::new(self))
    }

    pub fn old_n(self, n: usize) -> Elem {
        (0..n).fold(self, |e, _| e.old())
    }

    pub fn term(tm: Tm) -> Elem {
        Elem::Term(Box::new(tm))
    }
}

impl Family {
    /// `binders = [s1, .., sk]` gives `Opt(s1, Opt(s2, .. inner))`, so the
    /// first binder is the outermost layer, as in `Context::extended`.
    pub fn opt_list(binders: &[Sort], inner: Family) -> Family {
        binders.iter().rev().fold(inner, |f, s| Family::Opt(s.clone(), Box::new(f)))
    }

    pub fn terms(inner: Family) -> Family {
        Family::Terms(Box::new(inner))
    }
}

pub fn elem_sort(sig: &Signature, fam: &Family, e: &Elem) -> Option<Sort> {
    match (fam, e) {
        (Family::Ctx(c), Elem::Idx(i)) => c.get(*i).cloned(),
        (Family::Opt(s, _), Elem::Fresh) => Some(s.clone()),
        (Family::Opt(_, inner), Elem::Old(x)) => elem_sort(sig, inner, x),
        (Family::Terms(inner), Elem::Term(t)) => tm_sort(sig, inner, t),
        _ => None,
    }
}

pub fn tm_sort(sig: &Signature, fam: &Family, tm: &Tm) -> Option<Sort> {
    match tm {
        Tm::Var(e) => elem_sort(sig, fam, e),
        Tm::Op(id, args) => {
            let decl = sig.ops.get(id.0)?;
            if decl.args.len() != args.len() {
                return None;
            }
            for (a, want) in args.iter().zip(&decl.args) {
                let inner = Family::opt_list(&want.binders, fam.clone());
                if tm_sort(sig, &inner, a)? != want.sort {
                    return None;
                }
            }
            Some(decl.result.clone())
        }
    }
}

/// Lifts a de Bruijn term over a context into the nested form.
pub fn from_term(sig: &Signature, term: &Term) -> Tm {
    from_term_at(sig, term, 0)
}

fn from_term_at(sig: &Signature, term: &Term, depth: usize) -> Tm {
    match term {
        Term::Var(n) if *n < depth => Tm::Var(Elem::Fresh.old_n(*n)),
        Term::Var(n) => Tm::Var(Elem::Idx(n - depth).old_n(depth)),
        Term::Op(id, args) => Tm::Op(
            *id,
            args.iter()
                .zip(&sig.op(*id).args)
                .map(|(a, want)| from_term_at(sig, a, depth + want.binders.len()))
                .collect(),
        ),
    }
}

/// Flattens a nested term over option layers on a context back to de
/// Bruijn form; `None` if a variable is not a context element.
pub fn to_term(tm: &Tm) -> Option<Term> {
    fn index(e: &Elem) -> Option<usize> {
        match e {
            Elem::Idx(i) => Some(*i),
            Elem::Fresh => Some(0),
            Elem::Old(x) => index(x).map(|i| i + 1),
            Elem::Term(_) => None,
        }
    }
    match tm {
        Tm::Var(e) => index(e).map(Term::Var),
        Tm::Op(id, args) => args.iter().map(to_term).collect::<Option<Vec<_>>>().map(|a| Term::Op(*id, a)),
    }
}

pub fn render_elem(sig: &Signature, e: &Elem) -> String {
    let mut out = String::new();
    write_elem(sig, e, &mut out);
    out
}

pub fn render_tm(sig: &Signature, tm: &Tm) -> String {
    let mut out = String::new();
    write_tm(sig, tm, &mut out);
    out
}

fn write_elem(sig: &Signature, e: &Elem, out: &mut String) {
    match e {
        Elem::Idx(i) => {
            let _ = write!(out, "{i}");
        }
        Elem::Fresh => out.push_str("fresh"),
        Elem::Old(x) => {
            out.push_str("old(");
            write_elem(sig, x, out);
            out.push(')');
        }
        Elem::Term(t) => {
            out.push('[');
            write_tm(sig, t, out);
            out.push(']');
        }
    }
}

fn write_tm(sig: &Signature, tm: &Tm, out: &mut String) {
    match tm {
        Tm::Var(e) => {
            out.push_str("(var ");
            write_elem(sig, e, out);
            out.push(')');
        }
        Tm::Op(id, args) => {
            out.push_str("(op ");
            out.push_str(sig.ops.get(id.0).map_or("?", |d| d.name.as_str()));
            for a in args {
                out.push(' ');
                write_tm(sig, a, out);
            }
            out.push(')');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::stlc_finitized;

    fn stlc() -> Signature {
        stlc_finitized(&[Sort::new("b")], 1)
    }

    #[test]
    fn nested_round_trip() {
        let sig = stlc();
        // app (lam (var 1)) (var 0) over [b]
        let t = Term::Op(OpId(0), vec![Term::Op(OpId(1), vec![Term::Var(1)]), Term::Var(0)]);
        let tm = from_term(&sig, &t);
        assert_eq!(
            tm,
            Tm::Op(OpId(0), vec![Tm::Op(OpId(1), vec![Tm::Var(Elem::Idx(0).old())]), Tm::Var(Elem::Idx(0))])
        );
        assert_eq!(to_term(&tm), Some(t));
    }

    #[test]
    fn sorts_follow_layers() {
        let sig = stlc();
        let b = Sort::new("b");
        let fam = Family::opt_list(&[Sort::new("b->b"), b.clone()], Family::Ctx(Context::new(vec![b.clone()])));
        assert_eq!(elem_sort(&sig, &fam, &Elem::Fresh).unwrap().name(), "b->b");
        assert_eq!(elem_sort(&sig, &fam, &Elem::Fresh.old()), Some(b.clone()));
        assert_eq!(elem_sort(&sig, &fam, &Elem::Idx(0).old_n(2)), Some(b));
        assert_eq!(elem_sort(&sig, &fam, &Elem::Idx(0)), None);
    }

    #[test]
    fn terms_as_elements() {
        let sig = stlc();
        let g = Family::Ctx(Context::new(vec![Sort::new("b")]));
        let inner = Tm::Op(OpId(1), vec![Tm::Var(Elem::Fresh)]);
        let fam = Family::terms(g);
        assert_eq!(elem_sort(&sig, &fam, &Elem::term(inner.clone())).unwrap().name(), "b->b");
        assert_eq!(to_term(&Tm::Var(Elem::term(inner))), None);
    }
}
