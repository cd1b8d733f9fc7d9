use std::collections::BTreeMap;

use thiserror::Error;

use super::{from_term, to_term, Elem, Engine, Mutation, Tm};
use crate::family::Context;
use crate::signature::{Signature, Sort};
use crate::term::{infer, parse_term, print_term, Term, TermError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubstError {
    #[error("assignment has {found} images for a source context of length {expected}")]
    Length { expected: usize, found: usize },
    #[error("assignment is missing index {0}")]
    MissingIndex(usize),
    #[error("assignment key {0} is not an index of the source context")]
    UnexpectedKey(String),
    #[error("assignment index {index}: {source}")]
    Image { index: usize, source: TermError },
    #[error("term: {0}")]
    Term(#[from] TermError),
    #[error("assignment file: {0}")]
    Json(String),
    #[error("substitution produced an ill-formed term {0}")]
    Malformed(String),
}

/// A sort-respecting map from the variables of `source` to terms over
/// `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    source: Context,
    target: Context,
    map: Vec<Term>,
}

impl Assignment {
    pub fn new(sig: &Signature, source: Context, target: Context, map: Vec<Term>) -> Result<Self, SubstError> {
        if map.len() != source.len() {
            return Err(SubstError::Length { expected: source.len(), found: map.len() });
        }
        for (index, (t, s)) in map.iter().zip(source.entries()).enumerate() {
            let found = infer(sig, &target, t).map_err(|source| SubstError::Image { index, source })?;
            if &found != s {
                return Err(SubstError::Image {
                    index,
                    source: TermError::UnexpectedSort { expected: s.clone(), found },
                });
            }
        }
        Ok(Assignment { source, target, map })
    }

    /// The unit assignment `i |-> var i`.
    pub fn identity(ctx: &Context) -> Self {
        Assignment { source: ctx.clone(), target: ctx.clone(), map: (0..ctx.len()).map(Term::Var).collect() }
    }

    /// Reads a JSON object from decimal indices to term s-expressions.
    pub fn from_json(sig: &Signature, source: Context, target: Context, text: &str) -> Result<Self, SubstError> {
        let raw: BTreeMap<String, String> = serde_json::from_str(text).map_err(|e| SubstError::Json(e.to_string()))?;
        let mut images: Vec<Option<Term>> = vec![None; source.len()];
        for (key, sexpr) in &raw {
            let index: usize = key.parse().map_err(|_| SubstError::UnexpectedKey(key.clone()))?;
            let Some(sort) = source.get(index) else {
                return Err(SubstError::UnexpectedKey(key.clone()));
            };
            let t =
                parse_term(sig, &target, sexpr, Some(sort)).map_err(|source| SubstError::Image { index, source })?;
            images[index] = Some(t.into_term());
        }
        let map = images
            .into_iter()
            .enumerate()
            .map(|(i, t)| t.ok_or(SubstError::MissingIndex(i)))
            .collect::<Result<Vec<_>, _>>()?;
        Assignment::new(sig, source, target, map)
    }

    pub fn source(&self) -> &Context {
        &self.source
    }

    pub fn target(&self) -> &Context {
        &self.target
    }

    pub fn images(&self) -> &[Term] {
        &self.map
    }

    pub fn get(&self, i: usize) -> Option<&Term> {
        self.map.get(i)
    }

    pub fn to_json(&self, sig: &Signature) -> serde_json::Value {
        let obj: serde_json::Map<String, serde_json::Value> =
            self.map.iter().enumerate().map(|(i, t)| (i.to_string(), print_term(sig, t).into())).collect();
        serde_json::Value::Object(obj)
    }
}

impl Engine<'_> {
    fn image(&self, f: &Assignment, i: usize) -> Elem {
        match f.map.get(i) {
            Some(t) => Elem::term(from_term(self.sig(), t)),
            None => Elem::term(Tm::Var(Elem::Idx(i))),
        }
    }

    /// `bind f = join . T(f)` on nested terms over `f.source`.
    pub fn bind_tm(&self, f: &Assignment, tm: &Tm) -> Tm {
        let g = |e: &Elem| match e {
            Elem::Idx(i) => self.image(f, *i),
            other => other.clone(),
        };
        self.join(&self.relabel(tm, &g))
    }

    pub fn bind(&self, f: &Assignment, t: &Term) -> Result<Term, SubstError> {
        let sort = infer(self.sig(), &f.source, t)?;
        let out = self.bind_tm(f, &from_term(self.sig(), t));
        self.finish(&f.target, &sort, &out)
    }

    /// `subst f : T(X ++ Y) -> T(Y)`, the bind of the copairing of `f` with
    /// the unit of `Y`.
    pub fn subst(&self, f: &Assignment, t: &Term) -> Result<Term, SubstError> {
        let (x, y) = (f.source.len(), f.target.len());
        let whole: Context = f.source.entries().iter().chain(f.target.entries()).cloned().collect();
        let sort = infer(self.sig(), &whole, t)?;
        let swapped = self.mutation() == Some(Mutation::SwappedCoproductInjections);
        let g = |e: &Elem| match e {
            Elem::Idx(i) if swapped && *i < y => Elem::term(Tm::Var(Elem::Idx(*i))),
            Elem::Idx(i) if swapped => self.image(f, i - y),
            Elem::Idx(i) if *i < x => self.image(f, *i),
            Elem::Idx(i) => Elem::term(Tm::Var(Elem::Idx(i - x))),
            other => other.clone(),
        };
        let out = self.join(&self.relabel(&from_term(self.sig(), t), &g));
        self.finish(&f.target, &sort, &out)
    }

    fn finish(&self, target: &Context, sort: &Sort, out: &Tm) -> Result<Term, SubstError> {
        let malformed = || SubstError::Malformed(super::render_tm(self.sig(), out));
        let term = to_term(out).ok_or_else(malformed)?;
        match infer(self.sig(), target, &term) {
            Ok(s) if &s == sort => Ok(term),
            _ => Err(malformed()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::{stlc_finitized, OpId};

    fn stlc() -> Signature {
        stlc_finitized(&[Sort::new("b")], 1)
    }
    fn ctx(names: &[&str]) -> Context {
        names.iter().map(|n| Sort::new(*n)).collect()
    }
    fn lam(body: Term) -> Term {
        Term::Op(OpId(1), vec![body])
    }
    fn app(f: Term, x: Term) -> Term {
        Term::Op(OpId(0), vec![f, x])
    }

    #[test]
    fn bind_on_a_variable_is_lookup() {
        let sig = stlc();
        let f = Assignment::new(&sig, ctx(&["b->b"]), ctx(&["b"]), vec![lam(Term::Var(1))]).unwrap();
        assert_eq!(Engine::new(&sig).bind(&f, &Term::Var(0)).unwrap(), lam(Term::Var(1)));
    }

    #[test]
    fn bound_variable_is_untouched() {
        let sig = stlc();
        let f = Assignment::new(&sig, ctx(&["b"]), ctx(&["b", "b"]), vec![Term::Var(1)]).unwrap();
        let t = lam(Term::Var(0));
        assert_eq!(Engine::new(&sig).bind(&f, &t).unwrap(), t);
        // The free variable under the binder is shifted past it.
        assert_eq!(Engine::new(&sig).bind(&f, &lam(Term::Var(1))).unwrap(), lam(Term::Var(2)));
    }

    #[test]
    fn grafting_a_lambda() {
        // X = [b->b], Y = [b]; app (var 0) (var 1) with var 0 := lam (var 0)
        let sig = stlc();
        let f = Assignment::new(&sig, ctx(&["b->b"]), ctx(&["b"]), vec![lam(Term::Var(0))]).unwrap();
        let t = app(Term::Var(0), Term::Var(1));
        assert_eq!(Engine::new(&sig).subst(&f, &t).unwrap(), app(lam(Term::Var(0)), Term::Var(0)));
    }

    #[test]
    fn empty_source_is_identity() {
        let sig = stlc();
        let f = Assignment::new(&sig, ctx(&[]), ctx(&["b"]), vec![]).unwrap();
        let t = app(lam(Term::Var(1)), Term::Var(0));
        assert_eq!(Engine::new(&sig).subst(&f, &t).unwrap(), t);
    }

    #[test]
    fn assignment_errors_name_the_index() {
        let sig = stlc();
        let err =
            Assignment::new(&sig, ctx(&["b", "b->b"]), ctx(&["b"]), vec![Term::Var(0), Term::Var(0)]).unwrap_err();
        assert!(matches!(err, SubstError::Image { index: 1, .. }), "{err:?}");
        let err = Assignment::from_json(&sig, ctx(&["b"]), ctx(&["b"]), r#"{"0": "(op lam_b_b (var 0))"}"#);
        assert!(matches!(err, Err(SubstError::Image { index: 0, .. })));
        let err = Assignment::from_json(&sig, ctx(&["b", "b"]), ctx(&["b"]), r#"{"0": "(var 0)"}"#);
        assert_eq!(err, Err(SubstError::MissingIndex(1)));
        let err = Assignment::from_json(&sig, ctx(&["b"]), ctx(&["b"]), r#"{"3": "(var 0)"}"#);
        assert!(matches!(err, Err(SubstError::UnexpectedKey(_))));
    }

    #[test]
    fn ill_sorted_input_is_rejected() {
        let sig = stlc();
        let f = Assignment::identity(&ctx(&["b"]));
        assert!(matches!(Engine::new(&sig).bind(&f, &Term::Var(3)), Err(SubstError::Term(_))));
    }
}
