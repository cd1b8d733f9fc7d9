// Textbook de Bruijn substitution with explicit shifting. Shares nothing
// with the engine beyond the term type; the law suites compare the two.

use crate::signature::Signature;
use crate::term::Term;

fn shift(sig: &Signature, t: &Term, by: usize, cutoff: usize) -> Term {
    match t {
        Term::Var(i) if *i < cutoff => Term::Var(*i),
        Term::Var(i) => Term::Var(i + by),
        Term::Op(id, args) => {
            let decl = sig.op(*id);
            Term::Op(
                *id,
                args.iter().enumerate().map(|(j, a)| shift(sig, a, by, cutoff + decl.args[j].binders.len())).collect(),
            )
        }
    }
}

fn go(sig: &Signature, t: &Term, under: usize, sigma: &dyn Fn(usize) -> Term) -> Term {
    match t {
        Term::Var(i) if *i < under => Term::Var(*i),
        Term::Var(i) => shift(sig, &sigma(i - under), under, 0),
        Term::Op(id, args) => {
            let decl = sig.op(*id);
            Term::Op(
                *id,
                args.iter().enumerate().map(|(j, a)| go(sig, a, under + decl.args[j].binders.len(), sigma)).collect(),
            )
        }
    }
}

/// Replaces free variable `i` by `images[i]`.
pub fn naive_bind(sig: &Signature, images: &[Term], t: &Term) -> Term {
    go(sig, t, 0, &|i| images.get(i).cloned().unwrap_or(Term::Var(i)))
}

/// Replaces the first `images.len()` free variables by `images` and
/// renumbers the rest down.
pub fn naive_subst(sig: &Signature, images: &[Term], t: &Term) -> Term {
    let n = images.len();
    go(sig, t, 0, &|i| if i < n { images[i].clone() } else { Term::Var(i - n) })
}
