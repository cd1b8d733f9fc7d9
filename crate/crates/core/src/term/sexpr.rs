// term := "(var" NAT ")" | "(op" NAME term* ")"

use super::{SortedTerm, Term, TermError};
use crate::family::Context;
use crate::signature::{Signature, Sort};

pub fn print_term(sig: &Signature, term: &Term) -> String {
    let mut out = String::new();
    write_term(sig, term, &mut out);
    out
}

fn write_term(sig: &Signature, term: &Term, out: &mut String) {
    match term {
        Term::Var(i) => {
            out.push_str("(var ");
            out.push_str(&i.to_string());
            out.push(')');
        }
        Term::Op(id, args) => {
            out.push_str("(op ");
            out.push_str(&sig.op(*id).name);
            for a in args {
                out.push(' ');
                write_term(sig, a, out);
            }
            out.push(')');
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok<'a> {
    Open,
    Close,
    Atom(&'a str),
}

fn tokenize(text: &str) -> Vec<(usize, Tok<'_>)> {
    let mut toks = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        match c {
            '(' => {
                toks.push((i, Tok::Open));
                chars.next();
            }
            ')' => {
                toks.push((i, Tok::Close));
                chars.next();
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            _ => {
                let start = i;
                let mut end = text.len();
                while let Some(&(j, d)) = chars.peek() {
                    if d == '(' || d == ')' || d.is_whitespace() {
                        end = j;
                        break;
                    }
                    chars.next();
                }
                toks.push((start, Tok::Atom(&text[start..end])));
            }
        }
    }
    toks
}

struct Parser<'s, 't> {
    sig: &'s Signature,
    toks: Vec<(usize, Tok<'t>)>,
    pos: usize,
    end: usize,
}

impl<'t> Parser<'_, 't> {
    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn syntax(&self, message: impl Into<String>) -> TermError {
        TermError::Syntax { pos: self.here(), message: message.into() }
    }

    fn next(&mut self) -> Option<Tok<'t>> {
        let t = self.toks.get(self.pos).map(|t| t.1.clone());
        self.pos += 1;
        t
    }

    fn peek(&self) -> Option<&Tok<'t>> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn expect_close(&mut self) -> Result<(), TermError> {
        match self.peek() {
            Some(Tok::Close) => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.syntax("expected ')'")),
        }
    }

    fn term(&mut self, ctx: &Context) -> Result<(Term, Sort), TermError> {
        if self.next() != Some(Tok::Open) {
            self.pos -= 1;
            return Err(self.syntax("expected '('"));
        }
        match self.next() {
            Some(Tok::Atom("var")) => {
                let Some(Tok::Atom(n)) = self.next() else {
                    self.pos -= 1;
                    return Err(self.syntax("expected a variable index"));
                };
                let index: usize = n.parse().map_err(|_| {
                    self.pos -= 1;
                    self.syntax(format!("'{n}' is not a natural number"))
                })?;
                let sort = ctx.get(index).cloned().ok_or(TermError::IndexOutOfRange { index, len: ctx.len() })?;
                self.expect_close()?;
                Ok((Term::Var(index), sort))
            }
            Some(Tok::Atom("op")) => {
                let Some(Tok::Atom(name)) = self.next() else {
                    self.pos -= 1;
                    return Err(self.syntax("expected an operation name"));
                };
                let sig = self.sig;
                let id = sig.op_id(name).ok_or_else(|| TermError::UnknownOp(name.to_string()))?;
                let decl = sig.op(id);
                let mut args = Vec::with_capacity(decl.args.len());
                for (j, want) in decl.args.iter().enumerate() {
                    if self.peek() != Some(&Tok::Open) {
                        return Err(TermError::Arity { op: decl.name.clone(), expected: decl.args.len(), found: j });
                    }
                    let inner = ctx.extended(&want.binders);
                    let (arg, found) = self.term(&inner)?;
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
                    args.push(arg);
                }
                if self.peek() == Some(&Tok::Open) {
                    let mut extra = 0;
                    while self.peek() == Some(&Tok::Open) {
                        self.skip_term()?;
                        extra += 1;
                    }
                    return Err(TermError::Arity {
                        op: decl.name.clone(),
                        expected: decl.args.len(),
                        found: decl.args.len() + extra,
                    });
                }
                self.expect_close()?;
                Ok((Term::Op(id, args), decl.result.clone()))
            }
            _ => {
                self.pos -= 1;
                Err(self.syntax("expected 'var' or 'op'"))
            }
        }
    }

    fn skip_term(&mut self) -> Result<(), TermError> {
        let mut depth = 0usize;
        loop {
            match self.next() {
                Some(Tok::Open) => depth += 1,
                Some(Tok::Close) => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok(());
                    }
                }
                Some(Tok::Atom(_)) => {}
                None => return Err(self.syntax("unbalanced parentheses")),
            }
        }
    }
}

/// Parses a term in `ctx`, checking well-sortedness and, when given, the
/// expected sort.
pub fn parse_term(
    sig: &Signature,
    ctx: &Context,
    text: &str,
    expected: Option<&Sort>,
) -> Result<SortedTerm, TermError> {
    let mut p = Parser { sig, toks: tokenize(text), pos: 0, end: text.len() };
    let (term, sort) = p.term(ctx)?;
    if p.pos < p.toks.len() {
        return Err(p.syntax("trailing input after term"));
    }
    if let Some(want) = expected {
        if want != &sort {
            return Err(TermError::UnexpectedSort { expected: want.clone(), found: sort });
        }
    }
    Ok(SortedTerm { term, ctx: ctx.clone(), sort })
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

    #[test]
    fn parses_variable() {
        let t = parse_term(&stlc(), &ctx(&["b"]), "(var 0)", Some(&Sort::new("b"))).unwrap();
        assert_eq!(t.term(), &Term::Var(0));
    }

    #[test]
    fn parses_lambda() {
        let b_to_b = Sort::new("b->b");
        let t = parse_term(&stlc(), &ctx(&["b"]), "(op lam_b_b (var 0))", Some(&b_to_b)).unwrap();
        assert_eq!(t.term(), &Term::Op(OpId(1), vec![Term::Var(0)]));
        // The body is parsed under the binder, so index 1 is the outer b.
        let t = parse_term(&stlc(), &ctx(&["b"]), "( op lam_b_b ( var 1 ) )", None).unwrap();
        assert_eq!(t.term(), &Term::Op(OpId(1), vec![Term::Var(1)]));
    }

    #[test]
    fn reports_errors() {
        let sig = stlc();
        let g = ctx(&["b"]);
        assert_eq!(
            parse_term(&sig, &g, "(op lam_b_b (var 5))", None),
            Err(TermError::IndexOutOfRange { index: 5, len: 2 })
        );
        assert!(matches!(parse_term(&sig, &g, "(var x)", None), Err(TermError::Syntax { .. })));
        assert!(matches!(parse_term(&sig, &g, "(var 0", None), Err(TermError::Syntax { .. })));
        assert!(matches!(parse_term(&sig, &g, "(var 0) (var 0)", None), Err(TermError::Syntax { .. })));
        assert!(matches!(parse_term(&sig, &g, "(op zap)", None), Err(TermError::UnknownOp(_))));
        assert!(matches!(
            parse_term(&sig, &g, "(op app_b_b (op lam_b_b (var 0)))", None),
            Err(TermError::Arity { expected: 2, found: 1, .. })
        ));
        assert!(matches!(
            parse_term(&sig, &g, "(op lam_b_b (var 0) (var 0))", None),
            Err(TermError::Arity { expected: 1, found: 2, .. })
        ));
        assert!(matches!(
            parse_term(&sig, &g, "(op app_b_b (var 0) (var 0))", None),
            Err(TermError::SortMismatch { arg: 0, .. })
        ));
        assert!(matches!(
            parse_term(&sig, &g, "(var 0)", Some(&Sort::new("b->b"))),
            Err(TermError::UnexpectedSort { .. })
        ));
    }

    #[test]
    fn print_is_canonical() {
        let sig = stlc();
        let t = Term::Op(OpId(0), vec![Term::Op(OpId(1), vec![Term::Var(0)]), Term::Var(0)]);
        let text = print_term(&sig, &t);
        assert_eq!(text, "(op app_b_b (op lam_b_b (var 0)) (var 0))");
        assert_eq!(parse_term(&sig, &ctx(&["b"]), &text, None).unwrap().term(), &t);
    }
}
