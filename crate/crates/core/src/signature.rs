//! Multi-sorted binding signatures: sorts, operation arities, validation,
//! disjoint sums, JSON I/O and the finitized simply-typed lambda calculus.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A sort name. Equality is name equality.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Sort(String);

impl Sort {
    pub fn new(name: impl Into<String>) -> Self {
        Sort(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// The arrow sort `from->to`, parenthesizing compound components.
    pub fn arrow(from: &Sort, to: &Sort) -> Sort {
        Sort(format!("{}->{}", from.parenthesized(), to.parenthesized()))
    }

    fn parenthesized(&self) -> String {
        if self.0.contains("->") {
            format!("({})", self.0)
        } else {
            self.0.clone()
        }
    }

    fn is_well_formed(&self) -> bool {
        !self.0.is_empty() && !self.0.chars().any(char::is_whitespace)
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Sort {
    fn from(s: &str) -> Self {
        Sort::new(s)
    }
}

/// One argument of an operation: the sorts bound in it and its own sort.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Argument {
    pub binders: Vec<Sort>,
    pub sort: Sort,
}

impl Argument {
    pub fn new(binders: Vec<Sort>, sort: Sort) -> Self {
        Argument { binders, sort }
    }

    /// An argument binding nothing.
    pub fn plain(sort: Sort) -> Self {
        Argument { binders: Vec::new(), sort }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpDecl {
    pub name: String,
    pub args: Vec<Argument>,
    pub result: Sort,
}

impl OpDecl {
    pub fn new(name: impl Into<String>, args: Vec<Argument>, result: Sort) -> Self {
        OpDecl { name: name.into(), args, result }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }
}

/// Index of an operation within its signature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OpId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Signature {
    pub sorts: Vec<Sort>,
    pub ops: Vec<OpDecl>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiagnosticCode {
    DuplicateSort,
    DuplicateOp,
    UnknownSort,
    MalformedName,
}

impl DiagnosticCode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagnosticCode::DuplicateSort => "duplicate-sort",
            DiagnosticCode::DuplicateOp => "duplicate-op",
            DiagnosticCode::UnknownSort => "unknown-sort",
            DiagnosticCode::MalformedName => "malformed-name",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub code: DiagnosticCode,
    /// The offending sort or operation name.
    pub subject: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} \"{}\": {}", self.code.as_str(), self.subject, self.message)
    }
}

#[derive(Debug, Error)]
pub enum SignatureError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("schema violation at line {line}, column {column}: {message}")]
    Schema { line: usize, column: usize, message: String },
    #[error("invalid signature: {}", join_diagnostics(.0))]
    Invalid(Vec<Diagnostic>),
    #[error("sort universes differ: {left:?} vs {right:?}")]
    SortMismatch { left: Vec<Sort>, right: Vec<Sort> },
}

fn join_diagnostics(diags: &[Diagnostic]) -> String {
    diags.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

impl Signature {
    pub fn new(sorts: Vec<Sort>, ops: Vec<OpDecl>) -> Self {
        Signature { sorts, ops }
    }

    /// A signature with the given sorts and no operations.
    pub fn empty(sorts: Vec<Sort>) -> Self {
        Signature { sorts, ops: Vec::new() }
    }

    pub fn has_sort(&self, s: &Sort) -> bool {
        self.sorts.contains(s)
    }

    pub fn sort(&self, name: &str) -> Option<&Sort> {
        self.sorts.iter().find(|s| s.name() == name)
    }

    pub fn op(&self, id: OpId) -> &OpDecl {
        &self.ops[id.0]
    }

    pub fn op_id(&self, name: &str) -> Option<OpId> {
        self.ops.iter().position(|o| o.name == name).map(OpId)
    }

    pub fn op_ids(&self) -> impl Iterator<Item = OpId> + '_ {
        (0..self.ops.len()).map(OpId)
    }

    /// Operations whose result sort is `s`, in declaration order.
    pub fn ops_with_result<'a>(&'a self, s: &'a Sort) -> impl Iterator<Item = OpId> + 'a {
        self.op_ids().filter(move |id| &self.op(*id).result == s)
    }

    /// Every invariant violation, in a deterministic order. Empty iff valid.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut diags = Vec::new();
        let mut seen = HashSet::new();
        for s in &self.sorts {
            if !s.is_well_formed() {
                diags.push(Diagnostic {
                    code: DiagnosticCode::MalformedName,
                    subject: s.name().to_string(),
                    message: "sort names must be nonempty and contain no whitespace".into(),
                });
            }
            if !seen.insert(s) {
                diags.push(Diagnostic {
                    code: DiagnosticCode::DuplicateSort,
                    subject: s.name().to_string(),
                    message: "sort listed more than once".into(),
                });
            }
        }
        let mut op_names = HashSet::new();
        let mut reported_unknown = HashSet::new();
        for op in &self.ops {
            if op.name.is_empty() || op.name.chars().any(char::is_whitespace) {
                diags.push(Diagnostic {
                    code: DiagnosticCode::MalformedName,
                    subject: op.name.clone(),
                    message: "operation names must be nonempty and contain no whitespace".into(),
                });
            }
            if !op_names.insert(op.name.as_str()) {
                diags.push(Diagnostic {
                    code: DiagnosticCode::DuplicateOp,
                    subject: op.name.clone(),
                    message: "operation declared more than once".into(),
                });
            }
            let referenced = op
                .args
                .iter()
                .flat_map(|a| a.binders.iter().chain(std::iter::once(&a.sort)))
                .chain(std::iter::once(&op.result));
            for s in referenced {
                if !self.has_sort(s) && reported_unknown.insert(s.clone()) {
                    diags.push(Diagnostic {
                        code: DiagnosticCode::UnknownSort,
                        subject: s.name().to_string(),
                        message: format!("referenced by operation {} but not declared", op.name),
                    });
                }
            }
        }
        diags
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Disjoint sum over a shared sort list. Names from `other` that collide
    /// with names in `self` get the suffix `#2`.
    pub fn sum(&self, other: &Signature) -> Result<Signature, SignatureError> {
        if self.sorts != other.sorts {
            return Err(SignatureError::SortMismatch { left: self.sorts.clone(), right: other.sorts.clone() });
        }
        let taken: HashSet<&str> = self.ops.iter().map(|o| o.name.as_str()).collect();
        let mut ops = self.ops.clone();
        for op in &other.ops {
            let mut op = op.clone();
            if taken.contains(op.name.as_str()) {
                op.name.push_str("#2");
            }
            ops.push(op);
        }
        Ok(Signature { sorts: self.sorts.clone(), ops })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("signature serialization cannot fail")
    }

    /// Parses without validating; see [`parse_signature`] for the checked form.
    pub fn from_json_unchecked(text: &str) -> Result<Signature, SignatureError> {
        serde_json::from_str(text).map_err(|e| {
            let (line, column, message) = (e.line(), e.column(), e.to_string());
            match e.classify() {
                serde_json::error::Category::Data => SignatureError::Schema { line, column, message },
                _ => SignatureError::Json { line, column, message },
            }
        })
    }
}

/// Parses the JSON signature format and validates it.
pub fn parse_signature(text: &str) -> Result<Signature, SignatureError> {
    let sig = Signature::from_json_unchecked(text)?;
    let diags = sig.validate();
    if diags.is_empty() {
        Ok(sig)
    } else {
        Err(SignatureError::Invalid(diags))
    }
}

/// Canonical text of a signature document: parse, then pretty-print.
pub fn canonicalize(text: &str) -> Result<String, SignatureError> {
    Ok(Signature::from_json_unchecked(text)?.to_json())
}

/// All arrow sorts over `base` of nesting depth at most `depth`, in
/// generation order: base sorts first, then each new depth level.
pub fn arrow_universe(base: &[Sort], depth: usize) -> Vec<Sort> {
    let mut sorts: Vec<Sort> = Vec::new();
    for s in base {
        if !sorts.contains(s) {
            sorts.push(s.clone());
        }
    }
    let mut depth_of: Vec<usize> = vec![0; sorts.len()];
    for level in 1..=depth {
        let prev = sorts.len();
        for i in 0..prev {
            for j in 0..prev {
                if depth_of[i].max(depth_of[j]) + 1 == level {
                    sorts.push(Sort::arrow(&sorts[i], &sorts[j]));
                    depth_of.push(level);
                }
            }
        }
    }
    sorts
}

/// The simply-typed lambda calculus restricted to the finite universe of
/// arrow sorts of depth at most `arrow_depth`: one application and one
/// abstraction per pair `(s, t)` whose arrow `s->t` is in the universe.
pub fn stlc_finitized(base_sorts: &[Sort], arrow_depth: usize) -> Signature {
    let sorts = arrow_universe(base_sorts, arrow_depth);
    let mut pairs = Vec::new();
    for s in &sorts {
        for t in &sorts {
            let arrow = Sort::arrow(s, t);
            if sorts.contains(&arrow) {
                pairs.push((s.clone(), t.clone(), arrow));
            }
        }
    }
    let mut ops = Vec::new();
    for (s, t, arrow) in &pairs {
        ops.push(OpDecl::new(
            format!("app_{s}_{t}"),
            vec![Argument::plain(arrow.clone()), Argument::plain(s.clone())],
            t.clone(),
        ));
    }
    for (s, t, arrow) in &pairs {
        ops.push(OpDecl::new(format!("lam_{s}_{t}"), vec![Argument::new(vec![s.clone()], t.clone())], arrow.clone()));
    }
    Signature { sorts, ops }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorts(names: &[&str]) -> Vec<Sort> {
        names.iter().map(|n| Sort::new(*n)).collect()
    }

    #[test]
    fn duplicate_sort_is_reported() {
        let sig = Signature::empty(sorts(&["b", "b"]));
        let diags = sig.validate();
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, DiagnosticCode::DuplicateSort);
        assert_eq!(diags[0].subject, "b");
    }

    #[test]
    fn unknown_result_sort_is_reported() {
        let sig = Signature::new(sorts(&["b"]), vec![OpDecl::new("k", vec![], Sort::new("c"))]);
        let diags = sig.validate();
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, DiagnosticCode::UnknownSort);
        assert_eq!(diags[0].subject, "c");
    }

    #[test]
    fn duplicate_op_and_bad_names() {
        let sig = Signature::new(
            sorts(&["b", "has space"]),
            vec![OpDecl::new("k", vec![], Sort::new("b")), OpDecl::new("k", vec![], Sort::new("b"))],
        );
        let codes: Vec<_> = sig.validate().into_iter().map(|d| d.code).collect();
        assert_eq!(codes, vec![DiagnosticCode::MalformedName, DiagnosticCode::DuplicateOp]);
    }

    #[test]
    fn stlc_depth_one() {
        let sig = stlc_finitized(&sorts(&["b"]), 1);
        assert_eq!(sig.sorts, sorts(&["b", "b->b"]));
        let names: Vec<_> = sig.ops.iter().map(|o| o.name.as_str()).collect();
        assert_eq!(names, vec!["app_b_b", "lam_b_b"]);
        let lam = &sig.ops[1];
        assert_eq!(lam.args, vec![Argument::new(sorts(&["b"]), Sort::new("b"))]);
        assert_eq!(lam.result, Sort::new("b->b"));
        let app = &sig.ops[0];
        assert_eq!(app.args, vec![Argument::plain(Sort::new("b->b")), Argument::plain(Sort::new("b"))]);
        assert_eq!(app.result, Sort::new("b"));
        assert!(sig.validate().is_empty());
    }

    #[test]
    fn stlc_depth_zero_has_no_ops() {
        let sig = stlc_finitized(&sorts(&["b"]), 0);
        assert_eq!(sig.sorts, sorts(&["b"]));
        assert!(sig.ops.is_empty());
    }

    #[test]
    fn arrow_names_are_fully_parenthesized() {
        let u = arrow_universe(&sorts(&["b"]), 2);
        let names: Vec<_> = u.iter().map(Sort::name).collect();
        assert_eq!(names, vec!["b", "b->b", "b->(b->b)", "(b->b)->b", "(b->b)->(b->b)"]);
    }

    #[test]
    fn stlc_validates_for_small_parameters() {
        for base in [sorts(&["b"]), sorts(&["b", "c"])] {
            for d in 0..=2 {
                assert!(stlc_finitized(&base, d).validate().is_empty(), "{base:?} depth {d}");
            }
        }
    }

    #[test]
    fn sum_with_empty_is_unit() {
        let sig = stlc_finitized(&sorts(&["b"]), 1);
        let summed = sig.sum(&Signature::empty(sig.sorts.clone())).unwrap();
        assert_eq!(summed, sig);
    }

    #[test]
    fn sum_renames_collisions() {
        let sig = stlc_finitized(&sorts(&["b"]), 1);
        let summed = sig.sum(&sig).unwrap();
        let names: Vec<_> = summed.ops.iter().map(|o| o.name.as_str()).collect();
        assert_eq!(names, vec!["app_b_b", "lam_b_b", "app_b_b#2", "lam_b_b#2"]);
        assert!(summed.validate().is_empty());
    }

    #[test]
    fn sum_rejects_mismatched_sorts() {
        let a = Signature::empty(sorts(&["b"]));
        let b = Signature::empty(sorts(&["c"]));
        assert!(matches!(a.sum(&b), Err(SignatureError::SortMismatch { .. })));
    }

    const STLC_JSON: &str = r#"{ "sorts": ["b", "b->b"],
      "ops": [
        { "name": "app_b_b",
          "args": [ { "binders": [], "sort": "b->b" },
                    { "binders": [], "sort": "b" } ],
          "result": "b" },
        { "name": "lam_b_b",
          "args": [ { "binders": ["b"], "sort": "b" } ],
          "result": "b->b" } ] }"#;

    #[test]
    fn parses_reference_document() {
        let sig = parse_signature(STLC_JSON).unwrap();
        assert_eq!(sig.sorts.len(), 2);
        assert_eq!(sig.ops.len(), 2);
        assert_eq!(sig, stlc_finitized(&sorts(&["b"]), 1));
    }

    #[test]
    fn empty_object_is_schema_violation() {
        let err = parse_signature("{}").unwrap_err();
        match err {
            SignatureError::Schema { message, .. } => assert!(message.contains("sorts"), "{message}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn broken_json_is_syntax_error() {
        assert!(matches!(parse_signature("{\"sorts\": ["), Err(SignatureError::Json { .. })));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = r#"{"sorts": ["b"], "ops": [], "extra": 1}"#;
        assert!(matches!(parse_signature(text), Err(SignatureError::Schema { .. })));
        let text = r#"{"sorts": ["b"], "ops": [{"name": "k", "args": [], "result": "b", "arity": 0}]}"#;
        assert!(matches!(parse_signature(text), Err(SignatureError::Schema { .. })));
    }

    #[test]
    fn unknown_sort_in_document() {
        let text = r#"{"sorts": ["b"], "ops": [{"name": "k", "args": [], "result": "c"}]}"#;
        match parse_signature(text).unwrap_err() {
            SignatureError::Invalid(d) => {
                assert_eq!(d[0].code, DiagnosticCode::UnknownSort);
                assert_eq!(d[0].subject, "c");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn canonical_form_is_a_fixed_point() {
        let once = canonicalize(STLC_JSON).unwrap();
        assert_eq!(canonicalize(&once).unwrap(), once);
    }
}
