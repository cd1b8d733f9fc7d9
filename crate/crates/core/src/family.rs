//! Sorted families at desk scale.
//!
//! A [`Context`] is an ordered list of sorts read with de Bruijn indices:
//! index 0 is the most recently bound variable and binders prepend. It is
//! the finite stand-in for a sorted family of variables. [`FinFamily`] is an
//! honest family of finite label sets, used where the projection functor and
//! its two adjoints are exercised.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::signature::Sort;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("unknown sort {0}")]
    UnknownSort(Sort),
    #[error("carrier of size {size} exceeds the bound {bound}")]
    SizeBound { size: usize, bound: usize },
    #[error("renaming is not sort-preserving at index {index}")]
    NotSortPreserving { index: usize },
    #[error("renaming maps index {index} outside a target of length {len}")]
    OutOfRange { index: usize, len: usize },
    #[error("renamings do not compose: target {left} differs from source {right}")]
    Mismatch { left: Context, right: Context },
}

fn ensure_known(universe: &[Sort], s: &Sort) -> Result<(), FamilyError> {
    if universe.contains(s) {
        Ok(())
    } else {
        Err(FamilyError::UnknownSort(s.clone()))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Context(Vec<Sort>);

impl Context {
    pub fn empty() -> Self {
        Context(Vec::new())
    }

    pub fn new(entries: Vec<Sort>) -> Self {
        Context(entries)
    }

    pub fn entries(&self) -> &[Sort] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&Sort> {
        self.0.get(i)
    }

    /// Indices of the variables of sort `s`, ascending.
    pub fn vars_of<'a>(&'a self, s: &'a Sort) -> impl Iterator<Item = usize> + 'a {
        self.0.iter().enumerate().filter(move |(_, t)| *t == s).map(|(i, _)| i)
    }

    pub fn count_of(&self, s: &Sort) -> usize {
        self.vars_of(s).count()
    }

    /// `binders ++ self`: the first binder lands at index 0.
    pub fn extended(&self, binders: &[Sort]) -> Context {
        let mut entries = binders.to_vec();
        entries.extend(self.0.iter().cloned());
        Context(entries)
    }

    /// Parses the comma-separated textual form, index 0 first.
    pub fn parse(text: &str, universe: &[Sort]) -> Result<Context, FamilyError> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Context::empty());
        }
        let mut entries = Vec::new();
        for part in split_top_level(text) {
            let s = Sort::new(part.trim());
            ensure_known(universe, &s)?;
            entries.push(s);
        }
        Ok(Context(entries))
    }

    pub fn check_universe(&self, universe: &[Sort]) -> Result<(), FamilyError> {
        self.0.iter().try_for_each(|s| ensure_known(universe, s))
    }
}

// Commas never occur inside sort names produced by this crate, but keep
// parenthesized groups intact anyway.
fn split_top_level(text: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.0.iter().map(Sort::name).collect();
        f.write_str(&names.join(","))
    }
}

impl FromIterator<Sort> for Context {
    fn from_iter<I: IntoIterator<Item = Sort>>(iter: I) -> Self {
        Context(iter.into_iter().collect())
    }
}

/// A sort-preserving map between the variables of two contexts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Renaming {
    source: Context,
    target: Context,
    map: Vec<usize>,
}

impl Renaming {
    pub fn new(source: Context, target: Context, map: Vec<usize>) -> Result<Self, FamilyError> {
        if map.len() != source.len() {
            return Err(FamilyError::OutOfRange { index: map.len(), len: source.len() });
        }
        for (i, &j) in map.iter().enumerate() {
            let Some(t) = target.get(j) else {
                return Err(FamilyError::OutOfRange { index: j, len: target.len() });
            };
            if t != &source.0[i] {
                return Err(FamilyError::NotSortPreserving { index: i });
            }
        }
        Ok(Renaming { source, target, map })
    }

    pub fn identity(ctx: &Context) -> Self {
        Renaming { source: ctx.clone(), target: ctx.clone(), map: (0..ctx.len()).collect() }
    }

    /// The inclusion `ctx -> binders ++ ctx`.
    pub fn weakening(ctx: &Context, binders: &[Sort]) -> Self {
        let k = binders.len();
        Renaming { source: ctx.clone(), target: ctx.extended(binders), map: (k..k + ctx.len()).collect() }
    }

    pub fn source(&self) -> &Context {
        &self.source
    }

    pub fn target(&self) -> &Context {
        &self.target
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    /// `after ∘ self`.
    pub fn then(&self, after: &Renaming) -> Result<Renaming, FamilyError> {
        if self.target != after.source {
            return Err(FamilyError::Mismatch { left: self.target.clone(), right: after.source.clone() });
        }
        Ok(Renaming {
            source: self.source.clone(),
            target: after.target.clone(),
            map: self.map.iter().map(|&j| after.map[j]).collect(),
        })
    }
}

/// Prepends a fresh variable of sort `s`; old index `i` becomes `i + 1`.
pub fn option_sort(universe: &[Sort], ctx: &Context, s: &Sort) -> Result<Context, FamilyError> {
    ensure_known(universe, s)?;
    Ok(ctx.extended(std::slice::from_ref(s)))
}

/// `option_list(ctx, [s1..sk]) = s1 :: .. :: sk :: ctx`; the empty list is the identity.
pub fn option_list(universe: &[Sort], ctx: &Context, binders: &[Sort]) -> Result<Context, FamilyError> {
    binders.iter().try_for_each(|s| ensure_known(universe, s))?;
    Ok(ctx.extended(binders))
}

/// Concatenation `ctx1 ++ ctx2` with its two injections.
pub fn coproduct(ctx1: &Context, ctx2: &Context) -> (Context, Renaming, Renaming) {
    let mut entries = ctx1.0.clone();
    entries.extend(ctx2.0.iter().cloned());
    let sum = Context(entries);
    let left = Renaming { source: ctx1.clone(), target: sum.clone(), map: (0..ctx1.len()).collect() };
    let n = ctx1.len();
    let right = Renaming { source: ctx2.clone(), target: sum.clone(), map: (n..n + ctx2.len()).collect() };
    (sum, left, right)
}

/// A finite set of opaque labels, kept in order and free of duplicates.
pub type FinSet = Vec<String>;

/// The canonical one-element set used for empty products.
pub const UNIT_LABEL: &str = "()";

pub fn labels(prefix: &str, n: usize) -> FinSet {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// A family of finite sets indexed by the sorts of a universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinFamily {
    carrier: BTreeMap<Sort, FinSet>,
}

impl FinFamily {
    /// The empty family over `universe`.
    pub fn empty(universe: &[Sort]) -> Self {
        FinFamily { carrier: universe.iter().map(|s| (s.clone(), FinSet::new())).collect() }
    }

    pub fn from_carriers(carrier: BTreeMap<Sort, FinSet>) -> Self {
        FinFamily { carrier }
    }

    pub fn with_sizes(universe: &[Sort], sizes: &[usize]) -> Self {
        FinFamily {
            carrier: universe
                .iter()
                .zip(sizes)
                .enumerate()
                .map(|(k, (s, &n))| (s.clone(), labels(&format!("s{k}."), n)))
                .collect(),
        }
    }

    pub fn carrier(&self, s: &Sort) -> &[String] {
        self.carrier.get(s).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn sorts(&self) -> impl Iterator<Item = &Sort> {
        self.carrier.keys()
    }

    fn size(&self, s: &Sort) -> usize {
        self.carrier(s).len()
    }
}

pub fn proj(universe: &[Sort], family: &FinFamily, s: &Sort) -> Result<FinSet, FamilyError> {
    ensure_known(universe, s)?;
    Ok(family.carrier(s).to_vec())
}

/// Left adjoint of projection: `A` at `t`, empty elsewhere.
pub fn hat(universe: &[Sort], a: &[String], t: &Sort) -> Result<FinFamily, FamilyError> {
    ensure_known(universe, t)?;
    Ok(FinFamily {
        carrier: universe.iter().map(|s| (s.clone(), if s == t { a.to_vec() } else { FinSet::new() })).collect(),
    })
}

/// Right adjoint of projection: `A` at `t`, the one-element set elsewhere.
pub fn underline(universe: &[Sort], a: &[String], t: &Sort) -> Result<FinFamily, FamilyError> {
    ensure_known(universe, t)?;
    Ok(FinFamily {
        carrier: universe
            .iter()
            .map(|s| (s.clone(), if s == t { a.to_vec() } else { vec![UNIT_LABEL.to_string()] }))
            .collect(),
    })
}

/// The variables of a context, grouped by sort and labelled by index.
pub fn context_to_family(universe: &[Sort], ctx: &Context) -> FinFamily {
    let mut carrier: BTreeMap<Sort, FinSet> = universe.iter().map(|s| (s.clone(), FinSet::new())).collect();
    for (i, s) in ctx.entries().iter().enumerate() {
        carrier.entry(s.clone()).or_default().push(i.to_string());
    }
    FinFamily { carrier }
}

/// A function between finite sets, as the image index of each source element.
pub type FinMap = Vec<usize>;

/// A morphism of families: one [`FinMap`] per sort.
pub type FamilyMap = BTreeMap<Sort, FinMap>;

/// Every function from an `n`-element set into an `m`-element set, in
/// lexicographic order.
pub fn all_maps(n: usize, m: usize) -> Vec<FinMap> {
    if n == 0 {
        return vec![Vec::new()];
    }
    if m == 0 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(m.pow(n as u32));
    let mut cur = vec![0usize; n];
    loop {
        out.push(cur.clone());
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            cur[k] += 1;
            if cur[k] < m {
                break;
            }
            cur[k] = 0;
        }
    }
}

fn compose(first: &[usize], second: &[usize]) -> FinMap {
    first.iter().map(|&i| second[i]).collect()
}

/// Every family morphism `src -> tgt`, sorts in universe order.
fn all_family_maps(universe: &[Sort], src: &FinFamily, tgt: &FinFamily) -> Vec<FamilyMap> {
    let mut out = vec![FamilyMap::new()];
    for s in universe {
        let options = all_maps(src.size(s), tgt.size(s));
        let mut next = Vec::with_capacity(out.len() * options.len());
        for partial in &out {
            for m in &options {
                let mut fm = partial.clone();
                fm.insert(s.clone(), m.clone());
                next.push(fm);
            }
        }
        out = next;
    }
    out
}

fn compose_family(universe: &[Sort], first: &FamilyMap, second: &FamilyMap) -> FamilyMap {
    universe.iter().map(|s| (s.clone(), compose(&first[s], &second[s]))).collect()
}

/// Result of an exhaustive adjunction check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjunctionVerdict {
    pub holds: bool,
    /// Size of the hom-set on the family side.
    pub family_side: usize,
    /// Size of the hom-set on the set side.
    pub set_side: usize,
    /// Pairs `(family-side index, set-side index)` matched by transposition.
    pub bijection: Vec<(usize, usize)>,
    pub squares_checked: usize,
    pub counterexample: Option<String>,
}

impl AdjunctionVerdict {
    fn failed(mut self, why: String) -> Self {
        self.holds = false;
        self.counterexample.get_or_insert(why);
        self
    }
}

fn check_bound(bound: usize, sizes: impl IntoIterator<Item = usize>) -> Result<(), FamilyError> {
    for size in sizes {
        if size > bound {
            return Err(FamilyError::SizeBound { size, bound });
        }
    }
    Ok(())
}

/// Checks `hat(-, t) ⊣ proj_t` at `(A, B)`: transposition
/// `hom(hat(A,t), B) ≅ hom(A, B t)` is a bijection, natural in `A` (against
/// every map from a two-element set) and in `B` (against every map into a
/// family with two labels at `t` and one elsewhere).
pub fn check_adjunction_hat_proj(
    universe: &[Sort],
    a: &[String],
    t: &Sort,
    b: &FinFamily,
    bound: usize,
) -> Result<AdjunctionVerdict, FamilyError> {
    ensure_known(universe, t)?;
    check_bound(bound, std::iter::once(a.len()).chain(universe.iter().map(|s| b.size(s))))?;
    let hat_a = hat(universe, a, t)?;
    let left = all_family_maps(universe, &hat_a, b);
    let right = all_maps(a.len(), b.size(t));
    let to_set = |g: &FamilyMap| g[t].clone();
    let to_family = |k: &FinMap| -> FamilyMap {
        universe.iter().map(|s| (s.clone(), if s == t { k.clone() } else { FinMap::new() })).collect()
    };
    let mut v = AdjunctionVerdict {
        holds: true,
        family_side: left.len(),
        set_side: right.len(),
        bijection: Vec::new(),
        squares_checked: 0,
        counterexample: None,
    };
    if left.len() != right.len() {
        let why = format!("hom-set sizes differ: {} vs {}", left.len(), right.len());
        return Ok(v.failed(why));
    }
    for (i, g) in left.iter().enumerate() {
        let k = to_set(g);
        if to_family(&k) != *g {
            return Ok(v.failed(format!("transpose round trip fails at {g:?}")));
        }
        match right.iter().position(|r| *r == k) {
            Some(j) => v.bijection.push((i, j)),
            None => return Ok(v.failed(format!("transpose {k:?} is not a map A -> B t"))),
        }
    }
    for k in &right {
        if to_set(&to_family(k)) != *k {
            return Ok(v.failed(format!("inverse round trip fails at {k:?}")));
        }
    }
    // Naturality in A: for a': A' -> A, transpose(g ∘ hat(a')) = transpose(g) ∘ a'.
    let a_prime = labels("x", 2);
    for pre in all_maps(a_prime.len(), a.len()) {
        let hat_pre: FamilyMap =
            universe.iter().map(|s| (s.clone(), if s == t { pre.clone() } else { FinMap::new() })).collect();
        for g in &left {
            let lhs = to_set(&compose_family(universe, &hat_pre, g));
            let rhs = compose(&pre, &to_set(g));
            v.squares_checked += 1;
            if lhs != rhs {
                return Ok(v.failed(format!("naturality in A fails for a'={pre:?}, g={g:?}")));
            }
        }
    }
    // Naturality in B: for b': B -> B', transpose(b' ∘ g) = b'_t ∘ transpose(g).
    let b_prime = small_codomain(universe, t);
    for post in all_family_maps(universe, b, &b_prime) {
        for g in &left {
            let lhs = to_set(&compose_family(universe, g, &post));
            let rhs = compose(&to_set(g), &post[t]);
            v.squares_checked += 1;
            if lhs != rhs {
                return Ok(v.failed(format!("naturality in B fails for b'={post:?}, g={g:?}")));
            }
        }
    }
    Ok(v)
}

/// Checks `proj_t ⊣ underline(-, t)` at `(B, A)`: transposition
/// `hom(B t, A) ≅ hom(B, underline(A,t))`, natural in both arguments.
pub fn check_adjunction_proj_underline(
    universe: &[Sort],
    b: &FinFamily,
    a: &[String],
    t: &Sort,
    bound: usize,
) -> Result<AdjunctionVerdict, FamilyError> {
    ensure_known(universe, t)?;
    check_bound(bound, std::iter::once(a.len()).chain(universe.iter().map(|s| b.size(s))))?;
    let under = underline(universe, a, t)?;
    let family_side = all_family_maps(universe, b, &under);
    let set_side = all_maps(b.size(t), a.len());
    let to_set = |g: &FamilyMap| g[t].clone();
    let to_family = |k: &FinMap| -> FamilyMap {
        universe.iter().map(|s| (s.clone(), if s == t { k.clone() } else { vec![0; b.size(s)] })).collect()
    };
    let mut v = AdjunctionVerdict {
        holds: true,
        family_side: family_side.len(),
        set_side: set_side.len(),
        bijection: Vec::new(),
        squares_checked: 0,
        counterexample: None,
    };
    if family_side.len() != set_side.len() {
        let why = format!("hom-set sizes differ: {} vs {}", family_side.len(), set_side.len());
        return Ok(v.failed(why));
    }
    for (i, g) in family_side.iter().enumerate() {
        let k = to_set(g);
        if to_family(&k) != *g {
            return Ok(v.failed(format!("transpose round trip fails at {g:?}")));
        }
        match set_side.iter().position(|r| *r == k) {
            Some(j) => v.bijection.push((i, j)),
            None => return Ok(v.failed(format!("transpose {k:?} is not a map B t -> A"))),
        }
    }
    for k in &set_side {
        if to_set(&to_family(k)) != *k {
            return Ok(v.failed(format!("inverse round trip fails at {k:?}")));
        }
    }
    // Naturality in A: for a': A -> A'', transpose(underline(a') ∘ g) = a' ∘ transpose(g).
    let a_target = labels("y", 2);
    for post in all_maps(a.len(), a_target.len()) {
        let under_post: FamilyMap =
            universe.iter().map(|s| (s.clone(), if s == t { post.clone() } else { vec![0] })).collect();
        for g in &family_side {
            let lhs = to_set(&compose_family(universe, g, &under_post));
            let rhs = compose(&to_set(g), &post);
            v.squares_checked += 1;
            if lhs != rhs {
                return Ok(v.failed(format!("naturality in A fails for a'={post:?}, g={g:?}")));
            }
        }
    }
    // Naturality in B: for b': B' -> B, transpose(g ∘ b') = transpose(g) ∘ b'_t.
    let b_source = small_codomain(universe, t);
    for pre in all_family_maps(universe, &b_source, b) {
        for g in &family_side {
            let lhs = to_set(&compose_family(universe, &pre, g));
            let rhs = compose(&pre[t], &to_set(g));
            v.squares_checked += 1;
            if lhs != rhs {
                return Ok(v.failed(format!("naturality in B fails for b'={pre:?}, g={g:?}")));
            }
        }
    }
    Ok(v)
}

fn small_codomain(universe: &[Sort], t: &Sort) -> FinFamily {
    FinFamily {
        carrier: universe.iter().map(|s| (s.clone(), if s == t { labels("z", 2) } else { labels("z", 1) })).collect(),
    }
}

/// Summary of an exhaustive sweep over both adjunctions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjunctionSweep {
    pub hat_proj_cases: usize,
    pub proj_underline_cases: usize,
    pub failure: Option<String>,
}

/// Runs both adjunction checks for every sort `t`, every `A` of size at most
/// `bound` and every family `B` whose carriers all have size at most `bound`.
pub fn sweep_adjunctions(universe: &[Sort], bound: usize) -> Result<AdjunctionSweep, FamilyError> {
    let mut sweep = AdjunctionSweep { hat_proj_cases: 0, proj_underline_cases: 0, failure: None };
    let mut sizes = vec![0usize; universe.len()];
    loop {
        let b = FinFamily::with_sizes(universe, &sizes);
        for t in universe {
            for n in 0..=bound {
                let a = labels("a", n);
                let v = check_adjunction_hat_proj(universe, &a, t, &b, bound)?;
                sweep.hat_proj_cases += 1;
                if !v.holds {
                    sweep.failure = Some(format!("hat/proj at t={t}, |A|={n}, B={sizes:?}: {:?}", v.counterexample));
                    return Ok(sweep);
                }
                let v = check_adjunction_proj_underline(universe, &b, &a, t, bound)?;
                sweep.proj_underline_cases += 1;
                if !v.holds {
                    sweep.failure =
                        Some(format!("proj/underline at t={t}, |A|={n}, B={sizes:?}: {:?}", v.counterexample));
                    return Ok(sweep);
                }
            }
        }
        let mut k = 0;
        loop {
            if k == sizes.len() {
                return Ok(sweep);
            }
            sizes[k] += 1;
            if sizes[k] <= bound {
                break;
            }
            sizes[k] = 0;
            k += 1;
        }
    }
}
