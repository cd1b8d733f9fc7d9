use std::fmt;

use super::{Elem, Family, Tm};
use crate::signature::{OpId, Signature, Sort};

/// The pointed endofunctors the engine can compute with.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PointedEndo {
    Identity,
    OptionSort(Sort),
    /// One option layer per sort; the empty list is the identity.
    OptionList(Vec<Sort>),
    TheMonadT,
    /// `Composite(outer, inner)` applies `inner` first.
    Composite(Box<PointedEndo>, Box<PointedEndo>),
}

impl PointedEndo {
    pub fn composite(outer: PointedEndo, inner: PointedEndo) -> PointedEndo {
        PointedEndo::Composite(Box::new(outer), Box::new(inner))
    }

    pub fn apply(&self, fam: Family) -> Family {
        match self {
            PointedEndo::Identity => fam,
            PointedEndo::OptionSort(s) => Family::Opt(s.clone(), Box::new(fam)),
            PointedEndo::OptionList(l) => Family::opt_list(l, fam),
            PointedEndo::TheMonadT => Family::terms(fam),
            PointedEndo::Composite(outer, inner) => outer.apply(inner.apply(fam)),
        }
    }
}

impl fmt::Display for PointedEndo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointedEndo::Identity => f.write_str("Id"),
            PointedEndo::OptionSort(s) => write!(f, "option({s})"),
            PointedEndo::OptionList(l) => {
                let names: Vec<&str> = l.iter().map(Sort::name).collect();
                write!(f, "option[{}]", names.join(","))
            }
            PointedEndo::TheMonadT => f.write_str("T"),
            PointedEndo::Composite(outer, inner) => write!(f, "({outer} . {inner})"),
        }
    }
}

/// Morphisms of pointed endofunctors, used both as the input of the
/// bracket (target `T`) and as natural transformations in naturality
/// checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PtdMor {
    /// The point of an endofunctor, from the identity.
    Point(PointedEndo),
    Identity(PointedEndo),
    /// `T . T -> T`.
    Join,
    /// Sends the fresh variables of the layers to the given closed terms,
    /// one per layer, and every older variable to itself.
    Instantiate(Vec<Sort>, Vec<Tm>),
    /// `Mult(g, f)` for `g : Z' -> T` and `f : Z -> T` is
    /// `join . g_T . Z'(f) : Z' . Z -> T`.
    Mult(Box<PtdMor>, Box<PtdMor>),
}

impl PtdMor {
    pub fn source(&self) -> PointedEndo {
        match self {
            PtdMor::Point(_) => PointedEndo::Identity,
            PtdMor::Identity(z) => z.clone(),
            PtdMor::Join => PointedEndo::composite(PointedEndo::TheMonadT, PointedEndo::TheMonadT),
            PtdMor::Instantiate(l, _) => PointedEndo::OptionList(l.clone()),
            PtdMor::Mult(g, f) => PointedEndo::composite(g.source(), f.source()),
        }
    }

    pub fn target(&self) -> PointedEndo {
        match self {
            PtdMor::Point(z) | PtdMor::Identity(z) => z.clone(),
            PtdMor::Join | PtdMor::Instantiate(..) | PtdMor::Mult(..) => PointedEndo::TheMonadT,
        }
    }
}

impl fmt::Display for PtdMor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PtdMor::Point(z) => write!(f, "point({z})"),
            PtdMor::Identity(z) => write!(f, "id({z})"),
            PtdMor::Join => f.write_str("join"),
            PtdMor::Instantiate(l, _) => write!(f, "instantiate({})", PointedEndo::OptionList(l.clone())),
            PtdMor::Mult(g, h) => write!(f, "mult({g}, {h})"),
        }
    }
}

/// Deliberate defects, used to show that the law suites can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mutation {
    /// Relabeling under `k` binders lifts through only `k - 1` of them.
    OffByOneLift,
    /// The distributive law forgets to weaken old variables.
    SkipWeakeningInDelta,
    /// `subst` reads the context as `Y ++ X` instead of `X ++ Y`.
    SwappedCoproductInjections,
    /// The bracket returns variables untouched instead of using the
    /// morphism.
    WrongEtaInBracket,
    /// The strength is replaced by the identity.
    DroppedTheta,
    /// The bracket does not recurse into operation arguments.
    NonRecursiveH,
}

impl Mutation {
    pub const ALL: [Mutation; 6] = [
        Mutation::OffByOneLift,
        Mutation::SkipWeakeningInDelta,
        Mutation::SwappedCoproductInjections,
        Mutation::WrongEtaInBracket,
        Mutation::DroppedTheta,
        Mutation::NonRecursiveH,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mutation::OffByOneLift => "off-by-one-lift",
            Mutation::SkipWeakeningInDelta => "skip-weakening-in-delta",
            Mutation::SwappedCoproductInjections => "swapped-coproduct-injections",
            Mutation::WrongEtaInBracket => "wrong-eta-in-bracket",
            Mutation::DroppedTheta => "dropped-theta",
            Mutation::NonRecursiveH => "non-recursive-h",
        }
    }

    pub fn from_name(name: &str) -> Option<Mutation> {
        Mutation::ALL.into_iter().find(|m| m.name() == name)
    }
}

/// One constructor application whose arguments are elements of
/// `X(option l_j (..))`, for some endofunctor `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layer {
    pub op: OpId,
    pub args: Vec<Elem>,
}

/// Evaluates the substitution structure for one signature.
#[derive(Clone, Copy, Debug)]
pub struct Engine<'s> {
    sig: &'s Signature,
    mutation: Option<Mutation>,
}

type ElemFn<'a> = &'a dyn Fn(&Elem) -> Elem;

fn lift(g: ElemFn<'_>, layers: usize, x: &Elem) -> Elem {
    if layers == 0 {
        return g(x);
    }
    match x {
        Elem::Fresh => Elem::Fresh,
        Elem::Old(y) => lift(g, layers - 1, y).old(),
        other => other.clone(),
    }
}

impl<'s> Engine<'s> {
    pub fn new(sig: &'s Signature) -> Self {
        Engine { sig, mutation: None }
    }

    pub fn with_mutation(sig: &'s Signature, mutation: Option<Mutation>) -> Self {
        Engine { sig, mutation }
    }

    pub fn sig(&self) -> &'s Signature {
        self.sig
    }

    pub fn mutation(&self) -> Option<Mutation> {
        self.mutation
    }

    fn mutated(&self, m: Mutation) -> bool {
        self.mutation == Some(m)
    }

    fn binders(&self, op: OpId, j: usize) -> &'s [Sort] {
        self.sig.ops.get(op.0).and_then(|d| d.args.get(j)).map_or(&[], |a| a.binders.as_slice())
    }

    pub fn point(&self, z: &PointedEndo, x: &Elem) -> Elem {
        match z {
            PointedEndo::Identity => x.clone(),
            PointedEndo::OptionSort(_) => x.clone().old(),
            PointedEndo::OptionList(l) => x.clone().old_n(l.len()),
            PointedEndo::TheMonadT => eta(x),
            PointedEndo::Composite(outer, inner) => self.point(outer, &self.point(inner, x)),
        }
    }

    /// The action of `z` on an element map `g`.
    pub fn fmap(&self, z: &PointedEndo, g: ElemFn<'_>, x: &Elem) -> Elem {
        match z {
            PointedEndo::Identity => g(x),
            PointedEndo::OptionSort(_) => lift(g, 1, x),
            PointedEndo::OptionList(l) => lift(g, l.len(), x),
            PointedEndo::TheMonadT => match x {
                Elem::Term(t) => Elem::term(self.relabel(t, g)),
                other => other.clone(),
            },
            PointedEndo::Composite(outer, inner) => self.fmap(outer, &|y| self.fmap(inner, g, y), x),
        }
    }

    /// `T` on an element map: every variable under `k` binders goes
    /// through `g` lifted past those `k` layers.
    pub fn relabel(&self, tm: &Tm, g: ElemFn<'_>) -> Tm {
        self.relabel_at(tm, g, 0)
    }

    fn relabel_at(&self, tm: &Tm, g: ElemFn<'_>, depth: usize) -> Tm {
        match tm {
            Tm::Var(e) => {
                let layers = if self.mutated(Mutation::OffByOneLift) { depth.saturating_sub(1) } else { depth };
                Tm::Var(lift(g, layers, e))
            }
            Tm::Op(id, args) => Tm::Op(
                *id,
                args.iter()
                    .enumerate()
                    .map(|(j, a)| self.relabel_at(a, g, depth + self.binders(*id, j).len()))
                    .collect(),
            ),
        }
    }

    /// The distributive law `option l (Z X) -> Z (option l X)`.
    pub fn dist(&self, z: &PointedEndo, binders: &[Sort], x: &Elem) -> Elem {
        let Some((_, rest)) = binders.split_first() else {
            return x.clone();
        };
        match x {
            Elem::Fresh => self.point(z, &Elem::Fresh),
            Elem::Old(w) => {
                let inner = self.dist(z, rest, w);
                if self.mutated(Mutation::SkipWeakeningInDelta) {
                    inner
                } else {
                    self.fmap(z, &|y| y.clone().old(), &inner)
                }
            }
            other => other.clone(),
        }
    }

    /// The strength at `(x, z)`: commutes `z` past the binders of each
    /// argument.
    pub fn theta(&self, x: &PointedEndo, z: &PointedEndo, layer: &Layer) -> Layer {
        if self.mutated(Mutation::DroppedTheta) {
            return layer.clone();
        }
        let args = layer
            .args
            .iter()
            .enumerate()
            .map(|(j, a)| {
                let binders = self.binders(layer.op, j);
                self.fmap(x, &|e| self.dist(z, binders, e), a)
            })
            .collect();
        Layer { op: layer.op, args }
    }

    pub fn apply_mor(&self, phi: &PtdMor, x: &Elem) -> Elem {
        match phi {
            PtdMor::Point(z) => self.point(z, x),
            PtdMor::Identity(_) => x.clone(),
            PtdMor::Join => match x {
                Elem::Term(t) => Elem::term(self.join(t)),
                other => other.clone(),
            },
            PtdMor::Instantiate(_, closed) => instantiate(closed, 0, x),
            PtdMor::Mult(g, f) => {
                let inner = self.fmap(&g.source(), &|y| self.apply_mor(f, y), x);
                match self.apply_mor(g, &inner) {
                    Elem::Term(t) => Elem::term(self.join(&t)),
                    other => other,
                }
            }
        }
    }

    /// The unique `h : T . Z -> T` with `h . eta_Z = phi` that commutes with
    /// the constructors through the strength.
    pub fn bracket(&self, phi: &PtdMor, tm: &Tm) -> Tm {
        let z = phi.source();
        self.bracket_with(phi, &z, tm)
    }

    fn bracket_with(&self, phi: &PtdMor, z: &PointedEndo, tm: &Tm) -> Tm {
        match tm {
            Tm::Var(x) => {
                if self.mutated(Mutation::WrongEtaInBracket) {
                    return tm.clone();
                }
                match self.apply_mor(phi, x) {
                    Elem::Term(t) => *t,
                    other => Tm::Var(other),
                }
            }
            Tm::Op(id, args) => {
                let layer = Layer { op: *id, args: args.iter().cloned().map(Elem::term).collect() };
                let moved = self.theta(&PointedEndo::TheMonadT, z, &layer);
                if self.mutated(Mutation::NonRecursiveH) {
                    return tau(&moved);
                }
                let args = moved
                    .args
                    .iter()
                    .map(|a| match a {
                        Elem::Term(t) => self.bracket_with(phi, z, t),
                        other => Tm::Var(other.clone()),
                    })
                    .collect();
                Tm::Op(*id, args)
            }
        }
    }

    pub fn join(&self, tm: &Tm) -> Tm {
        self.bracket(&PtdMor::Identity(PointedEndo::TheMonadT), tm)
    }
}

fn instantiate(closed: &[Tm], layer: usize, x: &Elem) -> Elem {
    if layer == closed.len() {
        return eta(x);
    }
    match x {
        Elem::Fresh => Elem::term(closed[layer].clone()),
        Elem::Old(y) => instantiate(closed, layer + 1, y),
        other => eta(other),
    }
}

/// The unit of `T`.
pub fn eta(x: &Elem) -> Elem {
    Elem::term(Tm::Var(x.clone()))
}

/// The constructor algebra: a layer of term elements becomes a term.
pub fn tau(layer: &Layer) -> Tm {
    Tm::Op(
        layer.op,
        layer
            .args
            .iter()
            .map(|a| match a {
                Elem::Term(t) => (**t).clone(),
                other => Tm::Var(other.clone()),
            })
            .collect(),
    )
}
