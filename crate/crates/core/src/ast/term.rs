use std::collections::hash_map::DefaultHasher;
use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

macro_rules! ident_newtype {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(Arc<str>);

        impl $name {
            pub fn new(text: impl AsRef<str>) -> Self {
                $name(Arc::from(text.as_ref()))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }

        impl From<&str> for $name {
            fn from(text: &str) -> Self {
                $name::new(text)
            }
        }
    };
}

ident_newtype!(
    /// A choice label of a selection or branching.
    Label
);
ident_newtype!(
    /// The name of a recursion variable.
    Name
);

/// Returns true when `text` matches `[A-Za-z_$][A-Za-z0-9_'$]*`.
pub fn is_identifier(text: &str) -> bool {
    let mut chars = text.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' || c == '$' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '\'' | '$'))
}

/// Tag distinguishing instances of the same input branching after unfolding.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Annotation(pub u64);

impl fmt::Display for Annotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "@{}", self.0)
    }
}

/// Monotone source of fresh annotations. One per check session.
#[derive(Debug, Default)]
pub struct Annotator {
    next: u64,
}

impl Annotator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fresh(&mut self) -> Annotation {
        let a = Annotation(self.next);
        self.next += 1;
        a
    }
}

/// A recursion variable occurrence.
///
/// Bound variables are de Bruijn indices (0 = innermost enclosing `rec`);
/// the name is kept only for printing.
#[derive(Clone, Debug)]
pub enum Var {
    Bound { index: u32, name: Name },
    Free(Name),
}

impl Var {
    pub fn name(&self) -> &Name {
        match self {
            Var::Bound { name, .. } | Var::Free(name) => name,
        }
    }
}

pub type Choices = Vec<(Label, SessionType)>;

/// One layer of a session type.
#[derive(Clone, Debug)]
pub enum Kind {
    End,
    Var(Var),
    Rec(Name, SessionType),
    Select(Choices),
    Branch(Choices, Option<Annotation>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("a choice construct needs at least one label")]
    EmptyChoice,
    #[error("label `{0}` appears twice in one choice construct")]
    DuplicateLabel(Label),
}

struct Node {
    kind: Kind,
    hash: u64,
    /// One more than the largest de Bruijn index escaping this node; 0 when
    /// no bound variable escapes.
    loose: u32,
    free_names: bool,
    has_branch: bool,
    size: usize,
}

/// An immutable, shared session type.
///
/// Equality and hashing are modulo alpha-renaming of bound variables, modulo
/// annotations, and insensitive to the order of choices. Use
/// [`SessionType::annotations`] when annotations matter.
#[derive(Clone)]
pub struct SessionType(Arc<Node>);

fn mix(parts: &[u64]) -> u64 {
    let mut h = DefaultHasher::new();
    parts.hash(&mut h);
    h.finish()
}

fn str_hash(s: &str) -> u64 {
    let mut h = DefaultHasher::new();
    s.hash(&mut h);
    h.finish()
}

fn choices_hash(choices: &Choices) -> u64 {
    choices.iter().fold(0u64, |acc, (l, t)| acc.wrapping_add(mix(&[str_hash(l.as_str()), t.0.hash])))
}

fn check_choices(choices: &Choices) -> Result<(), BuildError> {
    if choices.is_empty() {
        return Err(BuildError::EmptyChoice);
    }
    let mut seen = HashSet::new();
    for (l, _) in choices {
        if !seen.insert(l) {
            return Err(BuildError::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

impl SessionType {
    fn mk(kind: Kind) -> SessionType {
        let (hash, loose, free_names, has_branch, size) = match &kind {
            Kind::End => (mix(&[0]), 0, false, false, 1),
            Kind::Var(Var::Bound { index, .. }) => (mix(&[1, *index as u64]), index + 1, false, false, 1),
            Kind::Var(Var::Free(name)) => (mix(&[2, str_hash(name.as_str())]), 0, true, false, 1),
            Kind::Rec(_, body) => (
                mix(&[3, body.0.hash]),
                body.0.loose.saturating_sub(1),
                body.0.free_names,
                body.0.has_branch,
                body.0.size + 1,
            ),
            Kind::Select(choices) | Kind::Branch(choices, _) => {
                let tag = if matches!(kind, Kind::Select(_)) { 4 } else { 5 };
                let loose = choices.iter().map(|(_, t)| t.0.loose).max().unwrap_or(0);
                let free = choices.iter().any(|(_, t)| t.0.free_names);
                let branch = matches!(kind, Kind::Branch(..)) || choices.iter().any(|(_, t)| t.0.has_branch);
                let size = 1 + choices.iter().map(|(_, t)| t.0.size).sum::<usize>();
                (mix(&[tag, choices_hash(choices)]), loose, free, branch, size)
            }
        };
        SessionType(Arc::new(Node { kind, hash, loose, free_names, has_branch, size }))
    }

    pub fn end() -> SessionType {
        SessionType::mk(Kind::End)
    }

    /// A free occurrence of the variable `name`, to be bound by [`SessionType::rec`].
    pub fn var(name: impl Into<Name>) -> SessionType {
        SessionType::mk(Kind::Var(Var::Free(name.into())))
    }

    /// `rec name. body`, binding every free occurrence of `name` in `body`.
    pub fn rec(name: impl Into<Name>, body: SessionType) -> SessionType {
        let name = name.into();
        let body = body.close_name(&name, 0);
        SessionType::mk(Kind::Rec(name, body))
    }

    pub fn try_select(choices: Choices) -> Result<SessionType, BuildError> {
        check_choices(&choices)?;
        Ok(SessionType::mk(Kind::Select(choices)))
    }

    pub fn try_branch(choices: Choices, annotation: Option<Annotation>) -> Result<SessionType, BuildError> {
        check_choices(&choices)?;
        Ok(SessionType::mk(Kind::Branch(choices, annotation)))
    }

    /// # Panics
    /// On an empty choice list or a repeated label.
    pub fn select<L: Into<Label>>(choices: impl IntoIterator<Item = (L, SessionType)>) -> SessionType {
        let choices = choices.into_iter().map(|(l, t)| (l.into(), t)).collect();
        SessionType::try_select(choices).expect("invalid selection")
    }

    /// # Panics
    /// On an empty choice list or a repeated label.
    pub fn branch<L: Into<Label>>(choices: impl IntoIterator<Item = (L, SessionType)>) -> SessionType {
        let choices = choices.into_iter().map(|(l, t)| (l.into(), t)).collect();
        SessionType::try_branch(choices, None).expect("invalid branching")
    }

    pub(crate) fn from_kind_unchecked(kind: Kind) -> SessionType {
        SessionType::mk(kind)
    }

    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    /// Number of constructors in the term.
    pub fn size(&self) -> usize {
        self.0.size
    }

    /// True when no recursion variable occurs unbound.
    pub fn is_closed(&self) -> bool {
        self.0.loose == 0 && !self.0.free_names
    }

    /// True when an input branching occurs anywhere in the term.
    pub fn contains_branch(&self) -> bool {
        self.0.has_branch
    }

    pub fn is_end(&self) -> bool {
        matches!(self.kind(), Kind::End)
    }

    pub fn is_rec(&self) -> bool {
        matches!(self.kind(), Kind::Rec(..))
    }

    pub fn is_select(&self) -> bool {
        matches!(self.kind(), Kind::Select(_))
    }

    pub fn is_branch(&self) -> bool {
        matches!(self.kind(), Kind::Branch(..))
    }

    /// Pointer identity; implies equality.
    pub fn ptr_eq(&self, other: &SessionType) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Address of the shared node, for memo tables keyed by identity.
    pub(crate) fn addr(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    /// Continuation under `label` when the root is a selection or branching.
    pub fn choice(&self, label: &Label) -> Option<&SessionType> {
        match self.kind() {
            Kind::Select(cs) | Kind::Branch(cs, _) => cs.iter().find(|(l, _)| l == label).map(|(_, t)| t),
            _ => None,
        }
    }

    /// Annotation of the root branching, if any.
    pub fn annotation(&self) -> Option<Annotation> {
        match self.kind() {
            Kind::Branch(_, a) => *a,
            _ => None,
        }
    }

    /// All annotations in pre-order, left to right.
    pub fn annotations(&self) -> Vec<Annotation> {
        fn walk(t: &SessionType, out: &mut Vec<Annotation>) {
            match t.kind() {
                Kind::End | Kind::Var(_) => {}
                Kind::Rec(_, b) => walk(b, out),
                Kind::Select(cs) => cs.iter().for_each(|(_, c)| walk(c, out)),
                Kind::Branch(cs, a) => {
                    out.extend(a.iter().copied());
                    cs.iter().for_each(|(_, c)| walk(c, out));
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// Rebuilds every selection and branching child with `f`, reusing `self`
    /// when nothing changed.
    pub(crate) fn map_children(&self, mut f: impl FnMut(&SessionType) -> SessionType) -> SessionType {
        let rebuild = |cs: &Choices, f: &mut dyn FnMut(&SessionType) -> SessionType| -> Option<Choices> {
            let mut changed = false;
            let out: Choices = cs
                .iter()
                .map(|(l, t)| {
                    let n = f(t);
                    changed |= !n.ptr_eq(t);
                    (l.clone(), n)
                })
                .collect();
            changed.then_some(out)
        };
        match self.kind() {
            Kind::Select(cs) => match rebuild(cs, &mut f) {
                Some(cs) => SessionType::mk(Kind::Select(cs)),
                None => self.clone(),
            },
            Kind::Branch(cs, a) => match rebuild(cs, &mut f) {
                Some(cs) => SessionType::mk(Kind::Branch(cs, *a)),
                None => self.clone(),
            },
            Kind::Rec(n, b) => {
                let nb = f(b);
                if nb.ptr_eq(b) {
                    self.clone()
                } else {
                    SessionType::mk(Kind::Rec(n.clone(), nb))
                }
            }
            Kind::End | Kind::Var(_) => self.clone(),
        }
    }

    fn close_name(&self, name: &Name, depth: u32) -> SessionType {
        if !self.0.free_names {
            return self.clone();
        }
        match self.kind() {
            Kind::Var(Var::Free(n)) if n == name => {
                SessionType::mk(Kind::Var(Var::Bound { index: depth, name: n.clone() }))
            }
            // an inner binder shadows `name`
            Kind::Rec(n, _) if n == name => self.clone(),
            Kind::Rec(n, b) => SessionType::mk(Kind::Rec(n.clone(), b.close_name(name, depth + 1))),
            _ => self.map_children(|c| c.close_name(name, depth)),
        }
    }

    fn shift(&self, by: u32, cutoff: u32) -> SessionType {
        if by == 0 || self.0.loose <= cutoff {
            return self.clone();
        }
        match self.kind() {
            Kind::Var(Var::Bound { index, name }) if *index >= cutoff => {
                SessionType::mk(Kind::Var(Var::Bound { index: index + by, name: name.clone() }))
            }
            Kind::Rec(n, b) => SessionType::mk(Kind::Rec(n.clone(), b.shift(by, cutoff + 1))),
            _ => self.map_children(|c| c.shift(by, cutoff)),
        }
    }

    /// Replaces bound index `depth` with `replacement` (shifted under binders)
    /// and lowers the indices above it.
    fn substitute(&self, depth: u32, replacement: &SessionType) -> SessionType {
        if self.0.loose <= depth {
            return self.clone();
        }
        match self.kind() {
            Kind::Var(Var::Bound { index, name }) => {
                if *index == depth {
                    replacement.shift(depth, 0)
                } else {
                    SessionType::mk(Kind::Var(Var::Bound { index: index - 1, name: name.clone() }))
                }
            }
            Kind::Rec(n, b) => SessionType::mk(Kind::Rec(n.clone(), b.substitute(depth + 1, replacement))),
            _ => self.map_children(|c| c.substitute(depth, replacement)),
        }
    }

    /// For a root `rec t. T`, returns `T{rec t. T / t}`; otherwise `None`.
    pub fn unroll(&self) -> Option<SessionType> {
        match self.kind() {
            Kind::Rec(_, body) => Some(body.substitute(0, self)),
            _ => None,
        }
    }

    /// Unrolls root recursions until the root is a communication or `end`.
    ///
    /// Terminates on contractive terms.
    pub fn head_normal(&self) -> SessionType {
        let mut t = self.clone();
        while let Some(u) = t.unroll() {
            t = u;
        }
        t
    }

    /// Removes every annotation.
    pub fn erase(&self) -> SessionType {
        match self.kind() {
            Kind::Branch(cs, Some(_)) => {
                let cs = cs.iter().map(|(l, t)| (l.clone(), t.erase())).collect();
                SessionType::mk(Kind::Branch(cs, None))
            }
            _ => self.map_children(|c| c.erase()),
        }
    }

    /// Annotates every branching with a fresh annotation.
    pub fn decorate(&self, annotator: &mut Annotator) -> SessionType {
        if !self.0.has_branch {
            return self.clone();
        }
        match self.kind() {
            Kind::Branch(cs, _) => {
                let a = annotator.fresh();
                let cs = cs.iter().map(|(l, t)| (l.clone(), t.decorate(annotator))).collect();
                SessionType::mk(Kind::Branch(cs, Some(a)))
            }
            Kind::Rec(n, b) => SessionType::mk(Kind::Rec(n.clone(), b.decorate(annotator))),
            Kind::Select(cs) => {
                let cs = cs.iter().map(|(l, t)| (l.clone(), t.decorate(annotator))).collect();
                SessionType::mk(Kind::Select(cs))
            }
            Kind::End | Kind::Var(_) => self.clone(),
        }
    }

    /// True when some `rec` binds a variable occurring in its body with no
    /// selection or branching in between.
    pub fn is_contractive(&self) -> bool {
        match self.kind() {
            Kind::End | Kind::Var(_) => true,
            Kind::Rec(_, b) => !occurs_unguarded(b, 0) && b.is_contractive(),
            Kind::Select(cs) | Kind::Branch(cs, _) => cs.iter().all(|(_, t)| t.is_contractive()),
        }
    }

    /// Renames binders so that no two `rec` nodes share a name. Bound
    /// variables follow their binders; equality is unaffected.
    pub fn with_unique_binders(&self) -> SessionType {
        fn walk(t: &SessionType, used: &mut HashSet<Name>, scope: &mut Vec<Name>) -> SessionType {
            match t.kind() {
                Kind::End | Kind::Var(Var::Free(_)) => t.clone(),
                Kind::Var(Var::Bound { index, name }) => {
                    let pos = scope.len().checked_sub(1 + *index as usize);
                    match pos.map(|p| &scope[p]) {
                        Some(n) if n != name => {
                            SessionType::mk(Kind::Var(Var::Bound { index: *index, name: n.clone() }))
                        }
                        _ => t.clone(),
                    }
                }
                Kind::Rec(n, b) => {
                    let mut fresh = n.clone();
                    let mut k = 1;
                    while used.contains(&fresh) {
                        fresh = Name::new(format!("{}_{}", n, k));
                        k += 1;
                    }
                    used.insert(fresh.clone());
                    scope.push(fresh.clone());
                    let nb = walk(b, used, scope);
                    scope.pop();
                    if fresh == *n && nb.ptr_eq(b) {
                        t.clone()
                    } else {
                        SessionType::mk(Kind::Rec(fresh, nb))
                    }
                }
                _ => t.map_children(|c| walk(c, used, scope)),
            }
        }
        let mut used = HashSet::new();
        self.free_names_into(&mut used);
        walk(self, &mut used, &mut Vec::new())
    }

    fn free_names_into(&self, out: &mut HashSet<Name>) {
        if !self.0.free_names {
            return;
        }
        match self.kind() {
            Kind::Var(Var::Free(n)) => {
                out.insert(n.clone());
            }
            Kind::Var(_) | Kind::End => {}
            Kind::Rec(_, b) => b.free_names_into(out),
            Kind::Select(cs) | Kind::Branch(cs, _) => cs.iter().for_each(|(_, t)| t.free_names_into(out)),
        }
    }

    /// Exact structural comparison including annotations and choice order.
    pub fn identical(&self, other: &SessionType) -> bool {
        if self.ptr_eq(other) {
            return true;
        }
        match (self.kind(), other.kind()) {
            (Kind::End, Kind::End) => true,
            (Kind::Var(Var::Bound { index: a, .. }), Kind::Var(Var::Bound { index: b, .. })) => a == b,
            (Kind::Var(Var::Free(a)), Kind::Var(Var::Free(b))) => a == b,
            (Kind::Rec(_, a), Kind::Rec(_, b)) => a.identical(b),
            (Kind::Select(a), Kind::Select(b)) => choices_identical(a, b),
            (Kind::Branch(a, x), Kind::Branch(b, y)) => x == y && choices_identical(a, b),
            _ => false,
        }
    }
}

fn choices_identical(a: &Choices, b: &Choices) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|((la, ta), (lb, tb))| la == lb && ta.identical(tb))
}

/// Whether bound index `index` occurs in `t` without passing a selection or branching.
pub(crate) fn occurs_unguarded(t: &SessionType, index: u32) -> bool {
    match t.kind() {
        Kind::Var(Var::Bound { index: i, .. }) => *i == index,
        Kind::Rec(_, b) => occurs_unguarded(b, index + 1),
        _ => false,
    }
}

fn choices_eq(a: &Choices, b: &Choices) -> bool {
    a.len() == b.len() && a.iter().all(|(l, t)| b.iter().find(|(m, _)| m == l).is_some_and(|(_, u)| t == u))
}

impl PartialEq for SessionType {
    fn eq(&self, other: &SessionType) -> bool {
        if self.ptr_eq(other) {
            return true;
        }
        if self.0.hash != other.0.hash || self.0.size != other.0.size {
            return false;
        }
        match (self.kind(), other.kind()) {
            (Kind::End, Kind::End) => true,
            (Kind::Var(Var::Bound { index: a, .. }), Kind::Var(Var::Bound { index: b, .. })) => a == b,
            (Kind::Var(Var::Free(a)), Kind::Var(Var::Free(b))) => a == b,
            (Kind::Rec(_, a), Kind::Rec(_, b)) => a == b,
            (Kind::Select(a), Kind::Select(b)) | (Kind::Branch(a, _), Kind::Branch(b, _)) => choices_eq(a, b),
            _ => false,
        }
    }
}

impl Eq for SessionType {}

impl Hash for SessionType {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl fmt::Debug for SessionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
