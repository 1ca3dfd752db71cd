use std::fmt;
use std::str::FromStr;

use super::CoreError;

/// Label namespace of a diagram index.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Ns {
    Sheet,
    Curve,
    Triple,
    Branch,
}

impl Ns {
    pub fn prefix(self) -> char {
        match self {
            Ns::Sheet => 's',
            Ns::Curve => 'c',
            Ns::Triple => 't',
            Ns::Branch => 'b',
        }
    }

    pub fn from_prefix(c: char) -> Option<Ns> {
        match c {
            's' => Some(Ns::Sheet),
            'c' => Some(Ns::Curve),
            't' => Some(Ns::Triple),
            'b' => Some(Ns::Branch),
            _ => None,
        }
    }

    pub fn word(self) -> &'static str {
        match self {
            Ns::Sheet => "sheet",
            Ns::Curve => "curve",
            Ns::Triple => "triple",
            Ns::Branch => "branch",
        }
    }
}

/// A diagram label: namespace plus positive index, written `s3`, `c7`, ...
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Label {
    pub ns: Ns,
    pub id: u32,
}

impl Label {
    pub fn new(ns: Ns, id: u32) -> Self {
        Label { ns, id }
    }
    pub fn sheet(id: u32) -> Self {
        Label::new(Ns::Sheet, id)
    }
    pub fn curve(id: u32) -> Self {
        Label::new(Ns::Curve, id)
    }
    pub fn triple(id: u32) -> Self {
        Label::new(Ns::Triple, id)
    }
    pub fn branch(id: u32) -> Self {
        Label::new(Ns::Branch, id)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.ns.prefix(), self.id)
    }
}

impl FromStr for Label {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let mut chars = s.chars();
        let ns = chars
            .next()
            .and_then(Ns::from_prefix)
            .ok_or_else(|| CoreError::Parse(format!("bad label {s:?}")))?;
        let id: u32 = chars
            .as_str()
            .parse()
            .map_err(|_| CoreError::Parse(format!("bad label {s:?}")))?;
        if id == 0 {
            return Err(CoreError::Parse(format!("label {s:?} must be positive")));
        }
        Ok(Label { ns, id })
    }
}

/// Generator families, in canonical order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Kind {
    A11,
    A21,
    A12,
    A22,
    A2,
    A31,
    A13,
    Ab1,
    A1b,
    A32,
    A23,
    Ab2,
    A2b,
    A3,
    Ab,
    A33,
    Ab3,
    A3b,
    Abb,
    Stab,
}

impl Kind {
    pub const DIAGRAM_KINDS: [Kind; 19] = [
        Kind::A11,
        Kind::A21,
        Kind::A12,
        Kind::A22,
        Kind::A2,
        Kind::A31,
        Kind::A13,
        Kind::Ab1,
        Kind::A1b,
        Kind::A32,
        Kind::A23,
        Kind::Ab2,
        Kind::A2b,
        Kind::A3,
        Kind::Ab,
        Kind::A33,
        Kind::Ab3,
        Kind::A3b,
        Kind::Abb,
    ];

    /// Fixed degree; `None` for stabilisation generators.
    pub fn degree(self) -> Option<u8> {
        use Kind::*;
        Some(match self {
            A11 => 0,
            A21 | A12 => 1,
            A22 | A2 | A31 | A13 | Ab1 | A1b => 2,
            A32 | A23 | Ab2 | A2b | A3 | Ab => 3,
            A33 | Ab3 | A3b | Abb => 4,
            Stab => return None,
        })
    }

    /// Namespaces of the index arguments.
    pub fn signature(self) -> &'static [Ns] {
        use Kind::*;
        use Ns::*;
        match self {
            A11 => &[Sheet, Sheet],
            A21 => &[Curve, Sheet],
            A12 => &[Sheet, Curve],
            A22 => &[Curve, Curve],
            A2 => &[Curve],
            A31 => &[Triple, Sheet],
            A13 => &[Sheet, Triple],
            Ab1 => &[Branch, Sheet],
            A1b => &[Sheet, Branch],
            A32 => &[Triple, Curve],
            A23 => &[Curve, Triple],
            Ab2 => &[Branch, Curve],
            A2b => &[Curve, Branch],
            A3 => &[Triple],
            Ab => &[Branch],
            A33 => &[Triple, Triple],
            Ab3 => &[Branch, Triple],
            A3b => &[Triple, Branch],
            Abb => &[Branch, Branch],
            Stab => &[],
        }
    }

    pub fn name(self) -> &'static str {
        use Kind::*;
        match self {
            A11 => "a11",
            A21 => "a21",
            A12 => "a12",
            A22 => "a22",
            A2 => "a2",
            A31 => "a31",
            A13 => "a13",
            Ab1 => "ab1",
            A1b => "a1b",
            A32 => "a32",
            A23 => "a23",
            Ab2 => "ab2",
            A2b => "a2b",
            A3 => "a3",
            Ab => "ab",
            A33 => "a33",
            Ab3 => "ab3",
            A3b => "a3b",
            Abb => "abb",
            Stab => "stab",
        }
    }

    pub fn from_name(s: &str) -> Option<Kind> {
        Kind::DIAGRAM_KINDS
            .iter()
            .copied()
            .chain(std::iter::once(Kind::Stab))
            .find(|k| k.name() == s)
    }

    /// Kinds whose differential depends on the variant.
    pub fn is_variant_specific(self) -> bool {
        use Kind::*;
        matches!(self, A31 | A13 | A32 | A23 | A3 | A33 | Ab3 | A3b)
    }
}

/// A free generator. Field order gives the canonical ordering:
/// degree, then family, then indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gen {
    deg: u8,
    kind: Kind,
    a: u32,
    b: u32,
}

impl Gen {
    /// Diagram generator. A11(i,i) is rejected here; use
    /// `Element::generator` to get the scalar rewrite.
    pub fn new(kind: Kind, args: &[u32]) -> Result<Gen, CoreError> {
        let sig = kind.signature();
        let deg = kind.degree().ok_or(CoreError::Arity {
            kind: kind.name(),
            expected: 0,
            got: args.len(),
        })?;
        if sig.len() != args.len() {
            return Err(CoreError::Arity { kind: kind.name(), expected: sig.len(), got: args.len() });
        }
        if args.contains(&0) {
            return Err(CoreError::OutOfRange(format!("{}: labels start at 1", kind.name())));
        }
        if kind == Kind::A11 && args[0] == args[1] {
            return Err(CoreError::DiagonalA11(args[0]));
        }
        Ok(Gen { deg, kind, a: args[0], b: args.get(1).copied().unwrap_or(0) })
    }

    /// Stabilisation generator `stab<index>.<role>` of the given degree.
    pub fn stab(index: u32, role: u32, deg: u8) -> Gen {
        Gen { deg, kind: Kind::Stab, a: index, b: role }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn degree(&self) -> u32 {
        self.deg as u32
    }

    /// Index labels, in signature order (empty for stabilisation generators).
    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        self.kind
            .signature()
            .iter()
            .enumerate()
            .map(move |(i, ns)| Label::new(*ns, if i == 0 { self.a } else { self.b }))
    }

    pub fn args(&self) -> Vec<u32> {
        self.labels().map(|l| l.id).collect()
    }

    pub fn stab_parts(&self) -> Option<(u32, u32)> {
        (self.kind == Kind::Stab).then_some((self.a, self.b))
    }

    pub fn mentions(&self, label: Label) -> bool {
        self.labels().any(|l| l == label)
    }

    /// Rename indices through `f`; stabilisation generators are left alone.
    pub fn relabel(&self, f: impl Fn(Label) -> Label) -> Gen {
        if self.kind == Kind::Stab {
            return *self;
        }
        let ls: Vec<Label> = self.labels().map(&f).collect();
        Gen { deg: self.deg, kind: self.kind, a: ls[0].id, b: ls.get(1).map_or(0, |l| l.id) }
    }

    /// Parse a generator name. Stabilisation generators need their degree
    /// from context.
    pub fn parse_with(s: &str, stab_degree: &dyn Fn(u32, u32) -> Option<u8>) -> Result<Gen, CoreError> {
        let s = s.trim();
        let bad = || CoreError::Parse(format!("bad generator name {s:?}"));
        if let Some(rest) = s.strip_prefix("stab") {
            let (i, r) = rest.split_once('.').ok_or_else(bad)?;
            let i: u32 = i.parse().map_err(|_| bad())?;
            let r: u32 = r.parse().map_err(|_| bad())?;
            let d = stab_degree(i, r).ok_or_else(|| CoreError::UnknownGenerator(s.to_string()))?;
            return Ok(Gen::stab(i, r, d));
        }
        let (name, rest) = s.split_once('(').ok_or_else(bad)?;
        let inner = rest.strip_suffix(')').ok_or_else(bad)?;
        let kind = Kind::from_name(name).ok_or_else(bad)?;
        let sig = kind.signature();
        let labels: Vec<Label> = inner
            .split(',')
            .map(|a| a.parse::<Label>())
            .collect::<Result<_, _>>()?;
        if labels.len() != sig.len() {
            return Err(CoreError::Arity { kind: kind.name(), expected: sig.len(), got: labels.len() });
        }
        for (l, ns) in labels.iter().zip(sig) {
            if l.ns != *ns {
                return Err(CoreError::Parse(format!("{s:?}: expected a {} label, got {l}", ns.word())));
            }
        }
        let args: Vec<u32> = labels.iter().map(|l| l.id).collect();
        Gen::new(kind, &args)
    }
}

impl FromStr for Gen {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Gen::parse_with(s, &|_, _| None)
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kind == Kind::Stab {
            return write!(f, "stab{}.{}", self.a, self.b);
        }
        write!(f, "{}(", self.kind.name())?;
        for (i, l) in self.labels().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
