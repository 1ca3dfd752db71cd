use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::coeff::Coeff;
use super::element::Element;
use super::generator::{Gen, Kind};
use super::laurent::LaurentInt;
use super::CoreError;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn from_symbol(c: char) -> Option<Sign> {
        match c {
            '+' => Some(Sign::Plus),
            '-' => Some(Sign::Minus),
            _ => None,
        }
    }
}

/// The (epsilon, delta) tag selecting one of the four differentials.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Variant {
    pub eps: Sign,
    pub delta: Sign,
}

impl Variant {
    pub const MM: Variant = Variant { eps: Sign::Minus, delta: Sign::Minus };
    pub const MP: Variant = Variant { eps: Sign::Minus, delta: Sign::Plus };
    pub const PM: Variant = Variant { eps: Sign::Plus, delta: Sign::Minus };
    pub const PP: Variant = Variant { eps: Sign::Plus, delta: Sign::Plus };
    pub const ALL: [Variant; 4] = [Variant::MM, Variant::MP, Variant::PM, Variant::PP];
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.eps.symbol(), self.delta.symbol())
    }
}

impl FromStr for Variant {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let cs: Vec<char> = s.trim().chars().collect();
        match cs.as_slice() {
            [a, b] => match (Sign::from_symbol(*a), Sign::from_symbol(*b)) {
                (Some(eps), Some(delta)) => Ok(Variant { eps, delta }),
                _ => Err(CoreError::Parse(format!("bad variant {s:?}"))),
            },
            _ => Err(CoreError::Parse(format!("bad variant {s:?}"))),
        }
    }
}

/// Free graded algebra with a differential given on generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Dga<C: Coeff> {
    pub name: String,
    pub variant: Variant,
    pub sheets: u32,
    diff: BTreeMap<Gen, Element<C>>,
    next_stab: u32,
}

impl<C: Coeff> Dga<C> {
    pub fn new(name: impl Into<String>, variant: Variant, sheets: u32) -> Self {
        Dga { name: name.into(), variant, sheets, diff: BTreeMap::new(), next_stab: 1 }
    }

    pub fn insert(&mut self, g: Gen, d: Element<C>) {
        if let Some((i, _)) = g.stab_parts() {
            self.next_stab = self.next_stab.max(i + 1);
        }
        self.diff.insert(g, d);
    }

    pub fn remove(&mut self, g: Gen) -> Option<Element<C>> {
        self.diff.remove(&g)
    }

    pub fn diff(&self, g: Gen) -> Option<&Element<C>> {
        self.diff.get(&g)
    }

    pub fn diff_mut(&mut self, g: Gen) -> Option<&mut Element<C>> {
        self.diff.get_mut(&g)
    }

    pub fn contains(&self, g: Gen) -> bool {
        self.diff.contains_key(&g)
    }

    /// Generators in canonical order.
    pub fn generators(&self) -> impl Iterator<Item = Gen> + '_ {
        self.diff.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Gen, &Element<C>)> {
        self.diff.iter().map(|(g, e)| (*g, e))
    }

    pub fn iter_mut(&mut self) -> impl Iterator<Item = (Gen, &mut Element<C>)> {
        self.diff.iter_mut().map(|(g, e)| (*g, e))
    }

    pub fn len(&self) -> usize {
        self.diff.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diff.is_empty()
    }

    /// Fresh index for a stabilisation pair.
    pub fn take_stab_index(&mut self) -> u32 {
        let i = self.next_stab;
        self.next_stab += 1;
        i
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Dga<D> {
        Dga {
            name: self.name.clone(),
            variant: self.variant,
            sheets: self.sheets,
            diff: self.diff.iter().map(|(g, e)| (*g, e.map_coeffs(&f))).collect(),
            next_stab: self.next_stab,
        }
    }
}

impl Dga<LaurentInt> {
    /// Single-letter element for a generator, with a11(i,i) folded to 1+mu.
    pub fn make_generator(&self, kind: Kind, args: &[u32]) -> Result<Element<LaurentInt>, CoreError> {
        make_generator(kind, args, self.sheets)
    }
}

/// Generator element in a context with `sheets` sheets; a11(i,i) becomes 1+mu.
pub fn make_generator(kind: Kind, args: &[u32], sheets: u32) -> Result<Element<LaurentInt>, CoreError> {
    if kind == Kind::Stab {
        return Err(CoreError::Arity { kind: kind.name(), expected: 0, got: args.len() });
    }
    for (a, ns) in args.iter().zip(kind.signature()) {
        if *ns == super::Ns::Sheet && *a > sheets {
            return Err(CoreError::OutOfRange(format!("sheet s{a} exceeds {sheets}")));
        }
    }
    if kind == Kind::A11 && args.len() == 2 && args[0] == args[1] && args[0] != 0 {
        return Ok(Element::scalar(LaurentInt::one_plus_mu()));
    }
    Ok(Element::gen(Gen::new(kind, args)?))
}
