use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use super::MoveError;
use crate::dga_core::{Dga, Coeff, Gen, Label};

/// Renaming of diagram labels, written `s8=s5 c6=c2`. Unlisted labels are
/// fixed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Relabel {
    map: BTreeMap<Label, Label>,
}

impl Relabel {
    pub fn identity() -> Self {
        Relabel::default()
    }

    pub fn new(pairs: impl IntoIterator<Item = (Label, Label)>) -> Result<Self, MoveError> {
        let mut map = BTreeMap::new();
        for (a, b) in pairs {
            if a.ns != b.ns {
                return Err(MoveError::NotBijective(format!("{a} and {b} are in different namespaces")));
            }
            if map.insert(a, b).is_some_and(|old| old != b) {
                return Err(MoveError::NotBijective(format!("{a} mapped twice")));
            }
        }
        let mut seen = BTreeSet::new();
        for b in map.values() {
            if !seen.insert(*b) {
                return Err(MoveError::NotBijective(format!("two labels map to {b}")));
            }
        }
        Ok(Relabel { map })
    }

    pub fn apply(&self, l: Label) -> Label {
        self.map.get(&l).copied().unwrap_or(l)
    }

    pub fn gen(&self, g: Gen) -> Gen {
        g.relabel(|l| self.apply(l))
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Label, Label)> + '_ {
        self.map.iter().map(|(a, b)| (*a, *b))
    }
}

impl fmt::Display for Relabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.map.iter().map(|(a, b)| format!("{a}={b}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for Relabel {
    type Err = MoveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut pairs = Vec::new();
        for tok in s.split_whitespace() {
            let (a, b) = tok
                .split_once('=')
                .ok_or_else(|| MoveError::NotBijective(format!("expected old=new, got {tok:?}")))?;
            let a: Label = a.parse().map_err(|e| MoveError::NotBijective(format!("{e}")))?;
            let b: Label = b.parse().map_err(|e| MoveError::NotBijective(format!("{e}")))?;
            pairs.push((a, b));
        }
        Relabel::new(pairs)
    }
}

/// Rename the labels of every generator. Fails if two generators collide.
pub fn apply_relabel<C: Coeff>(dga: &Dga<C>, map: &Relabel) -> Result<Dga<C>, MoveError> {
    let mut out = Dga::new(dga.name.clone(), dga.variant, dga.sheets);
    for (g, e) in dga.iter() {
        let h = map.gen(g);
        if out.contains(h) {
            return Err(MoveError::NotBijective(format!("{g} lands on an existing {h}")));
        }
        out.insert(h, e.map_gens(|x| map.gen(x)));
    }
    Ok(out)
}

/// Outcome of comparing two algebras.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub equal: bool,
    pub discrepancy: Option<String>,
}

impl Comparison {
    fn differ(msg: String) -> Self {
        Comparison { equal: false, discrepancy: Some(msg) }
    }
}

/// Relabel `a` by `map` and compare generator sets and differentials with `b`.
pub fn dga_equal_up_to_relabel<C: Coeff>(a: &Dga<C>, b: &Dga<C>, map: &Relabel) -> Result<Comparison, MoveError> {
    if a.variant != b.variant {
        return Ok(Comparison::differ(format!("variants differ: {} vs {}", a.variant, b.variant)));
    }
    let ra = apply_relabel(a, map)?;
    let ga: BTreeSet<Gen> = ra.generators().collect();
    let gb: BTreeSet<Gen> = b.generators().collect();
    if ga != gb {
        let only_a: Vec<String> = ga.difference(&gb).take(5).map(|g| g.to_string()).collect();
        let only_b: Vec<String> = gb.difference(&ga).take(5).map(|g| g.to_string()).collect();
        return Ok(Comparison::differ(format!(
            "generator sets differ: only left [{}], only right [{}]",
            only_a.join(", "),
            only_b.join(", ")
        )));
    }
    for (g, eb) in b.iter() {
        let ea = ra.diff(g).expect("same generator set");
        if ea != eb {
            return Ok(Comparison::differ(format!("d {g}: {ea} vs {eb}")));
        }
    }
    Ok(Comparison { equal: true, discrepancy: None })
}
