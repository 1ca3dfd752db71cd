use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use smallvec::SmallVec;

use super::coeff::Coeff;
use super::generator::Gen;
use super::laurent::LaurentInt;
use super::CoreError;

/// Ordered product of generators; the empty word is the unit.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    deg: u32,
    gens: SmallVec<[Gen; 4]>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn letter(g: Gen) -> Self {
        let mut gens = SmallVec::new();
        gens.push(g);
        Word { deg: g.degree(), gens }
    }

    pub fn from_gens(gs: &[Gen]) -> Self {
        Word { deg: gs.iter().map(Gen::degree).sum(), gens: gs.iter().copied().collect() }
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn gens(&self) -> &[Gen] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn push(&mut self, g: Gen) {
        self.deg += g.degree();
        self.gens.push(g);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut gens = self.gens.clone();
        gens.extend_from_slice(&other.gens);
        Word { deg: self.deg + other.deg, gens }
    }

    pub fn as_letter(&self) -> Option<Gen> {
        (self.gens.len() == 1).then(|| self.gens[0])
    }

    pub fn contains(&self, g: Gen) -> bool {
        self.gens.contains(&g)
    }

    pub fn slice(&self, lo: usize, hi: usize) -> Word {
        Word::from_gens(&self.gens[lo..hi])
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

/// Degree of an element.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ElemDegree {
    Zero,
    Homogeneous(u32),
    Inhomogeneous,
}

/// Linear combination of words with coefficients on the left.
#[derive(Clone, PartialEq, Eq)]
pub struct Element<C: Coeff> {
    terms: BTreeMap<Word, C>,
}

impl<C: Coeff> Default for Element<C> {
    fn default() -> Self {
        Element { terms: BTreeMap::new() }
    }
}

impl<C: Coeff> Element<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(w: Word, c: C) -> Self {
        let mut e = Self::zero();
        e.add_term(w, c);
        e
    }

    pub fn scalar(c: C) -> Self {
        Self::term(Word::empty(), c)
    }

    pub fn letter(g: Gen, c: C) -> Self {
        Self::term(Word::letter(g), c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> Option<&C> {
        self.terms.get(w)
    }

    pub fn add_term(&mut self, w: Word, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero() {
                    self.terms.remove(&w);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c.clone());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn neg(&self) -> Self {
        Element { terms: self.terms.iter().map(|(w, c)| (w.clone(), c.neg())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &C) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), k.mul(c));
        }
        out
    }

    /// Product in the free algebra: words concatenate, never commute.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), c1.mul(c2));
            }
        }
        out
    }

    /// `left * self * right` for single words, with an extra scalar.
    pub fn sandwich(&self, left: &Word, c: &C, right: &Word) -> Self {
        let mut out = Self::zero();
        for (w, k) in &self.terms {
            out.add_term(left.concat(w).concat(right), c.mul(k));
        }
        out
    }

    pub fn degree(&self) -> ElemDegree {
        let mut it = self.terms.keys().map(Word::degree);
        match it.next() {
            None => ElemDegree::Zero,
            Some(d) => {
                if it.all(|e| e == d) {
                    ElemDegree::Homogeneous(d)
                } else {
                    ElemDegree::Inhomogeneous
                }
            }
        }
    }

    pub fn mentions(&self, g: Gen) -> bool {
        self.terms.keys().any(|w| w.contains(g))
    }

    pub fn generators(&self) -> BTreeSet<Gen> {
        self.terms.keys().flat_map(|w| w.gens().iter().copied()).collect()
    }

    /// Replace every occurrence of `g` by `rep`.
    pub fn substitute(&self, g: Gen, rep: &Self) -> Self {
        if !self.mentions(g) {
            return self.clone();
        }
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            if !w.contains(g) {
                out.add_term(w.clone(), c.clone());
                continue;
            }
            let mut acc: Vec<(Word, C)> = vec![(Word::empty(), c.clone())];
            for h in w.gens() {
                if *h == g {
                    let mut next = Vec::with_capacity(acc.len() * rep.len());
                    for (aw, ac) in &acc {
                        for (rw, rc) in &rep.terms {
                            next.push((aw.concat(rw), ac.mul(rc)));
                        }
                    }
                    acc = next;
                } else {
                    for (aw, _) in acc.iter_mut() {
                        aw.push(*h);
                    }
                }
            }
            for (aw, ac) in acc {
                out.add_term(aw, ac);
            }
        }
        out
    }

    /// Simultaneous substitution of several generators.
    pub fn substitute_all(&self, map: &HashMap<Gen, Self>) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            let mut acc: Vec<(Word, C)> = vec![(Word::empty(), c.clone())];
            for h in w.gens() {
                match map.get(h) {
                    Some(rep) => {
                        let mut next = Vec::with_capacity(acc.len() * rep.len());
                        for (aw, ac) in &acc {
                            for (rw, rc) in &rep.terms {
                                next.push((aw.concat(rw), ac.mul(rc)));
                            }
                        }
                        acc = next;
                    }
                    None => {
                        for (aw, _) in acc.iter_mut() {
                            aw.push(*h);
                        }
                    }
                }
            }
            for (aw, ac) in acc {
                out.add_term(aw, ac);
            }
        }
        out
    }

    pub fn map_gens(&self, f: impl Fn(Gen) -> Gen) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            let gs: Vec<Gen> = w.gens().iter().map(|g| f(*g)).collect();
            out.add_term(Word::from_gens(&gs), c.clone());
        }
        out
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Element<D> {
        let mut out = Element::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c));
        }
        out
    }
}

impl Element<LaurentInt> {
    pub fn one() -> Self {
        Self::scalar(LaurentInt::one())
    }

    pub fn gen(g: Gen) -> Self {
        Self::letter(g, LaurentInt::one())
    }

    /// Parse the dump grammar: `(laurent) word + (laurent) word ...` or `0`.
    pub fn parse_with(s: &str, stab_degree: &dyn Fn(u32, u32) -> Option<u8>) -> Result<Self, CoreError> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let mut out = Self::zero();
        let bytes = s.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            if bytes[i] != b'(' {
                return Err(CoreError::Parse(format!("expected '(' at byte {i} of {s:?}")));
            }
            let close = s[i..]
                .find(')')
                .map(|k| k + i)
                .ok_or_else(|| CoreError::Parse(format!("unclosed coefficient in {s:?}")))?;
            let c: LaurentInt = s[i + 1..close].parse()?;
            let rest = &s[close + 1..];
            let end = rest.find(" + (").unwrap_or(rest.len());
            let word_text = rest[..end].trim();
            let mut w = Word::empty();
            if !word_text.is_empty() {
                for name in word_text.split('*') {
                    w.push(Gen::parse_with(name, stab_degree)?);
                }
            }
            out.add_term(w, c);
            i = close + 1 + end;
            if i < bytes.len() {
                i += 3;
            }
        }
        Ok(out)
    }
}

impl<C: Coeff> fmt::Display for Element<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            if !w.is_empty() {
                write!(f, " {w}")?;
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for Element<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
