use std::collections::BTreeMap;

use smallvec::SmallVec;

/// Sorted multiset of variable indices.
pub type Mono = SmallVec<[u32; 4]>;

#[inline]
pub fn mulmod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub fn invmod(a: u32, p: u32) -> u32 {
    let (mut r, mut base, mut e) = (1u32, a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, base, p);
        }
        base = mulmod(base, base, p);
        e >>= 1;
    }
    r
}

fn merge(a: &Mono, b: &Mono) -> Mono {
    let mut out = Mono::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Commutative polynomial over F_p.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    terms: BTreeMap<Mono, u32>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: u32) -> Self {
        let mut p = Poly::zero();
        if c != 0 {
            p.terms.insert(Mono::new(), c);
        }
        p
    }

    pub fn add_term(&mut self, m: Mono, c: u32, p: u32) {
        let c = c % p;
        if c == 0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = (*e.get() + c) % p;
                if s == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn add_scaled(&mut self, other: &Poly, m: &Mono, c: u32, p: u32) {
        for (om, oc) in &other.terms {
            self.add_term(merge(om, m), mulmod(*oc, c, p), p);
        }
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

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, u32)> {
        self.terms.iter().map(|(m, c)| (m, *c))
    }

    /// Nonzero constant value, if the polynomial is a nonzero constant.
    pub fn nonzero_constant(&self) -> Option<u32> {
        match self.terms.iter().next() {
            Some((m, c)) if self.terms.len() == 1 && m.is_empty() => Some(*c),
            _ => None,
        }
    }

    pub fn mentions(&self, v: u32) -> bool {
        self.terms.keys().any(|m| m.contains(&v))
    }

    pub fn vars(&self) -> Vec<u32> {
        let mut vs: Vec<u32> = self.terms.keys().flat_map(|m| m.iter().copied()).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// If `v` occurs only in the monomial `v` itself, its coefficient.
    pub fn linear_coefficient(&self, v: u32) -> Option<u32> {
        let mut coeff = None;
        for (m, c) in &self.terms {
            if m.contains(&v) {
                if m.len() == 1 && coeff.is_none() {
                    coeff = Some(*c);
                } else {
                    return None;
                }
            }
        }
        coeff
    }

    pub fn mul(&self, other: &Poly, p: u32) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_scaled(other, m, *c, p);
        }
        out
    }

    pub fn scale(&self, k: u32, p: u32) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), mulmod(*c, k, p), p);
        }
        out
    }

    /// Substitute `v := rep`.
    pub fn substitute(&self, v: u32, rep: &Poly, p: u32) -> Poly {
        if !self.mentions(v) {
            return self.clone();
        }
        let mut powers: Vec<Poly> = vec![Poly::constant(1)];
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let k = m.iter().filter(|&&x| x == v).count();
            if k == 0 {
                out.add_term(m.clone(), *c, p);
                continue;
            }
            while powers.len() <= k {
                let next = powers.last().unwrap().mul(rep, p);
                powers.push(next);
            }
            let rest: Mono = m.iter().copied().filter(|&x| x != v).collect();
            out.add_scaled(&powers[k], &rest, *c, p);
        }
        out
    }

    /// Solve `self = 0` for `v`, given `linear_coefficient(v) = Some(c)`.
    pub fn solve_for(&self, v: u32, c: u32, p: u32) -> Poly {
        let k = p - invmod(c, p);
        let mut out = Poly::zero();
        for (m, cc) in &self.terms {
            if !(m.len() == 1 && m[0] == v) {
                out.add_term(m.clone(), mulmod(*cc, k, p), p);
            }
        }
        out
    }

    pub fn eval(&self, vals: &[u32], p: u32) -> u32 {
        let mut s = 0u32;
        for (m, c) in &self.terms {
            let mut t = *c;
            for &x in m {
                t = mulmod(t, vals[x as usize], p);
            }
            s = (s + t) % p;
        }
        s
    }
}
