use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::coeff::Coeff;
use super::fp::Fp;
use crate::dga_core::CoreError;

/// Element of Z[mu, mu^-1]: exponent -> nonzero integer coefficient.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LaurentInt(BTreeMap<i32, BigInt>);

impl LaurentInt {
    pub fn zero() -> Self {
        LaurentInt(BTreeMap::new())
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn mu() -> Self {
        Self::monomial(1, 1)
    }

    pub fn monomial(c: impl Into<BigInt>, e: i32) -> Self {
        let c = c.into();
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(e, c);
        }
        LaurentInt(m)
    }

    /// 1 + mu, the value of a11(i, i).
    pub fn one_plus_mu() -> Self {
        Self::one().add(&Self::mu())
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigInt)> {
        self.0.iter().map(|(e, c)| (*e, c))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn push(&mut self, e: i32, c: BigInt) {
        let slot = self.0.entry(e).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.0.remove(&e);
        }
    }

    pub fn checked_unit_inverse(&self) -> Result<Self, CoreError> {
        self.unit_inverse()
            .ok_or_else(|| CoreError::NotAUnit(self.to_string()))
    }

    /// Image under Z[mu, mu^-1] -> F_p, mu -> `mu`.
    pub fn eval_mod_p(&self, p: u32, mu: u32) -> Fp {
        let pm = BigInt::from(p);
        let mut acc = 0u64;
        for (e, c) in &self.0 {
            let r = ((c % &pm) + &pm) % &pm;
            let r = r.to_u64().unwrap_or(0);
            let m = Fp::new(mu, p).pow_i(*e).value() as u64;
            acc = (acc + r * m) % p as u64;
        }
        Fp::new(acc as u32, p)
    }

    pub fn scale_int(&self, k: i64) -> Self {
        let mut out = LaurentInt::zero();
        for (e, c) in &self.0 {
            out.push(*e, c * k);
        }
        out
    }
}

impl Coeff for LaurentInt {
    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.0 {
            out.push(*e, c.clone());
        }
        out
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = LaurentInt::zero();
        for (e1, c1) in &self.0 {
            for (e2, c2) in &other.0 {
                out.push(e1 + e2, c1 * c2);
            }
        }
        out
    }

    fn neg(&self) -> Self {
        LaurentInt(self.0.iter().map(|(e, c)| (*e, -c)).collect())
    }

    fn is_unit(&self) -> bool {
        self.0.len() == 1 && self.0.values().all(|c| c.abs().is_one())
    }

    fn unit_inverse(&self) -> Option<Self> {
        if !self.is_unit() {
            return None;
        }
        let (e, c) = self.0.iter().next()?;
        Some(LaurentInt::monomial(c.clone(), -e))
    }

    fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0.get(&0).is_some_and(|c| c.is_one())
    }
}

impl From<i64> for LaurentInt {
    fn from(c: i64) -> Self {
        LaurentInt::monomial(c, 0)
    }
}

impl fmt::Display for LaurentInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(e, c)| if *e == 0 { c.to_string() } else { format!("{c}mu^{e}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for LaurentInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::str::FromStr for LaurentInt {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return Ok(LaurentInt::zero());
        }
        let mut out = LaurentInt::zero();
        for part in s.split(" + ") {
            let part = part.trim();
            let (c, e) = match part.split_once("mu^") {
                Some((c, e)) => (c, e),
                None => (part, "0"),
            };
            let c: BigInt = c
                .parse()
                .map_err(|_| CoreError::Parse(format!("bad coefficient in {part:?}")))?;
            let e: i32 = e
                .parse()
                .map_err(|_| CoreError::Parse(format!("bad exponent in {part:?}")))?;
            out.push(e, c);
        }
        Ok(out)
    }
}
