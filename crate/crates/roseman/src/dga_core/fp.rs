use std::fmt;

use super::coeff::Coeff;

/// Element of the prime field F_p. The modulus travels with the value.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    v: u32,
    p: u32,
}

impl Fp {
    pub fn new(v: u32, p: u32) -> Self {
        Fp { v: v % p, p }
    }

    pub fn from_i64(v: i64, p: u32) -> Self {
        Fp { v: v.rem_euclid(p as i64) as u32, p }
    }

    pub fn value(self) -> u32 {
        self.v
    }

    pub fn modulus(self) -> u32 {
        self.p
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self.v as u64;
        let m = self.p as u64;
        let mut acc = 1 % m;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            e >>= 1;
        }
        Fp { v: acc as u32, p: self.p }
    }

    /// Integer power; negative exponents need a nonzero base.
    pub fn pow_i(self, e: i32) -> Self {
        if e >= 0 {
            self.pow(e as u64)
        } else {
            self.inv().pow((-(e as i64)) as u64)
        }
    }

    /// Multiplicative inverse (Fermat). Zero maps to zero.
    pub fn inv(self) -> Self {
        self.pow(self.p as u64 - 2)
    }
}

impl Coeff for Fp {
    fn is_zero(&self) -> bool {
        self.v == 0
    }

    fn add(&self, o: &Self) -> Self {
        Fp { v: ((self.v as u64 + o.v as u64) % self.p as u64) as u32, p: self.p }
    }

    fn mul(&self, o: &Self) -> Self {
        Fp { v: ((self.v as u64 * o.v as u64) % self.p as u64) as u32, p: self.p }
    }

    fn neg(&self) -> Self {
        Fp { v: (self.p - self.v) % self.p, p: self.p }
    }

    fn is_unit(&self) -> bool {
        self.v != 0
    }

    fn unit_inverse(&self) -> Option<Self> {
        (self.v != 0).then(|| self.inv())
    }

    fn is_one(&self) -> bool {
        self.v == 1 % self.p
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.v, self.p)
    }
}
