//! Characteristic-algebra and degree-0 homology presentations, and exact
//! counts of algebra maps into F_p.

mod poly;
mod solver;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::dga_core::{Coeff, Element, Fp, Gen, ZDga, ZElement};
use crate::moves::cancel_shape;
pub use poly::{Mono, Poly};
use solver::Solver;

/// Solver node limit used when neither a flag nor `ROSEMAN_BUDGET` says otherwise.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Largest number of assignments (including the value of mu) the brute-force
/// counter will enumerate.
pub const BRUTE_FORCE_CAP: u64 = 531_441;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("brute force over {gens} generators at p={p} exceeds the cap of {cap} assignments")]
    CapExceeded { p: u32, gens: usize, cap: u64 },
}

/// `ROSEMAN_BUDGET` if set and numeric, else [`DEFAULT_BUDGET`].
pub fn default_budget() -> u64 {
    std::env::var("ROSEMAN_BUDGET")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

pub fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Generators and relations over Z[mu, mu^-1].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub name: String,
    pub generators: Vec<Gen>,
    pub relations: Vec<ZElement>,
    /// When every relation is the differential of a generator of a DGA,
    /// the generator it came from. Enables cancellation while counting.
    sources: Option<Vec<Gen>>,
}

impl Presentation {
    pub fn new(name: impl Into<String>, generators: Vec<Gen>, relations: Vec<ZElement>) -> Self {
        Presentation { name: name.into(), generators, relations, sources: None }
    }

    pub fn sources(&self) -> Option<&[Gen]> {
        self.sources.as_deref()
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "pres {}", self.name)?;
        for g in &self.generators {
            writeln!(f, "gen {g} deg={}", g.degree())?;
        }
        for r in &self.relations {
            writeln!(f, "rel {r}")?;
        }
        Ok(())
    }
}

/// The algebra modulo the ideal generated by all differentials. Degree-0
/// generators have zero differential and contribute no relation.
pub fn characteristic_presentation(dga: &ZDga) -> Presentation {
    let generators: Vec<Gen> = dga.generators().collect();
    let sources: Vec<Gen> = generators.iter().copied().filter(|g| g.degree() > 0).collect();
    let relations = sources.iter().map(|g| dga.diff(*g).expect("generator").clone()).collect();
    Presentation { name: dga.name.clone(), generators, relations, sources: Some(sources) }
}

/// Degree-0 generators modulo the differentials of degree-1 generators.
pub fn hr0_presentation(dga: &ZDga) -> Presentation {
    let generators = dga.generators().filter(|g| g.degree() == 0).collect();
    let relations = dga
        .iter()
        .filter(|(g, _)| g.degree() == 1)
        .map(|(_, e)| e.clone())
        .collect();
    Presentation::new(dga.name.clone(), generators, relations)
}

/// Number of maps to F_p, exact unless the budget ran out.
#[derive(Clone, Debug, PartialEq)]
pub struct MapCount {
    pub p: u32,
    /// Solutions found; the full count when `exact`.
    pub sum: BigUint,
    pub exact: bool,
    /// Fraction of the search space covered.
    pub explored: f64,
    pub v_p: u32,
    pub pfree: BigUint,
    pub nodes: u64,
}

impl MapCount {
    fn new(p: u32, sum: BigUint, exact: bool, explored: f64, nodes: u64) -> Self {
        let (v_p, pfree) = split_power(&sum, p);
        MapCount { p, sum, exact, explored, v_p, pfree, nodes }
    }

    pub fn total(&self) -> Option<&BigUint> {
        self.exact.then_some(&self.sum)
    }

    /// The `count p=.. total=.. v_p=.. pfree=..` line.
    pub fn report(&self) -> String {
        if self.exact {
            format!("count p={} total={} v_p={} pfree={}", self.p, self.sum, self.v_p, self.pfree)
        } else {
            format!(
                "count p={} total=partial v_p={} pfree={} explored={:.6}",
                self.p, self.v_p, self.pfree, self.explored
            )
        }
    }
}

impl fmt::Display for MapCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.report())
    }
}

/// `n = p^v * m` with `p` not dividing `m`; zero maps to `(0, 0)`.
pub fn split_power(n: &BigUint, p: u32) -> (u32, BigUint) {
    if n.is_zero() {
        return (0, BigUint::zero());
    }
    let pb = BigUint::from(p);
    let mut m = n.clone();
    let mut v = 0;
    while (&m % &pb).is_zero() {
        m /= &pb;
        v += 1;
    }
    (v, m)
}

fn specialise(e: &ZElement, p: u32, mu: u32) -> Element<Fp> {
    e.map_coeffs(|c| c.eval_mod_p(p, mu))
}

/// Cancel unit pairs in the specialised algebra. Returns the surviving
/// differentials and the number of pairs removed. Degree-0 generators are
/// left to the solver: substituting them nests without bound.
fn reduce(mut diffs: BTreeMap<Gen, Element<Fp>>) -> (BTreeMap<Gen, Element<Fp>>, u32) {
    let mut users: HashMap<Gen, BTreeSet<Gen>> = HashMap::new();
    for (g, e) in &diffs {
        for h in e.generators() {
            users.entry(h).or_default().insert(*g);
        }
    }
    let mut cancelled = 0;
    loop {
        // cheapest pair first: fewest terms introduced by the substitution
        let mut best: Option<(usize, Gen, Gen)> = None;
        for (x, dx) in &diffs {
            for (w, c) in dx.terms() {
                let Some(y) = w.as_letter() else { continue };
                if y == *x || y.degree() == 0 || !c.is_unit() || !diffs.contains_key(&y) {
                    continue;
                }
                let cost = (dx.len() - 1) * users.get(&y).map_or(0, |s| s.len());
                if best.is_some_and(|(b, _, _)| b <= cost) {
                    continue;
                }
                if cancel_shape(dx, y).is_some() {
                    best = Some((cost, *x, y));
                }
            }
        }
        let Some((_, x, y)) = best else { return (diffs, cancelled) };
        let (c, r) = cancel_shape(&diffs[&x], y).expect("checked");
        let rep = r.scale(&c.unit_inverse().expect("nonzero").neg());
        for g in [x, y] {
            if let Some(e) = diffs.remove(&g) {
                for h in e.generators() {
                    if let Some(s) = users.get_mut(&h) {
                        s.remove(&g);
                    }
                }
            }
        }
        let touched: BTreeSet<Gen> = [x, y]
            .iter()
            .flat_map(|g| users.remove(g).unwrap_or_default())
            .collect();
        for z in touched {
            let Some(e) = diffs.get_mut(&z) else { continue };
            let before = e.generators();
            *e = e.substitute(y, &rep).substitute(x, &Element::zero());
            let after = e.generators();
            for h in before.difference(&after) {
                if let Some(s) = users.get_mut(h) {
                    s.remove(&z);
                }
            }
            for h in after.difference(&before) {
                users.entry(*h).or_default().insert(z);
            }
        }
        cancelled += 1;
    }
}

fn to_poly(e: &Element<Fp>, index: &HashMap<Gen, u32>, p: u32) -> Poly {
    let mut out = Poly::zero();
    for (w, c) in e.terms() {
        let mut m: Mono = w.gens().iter().map(|g| index[g]).collect();
        m.sort_unstable();
        out.add_term(m, c.value(), p);
    }
    out
}

/// Count assignments of the generators to F_p and of mu to F_p^* under which
/// every relation vanishes, words read as commutative products.
pub fn count_algebra_maps(pres: &Presentation, p: u32, budget: u64) -> Result<MapCount, CountError> {
    if !is_prime(p) {
        return Err(CountError::NotPrime(p));
    }
    let share = (budget / (p as u64 - 1)).max(1);
    let parts: Vec<(BigUint, f64, bool, u64)> = (1..p)
        .into_par_iter()
        .map(|mu| count_at(pres, p, mu, share))
        .collect();
    let mut sum = BigUint::zero();
    let mut explored = 0.0;
    let mut exact = true;
    let mut nodes = 0;
    for (c, e, ok, n) in parts {
        sum += c;
        explored += e / (p - 1) as f64;
        exact &= ok;
        nodes += n;
    }
    Ok(MapCount::new(p, sum, exact, if exact { 1.0 } else { explored }, nodes))
}

fn count_at(pres: &Presentation, p: u32, mu: u32, budget: u64) -> (BigUint, f64, bool, u64) {
    let (gens, rels, cancelled): (Vec<Gen>, Vec<Element<Fp>>, u32) = match &pres.sources {
        Some(sources) => {
            let mut diffs: BTreeMap<Gen, Element<Fp>> =
                pres.generators.iter().map(|g| (*g, Element::zero())).collect();
            for (g, r) in sources.iter().zip(&pres.relations) {
                diffs.insert(*g, specialise(r, p, mu));
            }
            let (left, k) = reduce(diffs);
            let gens = left.keys().copied().collect();
            (gens, left.into_values().collect(), k)
        }
        None => (
            pres.generators.clone(),
            pres.relations.iter().map(|r| specialise(r, p, mu)).collect(),
            0,
        ),
    };
    let index: HashMap<Gen, u32> = gens.iter().enumerate().map(|(i, g)| (*g, i as u32)).collect();
    let polys: Vec<Poly> = rels.iter().map(|r| to_poly(r, &index, p)).collect();
    let degrees = gens.iter().map(|g| g.degree() as u8).collect();
    let solver = Solver::new(p, degrees, budget);
    let out = solver.count(polys, (0..gens.len() as u32).collect());
    let scale = BigUint::from(p).pow(cancelled);
    (out.count * scale, out.explored, !solver.aborted(), solver.nodes())
}

fn eval_word_free(e: &ZElement, vals: &HashMap<Gen, u64>, p: u32, mu: u32) -> u64 {
    let p64 = p as u64;
    let mut s = 0u64;
    for (w, c) in e.terms() {
        let mut t = c.eval_mod_p(p, mu).value() as u64;
        for g in w.gens() {
            t = t * vals[g] % p64;
        }
        s = (s + t) % p64;
    }
    s
}

/// Exhaustive count, for presentations within [`BRUTE_FORCE_CAP`].
pub fn brute_force_count_maps(pres: &Presentation, p: u32) -> Result<MapCount, CountError> {
    if !is_prime(p) {
        return Err(CountError::NotPrime(p));
    }
    let n = pres.generators.len();
    let space = (p as u64).checked_pow(n as u32 + 1);
    if space.is_none_or(|s| s > BRUTE_FORCE_CAP) {
        return Err(CountError::CapExceeded { p, gens: n, cap: BRUTE_FORCE_CAP });
    }
    let mut sum = BigUint::zero();
    let mut digits = vec![0u64; n];
    for mu in 1..p {
        loop {
            let vals: HashMap<Gen, u64> = pres.generators.iter().copied().zip(digits.iter().copied()).collect();
            if pres.relations.iter().all(|r| eval_word_free(r, &vals, p, mu) == 0) {
                sum += BigUint::one();
            }
            let mut i = 0;
            while i < n {
                digits[i] += 1;
                if digits[i] < p as u64 {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
    }
    let nodes = space.unwrap_or(0);
    Ok(MapCount::new(p, sum, true, 1.0, nodes))
}

/// Map counts over several primes.
#[derive(Clone, Debug, PartialEq)]
pub struct Fingerprint {
    pub counts: Vec<MapCount>,
}

impl Fingerprint {
    /// Same primes with equal p-free parts, all counts exact.
    pub fn agrees(&self, other: &Fingerprint) -> bool {
        self.counts.len() == other.counts.len()
            && self
                .counts
                .iter()
                .zip(&other.counts)
                .all(|(a, b)| a.exact && b.exact && a.p == b.p && a.pfree == b.pfree)
    }
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.counts {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

pub fn fingerprint_of(pres: &Presentation, primes: &[u32], budget: u64) -> Result<Fingerprint, CountError> {
    let counts = primes
        .iter()
        .map(|&p| count_algebra_maps(pres, p, budget))
        .collect::<Result<_, _>>()?;
    Ok(Fingerprint { counts })
}

/// Counts of the characteristic presentation.
pub fn fingerprint(dga: &ZDga, primes: &[u32], budget: u64) -> Result<Fingerprint, CountError> {
    fingerprint_of(&characteristic_presentation(dga), primes, budget)
}

/// Counts of the degree-0 homology presentation.
pub fn hr0_fingerprint(dga: &ZDga, primes: &[u32], budget: u64) -> Result<Fingerprint, CountError> {
    fingerprint_of(&hr0_presentation(dga), primes, budget)
}
