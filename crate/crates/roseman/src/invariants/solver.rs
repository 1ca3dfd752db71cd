use std::collections::{BTreeSet, HashMap};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;

use super::poly::Poly;

/// Branch points shallower than this fan out over threads.
const PAR_DEPTH: usize = 3;

pub struct Solver {
    pub p: u32,
    pub degrees: Vec<u8>,
    budget: u64,
    nodes: AtomicU64,
    aborted: AtomicBool,
}

/// Result of one search: solutions found and the fraction of the search
/// space actually covered.
#[derive(Clone, Debug)]
pub struct Partial {
    pub count: BigUint,
    pub explored: f64,
}

impl Partial {
    fn done(count: BigUint) -> Self {
        Partial { count, explored: 1.0 }
    }
}

impl Solver {
    pub fn new(p: u32, degrees: Vec<u8>, budget: u64) -> Self {
        Solver { p, degrees, budget, nodes: AtomicU64::new(0), aborted: AtomicBool::new(false) }
    }

    pub fn nodes(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed)
    }

    pub fn aborted(&self) -> bool {
        self.aborted.load(Ordering::Relaxed)
    }

    /// Count common zeros of `rels` over all `live` variables.
    pub fn count(&self, rels: Vec<Poly>, live: BTreeSet<u32>) -> Partial {
        self.search(rels, live, 0)
    }

    fn search(&self, mut rels: Vec<Poly>, mut live: BTreeSet<u32>, depth: usize) -> Partial {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            self.aborted.store(true, Ordering::Relaxed);
            return Partial { count: BigUint::zero(), explored: 0.0 };
        }
        let p = self.p;
        loop {
            rels.retain(|r| !r.is_zero());
            if rels.iter().any(|r| r.nonzero_constant().is_some()) {
                return Partial::done(BigUint::zero());
            }
            if rels.is_empty() {
                return Partial::done(BigUint::from(p).pow(live.len() as u32));
            }
            let Some((ri, v, c)) = self.pick_elimination(&rels) else { break };
            let rel = rels.swap_remove(ri);
            let rep = rel.solve_for(v, c, p);
            for r in rels.iter_mut() {
                if r.mentions(v) {
                    *r = r.substitute(v, &rep, p);
                }
            }
            live.remove(&v);
        }
        let v = self.pick_branch(&rels);
        live.remove(&v);
        let branch = |a: u32| {
            let fixed = Poly::constant(a);
            let next: Vec<Poly> = rels.iter().map(|r| r.substitute(v, &fixed, p)).collect();
            self.search(next, live.clone(), depth + 1)
        };
        let parts: Vec<Partial> = if depth < PAR_DEPTH {
            (0..p).into_par_iter().map(branch).collect()
        } else {
            (0..p).map(branch).collect()
        };
        let mut out = Partial { count: BigUint::zero(), explored: 0.0 };
        for part in parts {
            out.count += part.count;
            out.explored += part.explored / p as f64;
        }
        out
    }

    fn occurrences(rels: &[Poly]) -> HashMap<u32, usize> {
        let mut occ = HashMap::new();
        for r in rels {
            for v in r.vars() {
                *occ.entry(v).or_insert(0) += 1;
            }
        }
        occ
    }

    /// A relation in which some variable occurs only linearly with a constant
    /// coefficient, choosing the one whose substitution touches the fewest
    /// terms; high-degree variables break ties.
    fn pick_elimination(&self, rels: &[Poly]) -> Option<(usize, u32, u32)> {
        let occ = Self::occurrences(rels);
        let mut best: Option<((usize, std::cmp::Reverse<u8>, u32), (usize, u32, u32))> = None;
        for (i, r) in rels.iter().enumerate() {
            for v in r.vars() {
                if let Some(c) = r.linear_coefficient(v) {
                    let cost = (r.len() - 1) * (occ[&v] - 1);
                    let key = (cost, std::cmp::Reverse(self.degrees[v as usize]), v);
                    if best.as_ref().is_none_or(|(k, _)| key < *k) {
                        best = Some((key, (i, v, c)));
                    }
                }
            }
        }
        best.map(|(_, x)| x)
    }

    /// Lowest-degree variable, most frequent first.
    fn pick_branch(&self, rels: &[Poly]) -> u32 {
        let occ = Self::occurrences(rels);
        *occ.keys()
            .min_by_key(|&&v| (self.degrees[v as usize], std::cmp::Reverse(occ[&v]), v))
            .expect("nonconstant relation has a variable")
    }
}

/// Exhaustive evaluation over every assignment.
#[cfg(test)]
fn brute_force(rels: &[Poly], nvars: usize, p: u32) -> BigUint {
    let mut vals = vec![0u32; nvars];
    let mut count = BigUint::zero();
    loop {
        if rels.iter().all(|r| r.eval(&vals, p) == 0) {
            count += 1u32;
        }
        let mut i = 0;
        loop {
            if i == nvars {
                return count;
            }
            vals[i] += 1;
            if vals[i] < p {
                break;
            }
            vals[i] = 0;
            i += 1;
        }
    }
}
