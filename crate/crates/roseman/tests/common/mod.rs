#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use roseman::dga_core::{Dga, Gen, Kind, LaurentInt, Variant, Word, ZDga, ZElement};
use roseman::invariants::Presentation;
use roseman::diagram::{load_fixture, parse_diagram};
use roseman::differential::build_dga;

pub fn fixture_dga(name: &str, v: Variant) -> ZDga {
    build_dga(&load_fixture(name).unwrap(), v).unwrap()
}

pub fn diagram_dga(text: &str, v: Variant) -> ZDga {
    build_dga(&parse_diagram(text).unwrap(), v).unwrap()
}

/// Small nonzero Laurent coefficient: +-mu^k, or 1+mu, or 2.
pub fn random_coeff(rng: &mut ChaCha8Rng) -> LaurentInt {
    match rng.gen_range(0..4) {
        0 => LaurentInt::one_plus_mu(),
        1 => LaurentInt::from(2),
        _ => LaurentInt::monomial(if rng.gen_bool(0.5) { 1 } else { -1 }, rng.gen_range(-2..=2)),
    }
}

pub fn random_word(gens: &[Gen], rng: &mut ChaCha8Rng, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    let gs: Vec<Gen> = (0..len).map(|_| *gens.choose(rng).unwrap()).collect();
    Word::from_gens(&gs)
}

/// Sum of up to four words of one degree, with random coefficients.
pub fn random_homogeneous(gens: &[Gen], rng: &mut ChaCha8Rng) -> (ZElement, u32) {
    if gens.is_empty() {
        return (ZElement::scalar(random_coeff(rng)), 0);
    }
    let first = random_word(gens, rng, 3);
    let deg = first.degree();
    let mut e = ZElement::term(first.clone(), random_coeff(rng));
    let want = rng.gen_range(0..4);
    let mut found = 0;
    for _ in 0..40 {
        if found == want {
            break;
        }
        let w = if rng.gen_bool(0.3) {
            let mut gs = first.gens().to_vec();
            gs.shuffle(rng);
            Word::from_gens(&gs)
        } else {
            random_word(gens, rng, 3)
        };
        if w.degree() == deg {
            e.add_term(w, random_coeff(rng));
            found += 1;
        }
    }
    if e.is_zero() {
        e = ZElement::scalar(LaurentInt::one());
        return (e, 0);
    }
    (e, deg)
}

pub fn generators<C: roseman::dga_core::Coeff>(dga: &Dga<C>) -> Vec<Gen> {
    dga.generators().collect()
}

/// Check Leibniz and grading on `n` random homogeneous pairs.
pub fn leibniz_failures(dga: &ZDga, n: usize, seed: u64) -> Vec<String> {
    use rand::SeedableRng;
    use roseman::dga_core::ElemDegree;
    use roseman::differential::boundary;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gens = generators(dga);
    let mut bad = Vec::new();
    for _ in 0..n {
        let (u, du_deg) = random_homogeneous(&gens, &mut rng);
        let (v, _) = random_homogeneous(&gens, &mut rng);
        let bu = boundary(dga, &u).unwrap();
        let bv = boundary(dga, &v).unwrap();
        let lhs = boundary(dga, &u.mul(&v)).unwrap();
        let sign = if du_deg % 2 == 0 { LaurentInt::one() } else { LaurentInt::from(-1) };
        let rhs = bu.mul(&v).add(&u.mul(&bv).scale(&sign));
        if lhs != rhs {
            bad.push(format!("d({u} * {v}) = {lhs}, expected {rhs}"));
        }
        match bu.degree() {
            ElemDegree::Zero => {}
            ElemDegree::Homogeneous(k) if k + 1 == du_deg => {}
            got => bad.push(format!("d({u}) has degree {got:?}, expected {}", du_deg as i64 - 1)),
        }
        if bad.len() > 3 {
            break;
        }
    }
    bad
}

/// Replay every cancellation of both scripts of `pair` one step at a time and
/// report steps where the p-free part of the count changes.
pub fn cancel_step_failures(pair: &roseman::moves::MovePair, v: Variant, p: u32) -> Vec<String> {
    use roseman::invariants::{characteristic_presentation, count_algebra_maps};
    use roseman::moves::{cancel_pair, check_move_pair};
    let outcome = check_move_pair(pair, v).unwrap();
    let mut bad = Vec::new();
    for (fixture, trace) in [(pair.a, &outcome.trace_a), (pair.b, &outcome.trace_b)] {
        let mut cur = fixture_dga(fixture, v);
        let pfree = |d: &ZDga| count_algebra_maps(&characteristic_presentation(d), p, u64::MAX >> 8).unwrap().pfree;
        let start = pfree(&cur);
        for (i, c) in trace.iter().enumerate() {
            cur = cancel_pair(&cur, c.x, c.y).unwrap().0;
            let now = pfree(&cur);
            if now != start {
                bad.push(format!("{fixture} step {i} ({} {}): pfree {start} -> {now}", c.x, c.y));
            }
        }
    }
    bad
}

/// Random presentation over a handful of generators of mixed degree.
pub fn random_presentation(rng: &mut ChaCha8Rng) -> Presentation {
    let pool = [
        Gen::new(Kind::A11, &[1, 2]).unwrap(),
        Gen::new(Kind::A11, &[2, 1]).unwrap(),
        Gen::new(Kind::A11, &[1, 3]).unwrap(),
        Gen::new(Kind::A21, &[1, 1]).unwrap(),
        Gen::new(Kind::A12, &[2, 1]).unwrap(),
        Gen::new(Kind::A22, &[1, 1]).unwrap(),
        Gen::new(Kind::A3, &[1]).unwrap(),
    ];
    let n = rng.gen_range(1..=5);
    let gens: Vec<Gen> = pool.choose_multiple(rng, n).copied().collect();
    let rels = (0..rng.gen_range(0..=4))
        .map(|_| {
            let mut e = ZElement::zero();
            for _ in 0..rng.gen_range(1..=4) {
                e.add_term(random_word(&gens, rng, 3), random_coeff(rng));
            }
            e
        })
        .collect();
    Presentation::new("random", gens, rels)
}
