mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use roseman::dga_core::{Coeff, ElemDegree, Fp, Gen, Kind, Label, LaurentInt, Variant, Word, ZElement};
use roseman::diagram::{load_fixture, parse_diagram, serialize_diagram, FIXTURE_NAMES};
use roseman::differential::{boundary, dump_dga, parse_dga_dump};
use roseman::invariants::{
    brute_force_count_maps, characteristic_presentation, count_algebra_maps, hr0_presentation,
};
use roseman::moves::{
    apply_elementary_iso, apply_relabel, cancel_pair, destabilize_along, dga_equal_up_to_relabel, stabilize,
    ElementaryIso, Relabel,
};

const BUDGET: u64 = 1 << 40;

fn laurent() -> impl Strategy<Value = LaurentInt> {
    prop::collection::vec((-3i32..=3, -6i64..=6), 0..5).prop_map(|ts| {
        ts.into_iter()
            .fold(LaurentInt::zero(), |acc, (e, c)| acc.add(&LaurentInt::monomial(c, e)))
    })
}

fn small_gens() -> Vec<Gen> {
    vec![
        Gen::new(Kind::A11, &[1, 2]).unwrap(),
        Gen::new(Kind::A11, &[2, 1]).unwrap(),
        Gen::new(Kind::A21, &[1, 2]).unwrap(),
        Gen::new(Kind::A12, &[1, 1]).unwrap(),
    ]
}

fn element() -> impl Strategy<Value = ZElement> {
    let gens = small_gens();
    prop::collection::vec((prop::collection::vec(0usize..4, 0..3), laurent()), 0..4).prop_map(move |ts| {
        let mut e = ZElement::zero();
        for (idx, c) in ts {
            let w = Word::from_gens(&idx.iter().map(|&i| gens[i]).collect::<Vec<_>>());
            e.add_term(w, c);
        }
        e
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn laurent_ring_axioms(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.add(&a.neg()).is_zero());
        prop_assert_eq!(a.mul(&LaurentInt::one()), a.clone());
    }

    #[test]
    fn laurent_units_are_signed_monomials(c in prop::sample::select(vec![-1i64, 1]), e in -5i32..=5) {
        let u = LaurentInt::monomial(c, e);
        let inv = u.unit_inverse().unwrap();
        prop_assert!(u.mul(&inv).is_one());
        prop_assert!(LaurentInt::one_plus_mu().unit_inverse().is_none());
        prop_assert!(LaurentInt::monomial(2, e).unit_inverse().is_none());
    }

    #[test]
    fn evaluation_mod_p_is_a_ring_map(a in laurent(), b in laurent(), mu in 1u32..7) {
        let p = 7;
        let ev = |x: &LaurentInt| x.eval_mod_p(p, mu);
        prop_assert_eq!(ev(&a.add(&b)), ev(&a).add(&ev(&b)));
        prop_assert_eq!(ev(&a.mul(&b)), ev(&a).mul(&ev(&b)));
    }

    #[test]
    fn fp_field_axioms(a in 0u32..11, b in 1u32..11) {
        let (x, y) = (Fp::new(a, 11), Fp::new(b, 11));
        prop_assert!(y.mul(&y.inv()).is_one());
        prop_assert_eq!(x.mul(&y).mul(&y.inv()), x);
        prop_assert!(x.add(&x.neg()).is_zero());
    }

    #[test]
    fn element_ring_axioms(u in element(), v in element(), w in element()) {
        prop_assert_eq!(u.mul(&v).mul(&w), u.mul(&v.mul(&w)));
        prop_assert_eq!(u.mul(&v.add(&w)), u.mul(&v).add(&u.mul(&w)));
        prop_assert_eq!(u.add(&v).mul(&w), u.mul(&w).add(&v.mul(&w)));
        prop_assert!(u.sub(&u).is_zero());
        prop_assert_eq!(u.mul(&ZElement::one()), u.clone());
    }

    #[test]
    fn substitution_is_multiplicative(u in element(), v in element(), rep in element(), i in 0usize..4) {
        let g = small_gens()[i];
        prop_assert_eq!(u.mul(&v).substitute(g, &rep), u.substitute(g, &rep).mul(&v.substitute(g, &rep)));
        prop_assert_eq!(u.add(&v).substitute(g, &rep), u.substitute(g, &rep).add(&v.substitute(g, &rep)));
    }
}

#[test]
fn leibniz_and_grading_on_every_fixture() {
    for name in FIXTURE_NAMES {
        let dga = fixture_dga(name, Variant::MM);
        let failures = leibniz_failures(&dga, 1000, 7);
        assert!(failures.is_empty(), "{name}: {}", failures.join("\n"));
    }
}

#[test]
fn diagram_round_trip() {
    for name in FIXTURE_NAMES {
        let d = load_fixture(name).unwrap();
        assert_eq!(parse_diagram(&serialize_diagram(&d)).unwrap(), d, "{name}");
    }
}

#[test]
fn dump_round_trip() {
    for name in FIXTURE_NAMES {
        for v in Variant::ALL {
            let dga = fixture_dga(name, v);
            assert_eq!(parse_dga_dump(&dump_dga(&dga)).unwrap(), dga, "{name} {v}");
        }
    }
}

#[test]
fn solver_matches_brute_force_on_random_presentations() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..1000 {
        let pres = random_presentation(&mut rng);
        let p = [2, 3, 5, 7][i % 4];
        let fast = count_algebra_maps(&pres, p, BUDGET).unwrap();
        let slow = brute_force_count_maps(&pres, p).unwrap();
        assert!(fast.exact);
        assert_eq!(fast.sum, slow.sum, "p={p}\n{pres}");
    }
}

fn small_algebras() -> Vec<(roseman::dga_core::ZDga, u32)> {
    vec![
        (diagram_dga("diagram t2\nsheets 2\ncurve c1 over=s1 uplus=s2 uminus=s2\n", Variant::MM), 3),
        (diagram_dga("diagram t2\nsheets 2\ncurve c1 over=s1 uplus=s2 uminus=s2\n", Variant::PP), 3),
        (diagram_dga("diagram t3\nsheets 3\ncurve c1 over=s1 uplus=s3 uminus=s2\n", Variant::MP), 2),
    ]
}

/// Random elementary automorphism data of a given generator.
fn random_iso(dga: &roseman::dga_core::ZDga, rng: &mut ChaCha8Rng) -> ElementaryIso {
    let gens = generators(dga);
    let target = *gens.choose(rng).unwrap();
    let others: Vec<Gen> = gens.iter().copied().filter(|g| *g != target).collect();
    let mut tail = ZElement::zero();
    for _ in 0..40 {
        let w = random_word(&others, rng, 3);
        if w.degree() == target.degree() && !w.is_empty() {
            tail.add_term(w, random_coeff(rng));
        }
        if tail.len() >= 2 {
            break;
        }
    }
    let unit = LaurentInt::monomial(if rng.gen_bool(0.5) { 1 } else { -1 }, rng.gen_range(-1..=1));
    ElementaryIso { target, unit, tail }
}

#[test]
fn cancellation_counting_matches_brute_force_under_tame_changes() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (base, p) in small_algebras() {
        let expect = brute_force_count_maps(&characteristic_presentation(&base), p).unwrap().sum;
        for _ in 0..12 {
            let iso = random_iso(&base, &mut rng);
            let moved = apply_elementary_iso(&base, &iso).unwrap();
            let pres = characteristic_presentation(&moved);
            let fast = count_algebra_maps(&pres, p, BUDGET).unwrap();
            assert_eq!(fast.sum, brute_force_count_maps(&pres, p).unwrap().sum);
            assert_eq!(fast.sum, expect, "count changed under {iso:?}");
        }
    }
}

#[test]
fn stabilisation_multiplies_by_p() {
    for (base, p) in small_algebras() {
        let before = count_algebra_maps(&characteristic_presentation(&base), p, BUDGET).unwrap();
        for i in 0..3 {
            let (stab, _, _) = stabilize(&base, i);
            let after = count_algebra_maps(&characteristic_presentation(&stab), p, BUDGET).unwrap();
            assert_eq!(after.sum, before.sum.clone() * p, "degree {i}");
        }
    }
    for name in ["roseman_VI_a", "roseman_III_b", "spun_trefoil"] {
        let dga = fixture_dga(name, Variant::PM);
        for p in [2, 3, 5] {
            let before = count_algebra_maps(&characteristic_presentation(&dga), p, BUDGET).unwrap();
            let (stab, _, _) = stabilize(&dga, 1);
            let after = count_algebra_maps(&characteristic_presentation(&stab), p, BUDGET).unwrap();
            assert_eq!(after.sum, before.sum * p, "{name} p={p}");
        }
    }
}

#[test]
fn pfree_part_survives_every_scripted_cancellation() {
    for pair in roseman::moves::MOVE_PAIRS {
        let failures = cancel_step_failures(pair, Variant::MM, 3);
        assert!(failures.is_empty(), "{}: {}", pair.name, failures.join("\n"));
    }
}

fn sheet_permutation(sheets: u32, rng: &mut ChaCha8Rng) -> Relabel {
    let mut ids: Vec<u32> = (1..=sheets).collect();
    ids.shuffle(rng);
    Relabel::new((1..=sheets).zip(ids).map(|(a, b)| (Label::sheet(a), Label::sheet(b)))).unwrap()
}

#[test]
fn counts_ignore_sheet_names() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for name in ["roseman_VI_b", "roseman_V_a", "spun_trefoil"] {
        let dga = fixture_dga(name, Variant::MP);
        let map = sheet_permutation(dga.sheets, &mut rng);
        let moved = apply_relabel(&dga, &map).unwrap();
        for p in [2, 3] {
            let a = count_algebra_maps(&characteristic_presentation(&dga), p, BUDGET).unwrap();
            let b = count_algebra_maps(&characteristic_presentation(&moved), p, BUDGET).unwrap();
            assert_eq!(a.sum, b.sum, "{name} p={p}");
            let a = count_algebra_maps(&hr0_presentation(&dga), p, BUDGET).unwrap();
            let b = count_algebra_maps(&hr0_presentation(&moved), p, BUDGET).unwrap();
            assert_eq!(a.sum, b.sum, "{name} hr0 p={p}");
        }
    }
}

#[test]
fn destabilisation_order_does_not_change_the_result_up_to_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let cases = [
        ("roseman_III_b", Label::curve(8), Label::sheet(7)),
        ("roseman_I_b", Label::branch(2), Label::curve(8)),
        ("roseman_VI_b", Label::curve(4), Label::sheet(4)),
    ];
    for (name, h, l) in cases {
        let dga = fixture_dga(name, Variant::MM);
        let mut trace = vec![];
        let canonical = destabilize_along(&dga, h, l, &mut trace, None).unwrap();
        let want = count_algebra_maps(&characteristic_presentation(&canonical), 3, BUDGET).unwrap();
        for _ in 0..4 {
            let mut draw = || rng.gen::<u64>();
            let mut trace = vec![];
            let other = destabilize_along(&dga, h, l, &mut trace, Some(&mut draw)).unwrap();
            let gens_a: Vec<Gen> = generators(&canonical);
            assert_eq!(gens_a, generators(&other), "{name}");
            let got = count_algebra_maps(&characteristic_presentation(&other), 3, BUDGET).unwrap();
            assert_eq!(got.sum, want.sum, "{name}");
            let same = dga_equal_up_to_relabel(&canonical, &other, &Relabel::identity()).unwrap();
            if !same.equal {
                // Different orders may land on different tame representatives;
                // the differential must still square to zero.
                roseman::moves::ensure_d_squared(&other).unwrap();
            }
        }
    }
}

#[test]
fn boundary_of_generators_has_degree_one_less() {
    for name in FIXTURE_NAMES {
        for v in Variant::ALL {
            let dga = fixture_dga(name, v);
            for (g, d) in dga.iter() {
                match d.degree() {
                    ElemDegree::Zero => {}
                    ElemDegree::Homogeneous(k) => assert_eq!(k + 1, g.degree(), "{name} {v} {g}"),
                    ElemDegree::Inhomogeneous => panic!("{name} {v}: d {g} is inhomogeneous"),
                }
                let single = boundary(&dga, &ZElement::gen(g)).unwrap();
                assert_eq!(&single, d);
            }
        }
    }
}

#[test]
fn cancel_pair_reverses_stabilisation() {
    for (base, _) in small_algebras() {
        let (stab, e1, e2) = stabilize(&base, 0);
        let (back, _) = cancel_pair(&stab, e1, e2).unwrap();
        assert!(dga_equal_up_to_relabel(&back, &base, &Relabel::identity()).unwrap().equal);
    }
}
