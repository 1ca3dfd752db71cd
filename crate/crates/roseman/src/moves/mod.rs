//! Tame isomorphisms, stabilisation, pair cancellation and scripted
//! destabilisations.

mod relabel;
mod script;
mod pairs;

pub use relabel::{apply_relabel, dga_equal_up_to_relabel, Comparison, Relabel};
pub use pairs::{check_move_pair, move_pair, MovePair, PairOutcome, MOVE_PAIRS};
pub use script::{parse_move_script, run_move_script, MoveScript, RunOptions, ScriptFailure, Step};

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::dga_core::{Coeff, Dga, ElemDegree, Element, Gen, Label, LaurentInt, Ns, Word, ZDga, ZElement};
use crate::differential::{boundary, check_d_squared, DiffError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("{0} is not a unit")]
    NotAUnit(String),
    #[error("tail has degree {got:?}, target {target} has degree {want}")]
    DegreeMismatch { target: Gen, want: u32, got: ElemDegree },
    #[error("tail mentions the target {0}")]
    TailContainsTarget(Gen),
    #[error("generator {0} is not in the algebra")]
    UnknownGenerator(String),
    #[error("d {x} = {dx} is not of the form c*{y} + r with c a unit and {y} absent from r")]
    NotCancellable { x: Gen, y: Gen, dx: String },
    #[error("cannot destabilise along {h} -> {l}: expected curve->sheet, triple->curve or branch->curve")]
    BadPair { h: Label, l: Label },
    #[error("destabilisation along {h} -> {l} stalled; remaining:\n{remaining}")]
    Stall { h: Label, l: Label, remaining: String },
    #[error("relabelling is not a bijection: {0}")]
    NotBijective(String),
    #[error("d∘d is no longer zero on {0}")]
    BrokenDifferential(Gen),
    #[error(transparent)]
    Diff(#[from] DiffError),
}

/// phi(target) = unit*target + tail, the identity on other generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementaryIso {
    pub target: Gen,
    pub unit: LaurentInt,
    pub tail: ZElement,
}

impl ElementaryIso {
    pub fn inverse(&self) -> Result<ElementaryIso, MoveError> {
        let inv = self.unit.unit_inverse().ok_or_else(|| MoveError::NotAUnit(self.unit.to_string()))?;
        Ok(ElementaryIso { target: self.target, unit: inv.clone(), tail: self.tail.scale(&inv).neg() })
    }

    fn image_of_target(&self) -> ZElement {
        ZElement::letter(self.target, self.unit.clone()).add(&self.tail)
    }
}

/// Transport the differential along phi, so that phi becomes a chain map
/// from the old algebra to the new one: d'h = phi(dh) for h != target and
/// d'target = unit^-1 (phi(d target) - d'tail).
pub fn apply_elementary_iso(dga: &ZDga, iso: &ElementaryIso) -> Result<ZDga, MoveError> {
    let g = iso.target;
    if !dga.contains(g) {
        return Err(MoveError::UnknownGenerator(g.to_string()));
    }
    let inv = iso.unit.unit_inverse().ok_or_else(|| MoveError::NotAUnit(iso.unit.to_string()))?;
    match iso.tail.degree() {
        ElemDegree::Zero => {}
        ElemDegree::Homogeneous(d) if d == g.degree() => {}
        got => return Err(MoveError::DegreeMismatch { target: g, want: g.degree(), got }),
    }
    if iso.tail.mentions(g) {
        return Err(MoveError::TailContainsTarget(g));
    }
    for x in iso.tail.generators() {
        if !dga.contains(x) {
            return Err(MoveError::UnknownGenerator(x.to_string()));
        }
    }
    let phi_g = iso.image_of_target();
    let mut out = dga.clone();
    for (h, e) in out.iter_mut() {
        if h != g {
            *e = e.substitute(g, &phi_g);
        }
    }
    let d_tail = boundary(&out, &iso.tail)?;
    let phi_dg = dga.diff(g).expect("checked").substitute(g, &phi_g);
    out.insert(g, phi_dg.sub(&d_tail).scale(&inv));
    Ok(out)
}

/// Add a fresh pair e1 (degree i+1), e2 (degree i) with d e1 = e2.
pub fn stabilize(dga: &ZDga, i: u32) -> (ZDga, Gen, Gen) {
    let mut out = dga.clone();
    let idx = out.take_stab_index();
    let e1 = Gen::stab(idx, 1, (i + 1) as u8);
    let e2 = Gen::stab(idx, 2, i as u8);
    out.insert(e1, ZElement::gen(e2));
    out.insert(e2, ZElement::zero());
    (out, e1, e2)
}

/// Record of one cancellation: d x = c*y + r.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cancellation<C: Coeff> {
    pub x: Gen,
    pub y: Gen,
    pub c: C,
    pub r: Element<C>,
}

impl<C: Coeff> fmt::Display for Cancellation<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cancel x={} y={} c={} r={}", self.x, self.y, self.c, self.r)
    }
}

/// If d x = c*y + r with c a unit and y absent from r, return (c, r).
pub fn cancel_shape<C: Coeff>(dx: &Element<C>, y: Gen) -> Option<(C, Element<C>)> {
    let yw = Word::letter(y);
    let c = dx.coeff(&yw)?;
    if !c.is_unit() {
        return None;
    }
    let mut r = Element::zero();
    for (w, k) in dx.terms() {
        if *w == yw {
            continue;
        }
        if w.contains(y) {
            return None;
        }
        r.add_term(w.clone(), k.clone());
    }
    Some((c.clone(), r))
}

/// Remove x and y, sending y to -c^-1 r and x to 0 in every other differential.
pub fn cancel_pair<C: Coeff>(dga: &Dga<C>, x: Gen, y: Gen) -> Result<(Dga<C>, Cancellation<C>), MoveError> {
    let dx = dga.diff(x).ok_or_else(|| MoveError::UnknownGenerator(x.to_string()))?;
    if !dga.contains(y) {
        return Err(MoveError::UnknownGenerator(y.to_string()));
    }
    let (c, r) = cancel_shape(dx, y).ok_or_else(|| MoveError::NotCancellable { x, y, dx: dx.to_string() })?;
    let rep = r.scale(&c.unit_inverse().expect("unit").neg());
    let mut out = dga.clone();
    out.remove(x);
    out.remove(y);
    for (_, e) in out.iter_mut() {
        if e.mentions(y) || e.mentions(x) {
            *e = e.substitute(y, &rep).substitute(x, &Element::zero());
        }
    }
    Ok((out, Cancellation { x, y, c, r }))
}

fn allowed_pair(h: Label, l: Label) -> bool {
    matches!(
        (h.ns, l.ns),
        (Ns::Curve, Ns::Sheet) | (Ns::Triple, Ns::Curve) | (Ns::Branch, Ns::Curve)
    )
}

/// Tie-breaking source for the greedy order; `None` means canonical order.
pub type TieBreak<'a> = Option<&'a mut dyn FnMut() -> u64>;

/// Cancel every generator mentioning `h` or `l`.
///
/// Candidates x are taken by degree, then by preferring those that mention
/// `h` but not `l`, then those mentioning both, then canonical order. Among
/// partners y, ones not mentioning `h` come first.
pub fn destabilize_along<C: Coeff>(
    dga: &Dga<C>,
    h: Label,
    l: Label,
    trace: &mut Vec<Cancellation<C>>,
    mut tiebreak: TieBreak<'_>,
) -> Result<Dga<C>, MoveError> {
    if !allowed_pair(h, l) {
        return Err(MoveError::BadPair { h, l });
    }
    let mut cur = dga.clone();
    let mut doomed: BTreeSet<Gen> = cur.generators().filter(|g| g.mentions(h) || g.mentions(l)).collect();
    let mut draw = || tiebreak.as_mut().map_or(0, |f| f());
    while !doomed.is_empty() {
        let mut cands: Vec<((u32, u8, u64, Gen), Gen)> = doomed
            .iter()
            .map(|x| {
                let (mh, ml) = (x.mentions(h), x.mentions(l));
                let tier = match (mh, ml) {
                    (true, false) => 0,
                    (true, true) => 1,
                    _ => 2,
                };
                ((x.degree(), tier, draw(), *x), *x)
            })
            .collect();
        cands.sort();
        let mut chosen = None;
        for (_, x) in &cands {
            let dx = cur.diff(*x).expect("doomed generators are present");
            let mut ys: Vec<((bool, u64, Gen), Gen)> = dx
                .terms()
                .filter_map(|(w, _)| w.as_letter())
                .filter(|y| y != x && doomed.contains(y) && cancel_shape(dx, *y).is_some())
                .map(|y| ((y.mentions(h), draw(), y), y))
                .collect();
            ys.sort();
            if let Some((_, y)) = ys.first() {
                chosen = Some((*x, *y));
                break;
            }
        }
        let Some((x, y)) = chosen else {
            let remaining = doomed
                .iter()
                .take(12)
                .map(|g| format!("  d {g} = {}", cur.diff(*g).expect("present")))
                .collect::<Vec<_>>()
                .join("\n");
            return Err(MoveError::Stall { h, l, remaining });
        };
        let (next, rec) = cancel_pair(&cur, x, y)?;
        trace.push(rec);
        cur = next;
        doomed.remove(&x);
        doomed.remove(&y);
    }
    Ok(cur)
}

/// Check d∘d = 0, reporting the first offender as an error.
pub fn ensure_d_squared<C: Coeff>(dga: &Dga<C>) -> Result<(), MoveError> {
    let r = check_d_squared(dga)?;
    match r.offenders.first() {
        Some((g, _)) => Err(MoveError::BrokenDifferential(*g)),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dga_core::{Kind, Variant};
    use crate::diagram::parse_diagram;
    use crate::differential::build_dga;

    fn g(s: &str) -> Gen {
        s.parse().unwrap()
    }

    fn z(s: &str) -> ZElement {
        ZElement::gen(g(s))
    }

    /// A single double curve: sheet 1 over, sheet 3 on the positive side,
    /// sheet 2 on the negative side, plus one spectator sheet.
    fn move_three_local() -> ZDga {
        let d = parse_diagram("diagram local\nsheets 4\ncurve c1 over=s1 uplus=s3 uminus=s2\n").unwrap();
        build_dga(&d, Variant::MM).unwrap()
    }

    #[test]
    fn identity_iso() {
        let a = move_three_local();
        let iso = ElementaryIso { target: g("a11(s3,s4)"), unit: LaurentInt::one(), tail: ZElement::zero() };
        assert_eq!(apply_elementary_iso(&a, &iso).unwrap(), a);
    }

    #[test]
    fn iso_makes_curve_differential_a_single_letter() {
        // d a21(c1,i) = mu a11(2,i) + a11(3,i) - a11(2,1) a11(1,i); sheet 3 plays
        // the created sheet.
        let a = move_three_local();
        let mu = LaurentInt::mu();
        let tail = z("a11(s2,s4)").scale(&mu).neg().add(&z("a11(s2,s1)").mul(&z("a11(s1,s4)")));
        let iso = ElementaryIso { target: g("a11(s3,s4)"), unit: LaurentInt::one(), tail };
        let b = apply_elementary_iso(&a, &iso).unwrap();
        assert_eq!(b.diff(g("a21(c1,s4)")).unwrap(), &z("a11(s3,s4)"));
        assert!(check_d_squared(&b).unwrap().passed());
        let back = apply_elementary_iso(&b, &iso.inverse().unwrap()).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn iso_preconditions() {
        let a = move_three_local();
        let bad_unit = ElementaryIso { target: g("a11(s3,s4)"), unit: LaurentInt::one_plus_mu(), tail: ZElement::zero() };
        assert!(matches!(apply_elementary_iso(&a, &bad_unit), Err(MoveError::NotAUnit(_))));
        let bad_deg = ElementaryIso { target: g("a11(s3,s4)"), unit: LaurentInt::one(), tail: z("a21(c1,s4)") };
        assert!(matches!(apply_elementary_iso(&a, &bad_deg), Err(MoveError::DegreeMismatch { .. })));
        let selfref = ElementaryIso {
            target: g("a11(s3,s4)"),
            unit: LaurentInt::one(),
            tail: z("a11(s3,s4)").mul(&z("a11(s4,s3)")),
        };
        assert!(matches!(apply_elementary_iso(&a, &selfref), Err(MoveError::TailContainsTarget(_))));
    }

    #[test]
    fn stabilize_then_cancel() {
        let a = move_three_local();
        let (b, e1, e2) = stabilize(&a, 0);
        assert_eq!(b.len(), a.len() + 2);
        assert_eq!((e1.degree(), e2.degree()), (1, 0));
        assert!(check_d_squared(&b).unwrap().passed());
        let (c, rec) = cancel_pair(&b, e1, e2).unwrap();
        assert_eq!(c.iter().collect::<Vec<_>>(), a.iter().collect::<Vec<_>>());
        assert!(rec.r.is_zero() && rec.c.is_one());
        let empty = ZDga::new("e", Variant::MM, 0);
        let (s, _, _) = stabilize(&empty, 0);
        assert_eq!(s.len(), 2);
        assert!(check_d_squared(&s).unwrap().passed());
    }

    #[test]
    fn cancel_requires_the_shape() {
        let a = move_three_local();
        let err = cancel_pair(&a, g("a21(c1,s4)"), g("a11(s2,s1)")).unwrap_err();
        assert!(matches!(err, MoveError::NotCancellable { .. }));
    }

    #[test]
    fn destabilise_curve_to_sheet() {
        let a = move_three_local();
        let mut trace = vec![];
        let b = destabilize_along(&a, Label::curve(1), Label::sheet(3), &mut trace, None).unwrap();
        assert!(b.generators().all(|x| !x.mentions(Label::curve(1)) && !x.mentions(Label::sheet(3))));
        assert!(check_d_squared(&b).unwrap().passed());
        assert_eq!(b.len() + 2 * trace.len(), a.len());
        let d = parse_diagram("diagram local\nsheets 3\n").unwrap();
        let plain = build_dga(&d, Variant::MM).unwrap();
        assert_eq!(b.len(), plain.len());
    }

    #[test]
    fn bad_pairs() {
        let a = move_three_local();
        let err = destabilize_along(&a, Label::sheet(1), Label::curve(1), &mut vec![], None).unwrap_err();
        assert!(matches!(err, MoveError::BadPair { .. }));
    }

    #[test]
    fn kinds_without_labels_survive() {
        let (b, e1, _) = stabilize(&move_three_local(), 2);
        assert_eq!(e1.kind(), Kind::Stab);
        let c = destabilize_along(&b, Label::curve(1), Label::sheet(3), &mut vec![], None).unwrap();
        assert!(c.contains(e1));
    }
}
