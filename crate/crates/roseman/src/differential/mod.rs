//! The differential of a diagram, its Leibniz extension and the
//! d∘d = 0 check.

mod dump;
mod table;

pub use dump::{dump_dga, parse_dga_dump};
pub use table::{eval, eval_params, Arg, DiffTable, Entry, Env, Expr, TableError};

use rayon::prelude::*;
use thiserror::Error;

use crate::dga_core::{Coeff, Dga, Element, Gen, Kind, Ns, Variant, ZDga};
use crate::diagram::{validate_diagram, Diagram, ValidationReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiffError {
    #[error("invalid diagram:\n{0}")]
    InvalidDiagram(ValidationReport),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("generator {0} is not in the algebra")]
    UnknownGenerator(Gen),
    #[error("dump line {line}: {msg}")]
    Dump { line: usize, msg: String },
}

fn domain(d: &Diagram, ns: Ns) -> Vec<u32> {
    match ns {
        Ns::Sheet => (1..=d.sheet_count).collect(),
        Ns::Curve => d.curves.iter().map(|c| c.id.0).collect(),
        Ns::Triple => d.triples.iter().map(|t| t.id.0).collect(),
        Ns::Branch => d.positive_branches().map(|b| b.id.0).collect(),
    }
}

/// The algebra of `d` in variant `v`, using the shipped tables.
pub fn build_dga(d: &Diagram, v: Variant) -> Result<ZDga, DiffError> {
    build_dga_with(d, v, &DiffTable::standard())
}

pub fn build_dga_with(d: &Diagram, v: Variant, table: &DiffTable) -> Result<ZDga, DiffError> {
    let report = validate_diagram(d);
    if !report.is_valid() {
        return Err(DiffError::InvalidDiagram(report));
    }
    let mut dga = ZDga::new(d.name.clone(), v, d.sheet_count);
    for i in 1..=d.sheet_count {
        for j in 1..=d.sheet_count {
            if i != j {
                dga.insert(Gen::new(Kind::A11, &[i, j]).expect("off-diagonal"), Element::zero());
            }
        }
    }
    for &kind in &Kind::DIAGRAM_KINDS[1..] {
        let entry = table.entry(v, kind)?;
        let vars: Vec<char> = entry
            .params
            .iter()
            .map(|a| match a {
                Arg::Var(c) => *c,
                Arg::Acc(..) => unreachable!("general entries have plain parameters"),
            })
            .collect();
        let doms: Vec<Vec<u32>> = kind.signature().iter().map(|ns| domain(d, *ns)).collect();
        let mut combos: Vec<Vec<u32>> = vec![vec![]];
        for dom in &doms {
            combos = combos
                .into_iter()
                .flat_map(|c| {
                    dom.iter().map(move |x| {
                        let mut c2 = c.clone();
                        c2.push(*x);
                        c2
                    })
                })
                .collect();
        }
        for ids in combos {
            let mut env = Env::default();
            for (c, x) in vars.iter().zip(&ids) {
                env.bind(*c, *x);
            }
            let g = Gen::new(kind, &ids).map_err(|e| TableError::Eval(e.to_string()))?;
            dga.insert(g, eval(&entry.body, &env, d)?);
        }
    }
    Ok(dga)
}

/// Extension of the differential by the signed Leibniz rule
/// d(vw) = (dv)w + (-1)^{deg v} v (dw).
pub fn boundary<C: Coeff>(dga: &Dga<C>, e: &Element<C>) -> Result<Element<C>, DiffError> {
    let mut out = Element::zero();
    for (w, c) in e.terms() {
        let mut negative = false;
        for (idx, g) in w.gens().iter().enumerate() {
            let dg = dga.diff(*g).ok_or(DiffError::UnknownGenerator(*g))?;
            if !dg.is_zero() {
                let coef = if negative { c.neg() } else { c.clone() };
                out.add_assign(&dg.sandwich(&w.slice(0, idx), &coef, &w.slice(idx + 1, w.len())));
            }
            if g.degree() % 2 == 1 {
                negative = !negative;
            }
        }
    }
    Ok(out)
}

/// Generators whose image under d∘d is not zero, with the residue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct D2Report<C: Coeff> {
    pub checked: usize,
    pub offenders: Vec<(Gen, Element<C>)>,
}

impl<C: Coeff> D2Report<C> {
    pub fn passed(&self) -> bool {
        self.offenders.is_empty()
    }
}

pub fn check_d_squared<C: Coeff>(dga: &Dga<C>) -> Result<D2Report<C>, DiffError> {
    let gens: Vec<Gen> = dga.generators().collect();
    let results: Vec<Result<Option<(Gen, Element<C>)>, DiffError>> = gens
        .par_iter()
        .map(|g| {
            let dd = boundary(dga, dga.diff(*g).expect("listed generator"))?;
            Ok((!dd.is_zero()).then_some((*g, dd)))
        })
        .collect();
    let mut offenders = Vec::new();
    for r in results {
        if let Some(x) = r? {
            offenders.push(x);
        }
    }
    Ok(D2Report { checked: gens.len(), offenders })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dga_core::{ElemDegree, LaurentInt, ZElement};
    use crate::diagram::{load_fixture, parse_diagram};

    fn g(s: &str) -> Gen {
        s.parse().unwrap()
    }

    fn z(s: &str) -> ZElement {
        ZElement::gen(g(s))
    }

    fn abstract_triple(bmm: u32) -> Diagram {
        let text = format!(
            "diagram t\nsheets 7\n\
             curve c1 over=s1 uplus=s2 uminus=s3\n\
             curve c2 over=s2 uplus=s4 uminus=s5\n\
             curve c3 over=s3 uplus=s6 uminus=s{bmm}\n\
             curve c4 over=s1 uplus=s4 uminus=s6\n\
             curve c5 over=s1 uplus=s5 uminus=s{bmm}\n\
             curve c6 over=s2 uplus=s2 uminus=s2\n\
             triple t1 t=s1 mplus=s2 mminus=s3 bpp=s4 bpm=s5 bmp=s6 bmm=s{bmm} tm=c1 mbplus=c2 mbminus=c3 tbplus=c4 tbminus=c5\n\
             branch b1 sign=+ curve=c6 sheet=s2\n"
        );
        parse_diagram(&text).unwrap()
    }

    #[test]
    fn unknot_has_no_generators() {
        let d = load_fixture("unknot_sphere").unwrap();
        for v in Variant::ALL {
            let a = build_dga(&d, v).unwrap();
            assert!(a.is_empty());
            assert!(check_d_squared(&a).unwrap().passed());
        }
    }

    #[test]
    fn double_curve_differential() {
        let d = parse_diagram("diagram c\nsheets 3\ncurve c1 over=s2 uplus=s1 uminus=s3\n").unwrap();
        let a = build_dga(&d, Variant::MM).unwrap();
        let mu = LaurentInt::mu();
        let expect = z("a11(s3,s1)").scale(&mu).add(&ZElement::scalar(LaurentInt::one_plus_mu()))
            .sub(&z("a11(s3,s2)").mul(&z("a11(s2,s1)")));
        assert_eq!(a.diff(g("a21(c1,s1)")).unwrap(), &expect);
        assert!(check_d_squared(&a).unwrap().passed());
    }

    #[test]
    fn branch_generators() {
        let d = abstract_triple(7);
        let a = build_dga(&d, Variant::MM).unwrap();
        for i in 1..=7 {
            let ab1 = Gen::new(Kind::Ab1, &[1, i]).unwrap();
            let a21 = Gen::new(Kind::A21, &[6, i]).unwrap();
            assert_eq!(a.diff(ab1).unwrap(), &ZElement::gen(a21));
        }
        assert_eq!(a.diff(g("ab2(b1,c6)")).unwrap(), &z("a22(c6,c6)"));
        assert_eq!(a.diff(g("a2b(c6,b1)")).unwrap(), &z("a22(c6,c6)").neg());
    }

    #[test]
    fn special_entries_agree_with_general_formula() {
        let d = abstract_triple(7);
        let table = DiffTable::standard();
        let a = build_dga(&d, Variant::MM).unwrap();
        for (_, entry) in table.specials() {
            for b in d.positive_branches() {
                let mut env = Env::default();
                env.bind('k', b.id.0);
                let ids = eval_params(&entry.params, &env, &d).unwrap();
                let gen = Gen::new(entry.kind, &ids).unwrap();
                assert_eq!(a.diff(gen).unwrap(), &eval(&entry.body, &env, &d).unwrap(), "{gen}");
            }
        }
    }

    #[test]
    fn triple_point_d_squared_all_variants() {
        for bmm in [7, 2] {
            let d = abstract_triple(bmm);
            for v in Variant::ALL {
                let a = build_dga(&d, v).unwrap();
                let r = check_d_squared(&a).unwrap();
                assert!(r.passed(), "{v}: {:?}", r.offenders.first());
            }
        }
    }

    #[test]
    fn differentials_drop_degree() {
        let a = build_dga(&abstract_triple(7), Variant::PP).unwrap();
        for (gen, e) in a.iter() {
            match e.degree() {
                ElemDegree::Zero => {}
                ElemDegree::Homogeneous(k) => assert_eq!(k + 1, gen.degree(), "{gen}"),
                ElemDegree::Inhomogeneous => panic!("{gen} inhomogeneous"),
            }
        }
    }

    #[test]
    fn leibniz_examples() {
        let a = build_dga(&abstract_triple(7), Variant::MM).unwrap();
        let closed = z("a11(s1,s2)");
        let u = z("ab1(b1,s3)").mul(&closed);
        assert_eq!(boundary(&a, &u).unwrap(), z("a21(c6,s3)").mul(&closed));
        let x = z("a21(c1,s4)");
        let y = z("a21(c2,s5)");
        let got = boundary(&a, &x.mul(&y)).unwrap();
        let dx = boundary(&a, &x).unwrap();
        let dy = boundary(&a, &y).unwrap();
        assert_eq!(got, dx.mul(&y).sub(&x.mul(&dy)));
        assert!(boundary(&a, &ZElement::scalar(LaurentInt::one_plus_mu())).unwrap().is_zero());
    }

    #[test]
    fn unknown_generator_is_an_error() {
        let a = build_dga(&load_fixture("spun_trefoil").unwrap(), Variant::MM).unwrap();
        assert!(matches!(boundary(&a, &z("a3(t1)")), Err(DiffError::UnknownGenerator(_))));
    }

    #[test]
    fn minus_sign_on_abb_breaks_d_squared() {
        let mut text = String::from("diagram bb\nsheets 2\n");
        text.push_str("curve c1 over=s1 uplus=s1 uminus=s1\ncurve c2 over=s2 uplus=s2 uminus=s2\n");
        text.push_str("branch b1 sign=+ curve=c1 sheet=s1\nbranch b2 sign=+ curve=c2 sheet=s2\n");
        let d = parse_diagram(&text).unwrap();
        let table = DiffTable::standard()
            .with_entry(Variant::MM, Kind::Abb, "a2b(dc(k), l) - ab2(k, dc(l))")
            .unwrap();
        let a = build_dga_with(&d, Variant::MM, &table).unwrap();
        let r = check_d_squared(&a).unwrap();
        let residue = r.offenders.iter().find(|(x, _)| *x == g("abb(b1,b2)")).unwrap();
        assert_eq!(residue.1, z("a22(c1,c2)").scale(&LaurentInt::from(-2)));
        assert!(check_d_squared(&build_dga(&d, Variant::MM).unwrap()).unwrap().passed());
    }

    #[test]
    fn invalid_diagram_rejected() {
        let d = parse_diagram("diagram b\nsheets 2\ncurve c1 over=s2 uplus=s1 uminus=s1\nbranch b1 sign=+ curve=c1 sheet=s1\n")
            .unwrap();
        assert!(matches!(build_dga(&d, Variant::MM), Err(DiffError::InvalidDiagram(_))));
    }

    #[test]
    fn negative_branches_generate_nothing() {
        let d = load_fixture("roseman_VI_neg_a").unwrap();
        let a = build_dga(&d, Variant::MM).unwrap();
        assert!(a.generators().all(|x| !x.labels().any(|l| l.ns == Ns::Branch)));
    }
}
