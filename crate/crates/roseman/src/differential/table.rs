//! The differential tables, stored as formulas over symbolic indices.
//!
//! An entry reads
//! ```text
//! [--] d a21(x, i) =
//!     mu a11(um(x), i) + a11(up(x), i) - a11(um(x), o(x)) a11(o(x), i)
//! ```
//! Index variables `i j` range over sheets, `x y` over double curves,
//! `p q` over triple points and `k l` over positive branch points.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::dga_core::{make_generator, Kind, LaurentInt, Ns, Variant, ZElement};
use crate::diagram::{BranchId, CurveId, Diagram, SheetId, TripleId};

const STANDARD: &str = include_str!("../tables/differential.tbl");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("table line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("no formula for {kind} in variant {variant}")]
    Missing { kind: &'static str, variant: Variant },
    #[error("cannot evaluate {0}")]
    Eval(String),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Accessor {
    O,
    Up,
    Um,
    T,
    Mp,
    Mm,
    Bpp,
    Bpm,
    Bmp,
    Bmm,
    Tm,
    Mbp,
    Mbm,
    Tbp,
    Tbm,
    Dc,
    Sh,
}

impl Accessor {
    fn from_name(s: &str) -> Option<Accessor> {
        use Accessor::*;
        Some(match s {
            "o" => O,
            "up" => Up,
            "um" => Um,
            "t" => T,
            "mp" => Mp,
            "mm" => Mm,
            "bpp" => Bpp,
            "bpm" => Bpm,
            "bmp" => Bmp,
            "bmm" => Bmm,
            "tm" => Tm,
            "mbp" => Mbp,
            "mbm" => Mbm,
            "tbp" => Tbp,
            "tbm" => Tbm,
            "dc" => Dc,
            "sh" => Sh,
            _ => return None,
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Arg {
    Var(char),
    Acc(Accessor, Box<Arg>),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Factor {
    Mu(i32),
    Int(i64),
    Gen(Kind, Vec<Arg>),
    Group(Expr),
}

/// Signed sum of products.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Expr {
    pub terms: Vec<(bool, Vec<Factor>)>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Entry {
    pub kind: Kind,
    pub params: Vec<Arg>,
    pub body: Expr,
}

impl Entry {
    /// Entries whose parameters are plain variables define a whole family.
    pub fn is_general(&self) -> bool {
        self.params.iter().all(|a| matches!(a, Arg::Var(_)))
    }
}

/// A full set of formulas. `[--]` entries of kinds that do not involve
/// triple points serve every variant.
#[derive(Clone, Debug)]
pub struct DiffTable {
    entries: BTreeMap<(Variant, Kind), Entry>,
    specials: Vec<(Variant, Entry)>,
}

fn var_ns(c: char) -> Option<Ns> {
    match c {
        'i' | 'j' => Some(Ns::Sheet),
        'x' | 'y' => Some(Ns::Curve),
        'p' | 'q' => Some(Ns::Triple),
        'k' | 'l' => Some(Ns::Branch),
        _ => None,
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Ident(String),
    Int(i64),
    MuInv,
    Sym(char),
}

fn tokenize(s: &str, line: usize) -> Result<Vec<Tok>, TableError> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_alphanumeric() {
                i += 1;
            }
            let word: String = cs[st..i].iter().collect();
            if word == "mu" && cs.get(i) == Some(&'^') {
                let rest: String = cs[i..].iter().take(3).collect();
                if rest == "^-1" {
                    i += 3;
                    out.push(Tok::MuInv);
                    continue;
                }
                return Err(TableError::Syntax { line, msg: "only mu^-1 is supported".into() });
            }
            out.push(Tok::Ident(word));
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let v: String = cs[st..i].iter().collect();
            out.push(Tok::Int(v.parse().map_err(|_| TableError::Syntax { line, msg: v.clone() })?));
        } else if "()+-,".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(TableError::Syntax { line, msg: format!("unexpected character {c:?}") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    line: usize,
}

impl Parser {
    fn err(&self, msg: impl Into<String>) -> TableError {
        TableError::Syntax { line: self.line, msg: msg.into() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, c: char) -> Result<(), TableError> {
        match self.next() {
            Some(Tok::Sym(d)) if d == c => Ok(()),
            other => Err(self.err(format!("expected {c:?}, got {other:?}"))),
        }
    }

    fn sum(&mut self) -> Result<Expr, TableError> {
        let mut terms = Vec::new();
        let mut neg = false;
        if let Some(Tok::Sym(c @ ('+' | '-'))) = self.peek() {
            neg = *c == '-';
            self.pos += 1;
        }
        terms.push((neg, self.product()?));
        while let Some(Tok::Sym(c @ ('+' | '-'))) = self.peek() {
            let neg = *c == '-';
            self.pos += 1;
            terms.push((neg, self.product()?));
        }
        Ok(Expr { terms })
    }

    fn product(&mut self) -> Result<Vec<Factor>, TableError> {
        let mut fs = Vec::new();
        loop {
            match self.peek() {
                None | Some(Tok::Sym('+' | '-' | ')' | ',')) => break,
                Some(Tok::Sym('(')) => {
                    self.pos += 1;
                    let e = self.sum()?;
                    self.expect(')')?;
                    fs.push(Factor::Group(e));
                }
                Some(Tok::MuInv) => {
                    self.pos += 1;
                    fs.push(Factor::Mu(-1));
                }
                Some(Tok::Int(v)) => {
                    let v = *v;
                    self.pos += 1;
                    fs.push(Factor::Int(v));
                }
                Some(Tok::Ident(w)) if w == "mu" => {
                    self.pos += 1;
                    fs.push(Factor::Mu(1));
                }
                Some(Tok::Ident(w)) => {
                    let kind = Kind::from_name(w)
                        .filter(|k| *k != Kind::Stab)
                        .ok_or_else(|| self.err(format!("unknown generator family {w:?}")))?;
                    self.pos += 1;
                    let args = self.args()?;
                    if args.len() != kind.signature().len() {
                        return Err(self.err(format!("{} takes {} indices", kind.name(), kind.signature().len())));
                    }
                    fs.push(Factor::Gen(kind, args));
                }
                Some(t) => return Err(self.err(format!("unexpected {t:?}"))),
            }
        }
        if fs.is_empty() {
            return Err(self.err("empty product"));
        }
        Ok(fs)
    }

    fn args(&mut self) -> Result<Vec<Arg>, TableError> {
        self.expect('(')?;
        let mut out = vec![self.arg()?];
        while let Some(Tok::Sym(',')) = self.peek() {
            self.pos += 1;
            out.push(self.arg()?);
        }
        self.expect(')')?;
        Ok(out)
    }

    fn arg(&mut self) -> Result<Arg, TableError> {
        let name = match self.next() {
            Some(Tok::Ident(w)) => w,
            other => return Err(self.err(format!("expected an index, got {other:?}"))),
        };
        if let Some(Tok::Sym('(')) = self.peek() {
            self.pos += 1;
            let inner = self.arg()?;
            self.expect(')')?;
            let acc = Accessor::from_name(&name).ok_or_else(|| self.err(format!("unknown accessor {name:?}")))?;
            return Ok(Arg::Acc(acc, Box::new(inner)));
        }
        let mut cs = name.chars();
        match (cs.next(), cs.next()) {
            (Some(c), None) if var_ns(c).is_some() => Ok(Arg::Var(c)),
            _ => Err(self.err(format!("unknown index variable {name:?}"))),
        }
    }
}

fn parse_expr(text: &str, line: usize) -> Result<Expr, TableError> {
    let mut p = Parser { toks: tokenize(text, line)?, pos: 0, line };
    let e = p.sum()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

fn parse_header(line: &str, no: usize) -> Result<Option<(Variant, Kind, Vec<Arg>)>, TableError> {
    let Some(rest) = line.strip_prefix('[') else { return Ok(None) };
    let err = |msg: &str| TableError::Syntax { line: no, msg: msg.to_string() };
    let (tag, rest) = rest.split_once(']').ok_or_else(|| err("unclosed variant tag"))?;
    let variant: Variant = tag.parse().map_err(|_| err("bad variant tag"))?;
    let rest = rest.trim().strip_prefix("d ").ok_or_else(|| err("expected `d <generator>`"))?;
    let rest = rest.trim().strip_suffix('=').ok_or_else(|| err("header must end with `=`"))?;
    let toks = tokenize(rest, no)?;
    let mut p = Parser { toks, pos: 0, line: no };
    let kind = match p.next() {
        Some(Tok::Ident(w)) => Kind::from_name(&w).ok_or_else(|| err("unknown family"))?,
        _ => return Err(err("expected a generator family")),
    };
    let params = p.args()?;
    if p.pos != p.toks.len() || params.len() != kind.signature().len() {
        return Err(err("bad parameter list"));
    }
    for (a, ns) in params.iter().zip(kind.signature()) {
        if let Arg::Var(c) = a {
            if var_ns(*c) != Some(*ns) {
                return Err(err("parameter in the wrong namespace"));
            }
        }
    }
    Ok(Some((variant, kind, params)))
}

impl DiffTable {
    /// The shipped tables for all four variants.
    pub fn standard() -> DiffTable {
        DiffTable::parse(STANDARD).expect("shipped differential table parses")
    }

    pub fn standard_source() -> &'static str {
        STANDARD
    }

    pub fn parse(text: &str) -> Result<DiffTable, TableError> {
        let lines: Vec<&str> = text.lines().collect();
        let mut entries = BTreeMap::new();
        let mut specials = Vec::new();
        let mut i = 0;
        while i < lines.len() {
            let line = lines[i].trim();
            if line.is_empty() || line.starts_with('#') {
                i += 1;
                continue;
            }
            let (variant, kind, params) = parse_header(line, i + 1)?
                .ok_or_else(|| TableError::Syntax { line: i + 1, msg: "expected an entry header".into() })?;
            let body_line = lines
                .get(i + 1)
                .ok_or_else(|| TableError::Syntax { line: i + 1, msg: "missing formula".into() })?;
            let body = parse_expr(body_line, i + 2)?;
            let entry = Entry { kind, params, body };
            if entry.is_general() {
                if entries.insert((variant, kind), entry).is_some() {
                    return Err(TableError::Syntax { line: i + 1, msg: "duplicate entry".into() });
                }
            } else {
                specials.push((variant, entry));
            }
            i += 2;
        }
        Ok(DiffTable { entries, specials })
    }

    /// Replace one formula; used to try alternative readings.
    pub fn with_entry(mut self, variant: Variant, kind: Kind, formula: &str) -> Result<DiffTable, TableError> {
        let old = self
            .entries
            .get(&(variant, kind))
            .ok_or(TableError::Missing { kind: kind.name(), variant })?;
        let entry = Entry { kind, params: old.params.clone(), body: parse_expr(formula, 0)? };
        self.entries.insert((variant, kind), entry);
        Ok(self)
    }

    pub fn entry(&self, variant: Variant, kind: Kind) -> Result<&Entry, TableError> {
        let tag = if kind.is_variant_specific() { variant } else { Variant::MM };
        self.entries.get(&(tag, kind)).ok_or(TableError::Missing { kind: kind.name(), variant })
    }

    /// Entries stated for particular index patterns, e.g. `ab2(k, dc(k))`.
    pub fn specials(&self) -> &[(Variant, Entry)] {
        &self.specials
    }
}

/// Binding of index variables to diagram labels.
#[derive(Clone, Copy, Debug, Default)]
pub struct Env {
    vals: [u32; 8],
}

fn slot(c: char) -> usize {
    "ijxypqkl".find(c).expect("index variable")
}

impl Env {
    pub fn bind(&mut self, c: char, v: u32) {
        self.vals[slot(c)] = v;
    }

    pub fn get(&self, c: char) -> u32 {
        self.vals[slot(c)]
    }
}

fn eval_arg(a: &Arg, env: &Env, d: &Diagram) -> Result<(Ns, u32), TableError> {
    match a {
        Arg::Var(c) => Ok((var_ns(*c).expect("checked at parse"), env.get(*c))),
        Arg::Acc(acc, inner) => {
            let (ns, v) = eval_arg(inner, env, d)?;
            let bad = || TableError::Eval(format!("{acc:?} of {}{v}", ns.prefix()));
            use Accessor::*;
            match ns {
                Ns::Curve => {
                    let c = d.curve(CurveId(v)).ok_or_else(bad)?;
                    match acc {
                        O => Ok((Ns::Sheet, c.over.0)),
                        Up => Ok((Ns::Sheet, c.u_plus.0)),
                        Um => Ok((Ns::Sheet, c.u_minus.0)),
                        _ => Err(bad()),
                    }
                }
                Ns::Triple => {
                    let t = d.triple(TripleId(v)).ok_or_else(bad)?;
                    let s = |x: SheetId| Ok((Ns::Sheet, x.0));
                    let c = |x: CurveId| Ok((Ns::Curve, x.0));
                    match acc {
                        T => s(t.t),
                        Mp => s(t.m_plus),
                        Mm => s(t.m_minus),
                        Bpp => s(t.bpp()),
                        Bpm => s(t.bpm()),
                        Bmp => s(t.bmp()),
                        Bmm => s(t.bmm()),
                        Tm => c(t.tm),
                        Mbp => c(t.mb_plus),
                        Mbm => c(t.mb_minus),
                        Tbp => c(t.tb_plus),
                        Tbm => c(t.tb_minus),
                        _ => Err(bad()),
                    }
                }
                Ns::Branch => {
                    let b = d.branch(BranchId(v)).ok_or_else(bad)?;
                    match acc {
                        Dc => Ok((Ns::Curve, b.dc.0)),
                        Sh => Ok((Ns::Sheet, b.sh.0)),
                        _ => Err(bad()),
                    }
                }
                Ns::Sheet => Err(bad()),
            }
        }
    }
}

/// Evaluate a formula in a diagram under an index binding.
pub fn eval(e: &Expr, env: &Env, d: &Diagram) -> Result<ZElement, TableError> {
    let mut out = ZElement::zero();
    for (neg, fs) in &e.terms {
        let mut acc = ZElement::one();
        for f in fs {
            let v = match f {
                Factor::Mu(k) => ZElement::scalar(LaurentInt::monomial(1, *k)),
                Factor::Int(n) => ZElement::scalar(LaurentInt::from(*n)),
                Factor::Group(g) => eval(g, env, d)?,
                Factor::Gen(kind, args) => {
                    let ids: Vec<u32> = args
                        .iter()
                        .map(|a| eval_arg(a, env, d).map(|(_, v)| v))
                        .collect::<Result<_, _>>()?;
                    make_generator(*kind, &ids, d.sheet_count).map_err(|e| TableError::Eval(e.to_string()))?
                }
            };
            acc = acc.mul(&v);
        }
        if *neg {
            acc = acc.neg();
        }
        out.add_assign(&acc);
    }
    Ok(out)
}

/// Evaluate the parameter list of a special entry, giving generator indices.
pub fn eval_params(params: &[Arg], env: &Env, d: &Diagram) -> Result<Vec<u32>, TableError> {
    params.iter().map(|a| eval_arg(a, env, d).map(|(_, v)| v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_table_is_complete() {
        let t = DiffTable::standard();
        for v in Variant::ALL {
            for k in Kind::DIAGRAM_KINDS.iter().skip(1) {
                assert!(t.entry(v, *k).is_ok(), "{} {v}", k.name());
            }
        }
        assert_eq!(t.specials().len(), 2);
    }

    #[test]
    fn parses_nested_groups() {
        let e = parse_expr("mu (a11(i, j) - mu^-1 a11(j, i)) a21(x, i)", 1).unwrap();
        assert_eq!(e.terms.len(), 1);
        assert_eq!(e.terms[0].1.len(), 3);
    }

    #[test]
    fn rejects_bad_formulas() {
        assert!(parse_expr("a21(i, x)x", 1).is_err());
        assert!(parse_expr("foo(i)", 1).is_err());
        assert!(parse_expr("a21(x)", 1).is_err());
        assert!(parse_expr("mu^2 a21(x, i)", 1).is_err());
        assert!(DiffTable::parse("[--] d a21(i, x) =\n a11(i, j)\n").is_err());
    }
}
