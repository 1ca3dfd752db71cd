use std::collections::{BTreeMap, HashMap};
use std::fmt::Write;

use super::*;

struct Line<'a> {
    no: usize,
    fields: HashMap<&'a str, &'a str>,
}

fn syntax(line: usize, msg: impl Into<String>) -> DiagramError {
    DiagramError::Syntax { line, msg: msg.into() }
}

fn id_with_prefix(line: usize, s: &str, prefix: char) -> Result<u32, DiagramError> {
    let rest = s
        .strip_prefix(prefix)
        .ok_or_else(|| syntax(line, format!("expected {prefix}<n>, got {s:?}")))?;
    match rest.parse::<u32>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(syntax(line, format!("bad label {s:?}"))),
    }
}

impl<'a> Line<'a> {
    fn get(&self, key: &str) -> Result<&'a str, DiagramError> {
        self.fields
            .get(key)
            .copied()
            .ok_or_else(|| syntax(self.no, format!("missing field {key}=")))
    }

    fn sheet(&self, key: &str) -> Result<SheetId, DiagramError> {
        Ok(SheetId(id_with_prefix(self.no, self.get(key)?, 's')?))
    }

    fn curve(&self, key: &str) -> Result<CurveId, DiagramError> {
        Ok(CurveId(id_with_prefix(self.no, self.get(key)?, 'c')?))
    }
}

fn fields<'a>(no: usize, toks: &[&'a str], allowed: &[&str]) -> Result<Line<'a>, DiagramError> {
    let mut map = HashMap::new();
    for t in toks {
        let (k, v) = t
            .split_once('=')
            .ok_or_else(|| syntax(no, format!("expected key=value, got {t:?}")))?;
        if !allowed.contains(&k) {
            return Err(syntax(no, format!("unknown field {k:?}")));
        }
        if map.insert(k, v).is_some() {
            return Err(syntax(no, format!("field {k} given twice")));
        }
    }
    Ok(Line { no, fields: map })
}

fn dense<T>(kind: &'static str, items: BTreeMap<u32, T>) -> Result<Vec<T>, DiagramError> {
    let n = items.len() as u32;
    if let Some(missing) = (1..=n).find(|i| !items.contains_key(i)) {
        return Err(DiagramError::NotDense { kind, missing: missing.to_string() });
    }
    Ok(items.into_values().collect())
}

/// Parse the line-oriented diagram format. `#` starts a comment.
pub fn parse_diagram(text: &str) -> Result<Diagram, DiagramError> {
    let mut name = None;
    let mut sheets = None;
    let mut curves: BTreeMap<u32, (usize, DoubleCurve)> = BTreeMap::new();
    let mut triples: BTreeMap<u32, (usize, TriplePoint)> = BTreeMap::new();
    let mut branches: BTreeMap<u32, (usize, BranchPoint)> = BTreeMap::new();

    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "diagram" => {
                if toks.len() != 2 {
                    return Err(syntax(no, "expected `diagram <name>`"));
                }
                if name.replace(toks[1].to_string()).is_some() {
                    return Err(syntax(no, "second diagram header"));
                }
            }
            "sheets" => {
                let n: u32 = toks
                    .get(1)
                    .and_then(|s| s.parse().ok())
                    .filter(|_| toks.len() == 2)
                    .ok_or_else(|| syntax(no, "expected `sheets <n>`"))?;
                if sheets.replace(n).is_some() {
                    return Err(syntax(no, "second sheets line"));
                }
            }
            "curve" => {
                let id = id_with_prefix(no, toks.get(1).copied().unwrap_or(""), 'c')?;
                let l = fields(no, &toks[2..], &["over", "uplus", "uminus"])?;
                let c = DoubleCurve {
                    id: CurveId(id),
                    over: l.sheet("over")?,
                    u_plus: l.sheet("uplus")?,
                    u_minus: l.sheet("uminus")?,
                };
                if curves.insert(id, (no, c)).is_some() {
                    return Err(DiagramError::Duplicate { line: no, label: format!("c{id}") });
                }
            }
            "triple" => {
                let id = id_with_prefix(no, toks.get(1).copied().unwrap_or(""), 't')?;
                let l = fields(
                    no,
                    &toks[2..],
                    &[
                        "t", "mplus", "mminus", "bpp", "bpm", "bmp", "bmm", "tm", "mbplus", "mbminus", "tbplus",
                        "tbminus",
                    ],
                )?;
                let t = TriplePoint {
                    id: TripleId(id),
                    t: l.sheet("t")?,
                    m_plus: l.sheet("mplus")?,
                    m_minus: l.sheet("mminus")?,
                    b: [[l.sheet("bpp")?, l.sheet("bpm")?], [l.sheet("bmp")?, l.sheet("bmm")?]],
                    tm: l.curve("tm")?,
                    mb_plus: l.curve("mbplus")?,
                    mb_minus: l.curve("mbminus")?,
                    tb_plus: l.curve("tbplus")?,
                    tb_minus: l.curve("tbminus")?,
                };
                if triples.insert(id, (no, t)).is_some() {
                    return Err(DiagramError::Duplicate { line: no, label: format!("t{id}") });
                }
            }
            "branch" => {
                let id = id_with_prefix(no, toks.get(1).copied().unwrap_or(""), 'b')?;
                let l = fields(no, &toks[2..], &["sign", "curve", "sheet"])?;
                let sign = match l.get("sign")? {
                    "+" => Sign::Plus,
                    "-" => Sign::Minus,
                    s => return Err(syntax(no, format!("bad sign {s:?}"))),
                };
                let b = BranchPoint { id: BranchId(id), sign, dc: l.curve("curve")?, sh: l.sheet("sheet")? };
                if branches.insert(id, (no, b)).is_some() {
                    return Err(DiagramError::Duplicate { line: no, label: format!("b{id}") });
                }
            }
            other => return Err(syntax(no, format!("unknown keyword {other:?}"))),
        }
    }

    let name = name.ok_or_else(|| syntax(1, "missing `diagram <name>` line"))?;
    let n = sheets.ok_or_else(|| syntax(1, "missing `sheets <n>` line"))?;
    let sheet_ok = |s: SheetId| s.0 >= 1 && s.0 <= n;
    let curve_ok = |c: CurveId| curves.contains_key(&c.0);
    let dangling = |line: usize, label: String| DiagramError::Dangling { line, label };

    for (line, c) in curves.values() {
        for s in [c.over, c.u_plus, c.u_minus] {
            if !sheet_ok(s) {
                return Err(dangling(*line, s.to_string()));
            }
        }
    }
    for (line, t) in triples.values() {
        for s in [t.t, t.m_plus, t.m_minus, t.b[0][0], t.b[0][1], t.b[1][0], t.b[1][1]] {
            if !sheet_ok(s) {
                return Err(dangling(*line, s.to_string()));
            }
        }
        for c in t.curves() {
            if !curve_ok(c) {
                return Err(dangling(*line, c.to_string()));
            }
        }
    }
    for (line, b) in branches.values() {
        if !sheet_ok(b.sh) {
            return Err(dangling(*line, b.sh.to_string()));
        }
        if !curve_ok(b.dc) {
            return Err(dangling(*line, b.dc.to_string()));
        }
    }

    Ok(Diagram {
        name,
        sheet_count: n,
        curves: dense("curve", curves)?.into_iter().map(|(_, c)| c).collect(),
        triples: dense("triple", triples)?.into_iter().map(|(_, t)| t).collect(),
        branches: dense("branch", branches)?.into_iter().map(|(_, b)| b).collect(),
    })
}

/// Canonical text: sorted ids, single spaces, no comments.
pub fn serialize_diagram(d: &Diagram) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "diagram {}", d.name);
    let _ = writeln!(out, "sheets {}", d.sheet_count);
    for c in &d.curves {
        let _ = writeln!(out, "curve {} over={} uplus={} uminus={}", c.id, c.over, c.u_plus, c.u_minus);
    }
    for t in &d.triples {
        let _ = writeln!(
            out,
            "triple {} t={} mplus={} mminus={} bpp={} bpm={} bmp={} bmm={} tm={} mbplus={} mbminus={} tbplus={} tbminus={}",
            t.id,
            t.t,
            t.m_plus,
            t.m_minus,
            t.bpp(),
            t.bpm(),
            t.bmp(),
            t.bmm(),
            t.tm,
            t.mb_plus,
            t.mb_minus,
            t.tb_plus,
            t.tb_minus
        );
    }
    for b in &d.branches {
        let _ = writeln!(out, "branch {} sign={} curve={} sheet={}", b.id, b.sign.symbol(), b.dc, b.sh);
    }
    out
}
