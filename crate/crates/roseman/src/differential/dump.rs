use std::collections::HashMap;
use std::fmt::Write;

use super::DiffError;
use crate::dga_core::{Gen, Variant, ZDga, ZElement};

/// Text dump: header, `gen` lines, then `d` lines, all in canonical order.
pub fn dump_dga(dga: &ZDga) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "dga {} variant={} sheets={}", dga.name, dga.variant, dga.sheets);
    for g in dga.generators() {
        let _ = writeln!(out, "gen {g} deg={}", g.degree());
    }
    for (g, e) in dga.iter() {
        let _ = writeln!(out, "d {g} = {e}");
    }
    out
}

pub fn parse_dga_dump(text: &str) -> Result<ZDga, DiffError> {
    let err = |line: usize, msg: &str| DiffError::Dump { line, msg: msg.to_string() };
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| err(1, "empty dump"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 4 || toks[0] != "dga" {
        return Err(err(1, "expected `dga <name> variant=<v> sheets=<n>`"));
    }
    let variant: Variant = toks[2]
        .strip_prefix("variant=")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| err(1, "bad variant"))?;
    let sheets: u32 = toks[3]
        .strip_prefix("sheets=")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| err(1, "bad sheet count"))?;
    let mut dga = ZDga::new(toks[1], variant, sheets);
    let mut stab_deg: HashMap<(u32, u32), u8> = HashMap::new();
    for (i, line) in lines {
        let no = i + 1;
        if let Some(rest) = line.strip_prefix("gen ") {
            let (name, deg) = rest.rsplit_once(" deg=").ok_or_else(|| err(no, "expected `gen <name> deg=<d>`"))?;
            let deg: u8 = deg.trim().parse().map_err(|_| err(no, "bad degree"))?;
            if let Some(r) = name.strip_prefix("stab") {
                let (a, b) = r.split_once('.').ok_or_else(|| err(no, "bad stab name"))?;
                let key = (a.parse().map_err(|_| err(no, "bad stab index"))?, b.parse().map_err(|_| err(no, "bad stab role"))?);
                stab_deg.insert(key, deg);
            }
            let look = |a: u32, b: u32| stab_deg.get(&(a, b)).copied();
            let g = Gen::parse_with(name, &look).map_err(|e| err(no, &e.to_string()))?;
            if g.degree() != deg as u32 {
                return Err(err(no, "degree does not match the family"));
            }
            dga.insert(g, ZElement::zero());
        } else if line.starts_with("d ") {
            let (lhs, rhs) = line[2..].split_once(" = ").ok_or_else(|| err(no, "expected `d <gen> = <element>`"))?;
            let look = |a: u32, b: u32| stab_deg.get(&(a, b)).copied();
            let g = Gen::parse_with(lhs, &look).map_err(|e| err(no, &e.to_string()))?;
            if !dga.contains(g) {
                return Err(err(no, "differential of an undeclared generator"));
            }
            let e = ZElement::parse_with(rhs, &look).map_err(|e| err(no, &e.to_string()))?;
            dga.insert(g, e);
        } else {
            return Err(err(no, "unexpected line"));
        }
    }
    for (g, e) in dga.iter() {
        for x in e.generators() {
            if !dga.contains(x) {
                return Err(err(0, &format!("d {g} mentions undeclared {x}")));
            }
        }
    }
    Ok(dga)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::differential::build_dga;
    use crate::diagram::load_fixture;

    #[test]
    fn dump_round_trips() {
        for name in ["roseman_V_b", "roseman_I_b"] {
            let d = load_fixture(name).unwrap();
            let a = build_dga(&d, Variant::PM).unwrap();
            let text = dump_dga(&a);
            let b = parse_dga_dump(&text).unwrap();
            assert_eq!(dump_dga(&b), text);
        }
    }

    #[test]
    fn header_format() {
        let a = build_dga(&load_fixture("unknot_sphere").unwrap(), Variant::MP).unwrap();
        assert_eq!(dump_dga(&a), "dga unknot_sphere variant=-+ sheets=1\n");
    }
}
