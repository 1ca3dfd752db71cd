use std::fmt;

use super::*;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Violation {
    pub subject: String,
    pub rule: &'static str,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} ({})", self.subject, self.rule, self.detail)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has_rule(&self, rule: &str) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return writeln!(f, "valid");
        }
        for v in &self.violations {
            writeln!(f, "violation {v}")?;
        }
        Ok(())
    }
}

fn check_curve(
    out: &mut Vec<Violation>,
    d: &Diagram,
    subject: &str,
    rule: &'static str,
    c: CurveId,
    want: (SheetId, SheetId, SheetId),
) {
    let Some(curve) = d.curve(c) else { return };
    let got = (curve.over, curve.u_plus, curve.u_minus);
    if got != want {
        out.push(Violation {
            subject: subject.to_string(),
            rule,
            detail: format!(
                "{c} has over={} uplus={} uminus={}, expected over={} uplus={} uminus={}",
                got.0, got.1, got.2, want.0, want.1, want.2
            ),
        });
    }
}

/// Every violated incidence invariant; empty iff the diagram is valid.
pub fn validate_diagram(d: &Diagram) -> ValidationReport {
    let mut out = Vec::new();
    let sheet_ok = |s: SheetId| s.0 >= 1 && s.0 <= d.sheet_count;
    let mut dangling = |subject: String, what: String| {
        out.push(Violation { subject, rule: "dangling reference", detail: what });
    };

    for (k, c) in d.curves.iter().enumerate() {
        if c.id.0 as usize != k + 1 {
            dangling(c.id.to_string(), format!("stored at position {}", k + 1));
        }
        for s in [c.over, c.u_plus, c.u_minus] {
            if !sheet_ok(s) {
                dangling(c.id.to_string(), s.to_string());
            }
        }
    }
    for t in &d.triples {
        for s in [t.t, t.m_plus, t.m_minus, t.bpp(), t.bpm(), t.bmp(), t.bmm()] {
            if !sheet_ok(s) {
                dangling(t.id.to_string(), s.to_string());
            }
        }
        for c in t.curves() {
            if d.curve(c).is_none() {
                dangling(t.id.to_string(), c.to_string());
            }
        }
    }
    for b in &d.branches {
        if !sheet_ok(b.sh) {
            dangling(b.id.to_string(), b.sh.to_string());
        }
        if d.curve(b.dc).is_none() {
            dangling(b.id.to_string(), b.dc.to_string());
        }
    }

    for t in &d.triples {
        let subject = t.id.to_string();
        let cs = t.curves();
        let roles = [
            (t.t, t.m_plus, t.m_minus),
            (t.m_plus, t.bpp(), t.bpm()),
            (t.m_minus, t.bmp(), t.bmm()),
            (t.t, t.bpp(), t.bmp()),
            (t.t, t.bpm(), t.bmm()),
        ];
        // A curve may fill two roles only when it leaves the triple point and
        // comes back, which forces the two roles to agree.
        for i in 0..5 {
            for j in i + 1..5 {
                if cs[i] == cs[j] && roles[i] != roles[j] {
                    out.push(Violation {
                        subject: subject.clone(),
                        rule: "triple curves distinct",
                        detail: format!("{} used twice", cs[i]),
                    });
                }
            }
        }
        check_curve(&mut out, d, &subject, "triple incidence tm", t.tm, (t.t, t.m_plus, t.m_minus));
        check_curve(&mut out, d, &subject, "triple incidence mb+", t.mb_plus, (t.m_plus, t.bpp(), t.bpm()));
        check_curve(&mut out, d, &subject, "triple incidence mb-", t.mb_minus, (t.m_minus, t.bmp(), t.bmm()));
        check_curve(&mut out, d, &subject, "triple incidence tb+", t.tb_plus, (t.t, t.bpp(), t.bmp()));
        check_curve(&mut out, d, &subject, "triple incidence tb-", t.tb_minus, (t.t, t.bpm(), t.bmm()));
    }
    for b in &d.branches {
        check_curve(&mut out, d, &b.id.to_string(), "branch-curve identity", b.dc, (b.sh, b.sh, b.sh));
    }
    ValidationReport { violations: out }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triple_diagram() -> Diagram {
        parse_diagram(
            "diagram t\nsheets 7\n\
             curve c1 over=s1 uplus=s2 uminus=s3\n\
             curve c2 over=s2 uplus=s4 uminus=s5\n\
             curve c3 over=s3 uplus=s6 uminus=s7\n\
             curve c4 over=s1 uplus=s4 uminus=s6\n\
             curve c5 over=s1 uplus=s5 uminus=s7\n\
             triple t1 t=s1 mplus=s2 mminus=s3 bpp=s4 bpm=s5 bmp=s6 bmm=s7 tm=c1 mbplus=c2 mbminus=c3 tbplus=c4 tbminus=c5\n",
        )
        .unwrap()
    }

    #[test]
    fn abstract_triple_is_valid() {
        assert!(validate_diagram(&triple_diagram()).is_valid());
    }

    #[test]
    fn tm_over_must_be_top() {
        let mut d = triple_diagram();
        d.curves[0].over = SheetId(2);
        let r = validate_diagram(&d);
        assert!(r.has_rule("triple incidence tm"));
        assert_eq!(r.violations.len(), 1);
    }

    #[test]
    fn branch_curve_identity() {
        let d = parse_diagram(
            "diagram b\nsheets 2\ncurve c1 over=s2 uplus=s1 uminus=s1\nbranch b1 sign=+ curve=c1 sheet=s1\n",
        )
        .unwrap();
        assert!(validate_diagram(&d).has_rule("branch-curve identity"));
    }

    #[test]
    fn returning_curve_with_matching_roles() {
        let d = parse_diagram(
            "diagram r\nsheets 4\n\
             curve c1 over=s1 uplus=s2 uminus=s3\n\
             curve c2 over=s1 uplus=s2 uminus=s3\n\
             curve c3 over=s1 uplus=s1 uminus=s1\n\
             curve c4 over=s1 uplus=s3 uminus=s4\n\
             triple t1 t=s1 mplus=s1 mminus=s1 bpp=s2 bpm=s3 bmp=s3 bmm=s4 tm=c3 mbplus=c1 mbminus=c4 tbplus=c2 tbminus=c4\n",
        )
        .unwrap();
        assert!(validate_diagram(&d).is_valid());
    }

    #[test]
    fn repeated_triple_curve() {
        let mut d = triple_diagram();
        d.triples[0].tb_minus = CurveId(4);
        assert!(validate_diagram(&d).has_rule("triple curves distinct"));
    }
}
