use std::fmt;

use super::*;

/// One line of a move script.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Destab { h: Label, l: Label },
    Stab(u32),
    /// Generator names; stabilisation generators resolve at run time.
    Cancel { x: String, y: String },
    Relabel(Relabel),
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Destab { h, l } => write!(f, "destab {}:{h} -> {}:{l}", h.ns.word(), l.ns.word()),
            Step::Stab(i) => write!(f, "stab {i}"),
            Step::Cancel { x, y } => write!(f, "cancel {x} {y}"),
            Step::Relabel(r) => write!(f, "relabel {r}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MoveScript {
    pub steps: Vec<Step>,
}

impl fmt::Display for MoveScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

fn typed_label(tok: &str, no: usize) -> Result<Label, String> {
    let (word, lab) = tok.split_once(':').ok_or_else(|| format!("line {no}: expected kind:label, got {tok:?}"))?;
    let l: Label = lab.parse().map_err(|e| format!("line {no}: {e}"))?;
    if l.ns.word() != word {
        return Err(format!("line {no}: {lab} is not a {word} label"));
    }
    Ok(l)
}

/// Parse the script format; `#` starts a comment.
pub fn parse_move_script(text: &str) -> Result<MoveScript, String> {
    let mut steps = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let step = match toks[0] {
            "destab" => {
                if toks.len() != 4 || toks[2] != "->" {
                    return Err(format!("line {no}: expected `destab kind:label -> kind:label`"));
                }
                Step::Destab { h: typed_label(toks[1], no)?, l: typed_label(toks[3], no)? }
            }
            "stab" => {
                let d = toks
                    .get(1)
                    .and_then(|s| s.parse().ok())
                    .filter(|_| toks.len() == 2)
                    .ok_or_else(|| format!("line {no}: expected `stab <degree>`"))?;
                Step::Stab(d)
            }
            "cancel" => {
                if toks.len() != 3 {
                    return Err(format!("line {no}: expected `cancel <x> <y>`"));
                }
                Step::Cancel { x: toks[1].to_string(), y: toks[2].to_string() }
            }
            "relabel" => Step::Relabel(toks[1..].join(" ").parse().map_err(|e| format!("line {no}: {e}"))?),
            other => return Err(format!("line {no}: unknown step {other:?}")),
        };
        steps.push(step);
    }
    Ok(MoveScript { steps })
}

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    /// Re-check d∘d = 0 after every step.
    pub strict: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { strict: true }
    }
}

/// A step failed; carries the trace of everything done before it.
#[derive(Debug, Clone)]
pub struct ScriptFailure {
    pub step: usize,
    pub trace: Vec<Cancellation<LaurentInt>>,
    pub error: MoveError,
}

impl fmt::Display for ScriptFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {} failed: {}", self.step + 1, self.error)
    }
}

impl std::error::Error for ScriptFailure {}

fn resolve(dga: &ZDga, name: &str) -> Result<Gen, MoveError> {
    let look = |i: u32, r: u32| {
        dga.generators()
            .find(|g| g.stab_parts() == Some((i, r)))
            .map(|g| g.degree() as u8)
    };
    let g = Gen::parse_with(name, &look).map_err(|_| MoveError::UnknownGenerator(name.to_string()))?;
    if !dga.contains(g) {
        return Err(MoveError::UnknownGenerator(name.to_string()));
    }
    Ok(g)
}

fn run_step(dga: &ZDga, step: &Step, trace: &mut Vec<Cancellation<LaurentInt>>) -> Result<ZDga, MoveError> {
    match step {
        Step::Destab { h, l } => destabilize_along(dga, *h, *l, trace, None),
        Step::Stab(i) => Ok(stabilize(dga, *i).0),
        Step::Cancel { x, y } => {
            let (out, rec) = cancel_pair(dga, resolve(dga, x)?, resolve(dga, y)?)?;
            trace.push(rec);
            Ok(out)
        }
        Step::Relabel(r) => apply_relabel(dga, r),
    }
}

/// Apply the steps in order, recording every cancellation.
pub fn run_move_script(
    dga: &ZDga,
    script: &MoveScript,
    opts: RunOptions,
) -> Result<(ZDga, Vec<Cancellation<LaurentInt>>), ScriptFailure> {
    let mut trace = Vec::new();
    let mut cur = dga.clone();
    for (i, step) in script.steps.iter().enumerate() {
        let res = run_step(&cur, step, &mut trace).and_then(|next| {
            if opts.strict {
                ensure_d_squared(&next)?;
            }
            Ok(next)
        });
        match res {
            Ok(next) => cur = next,
            Err(error) => return Err(ScriptFailure { step: i, trace, error }),
        }
    }
    Ok((cur, trace))
}
