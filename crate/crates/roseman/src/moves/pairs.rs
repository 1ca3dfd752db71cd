use super::*;
use crate::dga_core::Variant;

/// A pair of diagrams differing by one local move, with the scripts that
/// reduce both sides to a common algebra.
#[derive(Clone, Copy, Debug)]
pub struct MovePair {
    pub name: &'static str,
    pub a: &'static str,
    pub b: &'static str,
    pub script_a: &'static str,
    pub script_b: &'static str,
}

macro_rules! pairs {
    ($($name:literal => $stem:literal),* $(,)?) => {
        /// Bundled move pairs.
        pub const MOVE_PAIRS: &[MovePair] = &[$(MovePair {
            name: $name,
            a: concat!($stem, "_a"),
            b: concat!($stem, "_b"),
            script_a: include_str!(concat!("../../fixtures/scripts/", $stem, "_a.mvs")),
            script_b: include_str!(concat!("../../fixtures/scripts/", $stem, "_b.mvs")),
        }),*];
    };
}

pairs! {
    "I" => "roseman_I",
    "III" => "roseman_III",
    "IV" => "roseman_IV",
    "V" => "roseman_V",
    "VI+" => "roseman_VI",
    "VI-" => "roseman_VI_neg",
    "VII" => "roseman_VII",
}

pub fn move_pair(name: &str) -> Option<&'static MovePair> {
    MOVE_PAIRS.iter().find(|p| p.name == name)
}

/// Outcome of reducing both sides of a pair.
#[derive(Clone, Debug)]
pub struct PairOutcome {
    pub comparison: Comparison,
    pub trace_a: Vec<Cancellation<LaurentInt>>,
    pub trace_b: Vec<Cancellation<LaurentInt>>,
}

/// Build both sides in `variant`, run their scripts, and compare.
pub fn check_move_pair(pair: &MovePair, variant: Variant) -> anyhow::Result<PairOutcome> {
    let side = |fixture: &str, script: &str| -> anyhow::Result<(ZDga, Vec<Cancellation<LaurentInt>>)> {
        let d = crate::diagram::load_fixture(fixture)?;
        let dga = crate::differential::build_dga(&d, variant)?;
        let s = parse_move_script(script).map_err(anyhow::Error::msg)?;
        Ok(run_move_script(&dga, &s, RunOptions::default()).map_err(|e| anyhow::anyhow!("{fixture}: {e}"))?)
    };
    let (da, trace_a) = side(pair.a, pair.script_a)?;
    let (db, trace_b) = side(pair.b, pair.script_b)?;
    let comparison = dga_equal_up_to_relabel(&da, &db, &Relabel::identity())?;
    Ok(PairOutcome { comparison, trace_a, trace_b })
}
