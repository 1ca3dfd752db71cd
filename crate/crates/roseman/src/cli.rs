//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage or input error.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};

use crate::dga_core::{Variant, ZDga};
use crate::diagram::{fixture_source, parse_diagram, validate_diagram, Diagram, FIXTURE_NAMES};
use crate::differential::{build_dga, check_d_squared, dump_dga, parse_dga_dump};
use crate::invariants::{
    characteristic_presentation, count_algebra_maps, default_budget, fingerprint_of, hr0_presentation, Presentation,
};
use crate::moves::{dga_equal_up_to_relabel, parse_move_script, run_move_script, Relabel, RunOptions};

#[derive(Parser, Debug)]
#[command(name = "roseman", about = "Differential graded algebras of surface-knot diagrams")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug, Clone)]
struct VariantArg {
    /// Sign variant, one of --, -+, +-, ++.
    #[arg(long, default_value = "--", allow_hyphen_values = true)]
    variant: String,
}

#[derive(Args, Debug, Clone)]
struct OutArg {
    /// Also write a machine-readable dump here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a diagram's incidence data.
    Validate {
        input: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Build the algebra of a diagram and print its dump.
    Build {
        input: String,
        #[command(flatten)]
        variant: VariantArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Verify that the differential squares to zero.
    CheckD2 {
        input: String,
        #[command(flatten)]
        variant: VariantArg,
        /// Check all four variants.
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        out: OutArg,
    },
    /// Replay a move script and print its cancellation trace.
    RunScript {
        input: String,
        script: PathBuf,
        #[command(flatten)]
        variant: VariantArg,
        /// Skip the d∘d = 0 check after each step.
        #[arg(long)]
        no_strict: bool,
        #[command(flatten)]
        out: OutArg,
    },
    /// Count algebra maps of the characteristic algebra into F_p.
    Count {
        input: String,
        #[command(flatten)]
        variant: VariantArg,
        #[arg(long, default_value_t = 3)]
        p: u32,
        #[arg(long)]
        budget: Option<u64>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Count algebra maps of the degree-0 homology into F_p.
    Hr0 {
        input: String,
        #[command(flatten)]
        variant: VariantArg,
        #[arg(long, default_value_t = 3)]
        p: u32,
        #[arg(long)]
        budget: Option<u64>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Map counts over several primes.
    Fingerprint {
        input: String,
        #[command(flatten)]
        variant: VariantArg,
        #[arg(long, value_delimiter = ',', default_value = "2,3,5")]
        primes: Vec<u32>,
        /// Use the degree-0 homology presentation.
        #[arg(long)]
        hr0: bool,
        #[arg(long)]
        budget: Option<u64>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Compare two algebra dumps, optionally renaming labels of the first.
    Compare {
        left: PathBuf,
        right: PathBuf,
        /// Label map applied to the left side, e.g. "s8=s5 c6=c2".
        #[arg(long, default_value = "")]
        map: String,
        #[command(flatten)]
        out: OutArg,
    },
}

/// Outcome of a command that ran to completion.
enum Verdict {
    Pass,
    Fail,
}

fn variant(v: &VariantArg) -> anyhow::Result<Variant> {
    v.variant.parse().map_err(|e| anyhow!("bad --variant {:?}: {e}", v.variant))
}

fn fixture_alias(stem: &str) -> Option<&'static str> {
    match stem {
        "unknot" => Some("unknot_sphere"),
        "d0_23" => Some("spun_trefoil"),
        "d2_23" => Some("twist2_spun_trefoil"),
        "d1_23" => Some("twist1_spun_trefoil"),
        _ => FIXTURE_NAMES.iter().copied().find(|n| *n == stem),
    }
}

/// Read a file, falling back to a bundled fixture named by the file stem.
fn read_input(input: &str) -> anyhow::Result<String> {
    let path = Path::new(input);
    if path.exists() {
        return std::fs::read_to_string(path).with_context(|| format!("reading {input}"));
    }
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or(input);
    fixture_alias(stem)
        .and_then(fixture_source)
        .map(str::to_string)
        .ok_or_else(|| anyhow!("{input}: no such file or fixture"))
}

fn load_diagram(input: &str) -> anyhow::Result<Diagram> {
    Ok(parse_diagram(&read_input(input)?)?)
}

/// A diagram (built in `v`) or, for `.dga` files, a dump.
fn load_dga(input: &str, v: Variant) -> anyhow::Result<ZDga> {
    if input.ends_with(".dga") {
        return Ok(parse_dga_dump(&read_input(input)?)?);
    }
    Ok(build_dga(&load_diagram(input)?, v)?)
}

fn write_out(out: &OutArg, text: &str) -> anyhow::Result<()> {
    if let Some(p) = &out.out {
        std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn budget(b: Option<u64>) -> u64 {
    b.unwrap_or_else(default_budget)
}

fn count_report(pres: &Presentation, p: u32, b: u64, out: &OutArg, w: &mut dyn Write) -> anyhow::Result<Verdict> {
    let c = count_algebra_maps(pres, p, b)?;
    writeln!(w, "{}", c.report())?;
    write_out(out, &format!("{pres}{}\n", c.report()))?;
    Ok(if c.exact { Verdict::Pass } else { Verdict::Fail })
}

fn execute(cmd: Command, w: &mut dyn Write) -> anyhow::Result<Verdict> {
    match cmd {
        Command::Validate { input, out } => {
            let d = load_diagram(&input)?;
            let report = validate_diagram(&d);
            let text = if report.is_valid() { "valid\n".to_string() } else { report.to_string() };
            write!(w, "{text}")?;
            write_out(&out, &text)?;
            Ok(if report.is_valid() { Verdict::Pass } else { Verdict::Fail })
        }
        Command::Build { input, variant: v, out } => {
            let dga = build_dga(&load_diagram(&input)?, variant(&v)?)?;
            let text = dump_dga(&dga);
            write!(w, "{text}")?;
            write_out(&out, &text)?;
            Ok(Verdict::Pass)
        }
        Command::CheckD2 { input, variant: v, all, out } => {
            let variants = if all { Variant::ALL.to_vec() } else { vec![variant(&v)?] };
            let mut text = String::new();
            let mut ok = true;
            for v in variants {
                let dga = load_dga(&input, v)?;
                let report = check_d_squared(&dga)?;
                ok &= report.passed();
                text += &format!("d2 {v} checked={} offenders={}\n", report.checked, report.offenders.len());
                for (g, r) in &report.offenders {
                    text += &format!("  d d {g} = {r}\n");
                }
            }
            write!(w, "{text}")?;
            write_out(&out, &text)?;
            Ok(if ok { Verdict::Pass } else { Verdict::Fail })
        }
        Command::RunScript { input, script, variant: v, no_strict, out } => {
            let dga = load_dga(&input, variant(&v)?)?;
            let text = std::fs::read_to_string(&script).with_context(|| format!("reading {}", script.display()))?;
            let steps = parse_move_script(&text).map_err(anyhow::Error::msg)?;
            match run_move_script(&dga, &steps, RunOptions { strict: !no_strict }) {
                Ok((result, trace)) => {
                    for c in &trace {
                        writeln!(w, "{c}")?;
                    }
                    write_out(&out, &dump_dga(&result))?;
                    Ok(Verdict::Pass)
                }
                Err(fail) => {
                    for c in &fail.trace {
                        writeln!(w, "{c}")?;
                    }
                    writeln!(w, "{fail}")?;
                    Ok(Verdict::Fail)
                }
            }
        }
        Command::Count { input, variant: v, p, budget: b, out } => {
            let pres = characteristic_presentation(&load_dga(&input, variant(&v)?)?);
            count_report(&pres, p, budget(b), &out, w)
        }
        Command::Hr0 { input, variant: v, p, budget: b, out } => {
            let pres = hr0_presentation(&load_dga(&input, variant(&v)?)?);
            count_report(&pres, p, budget(b), &out, w)
        }
        Command::Fingerprint { input, variant: v, primes, hr0, budget: b, out } => {
            let dga = load_dga(&input, variant(&v)?)?;
            let pres = if hr0 { hr0_presentation(&dga) } else { characteristic_presentation(&dga) };
            let fp = fingerprint_of(&pres, &primes, budget(b))?;
            write!(w, "{fp}")?;
            write_out(&out, &fp.to_string())?;
            Ok(if fp.counts.iter().all(|c| c.exact) { Verdict::Pass } else { Verdict::Fail })
        }
        Command::Compare { left, right, map, out } => {
            let read = |p: &Path| -> anyhow::Result<ZDga> {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                Ok(parse_dga_dump(&text)?)
            };
            let (a, b) = (read(&left)?, read(&right)?);
            let map: Relabel = map.parse()?;
            let cmp = dga_equal_up_to_relabel(&a, &b, &map)?;
            let text = match &cmp.discrepancy {
                None => "equal\n".to_string(),
                Some(d) => format!("different: {d}\n"),
            };
            write!(w, "{text}")?;
            write_out(&out, &text)?;
            Ok(if cmp.equal { Verdict::Pass } else { Verdict::Fail })
        }
    }
}

/// Run with `argv` (including the program name); returns the exit code.
pub fn run_cli<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    match execute(cli.cmd, out) {
        Ok(Verdict::Pass) => 0,
        Ok(Verdict::Fail) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}
