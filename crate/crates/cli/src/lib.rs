//! Command dispatch for the `einf` binary. Every command returns a JSON report.

use std::path::Path;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use einf_core::algebra::{build_sdr, build_sdr_variant, homology, SdrError};
use einf_core::cobar::{build_cobar, check_d_squared_cobar, gr_h0_ranks, CobarError};
use einf_core::coalgebra::{chain_structure, reduce, CoalgebraError, CoalgebraStructure};
use einf_core::formats::{parse_coalg, write_coalg, FormatError};
use einf_core::invariants::{class_equals, massey_invariant, sq_dual_invariant, InvariantClass, InvariantError, MasseyMode};
use einf_core::operad::check_d_squared;
use einf_core::simplicial::{parse_sset, SimplicialSet, SsetError};
use einf_core::transfer::{transfer, verify_relations, TransferError, TransferPackage};
use einf_core::{fixtures, Int};

#[derive(Parser, Debug)]
#[command(name = "einf", version, about = "Integral E-infinity coalgebras on simplicial chains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Highest cup-i coproduct built on chains.
    #[arg(long = "max-cup", global = true, default_value_t = 3)]
    pub max_cup: usize,
    /// Cobar truncation length N (ranks are reported for lengths below N).
    #[arg(long = "max-len", global = true, default_value_t = 4)]
    pub max_len: usize,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
    /// Use a randomized retraction (seeded) instead of the canonical one.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and check an input.
    Validate { input: String },
    /// Integral homology of a simplicial set.
    Homology { input: String },
    /// Chain-level coalgebra operators.
    Coalgebra {
        input: String,
        /// Drop the vertex (single-vertex inputs only).
        #[arg(long)]
        reduced: bool,
    },
    /// Transferred structure on homology.
    Transfer { input: String },
    /// Word-length graded ranks of H_0 of the cobar construction.
    Cobar { input: String },
    /// Square and triple Massey classes.
    Invariant {
        input: String,
        /// Require m3_1 to land in the Lie lattice without normalization.
        #[arg(long)]
        strict: bool,
    },
    /// Compare invariant classes of two inputs; `--seed` applies to the second.
    Compare {
        first: String,
        second: String,
        #[arg(long)]
        strict: bool,
    },
    /// Operad, structure, retraction, transfer and cobar checks on the bundled fixtures.
    Selfcheck,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {0}: {1}")]
    Input(String, String),
    #[error(transparent)]
    Sset(#[from] SsetError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Coalgebra(#[from] CoalgebraError),
    #[error(transparent)]
    Retraction(#[from] SdrError),
    #[error(transparent)]
    Transfer(#[from] TransferError),
    #[error(transparent)]
    Cobar(#[from] CobarError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error("{0}")]
    Usage(String),
    #[error("checks failed: {}", .0.join("; "))]
    Check(Vec<String>),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Input(..) => "input",
            CliError::Sset(_) => "simplicial_set",
            CliError::Format(_) => "format",
            CliError::Coalgebra(_) => "coalgebra",
            CliError::Retraction(_) => "retraction",
            CliError::Transfer(_) => "transfer",
            CliError::Cobar(_) => "cobar",
            CliError::Invariant(_) => "invariant",
            CliError::Usage(_) => "usage",
            CliError::Check(_) => "check",
        }
    }

    pub fn report(&self, command: &str) -> Value {
        json!({"command": command, "error": {"kind": self.kind(), "message": self.to_string()}})
    }
}

pub enum Input {
    Sset(SimplicialSet),
    Coalg(CoalgebraStructure<Int>),
}

/// Reads a file, or a bundled fixture by bare name (`torus`, `borromean`, ...).
pub fn load(arg: &str) -> Result<Input, CliError> {
    let path = Path::new(arg);
    let (text, coalg) = if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(arg.into(), e.to_string()))?;
        (text, path.extension().is_some_and(|e| e == "coalg"))
    } else if let Some(t) = fixtures::sset(arg) {
        (t.to_string(), false)
    } else if let Some(t) = fixtures::coalg(arg) {
        (t.to_string(), true)
    } else {
        return Err(CliError::Input(arg.into(), "no such file or bundled fixture".into()));
    };
    if coalg {
        Ok(Input::Coalg(parse_coalg(&text)?))
    } else {
        Ok(Input::Sset(parse_sset(&text)?))
    }
}

fn sset(arg: &str) -> Result<SimplicialSet, CliError> {
    match load(arg)? {
        Input::Sset(x) => Ok(x),
        Input::Coalg(_) => Err(CliError::Usage(format!("{arg}: this command needs a simplicial set"))),
    }
}

fn package(x: &SimplicialSet, max_cup: usize, seed: Option<u64>) -> Result<TransferPackage<Int>, CliError> {
    let s = chain_structure::<Int>(x, max_cup.max(2))?;
    let canonical = build_sdr(s.complex().clone())?;
    let sdr = match seed {
        Some(seed) => build_sdr_variant(s.complex().clone(), seed)?.align_to(&canonical)?,
        None => canonical,
    };
    Ok(transfer(&s, &sdr)?)
}

/// Homology-level structure of either input kind.
fn homology_structure(arg: &str, max_cup: usize, seed: Option<u64>) -> Result<CoalgebraStructure<Int>, CliError> {
    match load(arg)? {
        Input::Coalg(s) => Ok(s),
        Input::Sset(x) => Ok(package(&x, max_cup, seed)?.homology),
    }
}

fn class_json(c: &InvariantClass<Int>) -> Value {
    let (free, torsion) = c.group.structure();
    json!({
        "group": {"ambient_rank": c.group.rank(), "free_rank": free, "torsion": torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>()},
        "representative": c.representative.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "zero": c.is_zero(),
    })
}

fn mode(strict: bool) -> MasseyMode {
    if strict {
        MasseyMode::Strict
    } else {
        MasseyMode::Normalized
    }
}

pub fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Homology { .. } => "homology",
        Command::Coalgebra { .. } => "coalgebra",
        Command::Transfer { .. } => "transfer",
        Command::Cobar { .. } => "cobar",
        Command::Invariant { .. } => "invariant",
        Command::Compare { .. } => "compare",
        Command::Selfcheck => "selfcheck",
    }
}

pub fn run(cli: &Cli) -> Result<Value, CliError> {
    if cli.max_len < 1 {
        return Err(CliError::Usage("--max-len must be at least 1".into()));
    }
    let result = match &cli.command {
        Command::Validate { input } => match load(input)? {
            Input::Sset(x) => json!({"kind": "sset", "counts": x.counts(), "vertices": x.vertices()}),
            Input::Coalg(s) => json!({"kind": "coalg", "ranks": s.complex().ranks(), "relations": "verified"}),
        },
        Command::Homology { input } => {
            let x = sset(input)?;
            let cx = x.normalized_chains::<Int>().map_err(CoalgebraError::from)?;
            let h = homology(&cx);
            json!({
                "betti": h.betti(),
                "degrees": h.degrees.iter().map(|d| json!({
                    "degree": d.degree,
                    "free_rank": d.free_rank,
                    "torsion": d.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                    "representatives": d.representatives.iter().map(|r| cx.render_chain(r)).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            })
        }
        Command::Coalgebra { input, reduced } => {
            let x = sset(input)?;
            let mut s = chain_structure::<Int>(&x, cli.max_cup)?;
            if *reduced {
                s = reduce(&s)?;
            }
            json!({"max_cup": cli.max_cup, "reduced": reduced, "structure": write_coalg(&s)})
        }
        Command::Transfer { input } => {
            let p = package(&sset(input)?, cli.max_cup, cli.seed)?;
            let bad = verify_relations(&p);
            if !bad.is_empty() {
                return Err(CliError::Check(bad));
            }
            let h = p.homology.complex();
            let morphism: serde_json::Map<String, Value> = p
                .morphism
                .iter()
                .map(|(g, op)| {
                    let table: serde_json::Map<String, Value> = op
                        .render()
                        .into_iter()
                        .filter(|(_, img)| img != "0")
                        .map(|(c, img)| (c, Value::String(img)))
                        .collect();
                    (g.name(), Value::Object(table))
                })
                .collect();
            json!({
                "seed": cli.seed,
                "homology_basis": (0..h.len()).map(|c| json!({"name": h.label(c), "degree": h.degree(c)})).collect::<Vec<_>>(),
                "structure": write_coalg(&p.homology),
                "morphism": morphism,
                "relations": "verified",
            })
        }
        Command::Cobar { input } => {
            let x = sset(input)?;
            let s = chain_structure::<Int>(&x, 0)?;
            let t = build_cobar(&s, cli.max_len)?;
            let gr = gr_h0_ranks(&t);
            let d2 = check_d_squared_cobar(&t);
            json!({
                "max_len": cli.max_len,
                "ranks": gr.ranks,
                "torsion": gr.torsion.iter().map(|v| v.iter().map(|t| t.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "d_squared": {"checked": d2.checked, "violations": d2.violations},
            })
        }
        Command::Invariant { input, strict } => {
            let s = homology_structure(input, cli.max_cup, cli.seed)?;
            json!({
                "mode": if *strict { "strict" } else { "normalized" },
                "square": class_json(&sq_dual_invariant(&s)?),
                "massey": class_json(&massey_invariant(&s, mode(*strict))?),
            })
        }
        Command::Compare { first, second, strict } => {
            let a = homology_structure(first, cli.max_cup, None)?;
            let b = homology_structure(second, cli.max_cup, cli.seed)?;
            let sq = class_equals(&sq_dual_invariant(&a)?, &sq_dual_invariant(&b)?)?;
            let massey = class_equals(&massey_invariant(&a, mode(*strict))?, &massey_invariant(&b, mode(*strict))?)?;
            json!({"square_equal": sq, "massey_equal": massey})
        }
        Command::Selfcheck => {
            let checks = selfcheck(cli.max_cup, cli.max_len);
            let failed: Vec<String> =
                checks.iter().filter(|(_, ok, _)| !ok).map(|(n, _, d)| format!("{n}: {d}")).collect();
            if !failed.is_empty() {
                return Err(CliError::Check(failed));
            }
            Value::Array(checks.into_iter().map(|(n, ok, d)| json!({"check": n, "ok": ok, "detail": d})).collect())
        }
    };
    Ok(json!({"command": command_name(&cli.command), "result": result}))
}

/// `(name, passed, detail)` per check.
pub fn selfcheck(max_cup: usize, max_len: usize) -> Vec<(String, bool, String)> {
    let mut out = Vec::new();
    let ops = check_d_squared(5, 4);
    out.push(("operad d² = 0".into(), ops.is_clean(), format!("{} generators, violations {:?}", ops.checked.len(), ops.violations)));
    for (name, text) in fixtures::SSET {
        let x = match parse_sset(text) {
            Ok(x) => x,
            Err(e) => {
                out.push((format!("{name}: parse"), false, e.to_string()));
                continue;
            }
        };
        let s = match chain_structure::<Int>(&x, max_cup.max(2)) {
            Ok(s) => s,
            Err(e) => {
                out.push((format!("{name}: chain structure"), false, e.to_string()));
                continue;
            }
        };
        out.push((format!("{name}: chain structure and cup ladder"), true, format!("max cup {}", max_cup.max(2))));
        let torsion_free = fixtures::TORSION_FREE.contains(name);
        match build_sdr(s.complex().clone()) {
            Ok(sdr) => {
                let bad = sdr.verify();
                out.push((format!("{name}: retraction"), bad.is_empty() && torsion_free, bad.join(", ")));
                match transfer(&s, &sdr) {
                    Ok(p) => {
                        let bad = verify_relations(&p);
                        out.push((format!("{name}: transfer"), bad.is_empty(), bad.join(", ")));
                    }
                    Err(e) => out.push((format!("{name}: transfer"), false, e.to_string())),
                }
            }
            Err(e) => {
                let expected = !torsion_free && matches!(e, SdrError::TorsionPresent { .. });
                out.push((format!("{name}: retraction"), expected, e.to_string()));
            }
        }
        if x.vertices() == 1 {
            match build_cobar(&s, max_len) {
                Ok(t) => {
                    let r = check_d_squared_cobar(&t);
                    out.push((format!("{name}: cobar D² = 0"), r.is_clean(), format!("{} words", r.checked)));
                }
                Err(e) => out.push((format!("{name}: cobar"), false, e.to_string())),
            }
        }
    }
    for (name, text) in fixtures::COALG {
        let r = parse_coalg::<Int>(text);
        out.push((format!("{name}: relations"), r.is_ok(), r.err().map(|e| e.to_string()).unwrap_or_default()));
    }
    out
}

/// Renders a report with sorted keys and a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}


#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("einf").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn bare_names_resolve_to_fixtures() {
        assert!(matches!(load("torus"), Ok(Input::Sset(_))));
        assert!(matches!(load("borromean"), Ok(Input::Coalg(_))));
        assert_eq!(load("nope").err().map(|e| e.kind()), Some("input"));
    }

    #[test]
    fn global_flags_follow_the_subcommand() {
        let cli = parse(&["cobar", "wedge2", "--max-len", "2", "--seed", "3"]);
        assert_eq!((cli.max_len, cli.seed), (2, Some(3)));
        assert_eq!(command_name(&cli.command), "cobar");
    }

    #[test]
    fn commands_need_the_right_input() {
        let err = run(&parse(&["homology", "borromean"])).unwrap_err();
        assert_eq!(err.kind(), "usage");
        assert_eq!(err.report("homology")["command"], "homology");
    }
}
