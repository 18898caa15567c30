//! The `ppm` command-line tool.
//!
//! Exit codes: 0 success (or "contained"), 1 "not contained" / disagreement,
//! 2 indeterminate, 64 usage error, 65 malformed or unsuitable input,
//! 66 missing input file, 74 I/O failure.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde_json::json;

use crate::decomp::{k_spiral, k_track, spiral_decompose, stair_decompose, Decomposition, SpiralDecomposition, StairDecomposition};
use crate::error::Error;
use crate::matcher::{run_matcher, Algorithm, MatchBudget, MatchOutcome};
use crate::perm::{classify_principal, contains_bruteforce, parse_perm_file, write_perm_file, Complexity, Permutation};
use crate::pgraph::{build_graph, graph_json, stair_order, vertex_separation};
use crate::reduction::{build_instance, parse_dimacs, random_formula, sat_bruteforce, Decision, TwirledInstance};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INDETERMINATE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_NO_INPUT: i32 = 66;
pub const EXIT_IO: i32 = 74;

#[derive(Parser, Debug)]
#[command(name = "ppm", version, about = "Permutation pattern matching toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether TEXT contains PATTERN.
    Match {
        /// Pattern: a .perm file or inline values such as 132 or "1 3 2".
        pattern: String,
        /// Text: a .perm file or inline values.
        text: String,
        #[arg(long, value_enum, default_value_t = AlgoArg::Backtrack)]
        algo: AlgoArg,
        /// Search-node limit for backtracking.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        budget: Option<u64>,
    },
    /// Build the pattern and text for a 3-CNF formula.
    Reduce {
        cnf: PathBuf,
        /// Write the twirled (skew-merged) instance instead.
        #[arg(long)]
        twirl: bool,
        #[arg(short = 'o', long = "out")]
        out: PathBuf,
    },
    /// Compare brute-force SAT with the reduction's assignment search.
    VerifyReduction { cnf: PathBuf },
    /// Print a stair or spiral decomposition as JSON.
    Decompose {
        perm: String,
        #[command(flatten)]
        kind: KindArgs,
    },
    /// Print the k-track.
    Track {
        k: usize,
        #[arg(long)]
        json: bool,
    },
    /// Print the k-spiral.
    Spiral {
        k: usize,
        #[arg(long)]
        json: bool,
    },
    /// Print the pattern graph with good/bad edge labels.
    Graph {
        perm: String,
        /// Decomposition JSON (inline or a file path); defaults to one block.
        #[arg(long)]
        blocks: Option<String>,
    },
    /// Complexity of pattern matching for the class avoiding one permutation.
    Classify { perm: String },
    /// Print a random 3-CNF formula in DIMACS format.
    RandomCnf {
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        clauses: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
#[group(multiple = false)]
struct KindArgs {
    #[arg(long)]
    stair: bool,
    #[arg(long)]
    spiral: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AlgoArg {
    Brute,
    Backtrack,
    Sepdp,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Io(_) => EXIT_IO,
            _ => EXIT_DATA,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn fail(code: i32, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

type CliResult = std::result::Result<i32, Failure>;

/// Runs the tool on `args` (including the program name) and returns the
/// exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "ppm: {}", f.message);
            f.code
        }
    }
}

fn read_file(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| {
        let code = if e.kind() == std::io::ErrorKind::NotFound {
            EXIT_NO_INPUT
        } else {
            EXIT_IO
        };
        fail(code, format!("{}: {e}", path.display()))
    })
}

/// A permutation given as a file path or inline.
fn load_perm(arg: &str) -> std::result::Result<Permutation, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        return parse_perm_file(&read_file(path)?)
            .map_err(|e| fail(EXIT_DATA, format!("{arg}: {e}")));
    }
    let inline = arg.replace(',', " ");
    match inline.parse::<Permutation>() {
        Ok(p) => Ok(p),
        Err(_) if arg.contains('/') || arg.contains('.') => {
            Err(fail(EXIT_NO_INPUT, format!("{arg}: no such file")))
        }
        Err(e) => Err(fail(EXIT_DATA, format!("{arg}: {e}"))),
    }
}

fn print_json(out: &mut dyn Write, value: &serde_json::Value) -> std::result::Result<(), Failure> {
    writeln!(out, "{value}").map_err(|e| fail(EXIT_IO, e.to_string()))
}

fn print_line(out: &mut dyn Write, line: impl std::fmt::Display) -> std::result::Result<(), Failure> {
    writeln!(out, "{line}").map_err(|e| fail(EXIT_IO, e.to_string()))
}

fn dispatch(command: Command, out: &mut dyn Write) -> CliResult {
    match command {
        Command::Match {
            pattern,
            text,
            algo,
            budget,
        } => {
            let (p, t) = (load_perm(&pattern)?, load_perm(&text)?);
            let algorithm = match algo {
                AlgoArg::Brute => Algorithm::Brute,
                AlgoArg::Backtrack => Algorithm::Backtrack,
                AlgoArg::Sepdp => Algorithm::SeparatorDp,
            };
            let budget = match budget {
                Some(n) => MatchBudget::new(n)?,
                None => MatchBudget::unlimited(),
            };
            let outcome = run_matcher(algorithm, &p, &t, budget)?;
            let (value, code) = match &outcome {
                MatchOutcome::Contained(o) => (json!({"contains": true, "occurrence": o.indices()}), EXIT_OK),
                MatchOutcome::NotContained => (json!({"contains": false, "occurrence": null}), EXIT_NEGATIVE),
                MatchOutcome::Indeterminate => (json!({"contains": null, "occurrence": null}), EXIT_INDETERMINATE),
            };
            print_json(out, &value)?;
            Ok(code)
        }
        Command::Reduce { cnf, twirl, out: dir } => {
            let formula = parse_dimacs(&read_file(&cnf)?)?;
            let inst = build_instance(&formula)?;
            let (pattern, text, meta) = if twirl {
                let tw = crate::reduction::twirled::twirl_instance(inst)?;
                (tw.pattern().clone(), tw.text().clone(), twirled_meta(&tw))
            } else {
                (inst.pattern().clone(), inst.text().clone(), inst.meta_json())
            };
            let io = |e: std::io::Error| fail(EXIT_IO, format!("{}: {e}", dir.display()));
            fs::create_dir_all(&dir).map_err(io)?;
            fs::write(dir.join("pattern.perm"), write_perm_file(&pattern)).map_err(io)?;
            fs::write(dir.join("text.perm"), write_perm_file(&text)).map_err(io)?;
            let meta_text = serde_json::to_string_pretty(&meta).map_err(Error::from)?;
            fs::write(dir.join("meta.json"), meta_text + "\n").map_err(io)?;
            print_json(
                out,
                &json!({"pattern_size": pattern.len(), "text_size": text.len(), "twirled": twirl, "dir": dir}),
            )?;
            Ok(EXIT_OK)
        }
        Command::VerifyReduction { cnf } => {
            let formula = parse_dimacs(&read_file(&cnf)?)?;
            let oracle = sat_bruteforce(&formula)?;
            let inst = build_instance(&formula)?;
            let decision = inst.decide_via_assignments()?;
            let witness_ok = match &decision {
                Decision::Satisfiable(phi, occ) => {
                    let back = inst.assignment_from_occurrence(occ)?;
                    back == *phi && formula.satisfied_by(phi)
                }
                Decision::Unsatisfiable => true,
            };
            match (oracle.is_some(), decision.is_satisfiable(), witness_ok) {
                (true, true, true) => print_line(out, "AGREE: satisfiable")?,
                (false, false, _) => print_line(out, "AGREE: unsatisfiable")?,
                (sat, red, _) => {
                    print_line(
                        out,
                        format!(
                            "DISAGREE: brute force says {}, reduction says {}",
                            if sat { "satisfiable" } else { "unsatisfiable" },
                            if red { "satisfiable" } else { "unsatisfiable" }
                        ),
                    )?;
                    return Ok(EXIT_NEGATIVE);
                }
            }
            Ok(EXIT_OK)
        }
        Command::Decompose { perm, kind } => {
            let p = load_perm(&perm)?;
            let dec: Decomposition = if kind.stair {
                stair_decompose(&p)?.into()
            } else if kind.spiral {
                spiral_decompose(&p)?.into()
            } else if contains_bruteforce(&Permutation::decreasing(3), &p).is_none() {
                stair_decompose(&p)?.into()
            } else {
                spiral_decompose(&p)?.into()
            };
            print_json(out, &dec.to_json())?;
            Ok(EXIT_OK)
        }
        Command::Track { k, json } => {
            let d: Decomposition = k_track(k)?.into();
            emit_universal(out, &d, json)
        }
        Command::Spiral { k, json } => {
            let d: Decomposition = k_spiral(k)?.into();
            emit_universal(out, &d, json)
        }
        Command::Graph { perm, blocks } => {
            let p = load_perm(&perm)?;
            let dec = match blocks {
                Some(arg) => parse_blocks_arg(&p, &arg)?,
                None => single_block(&p)?,
            };
            let graph = build_graph(&p)?;
            let order = stair_order(&dec);
            let mut value = graph_json(&graph, &dec.block_index());
            value["vertex_separation"] = json!(vertex_separation(&graph, &order)?);
            value["order"] = json!(order);
            print_json(out, &value)?;
            Ok(EXIT_OK)
        }
        Command::Classify { perm } => {
            let p = load_perm(&perm)?;
            let verdict = match classify_principal(&p)? {
                Complexity::Polynomial => "polynomial",
                Complexity::NpComplete => "np-complete",
            };
            print_line(out, verdict)?;
            Ok(EXIT_OK)
        }
        Command::RandomCnf { vars, clauses, seed } => {
            let mut rng = StdRng::seed_from_u64(seed);
            let f = random_formula(vars, clauses, &mut rng)?;
            write!(out, "{}", f.to_dimacs()).map_err(|e| fail(EXIT_IO, e.to_string()))?;
            Ok(EXIT_OK)
        }
    }
}

fn emit_universal(out: &mut dyn Write, d: &Decomposition, as_json: bool) -> CliResult {
    if as_json {
        print_json(out, &d.to_json())?;
    } else {
        print_line(out, d.host())?;
    }
    Ok(EXIT_OK)
}

/// Everything in one block; a monotone permutation also gets its
/// natural kind.
fn single_block(p: &Permutation) -> std::result::Result<Decomposition, Failure> {
    let blocks = vec![p.values().to_vec()];
    if let Ok(d) = StairDecomposition::relaxed(p.clone(), blocks.clone()) {
        return Ok(d.into());
    }
    Ok(SpiralDecomposition::relaxed(p.clone(), blocks)?.into())
}

/// `--blocks` accepts a decomposition document or a bare list of blocks,
/// inline or in a file.
fn parse_blocks_arg(p: &Permutation, arg: &str) -> std::result::Result<Decomposition, Failure> {
    let path = Path::new(arg);
    let text = if path.is_file() {
        read_file(path)?
    } else {
        arg.to_string()
    };
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| fail(EXIT_DATA, format!("--blocks: {e}")))?;
    let dec = if value.is_array() {
        let blocks: Vec<Vec<usize>> = serde_json::from_value(value).map_err(Error::from)?;
        match StairDecomposition::relaxed(p.clone(), blocks.clone()) {
            Ok(d) => d.into(),
            Err(_) => SpiralDecomposition::relaxed(p.clone(), blocks)?.into(),
        }
    } else {
        Decomposition::from_json(value)?
    };
    if dec.host() != p {
        return Err(fail(EXIT_DATA, "--blocks describes a different permutation"));
    }
    Ok(dec)
}

fn twirled_meta(tw: &TwirledInstance) -> serde_json::Value {
    let mut meta = tw.base.meta_json();
    let remap = |key: &str, map: &crate::twirl::ElementMap, host: &Permutation, meta: &mut serde_json::Value| {
        let source = meta[key].as_array().cloned().unwrap_or_default();
        let by_value: std::collections::HashMap<u64, serde_json::Value> = source
            .into_iter()
            .map(|e| (e["value"].as_u64().unwrap_or(0), e))
            .collect();
        let back = map.inverse();
        let list: Vec<serde_json::Value> = host
            .values()
            .iter()
            .enumerate()
            .map(|(i, &w)| {
                let mut e = by_value[&(back.apply(w) as u64)].clone();
                e["untwirled_position"] = e["position"].clone();
                e["untwirled_value"] = e["value"].clone();
                e["position"] = json!(i + 1);
                e["value"] = json!(w);
                e
            })
            .collect();
        meta[key] = json!(list);
    };
    remap("pattern_provenance", &tw.pattern_map, tw.pattern(), &mut meta);
    remap("text_provenance", &tw.text_map, tw.text(), &mut meta);
    meta["twirled"] = json!(true);
    meta["pattern_blocks"] = json!(tw.pattern.blocks());
    meta["text_blocks"] = json!(tw.text.blocks());
    meta
}
