//! Command-line front end. Every subcommand prints a single JSON document on
//! stdout (the `phi` subcommand prints the bare formula text so it can be
//! substituted into other invocations); diagnostics go to stderr.
//!
//! Exit codes: 0 when the queried property holds or an object was produced,
//! 1 for a mathematical negative (no witness found, avoidance claim refuted,
//! word not square-free), 2 for usage or input errors.

use clap::{Args, Parser, Subcommand};

use crate::constructions::build_avoider;
use crate::cyclic::{build_cyclic, find_bad_factor, ExponentWord};
use crate::encounter::encounters;
use crate::formula::{make_phi, parse_formula, Formula};
use crate::prover::{census, cyclic3_scan, prove_unavoidable, Budget, VerdictKind};
use crate::word::{Alphabet, Word};

#[derive(Debug, Parser)]
#[command(name = "revform", version, about = "Avoidance of formulas with reversal")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether a formula occurs in a word; print the witness or null.
    Encounter(EncounterArgs),
    /// Prove k-unavoidability by exhaustive backtracking.
    Prove(ProveArgs),
    /// Count avoiding words per length.
    Census(CensusArgs),
    /// Build a verified avoider of phi_k.
    Construct(ConstructArgs),
    /// Build an m-cyclic word from an exponent word, optionally scanning it
    /// for an encounter of phi_k.
    Cyclic(CyclicArgs),
    /// Scan an exponent word for a bad factor (the cyclic-word condition).
    Lemma1(Lemma1Args),
    /// Generate a square-free ternary word, or check one.
    Squarefree(SquarefreeArgs),
    /// Print the formula phi_k.
    Phi(PhiArgs),
}

#[derive(Debug, Args)]
struct EncounterArgs {
    #[arg(long)]
    word: String,
    #[arg(long)]
    formula: String,
    /// Ordered alphabet characters; inferred from the word if omitted.
    #[arg(long)]
    alphabet_chars: Option<String>,
}

#[derive(Debug, Args)]
struct ProveArgs {
    #[arg(long)]
    formula: String,
    /// Alphabet size.
    #[arg(long)]
    alphabet: usize,
    /// Depth budget.
    #[arg(long)]
    depth: usize,
    /// Node budget.
    #[arg(long)]
    nodes: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Debug, Args)]
struct CensusArgs {
    #[arg(long)]
    formula: String,
    #[arg(long)]
    alphabet: usize,
    #[arg(long)]
    max_len: usize,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Debug, Args)]
struct ConstructArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    base_len: usize,
}

#[derive(Debug, Args)]
struct CyclicArgs {
    #[arg(long)]
    m: usize,
    /// Comma-separated positive exponents.
    #[arg(long)]
    exponents: String,
    /// Also search the built word for an encounter of phi_K.
    #[arg(long)]
    scan_k: Option<usize>,
    #[arg(long)]
    alphabet_chars: Option<String>,
}

#[derive(Debug, Args)]
struct Lemma1Args {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    exponents: String,
}

#[derive(Debug, Args)]
struct SquarefreeArgs {
    /// Length of the generated word.
    #[arg(long, conflicts_with = "check")]
    len: Option<usize>,
    /// Check this word instead of generating one.
    #[arg(long)]
    check: Option<String>,
}

#[derive(Debug, Args)]
struct PhiArgs {
    #[arg(long)]
    k: usize,
}

/// The result of one invocation, kept separate from the process exit so tests
/// can call the CLI in-process.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandResult {
    fn ok(payload: String) -> CommandResult {
        CommandResult { exit_code: 0, stdout: payload, stderr: String::new() }
    }

    fn negative(payload: String) -> CommandResult {
        CommandResult { exit_code: 1, stdout: payload, stderr: String::new() }
    }

    fn input_error(message: String) -> CommandResult {
        CommandResult { exit_code: 2, stdout: String::new(), stderr: message + "\n" }
    }
}

pub fn run_command<I, S>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.exit_code() == 0 { 0 } else { 2 };
            let rendered = err.render().to_string();
            return if code == 0 {
                CommandResult { exit_code: 0, stdout: rendered, stderr: String::new() }
            } else {
                CommandResult { exit_code: 2, stdout: String::new(), stderr: rendered }
            };
        }
    };
    match dispatch(cli.command) {
        Ok(result) => result,
        Err(err) => CommandResult::input_error(err.to_string()),
    }
}

fn json_line<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("serializable payload");
    s.push('\n');
    s
}

fn parse_word(text: &str, alphabet_chars: Option<&str>) -> crate::Result<Word> {
    match alphabet_chars {
        Some(chars) => Word::parse(&Alphabet::new(chars)?, text),
        None => Word::parse_inferred(text),
    }
}

fn parse_formula_arg(text: &str) -> crate::Result<Formula> {
    parse_formula(text)
}

fn dispatch(command: Command) -> crate::Result<CommandResult> {
    match command {
        Command::Encounter(args) => {
            let word = parse_word(&args.word, args.alphabet_chars.as_deref())?;
            let formula = parse_formula_arg(&args.formula)?;
            Ok(match encounters(&word, &formula) {
                Some(witness) => CommandResult::ok(json_line(&witness)),
                None => CommandResult::negative("null\n".to_string()),
            })
        }
        Command::Prove(args) => {
            let formula = parse_formula_arg(&args.formula)?;
            let budget = Budget::new(args.depth, args.nodes)?;
            let verdict = prove_unavoidable(&formula, args.alphabet, budget, args.jobs)?;
            let payload = json_line(&verdict);
            Ok(if verdict.kind == VerdictKind::Unavoidable {
                CommandResult::ok(payload)
            } else {
                CommandResult::negative(payload)
            })
        }
        Command::Census(args) => {
            let formula = parse_formula_arg(&args.formula)?;
            let table = census(&formula, args.alphabet, args.max_len, args.jobs)?;
            Ok(CommandResult::ok(json_line(&table)))
        }
        Command::Construct(args) => {
            match build_avoider(args.k, args.base_len) {
                Ok(output) => Ok(CommandResult::ok(json_line(&output))),
                Err(crate::Error::VerificationFailed(msg)) => Ok(CommandResult {
                    exit_code: 1,
                    stdout: String::new(),
                    stderr: msg + "\n",
                }),
                Err(err) => Err(err),
            }
        }
        Command::Cyclic(args) => {
            let exps = ExponentWord::parse(&args.exponents)?;
            let alphabet = match args.alphabet_chars.as_deref() {
                Some(chars) => Alphabet::new(chars)?,
                None => Alphabet::canonical(args.m)?,
            };
            let word = build_cyclic(args.m, &exps, &alphabet)?;
            match args.scan_k {
                None => {
                    let payload = serde_json::json!({ "word": word.to_string() });
                    Ok(CommandResult::ok(json_line(&payload)))
                }
                Some(k) => {
                    let scan = if args.m == 3 {
                        cyclic3_scan(k, &exps, exps.len())?
                    } else {
                        encounters(&word, &make_phi(k)?)
                            .map(|w| (w, crate::prover::ScanRoute::Engine))
                    };
                    match scan {
                        Some((witness, route)) => {
                            let payload = serde_json::json!({
                                "word": word.to_string(),
                                "witness": witness,
                                "route": route,
                            });
                            Ok(CommandResult::ok(json_line(&payload)))
                        }
                        None => {
                            let payload = serde_json::json!({
                                "word": word.to_string(),
                                "witness": null,
                            });
                            Ok(CommandResult::negative(json_line(&payload)))
                        }
                    }
                }
            }
        }
        Command::Lemma1(args) => {
            let exps = ExponentWord::parse(&args.exponents)?;
            Ok(match find_bad_factor(&exps, args.k, args.m)? {
                Some(witness) => CommandResult::ok(json_line(&witness)),
                None => CommandResult::negative("null\n".to_string()),
            })
        }
        Command::Squarefree(args) => match (args.len, args.check) {
            (_, Some(text)) => {
                let word = parse_word(&text, Some("012"))?;
                let ok = word.is_square_free();
                let payload = json_line(&serde_json::json!({
                    "word": word.to_string(),
                    "square_free": ok,
                }));
                Ok(if ok { CommandResult::ok(payload) } else { CommandResult::negative(payload) })
            }
            (Some(len), None) => {
                let word = crate::word::square_free_stream(len)?;
                Ok(CommandResult::ok(json_line(&serde_json::json!({
                    "word": word.to_string(),
                }))))
            }
            (None, None) => Err(crate::Error::InvalidArgument(
                "squarefree needs --len or --check".into(),
            )),
        },
        Command::Phi(args) => {
            let phi = make_phi(args.k)?;
            Ok(CommandResult::ok(format!("{phi}\n")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> CommandResult {
        let mut argv = vec!["revform"];
        argv.extend(args);
        run_command(argv)
    }

    #[test]
    fn phi_prints_formula_text() {
        let r = run(&["phi", "--k", "2"]);
        assert_eq!(r.exit_code, 0);
        assert_eq!(r.stdout, "x y1 y2 x . y1^R . y2^R\n");
    }

    #[test]
    fn encounter_witness_and_null() {
        let r = run(&["encounter", "--word", "0110", "--formula", "x y1 x . y1^R"]);
        assert_eq!(r.exit_code, 0);
        assert!(r.stdout.contains("assignment"));

        let r = run(&["encounter", "--word", "012", "--formula", "x y1 x . y1^R"]);
        assert_eq!(r.exit_code, 1);
        assert_eq!(r.stdout, "null\n");
    }

    #[test]
    fn prove_unary_phi1() {
        let r = run(&[
            "prove", "--formula", "x y1 x . y1^R", "--alphabet", "1", "--depth", "10",
            "--nodes", "1000",
        ]);
        assert_eq!(r.exit_code, 0);
        assert!(r.stdout.contains("\"kind\":\"unavoidable\""));
        assert!(r.stdout.contains("\"max_depth\":2"));
    }

    #[test]
    fn usage_errors_exit_two() {
        let r = run(&["no-such-command"]);
        assert_eq!(r.exit_code, 2);
        let r = run(&["encounter", "--word", "01"]);
        assert_eq!(r.exit_code, 2);
        let r = run(&["encounter", "--word", "01", "--formula", "x . . y"]);
        assert_eq!(r.exit_code, 2);
    }

    #[test]
    fn cyclic_build_and_scan() {
        let r = run(&["cyclic", "--m", "4", "--exponents", "1,1,1,1,1,1,1"]);
        assert_eq!(r.exit_code, 0);
        assert!(r.stdout.contains("0123012"));

        let r = run(&["cyclic", "--m", "3", "--exponents", "1,1,1,1,1,1,1,1", "--scan-k", "2"]);
        assert_eq!(r.exit_code, 0);
        assert!(r.stdout.contains("case_one"));
    }

    #[test]
    fn squarefree_check() {
        let r = run(&["squarefree", "--check", "0110"]);
        assert_eq!(r.exit_code, 1);
        let r = run(&["squarefree", "--len", "10"]);
        assert_eq!(r.exit_code, 0);
    }
}
