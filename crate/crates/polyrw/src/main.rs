//! Command-line front end: validation, normalization, critical pairs,
//! confluence checking, rendering and the brute-force oracle.
//!
//! Exit codes: 0 success, 1 negative verdict (not joinable, not confluent,
//! oracle mismatch), 2 usage or parse error.

use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use polyrw::cli_io;
use polyrw::diagram::Diagram;
use polyrw::examples;
use polyrw::rewrite::{self, ConfluenceVerdict, NormalizeStatus, Strategy};
use polyrw::signature::Polygraph;
use polyrw::unify;

#[derive(Parser)]
#[command(name = "polyrw", about = "rewriting engine for polygraphs up to dimension 3")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Leftmost,
    Fair,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Tikz,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a polygraph file and check every invariant.
    Validate { file: String },
    /// Normalize a cell with the polygraph's rules.
    Nf {
        file: String,
        #[arg(long)]
        cell: String,
        #[arg(long, default_value_t = 1000)]
        fuel: u32,
        #[arg(long, value_enum, default_value_t = StrategyArg::Leftmost)]
        strategy: StrategyArg,
    },
    /// Compute the compact critical pairs.
    Cp {
        file: String,
        /// Keep only pairs with winding-free, hole-free overlaps.
        #[arg(long)]
        regular: bool,
        /// Keep only pairs whose overlap has at most this many nodes.
        #[arg(long)]
        max_size: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Joinability of all critical pairs plus the Newman upgrade.
    Confluence {
        file: String,
        #[arg(long, default_value_t = 100)]
        fuel: u32,
        #[arg(long)]
        assume_terminating: bool,
    },
    /// Render a cell as DOT or TikZ.
    Render {
        file: String,
        #[arg(long)]
        cell: String,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
    },
    /// List or dump the builtin polygraphs.
    Examples {
        #[arg(long)]
        list: bool,
        #[arg(long)]
        dump: Option<String>,
    },
    /// Compare the unification output against the brute-force enumeration.
    Oracle {
        file: String,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
    },
}

fn load(file: &str) -> Result<Polygraph, String> {
    let text = if let Some(name) = file.strip_prefix("builtin:") {
        return examples::builtin(name).map_err(|e| e.to_string());
    } else {
        fs::read_to_string(file).map_err(|e| format!("{file}: {e}"))?
    };
    let sig = cli_io::parse(&text).map_err(|e| format!("{file}: {e}"))?;
    let violations = sig.validate();
    if !violations.is_empty() {
        return Err(format!("{file}: {violations:?}"));
    }
    Ok(sig)
}

fn load_cell(sig: &Polygraph, expr: &str) -> Result<Diagram, String> {
    let d = cli_io::parse_plain_cell(sig, expr).map_err(|e| e.to_string())?;
    d.validate(sig).map_err(|e| e.to_string())?;
    Ok(d)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Validate { file } => {
            let sig = load(&file)?;
            println!(
                "ok: {} 0-cells, {} 1-cells, {} 2-cells, {} rules",
                sig.count(0),
                sig.count(1),
                sig.count(2),
                sig.count(3)
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Nf { file, cell, fuel, strategy } => {
            let sig = load(&file)?;
            // a 2-polygraph is a string rewriting system: cells are words
            if sig.count(3) == 0 && sig.count(2) > 0 {
                let ctx = cli_io::parse_cell(&sig, &format!("id({cell})"))
                    .map_err(|e| e.to_string())?;
                let word = ctx.body.source_path(&sig);
                let (nf, done) = polyrw::strings::word_normalize(&sig, &word, fuel);
                println!(
                    "{}",
                    nf.letters
                        .iter()
                        .map(|l| sig.name1(l.gen).to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                );
                return Ok(if done { ExitCode::SUCCESS } else { ExitCode::from(1) });
            }
            let d = load_cell(&sig, &cell)?;
            let strategy = match strategy {
                StrategyArg::Leftmost => Strategy::Leftmost,
                StrategyArg::Fair => Strategy::AllFair,
            };
            let (nf, status, trace) = rewrite::normalize(&sig, &d, strategy, fuel);
            for step in &trace {
                println!("-> by {}", sig.name3(step.rule));
            }
            println!("{}", cli_io::print_cell(&sig, &nf));
            match status {
                NormalizeStatus::Normal => Ok(ExitCode::SUCCESS),
                NormalizeStatus::FuelExhausted => {
                    eprintln!("fuel exhausted after {} steps", trace.len());
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Cp { file, regular, max_size, json } => {
            let sig = load(&file)?;
            if sig.count(3) == 0 && sig.count(2) > 0 {
                // string rewriting system: superpositions of the word rules
                let spell = |w: &polyrw::Path| -> String {
                    w.letters
                        .iter()
                        .map(|l| sig.name1(l.gen).to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                };
                let cps = polyrw::strings::srs_critical_pairs(&sig);
                if json {
                    let items: Vec<serde_json::Value> = cps
                        .iter()
                        .map(|cp| {
                            serde_json::json!({
                                "rule1": sig.name2(cp.rule1),
                                "rule2": sig.name2(cp.rule2),
                                "overlap": spell(&cp.overlap),
                                "reduct1": spell(&cp.reduct1),
                                "reduct2": spell(&cp.reduct2),
                            })
                        })
                        .collect();
                    println!(
                        "{}",
                        serde_json::to_string_pretty(
                            &serde_json::json!({"format": 1, "pairs": items})
                        )
                        .expect("serializable")
                    );
                } else {
                    for (i, cp) in cps.iter().enumerate() {
                        println!(
                            "critical pair {}: {} / {} on `{}` -> `{}` | `{}`",
                            i + 1,
                            sig.name2(cp.rule1),
                            sig.name2(cp.rule2),
                            spell(&cp.overlap),
                            spell(&cp.reduct1),
                            spell(&cp.reduct2),
                        );
                    }
                    println!("{} critical pairs", cps.len());
                }
                return Ok(ExitCode::SUCCESS);
            }
            let mut pairs = unify::critical_pairs(&sig);
            if regular {
                pairs.retain(|cp| cp.is_regular_shape());
            }
            if let Some(k) = max_size {
                pairs.retain(|cp| cp.overlap.size() <= k);
            }
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&cli_io::critical_pairs_json(&sig, &pairs))
                        .expect("serializable")
                );
            } else {
                for (i, cp) in pairs.iter().enumerate() {
                    println!(
                        "critical pair {}: {} / {} ({} holes){}",
                        i + 1,
                        sig.name3(cp.rule1),
                        sig.name3(cp.rule2),
                        cp.holes(),
                        if cp.is_regular_shape() { "" } else { " [compact]" },
                    );
                    println!("  overlap: {}", cli_io::print_cell(&sig, &cp.overlap));
                }
                println!("{} critical pairs", pairs.len());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Confluence { file, fuel, assume_terminating } => {
            let sig = load(&file)?;
            match rewrite::local_confluence(&sig, fuel, assume_terminating) {
                ConfluenceVerdict::LocallyConfluent { pairs, confluent_by_newman } => {
                    println!("locally confluent: {pairs}/{pairs} critical pairs joinable");
                    if confluent_by_newman {
                        println!("confluent by Newman's lemma (terminating)");
                    } else {
                        println!(
                            "termination not established; rerun with --assume-terminating \
                             for a confluence verdict"
                        );
                    }
                    Ok(ExitCode::SUCCESS)
                }
                ConfluenceVerdict::CounterexampleCP { pair, reduct1, reduct2 } => {
                    println!(
                        "not locally confluent: rules {} and {} reach distinct normal forms",
                        sig.name3(pair.rule1),
                        sig.name3(pair.rule2)
                    );
                    println!("  {}", cli_io::print_cell(&sig, &reduct1));
                    println!("  {}", cli_io::print_cell(&sig, &reduct2));
                    Ok(ExitCode::from(1))
                }
                ConfluenceVerdict::Unknown { reason } => {
                    println!("unknown: {reason}");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Render { file, cell, format } => {
            let sig = load(&file)?;
            let d = load_cell(&sig, &cell)?;
            match format {
                Format::Dot => print!("{}", cli_io::render_dot(&sig, &d)),
                Format::Tikz => print!("{}", cli_io::render_tikz(&sig, &d)),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Examples { list, dump } => {
            if list || dump.is_none() {
                for name in examples::builtin_names() {
                    println!("{name}");
                }
            }
            if let Some(name) = dump {
                let sig = examples::builtin(&name).map_err(|e| e.to_string())?;
                print!("{}", cli_io::print(&sig));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle { file, max_size } => {
            let sig = load(&file)?;
            let pairs = unify::critical_pairs(&sig);
            let closure = unify::instantiation_closure(&sig, &pairs, max_size);
            let mut brute: Vec<unify::RegularUnifier> = Vec::new();
            let rules: Vec<_> = sig.gens3().collect();
            for (i, &r1) in rules.iter().enumerate() {
                for &r2 in &rules[i..] {
                    for u in unify::brute_force_unifiers(&sig, sig.lhs(r1), sig.lhs(r2), max_size) {
                        if u.shares_nodes() && !u.is_identity_overlap() {
                            brute.push(u);
                        }
                    }
                }
            }
            let missing = brute
                .iter()
                .filter(|b| {
                    !closure.iter().any(|c| c.overlap.iso(&b.overlap).is_some())
                })
                .count();
            let extra = closure
                .iter()
                .filter(|c| {
                    c.overlap.size() <= max_size
                        && !brute.iter().any(|b| b.overlap.iso(&c.overlap).is_some())
                })
                .count();
            println!(
                "brute force: {} unifiers; instantiation closure: {}; missing {}, extra {}",
                brute.len(),
                closure.len(),
                missing,
                extra
            );
            if missing == 0 && extra == 0 {
                println!("oracle agrees at size bound {max_size}");
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
    }
}
