//! `shaclcheck`: validation, translation and containment checks over shape
//! documents.
//!
//! Exit codes: 0 positive answer, 1 negative answer (evidence printed),
//! 2 unknown at the search bound, 3 usage or input error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use shaclcheck_core::eval::{
    find_faithful_with, missing_targets, EvalError, SearchConfig, Semantics,
};
use shaclcheck_core::fragments::classify;
use shaclcheck_core::io::{
    parse_constraint, parse_ntriples, parse_shapes, render_counterexample, serialize_exchange,
    serialize_kb,
};
use shaclcheck_core::reasoner::{
    decide_containment, find_counterexample, ContainmentOptions, ContainmentVerdict,
    Counterexample, Guarantee, Provenance, ReasonerError, DEFAULT_BOUND,
};
use shaclcheck_core::translation::{encode_gci, tau_shapes};
use shaclcheck_core::{RdfGraph, ShapeId, ShapeSet, SymbolTable};

#[derive(Parser)]
#[command(
    name = "shaclcheck",
    version,
    about = "SHACL validation and shape containment"
)]
struct Cli {
    /// Print a single JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Skip target nodes absent from the data graph instead of failing.
    #[arg(long, global = true, hide = true)]
    original_semantics: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report the language fragment of a shape document.
    Classify { shapes: PathBuf },
    /// Does the data graph have a faithful assignment?
    Conforms { shapes: PathBuf, data: PathBuf },
    /// Print one faithful assignment, or why none exists.
    Validate { shapes: PathBuf, data: PathBuf },
    /// Print the knowledge base of a shape document.
    Translate {
        shapes: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Native)]
        format: Format,
    },
    /// Is every node carrying SUB also carrying SUP?
    Contains {
        shapes: PathBuf,
        sub: String,
        sup: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Look for a counterexample to containment only.
    Refute {
        shapes: PathBuf,
        sub: String,
        sup: String,
        #[arg(long, env = "SHACLCHECK_BOUND", default_value_t = DEFAULT_BOUND)]
        bound: u32,
    },
    /// Check the inclusion between two constraints via a pair of fresh shapes.
    EncodeGci {
        shapes: PathBuf,
        sub: String,
        sup: String,
        #[command(flatten)]
        search: SearchArgs,
    },
}

#[derive(clap::Args)]
struct SearchArgs {
    /// Largest universe tried when looking for a counterexample.
    #[arg(long, env = "SHACLCHECK_BOUND", default_value_t = DEFAULT_BOUND)]
    bound: u32,
    /// An external reasoner has proved the entailment; answer contained
    /// (sound only) when no counterexample turns up.
    #[arg(long)]
    assume_entailed: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Native,
    DlExchange,
}

/// What a command produced: an exit code plus both renderings.
struct Outcome {
    code: u8,
    text: String,
    json: Value,
}

struct Failure {
    code: u8,
    message: String,
}

fn input<E: std::fmt::Display>(context: &Path) -> impl FnOnce(E) -> Failure + '_ {
    move |e| Failure {
        code: 3,
        message: format!("{}: {e}", context.display()),
    }
}

fn reasoner_failure(e: ReasonerError) -> Failure {
    match e {
        ReasonerError::BudgetExhausted(_) => Failure {
            code: 2,
            message: e.to_string(),
        },
        _ => Failure {
            code: 3,
            message: e.to_string(),
        },
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(input(path))
}

fn load_shapes(path: &Path, symbols: &mut SymbolTable) -> Result<ShapeSet, Failure> {
    Ok(parse_shapes(&read(path)?, symbols)
        .map_err(input(path))?
        .shapes)
}

fn load_graph(path: &Path, symbols: &mut SymbolTable) -> Result<RdfGraph, Failure> {
    parse_ntriples(&read(path)?, symbols).map_err(input(path))
}

fn shape_id(name: &str, shapes: &ShapeSet, symbols: &SymbolTable) -> Result<ShapeId, Failure> {
    symbols
        .lookup_shape(name)
        .filter(|s| shapes.contains(*s))
        .ok_or_else(|| Failure {
            code: 3,
            message: format!("unknown shape `{name}`"),
        })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let json = cli.json;
    match run(cli) {
        Ok(out) => {
            if json {
                println!("{}", out.json);
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            if json {
                println!("{}", json!({ "verdict": "error", "message": f.message }));
            } else {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    let semantics = if cli.original_semantics {
        Semantics::Original
    } else {
        Semantics::Corrected
    };
    let mut symbols = SymbolTable::new();
    match cli.command {
        Command::Classify { shapes } => {
            let set = load_shapes(&shapes, &mut symbols)?;
            let fragment = classify(&set);
            let mut text = format!("{}\n", fragment.class.label());
            let witness = fragment.witness.as_ref().map(|w| {
                let shape = symbols.shape_name(w.shape);
                text.push_str(&format!(
                    "  {} in {} at {}\n",
                    w.construct, shape, w.ast_path
                ));
                json!({ "shape": shape, "path": w.ast_path, "construct": w.construct.to_string() })
            });
            let json = json!({ "verdict": "classified", "fragment": fragment.class.label(), "witness": witness });
            Ok(Outcome {
                code: 0,
                text,
                json,
            })
        }
        Command::Conforms { shapes, data } => {
            validate(&shapes, &data, semantics, false, &mut symbols)
        }
        Command::Validate { shapes, data } => {
            validate(&shapes, &data, semantics, true, &mut symbols)
        }
        Command::Translate { shapes, format } => {
            let set = load_shapes(&shapes, &mut symbols)?;
            let kb = tau_shapes(&set);
            let (text, name) = match format {
                Format::Native => (serialize_kb(&kb, &symbols), "native"),
                Format::DlExchange => (
                    serialize_exchange(&kb, &symbols).map_err(input(&shapes))?,
                    "dl-exchange",
                ),
            };
            let json = json!({ "verdict": "translated", "format": name, "output": text });
            Ok(Outcome {
                code: 0,
                text,
                json,
            })
        }
        Command::Contains {
            shapes,
            sub,
            sup,
            search,
        } => {
            let set = load_shapes(&shapes, &mut symbols)?;
            let (a, b) = (
                shape_id(&sub, &set, &symbols)?,
                shape_id(&sup, &set, &symbols)?,
            );
            containment(&set, a, b, &search, &mut symbols)
        }
        Command::Refute {
            shapes,
            sub,
            sup,
            bound,
        } => {
            let set = load_shapes(&shapes, &mut symbols)?;
            let (a, b) = (
                shape_id(&sub, &set, &symbols)?,
                shape_id(&sup, &set, &symbols)?,
            );
            let found =
                find_counterexample(&set, a, b, bound, &mut symbols).map_err(reasoner_failure)?;
            Ok(match found {
                Some(cex) => refuted(&cex, &set, &symbols),
                None => unknown(bound, &set),
            })
        }
        Command::EncodeGci {
            shapes,
            sub,
            sup,
            search,
        } => {
            let set = load_shapes(&shapes, &mut symbols)?;
            let c = parse_constraint(&sub, &set, &mut symbols).map_err(|e| Failure {
                code: 3,
                message: format!("first constraint: {e}"),
            })?;
            let d = parse_constraint(&sup, &set, &mut symbols).map_err(|e| Failure {
                code: 3,
                message: format!("second constraint: {e}"),
            })?;
            let enc = encode_gci(&set, c, d, &mut symbols).map_err(|e| Failure {
                code: 3,
                message: e.to_string(),
            })?;
            containment(&enc.shapes, enc.sub, enc.sup, &search, &mut symbols)
        }
    }
}

fn validate(
    shapes: &Path,
    data: &Path,
    semantics: Semantics,
    print_assignment: bool,
    symbols: &mut SymbolTable,
) -> Result<Outcome, Failure> {
    let set = load_shapes(shapes, symbols)?;
    let graph = load_graph(data, symbols)?;
    let fail = |reason: String| {
        let json = json!({ "verdict": "does-not-conform", "reason": reason });
        Outcome {
            code: 1,
            text: format!("does not conform: {reason}\n"),
            json,
        }
    };
    if semantics == Semantics::Corrected {
        if let Some((_, node)) = missing_targets(&graph, &set).first() {
            return Ok(fail(format!(
                "target node {} missing from data graph",
                symbols.node_name(*node)
            )));
        }
    }
    let config = SearchConfig {
        semantics,
        ..SearchConfig::default()
    };
    let search = match find_faithful_with(&graph, &set, 1, &config) {
        Ok(s) => s,
        Err(e @ EvalError::TooLarge { .. }) => {
            let json = json!({ "verdict": "unknown", "reason": e.to_string() });
            return Ok(Outcome {
                code: 2,
                text: format!("unknown: {e}\n"),
                json,
            });
        }
        Err(e) => {
            return Err(Failure {
                code: 3,
                message: e.to_string(),
            })
        }
    };
    let Some(sigma) = search.assignments.first() else {
        return Ok(fail("no faithful assignment exists".into()));
    };
    let mut text = String::from("conforms\n");
    let mut rows = serde_json::Map::new();
    for &v in graph.nodes() {
        let names: Vec<&str> = sigma
            .get(v)
            .into_iter()
            .flatten()
            .map(|s| symbols.shape_name(*s))
            .collect();
        if print_assignment {
            text.push_str(&format!("ASSIGN {}", node_term(symbols.node_name(v))));
            for n in &names {
                text.push(' ');
                text.push_str(n);
            }
            text.push('\n');
        }
        rows.insert(symbols.node_name(v).to_string(), json!(names));
    }
    let mut json = json!({ "verdict": "conforms" });
    if print_assignment {
        json["assignment"] = Value::Object(rows);
    }
    Ok(Outcome {
        code: 0,
        text,
        json,
    })
}

fn node_term(name: &str) -> String {
    if name.starts_with('"') || name.starts_with("_:") {
        name.to_string()
    } else {
        format!("<{name}>")
    }
}

fn containment(
    shapes: &ShapeSet,
    sub: ShapeId,
    sup: ShapeId,
    search: &SearchArgs,
    symbols: &mut SymbolTable,
) -> Result<Outcome, Failure> {
    let options = ContainmentOptions {
        bound: search.bound,
        assume_entailed: search.assume_entailed,
        ..Default::default()
    };
    let verdict =
        decide_containment(shapes, sub, sup, options, symbols).map_err(reasoner_failure)?;
    Ok(match verdict {
        ContainmentVerdict::Contained {
            guarantee,
            provenance,
        } => {
            let guarantee = match guarantee {
                Guarantee::Complete => "complete",
                Guarantee::SoundOnly => "sound-only",
            };
            let provenance = match provenance {
                Provenance::Reflexive => "reflexive",
                Provenance::Structural => "structural",
                Provenance::Tableau => "tableau",
                Provenance::ExternalReasoner => "external-reasoner",
            };
            let json = json!({
                "verdict": "contained",
                "guarantee": guarantee,
                "provenance": provenance,
                "fragment": classify(shapes).class.label(),
            });
            Outcome {
                code: 0,
                text: format!("contained ({guarantee}, {provenance})\n"),
                json,
            }
        }
        ContainmentVerdict::NotContained(cex) => refuted(&cex, shapes, symbols),
        ContainmentVerdict::Unknown { bound } => unknown(bound, shapes),
    })
}

fn refuted(cex: &Counterexample, shapes: &ShapeSet, symbols: &SymbolTable) -> Outcome {
    let block = render_counterexample(&cex.graph, &cex.assignment, symbols);
    let witness = symbols.node_name(cex.witness);
    let json = json!({
        "verdict": "not-contained",
        "guarantee": "complete",
        "fragment": classify(shapes).class.label(),
        "counterexample": { "witness": witness, "block": block },
    });
    Outcome {
        code: 1,
        text: format!("not contained; witness {}\n\n{block}", node_term(witness)),
        json,
    }
}

fn unknown(bound: u32, shapes: &ShapeSet) -> Outcome {
    let json = json!({
        "verdict": "unknown",
        "bound": bound,
        "fragment": classify(shapes).class.label(),
    });
    Outcome {
        code: 2,
        text: format!("unknown: no counterexample with at most {bound} nodes\n"),
        json,
    }
}
