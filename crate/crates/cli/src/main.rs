use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gbs_core::format::{self, Parsed};
use gbs_core::moves::{all_reductions, legal_slides, reduce};
use gbs_core::search::{enumerate_space, same_space, MoveSet, SameSpace};
use gbs_core::shelters::{labeling_of, retract_to_spine, shelters, surviving_edges};
use gbs_core::{GbsGraph, Move, SearchBounds};

const EXIT_SEMANTIC: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_SEARCH_ERROR: u8 = 3;
const EXIT_USAGE: u8 = 64;

/// Generalized Baumslag–Solitar graphs of groups: moves, invariants and
/// deformation-space searches.
#[derive(Parser)]
#[command(name = "gbs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a graph file; prints diagnostics.
    Validate { file: PathBuf },
    /// Betti number, reducedness, strict ascending loops, modulus and spine membership.
    Invariants { file: PathBuf },
    /// Collapse to a reduced graph, lowest collapsible edge first.
    Reduce {
        file: PathBuf,
        /// Every reduced graph reachable by collapses, up to isomorphism.
        #[arg(long)]
        all: bool,
        /// Write each result to `reduced-<n>.json` in this directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Path and circle shelters of the `=`/`≠` labeling.
    Shelters { file: PathBuf },
    /// Edges kept by at least one reduction.
    Survivors { file: PathBuf },
    /// Collapse non-surviving edges until the graph lies in the spine.
    Retract { file: PathBuf },
    /// Legal slide moves.
    Slides {
        file: PathBuf,
        #[arg(long)]
        list: bool,
    },
    /// Apply one move, e.g. `collapse e0` or `slide e1.0 across e2+`.
    Apply {
        file: PathBuf,
        #[arg(value_name = "MOVE")]
        mv: String,
    },
    /// Bounded closure under moves.
    Enumerate {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Moves::All)]
        moves: Moves,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Bounded search for a move sequence between two graphs.
    /// Exit 0 if connected, 2 if inconclusive, 3 on error.
    SameSpace {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = Moves::All)]
        moves: Moves,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Graphviz rendering.
    Dot { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Moves {
    Slides,
    All,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long, default_value_t = 64)]
    max_label: u64,
    #[arg(long, default_value_t = 6)]
    max_edges: usize,
    #[arg(long, default_value_t = 6)]
    max_vertices: usize,
    #[arg(long, env = "GBS_MAX_STATES", default_value_t = 200_000)]
    max_states: usize,
    #[arg(long, default_value_t = 64)]
    max_depth: usize,
    /// Also try expansions with unit sign -1.
    #[arg(long)]
    negative: bool,
}

impl BoundArgs {
    fn bounds(&self) -> SearchBounds {
        SearchBounds {
            max_abs_label: self.max_label,
            max_edges: self.max_edges,
            max_vertices: self.max_vertices,
            max_states: self.max_states,
            max_depth: self.max_depth,
        }
    }

    fn move_set(&self, moves: Moves) -> MoveSet {
        match moves {
            Moves::Slides => MoveSet::Slides,
            Moves::All => MoveSet::All { negative: self.negative },
        }
    }
}

/// Failure with a chosen exit code.
#[derive(Debug)]
struct Exit(u8, anyhow::Error);

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Exit(code, e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}

fn semantic(e: anyhow::Error) -> Exit {
    Exit(EXIT_SEMANTIC, e)
}

fn usage_checked(path: &Path) -> Result<(), Exit> {
    if path.as_os_str().is_empty() {
        return Err(Exit(EXIT_USAGE, anyhow::anyhow!("empty file path")));
    }
    Ok(())
}

fn load(path: &Path) -> Result<Parsed> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    format::parse_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load_graph(path: &Path) -> Result<GbsGraph, Exit> {
    usage_checked(path)?;
    load(path).map(|p| p.graph).map_err(semantic)
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("values serialize"));
}

fn graph_value(g: &GbsGraph) -> Value {
    serde_json::to_value(format::to_file(g)).expect("graph files serialize")
}

fn run(command: Command) -> Result<u8, Exit> {
    match command {
        Command::Validate { file } => {
            usage_checked(&file)?;
            match load(&file) {
                Ok(p) => {
                    print_json(&json!({
                        "valid": true,
                        "vertices": p.graph.vertex_count(),
                        "edges": p.graph.edge_count(),
                    }));
                    Ok(0)
                }
                Err(e) => {
                    print_json(&json!({ "valid": false, "diagnostics": [format!("{e:#}")] }));
                    Ok(EXIT_SEMANTIC)
                }
            }
        }
        Command::Invariants { file } => {
            print_json(&format::invariants_json(&load_graph(&file)?));
            Ok(0)
        }
        Command::Reduce { file, all, out_dir } => {
            let g = load_graph(&file)?;
            let graphs =
                if all { all_reductions(&g, true).map_err(|e| semantic(e.into()))? } else { vec![reduce(&g).0] };
            match out_dir {
                Some(dir) => {
                    fs::create_dir_all(&dir)
                        .with_context(|| format!("creating {}", dir.display()))
                        .map_err(semantic)?;
                    let mut written = Vec::new();
                    for (i, r) in graphs.iter().enumerate() {
                        let path = dir.join(format!("reduced-{i}.json"));
                        fs::write(&path, format::to_json(r) + "\n")
                            .with_context(|| format!("writing {}", path.display()))
                            .map_err(semantic)?;
                        written.push(path.display().to_string());
                    }
                    print_json(&json!(written));
                }
                None if all => print_json(&Value::Array(graphs.iter().map(graph_value).collect())),
                None => print_json(&graph_value(&graphs[0])),
            }
            Ok(0)
        }
        Command::Shelters { file } => {
            let g = load_graph(&file)?;
            print_json(&format::shelters_json(&shelters(&labeling_of(&g), g.edge_count())));
            Ok(0)
        }
        Command::Survivors { file } => {
            let g = load_graph(&file)?;
            let surviving = surviving_edges(&labeling_of(&g)).map_err(|e| semantic(e.into()))?;
            print_json(&json!({
                "surviving": surviving.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
                "spine_member": surviving.len() == g.edge_count(),
            }));
            Ok(0)
        }
        Command::Retract { file } => {
            let g = load_graph(&file)?;
            print_json(&graph_value(&retract_to_spine(&g).map_err(|e| semantic(e.into()))?));
            Ok(0)
        }
        Command::Slides { file, list } => {
            let g = load_graph(&file)?;
            let moves = legal_slides(&g);
            if list {
                print_json(&json!(moves.iter().map(|m| m.to_string()).collect::<Vec<_>>()));
            } else {
                print_json(&json!({ "count": moves.len() }));
            }
            Ok(0)
        }
        Command::Apply { file, mv } => {
            let g = load_graph(&file)?;
            let mv: Move = mv.parse().map_err(|e: gbs_core::moves::ParseMoveError| Exit(EXIT_USAGE, e.into()))?;
            let applied = mv.apply(&g).map_err(|e| semantic(e.into()))?;
            print_json(&json!({ "graph": graph_value(&applied.graph), "inverse": applied.inverse.to_string() }));
            Ok(0)
        }
        Command::Enumerate { file, moves, bounds } => {
            let g = load_graph(&file)?;
            let report =
                enumerate_space(&g, &bounds.bounds(), bounds.move_set(moves)).map_err(|e| semantic(e.into()))?;
            print_json(&format::space_report_json(&report));
            Ok(0)
        }
        Command::SameSpace { a, b, moves, bounds } => {
            usage_checked(&a)?;
            usage_checked(&b)?;
            let search = || -> Result<(Value, u8)> {
                let (g1, g2) = (load(&a)?.graph, load(&b)?.graph);
                if g1.betti() != g2.betti() {
                    bail!("first Betti numbers differ ({} and {})", g1.betti(), g2.betti());
                }
                Ok(match same_space(&g1, &g2, &bounds.bounds(), bounds.move_set(moves))? {
                    SameSpace::Connected { trace, states } => {
                        (json!({ "connected": true, "states": states, "trace": format::trace_json(&trace) }), 0)
                    }
                    SameSpace::NotFoundWithin { bounds, states, exhausted } => (
                        json!({ "connected": null, "states": states, "exhausted": exhausted, "bounds": bounds }),
                        EXIT_INCONCLUSIVE,
                    ),
                })
            };
            let (v, code) = search().map_err(|e| Exit(EXIT_SEARCH_ERROR, e))?;
            print_json(&v);
            Ok(code)
        }
        Command::Dot { file } => {
            print!("{}", format::dot(&load_graph(&file)?));
            Ok(0)
        }
    }
}
