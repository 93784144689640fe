//! Argument parsing and dispatch for the `trifree` binary.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use trifree::antichain::{make_envelope, Antichain, Envelope};
use trifree::bitseq::BitSeq;
use trifree::coding::graph_coded_by;
use trifree::criteria::{
    check_incremental_parallel_ones, check_parallel_ones_criterion, check_spoc, check_splitting_criterion,
    check_strong_coding_tree, check_strong_tf_tree, check_strongly_skew, check_tfc, spl_set, Report,
};
use trifree::diagonal::build_diagonal_antichain;
use trifree::enumerate::{enumerate_types, upper_bound_crude};
use trifree::incremental::{build_incremental, Witness};
use trifree::similarity::{compare_trees, is_strongly_diagonal};
use trifree::stf::build_strong_tf_tree;
use trifree::valid::check_valid_subtree;
use trifree::{CodingTree, Error, LazyAmbientTree, NodeEnumeration, RequirementSchedule, Result};

use crate::dot::tree_to_dot;
use crate::harness::{color_experiment, strong_tf_rule};
use crate::io::{from_json, parse_graph, read_text, to_json, write_text, AntichainFile, HostKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "trifree", version, about = "Coding trees for triangle-free graphs")]
pub struct Cli {
    /// Worker threads for parallel enumeration (defaults to all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// Strong triangle-free tree.
    Stf,
    /// Strong coding tree.
    Sct,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Battery {
    Stf,
    Sct,
    /// Strong coding tree clauses plus incremental parallel 1's.
    Incremental,
    /// Strong coding tree clauses plus the strict criterion.
    Strict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
}

#[derive(Debug, clap::Args)]
pub struct BuildArgs {
    #[arg(long, value_enum, default_value = "sct")]
    pub kind: Kind,
    /// Number of coding nodes.
    #[arg(long)]
    pub coding: usize,
    /// Requirement schedule file, one entry per line.
    #[arg(long)]
    pub schedule: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a tree and print it as JSON, or print its levels.
    Build {
        #[command(flatten)]
        build: BuildArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print every level, with the immediate extensions as the last one.
        #[arg(long)]
        export_levels: bool,
    },
    /// Run the criterion battery on a tree file.
    Validate {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long, value_enum, default_value = "sct")]
        battery: Battery,
        #[arg(long)]
        json: bool,
    },
    /// Print the graph coded by a tree file.
    CodeGraph {
        #[arg(long)]
        tree: PathBuf,
    },
    /// Build the diagonal antichain recoding the first `n` coding nodes.
    Antichain {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the incremental tree with its witness pool.
    Incremental {
        #[arg(long)]
        coding: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count strict similarity types of antichains coding a graph.
    Types {
        /// Edge-list file: vertex count, then one `i j` per line.
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        depth: usize,
        /// Directory receiving one representative per type.
        #[arg(long)]
        certificates: Option<PathBuf>,
    },
    /// Build the envelope of an antichain and check the strict criterion.
    Envelope {
        #[arg(long)]
        antichain: PathBuf,
    },
    /// Write a tree as JSON or DOT.
    Export {
        /// Tree file to read; otherwise a tree is built.
        #[arg(long, conflicts_with = "coding")]
        tree: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "sct")]
        kind: Kind,
        #[arg(long)]
        coding: Option<usize>,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Color copies of a pattern at random and search for subtrees with few colors.
    ColorExperiment {
        #[command(flatten)]
        build: BuildArgs,
        /// JSON list of bit strings; defaults to the first coding node.
        #[arg(long)]
        pattern: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        colors: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest top level searched exhaustively.
        #[arg(long, default_value_t = 16)]
        max_exhaustive: usize,
    },
}

fn schedule(path: &Option<PathBuf>) -> Result<RequirementSchedule> {
    match path {
        Some(p) => RequirementSchedule::parse(&read_text(p)?),
        None => Ok(RequirementSchedule::canonical()),
    }
}

fn need_coding(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Parse("--coding must be at least 1".into()));
    }
    Ok(())
}

/// Builds the requested tree. Strong coding trees come with the ambient
/// tree they were cut from.
fn build(args: &BuildArgs) -> Result<(CodingTree, Option<LazyAmbientTree>)> {
    need_coding(args.coding)?;
    let sched = schedule(&args.schedule)?;
    match args.kind {
        Kind::Stf => Ok((build_strong_tf_tree(&sched, args.coding)?, None)),
        Kind::Sct => {
            let mut amb = LazyAmbientTree::new(sched, NodeEnumeration::canonical());
            let t = amb.prefix(args.coding - 1)?;
            Ok((t, Some(amb)))
        }
    }
}

fn emit(out: &mut dyn Write, path: &Option<PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => write_text(p, text),
        None => writeln!(out, "{text}").map_err(|e| Error::Parse(e.to_string())),
    }
}

fn level_line(len: usize, level: &[&BitSeq]) -> String {
    let parts: Vec<String> = level
        .iter()
        .map(|u| if u.is_empty() { "⟨⟩".to_string() } else { u.to_string() })
        .collect();
    format!("Lev({len}) = {{{}}}", parts.join(", "))
}

fn battery(t: &CodingTree, which: Battery) -> Vec<Report> {
    let mut reports = vec![check_tfc(t)];
    match which {
        Battery::Stf => {
            reports.push(check_splitting_criterion(t));
            reports.push(check_strong_tf_tree(t));
        }
        Battery::Sct | Battery::Incremental | Battery::Strict => {
            reports.push(check_strongly_skew(t));
            reports.push(check_parallel_ones_criterion(t));
            reports.push(check_strong_coding_tree(t, true));
            if which == Battery::Incremental {
                reports.push(check_incremental_parallel_ones(t));
            }
            if which == Battery::Strict {
                reports.push(check_spoc(t));
            }
        }
    }
    reports
}

fn report_line(r: &Report) -> String {
    match &r.violation {
        None => format!("PASS {}", r.check),
        Some(v) => {
            let nodes: Vec<String> = v.nodes.iter().map(|u| u.to_string()).collect();
            let level = v.level.map_or("-".to_string(), |l| l.to_string());
            format!("FAIL {} [{}] level {level}: {} ({})", r.check, v.clause, v.detail, nodes.join(", "))
        }
    }
}

#[derive(Serialize)]
struct AntichainOutput {
    summary: trifree::diagonal::DiagonalSummary,
    graph: trifree::CodedGraph,
    strongly_diagonal: bool,
    derived_tree_matches_ambient: bool,
}

#[derive(Serialize)]
struct IncrementalOutput<'a> {
    tree: &'a CodingTree,
    witnesses: &'a [Witness],
    incremental_parallel_ones: Report,
}

#[derive(Serialize)]
struct Certificate<'a> {
    code: &'a trifree::antichain::TypeCode,
    representative: &'a Antichain,
}

#[derive(Serialize)]
struct EnvelopeOutput {
    envelope: Envelope,
    spoc: Report,
}

/// Runs one command, writing human-readable or JSON output to `out`, and
/// returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> i32 {
    if let Some(j) = cli.jobs {
        // A second call in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
    }
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    let w = |out: &mut dyn Write, s: String| writeln!(out, "{s}").map_err(|e| Error::Parse(e.to_string()));
    match cmd {
        Command::Build { build: args, out: path, export_levels } => {
            let (t, _) = build(&args)?;
            if export_levels {
                let levels = t.tree().levels();
                let mut text: Vec<String> = levels.iter().map(|(&len, lv)| level_line(len, lv)).collect();
                if !t.extension().is_empty() {
                    let ext: Vec<&BitSeq> = t.extension().iter().collect();
                    text.push(level_line(t.tree().height() + 1, &ext));
                }
                let coding: Vec<String> = t.coding().iter().enumerate().map(|(i, c)| format!("c{i} = {c}")).collect();
                text.extend(coding);
                if args.kind == Kind::Sct {
                    for n in 0..t.coding().len() {
                        let spl: Vec<String> = spl_set(&t, n)?.iter().map(|u| u.to_string()).collect();
                        text.push(format!("Spl({n}) = {{{}}}", spl.join(", ")));
                    }
                }
                emit(out, &path, &text.join("\n"))?;
            } else {
                emit(out, &path, &to_json(&t))?;
            }
            Ok(EXIT_OK)
        }
        Command::Validate { tree, battery: which, json } => {
            let t: CodingTree = from_json(&read_text(&tree)?)?;
            let reports = battery(&t, which);
            if json {
                w(out, to_json(&reports))?;
            } else {
                for r in &reports {
                    w(out, report_line(r))?;
                }
            }
            Ok(if reports.iter().all(Report::passed) { EXIT_OK } else { EXIT_INVALID })
        }
        Command::CodeGraph { tree } => {
            let t: CodingTree = from_json(&read_text(&tree)?)?;
            let g = graph_coded_by(&t);
            w(out, format!("vertices: {}", g.vertex_count))?;
            w(out, format!("edges: {}", g.edges.len()))?;
            for (a, b) in &g.edges {
                w(out, format!("{a} {b}"))?;
            }
            Ok(EXIT_OK)
        }
        Command::Antichain { n, out: path } => {
            need_coding(n)?;
            let mut amb = LazyAmbientTree::canonical();
            let d = build_diagonal_antichain(&mut amb, n)?;
            let result = AntichainOutput {
                summary: d.summary(),
                graph: d.graph(),
                strongly_diagonal: is_strongly_diagonal(d.nodes()),
                derived_tree_matches_ambient: compare_trees(&d.star(), &d.ambient_prefix()).is_ok(),
            };
            emit(out, &path, &to_json(&result))?;
            Ok(EXIT_OK)
        }
        Command::Incremental { coding, out: path } => {
            need_coding(coding)?;
            let mut amb = LazyAmbientTree::canonical();
            let s = build_incremental(&mut amb, coding)?;
            let ipoc = check_incremental_parallel_ones(s.tree());
            let passed = ipoc.passed();
            let result = IncrementalOutput {
                tree: s.tree(),
                witnesses: s.witnesses(),
                incremental_parallel_ones: ipoc,
            };
            emit(out, &path, &to_json(&result))?;
            Ok(if passed { EXIT_OK } else { EXIT_INVALID })
        }
        Command::Types { graph, depth, certificates } => {
            let g = parse_graph(&read_text(&graph)?)?;
            need_coding(depth)?;
            let mut amb = LazyAmbientTree::canonical();
            let host = build_diagonal_antichain(&mut amb, depth)?;
            let r = enumerate_types(&g, &host, depth)?;
            if let Some(dir) = certificates {
                std::fs::create_dir_all(&dir).map_err(|e| Error::Parse(format!("{}: {e}", dir.display())))?;
                for (i, (code, z)) in r.codes.iter().zip(&r.representatives).enumerate() {
                    let cert = Certificate { code, representative: z };
                    write_text(&dir.join(format!("type-{i}.json")), &to_json(&cert))?;
                }
            }
            w(out, to_json(&r))?;
            eprintln!("subtree factor of the crude bound: {}", upper_bound_crude(&g));
            Ok(EXIT_OK)
        }
        Command::Envelope { antichain } => {
            let f: AntichainFile = from_json(&read_text(&antichain)?)?;
            need_coding(f.host.coding)?;
            let mut amb = LazyAmbientTree::canonical();
            let pool: Vec<BitSeq> = match f.host.kind {
                HostKind::Incremental => build_incremental(&mut amb, f.host.coding)?
                    .witnesses()
                    .iter()
                    .map(|w| w.node.clone())
                    .collect(),
                HostKind::Diagonal => Vec::new(),
            };
            let e = make_envelope(&f.nodes, &pool)?;
            let spoc = check_spoc(&e.union.induced());
            let passed = spoc.passed();
            w(out, to_json(&EnvelopeOutput { envelope: e, spoc }))?;
            Ok(if passed { EXIT_OK } else { EXIT_INVALID })
        }
        Command::Export { tree, kind, coding, format, out: path } => {
            let (t, name) = match (tree, coding) {
                (Some(p), _) => (from_json::<CodingTree>(&read_text(&p)?)?, file_stem(&p)),
                (None, Some(n)) => {
                    let args = BuildArgs { kind, coding: n, schedule: None };
                    (build(&args)?.0, format!("{kind:?}-{n}").to_lowercase())
                }
                (None, None) => return Err(Error::Parse("export needs --tree or --coding".into())),
            };
            let text = match format {
                Format::Json => to_json(&t),
                Format::Dot => tree_to_dot(&t, &name),
            };
            emit(out, &path, &text)?;
            Ok(EXIT_OK)
        }
        Command::ColorExperiment { build: args, pattern, colors, seed, max_exhaustive } => {
            let (host, amb) = build(&args)?;
            let pattern = match pattern {
                Some(p) => from_json::<Antichain>(&read_text(&p)?)?,
                None => Antichain::new([host.coding()[0].clone()])?,
            };
            let report = match amb {
                None => color_experiment(&host, &pattern, colors, seed, &mut strong_tf_rule(&host), max_exhaustive)?,
                Some(mut amb) => {
                    let mut rule = |s: &CodingTree| {
                        !s.coding().is_empty() && check_valid_subtree(s.tree(), &mut amb).is_ok_and(|r| r.passed())
                    };
                    color_experiment(&host, &pattern, colors, seed, &mut rule, max_exhaustive)?
                }
            };
            w(out, to_json(&report))?;
            Ok(EXIT_OK)
        }
    }
}

fn file_stem(p: &Path) -> String {
    p.file_stem().map_or("tree".into(), |s| s.to_string_lossy().into_owned())
}
