//! `gbs`: command-line front end for gbs-core.
//!
//! Results are `report.v1` JSON on stdout (or `--out`); graphs and maps are
//! `gbs-graph.v1` and `tt-map.v1`. Usage errors exit with 2, domain errors
//! with 1 and a JSON diagnostic on stderr.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use gbs_core::axis::{self, Axis, ExperimentConfig};
use gbs_core::corpus;
use gbs_core::cyclic::{axis_turns, cyclic_reduce, TurnKey};
use gbs_core::exec::Exec;
use gbs_core::graph::{validate_graph, GbsGraph, VertexId};
use gbs_core::json::{self as gj, GraphDoc, ReportDoc};
use gbs_core::lamination::{self, LeafLibrary};
use gbs_core::lipschitz::{enumerate_candidates, lipschitz_distance_with, sup_check_random};
use gbs_core::marked::MarkedGraph;
use gbs_core::moves;
use gbs_core::traintrack::{MapSpec, TrainTrackMap};
use gbs_core::whitehead;
use gbs_core::word::{britton_reduce, GroupWord};

#[derive(Parser)]
#[command(name = "gbs", version, about = "Deformation spaces of GBS trees")]
struct Cli {
    /// Worker threads; 0 uses all logical cores, 1 runs sequentially.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Write the main output here instead of stdout.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Inspect a gbs-graph.v1 file.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Normal forms and lengths of words in a graph.
    #[command(subcommand)]
    Word(WordCmd),
    /// Elementary deformations.
    #[command(subcommand)]
    Move(MoveCmd),
    /// Lipschitz distance between two marked graphs.
    Dist(DistArgs),
    /// Train track maps.
    #[command(subcommand)]
    Tt(TtCmd),
    /// Attracting lamination of a train track map.
    #[command(subcommand)]
    Lam(LamCmd),
    /// Whitehead graphs.
    #[command(subcommand)]
    Wh(WhCmd),
    /// Projections onto the axis of the bundled automorphism.
    #[command(subcommand)]
    Axis(AxisCmd),
    /// Write the bundled examples.
    Examples(ExamplesArgs),
}

#[derive(Subcommand)]
enum GraphCmd {
    /// Structured list of invariant violations.
    Validate { file: PathBuf },
    /// Volume, big vertices, collapsible edges and first Betti number.
    Stats { file: PathBuf },
    /// Rescale to volume 1.
    Normalize { file: PathBuf },
}

#[derive(Args)]
struct WordArgs {
    /// gbs-graph.v1 file.
    #[arg(long)]
    graph: PathBuf,
    /// Base vertex; defaults to the graph's base.
    #[arg(long)]
    base: Option<String>,
    /// Read the word in the reference presentation and realize it.
    #[arg(long)]
    reference: bool,
    /// Tokens such as `a^2 t A`.
    #[arg(required = true)]
    tokens: Vec<String>,
}

#[derive(Subcommand)]
enum WordCmd {
    /// Britton normal form.
    Reduce(WordArgs),
    /// Cyclically reduced form and conjugator.
    Cyclic(WordArgs),
    /// Translation length.
    Length(WordArgs),
    /// Turns crossed by the axis.
    Turns(WordArgs),
}

#[derive(Subcommand)]
enum MoveCmd {
    Subdivide {
        file: PathBuf,
        #[arg(long)]
        edge: String,
        /// Lengths of the two halves, `l1,l2`.
        #[arg(long, value_delimiter = ',', num_args = 2)]
        split: Vec<f64>,
    },
    Collapse {
        file: PathBuf,
        #[arg(long)]
        edge: String,
    },
    Expand {
        file: PathBuf,
        #[arg(long)]
        vertex: String,
        /// Outgoing edges moved to the new vertex.
        #[arg(long, value_delimiter = ',')]
        dirs: Vec<String>,
        #[arg(long)]
        d: i64,
        #[arg(long, default_value_t = 0.1)]
        len: f64,
    },
    Random {
        file: PathBuf,
        #[arg(long, default_value_t = 5)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct DistArgs {
    a: PathBuf,
    b: PathBuf,
    /// `witness` adds the realizing candidate.
    #[arg(long)]
    report: Option<String>,
    /// Also compare with this many random classes.
    #[arg(long, default_value_t = 0)]
    sup_samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum TtCmd {
    /// Validity, PF metric, gates and the train track verdict.
    Check { map: PathBuf },
    /// Cancellation constants in the PF metric.
    Constants { map: PathBuf },
    /// Images of a path (domain word from a vertex) under iterates.
    Iterate {
        map: PathBuf,
        #[arg(long)]
        from: Option<String>,
        #[arg(long, short = 'n', default_value_t = 1)]
        n: usize,
        #[arg(required = true)]
        tokens: Vec<String>,
    },
}

#[derive(Args)]
struct LamArgs {
    map: PathBuf,
    #[arg(long, default_value_t = lamination::DEFAULT_K_MAX)]
    k_max: usize,
    /// Directory for cached libraries.
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Subcommand)]
enum LamCmd {
    /// Build (or load) the leaf library.
    Build(LamArgs),
    /// Maximal leaf segments on the axis of a reference word.
    Pieces {
        #[command(flatten)]
        lam: LamArgs,
        #[arg(long, short = 'l')]
        l: f64,
        #[arg(required = true)]
        tokens: Vec<String>,
    },
    /// Fraction of the axis covered by disjoint pieces.
    Ratio {
        #[command(flatten)]
        lam: LamArgs,
        #[arg(long, short = 'l')]
        l: f64,
        #[arg(required = true)]
        tokens: Vec<String>,
    },
}

#[derive(Subcommand)]
enum WhCmd {
    /// Whitehead graph at a vertex, of the lamination of a map or of words.
    Graph {
        /// tt-map.v1 file: use the leaves of its lamination.
        #[arg(long, conflicts_with = "graph")]
        map: Option<PathBuf>,
        /// gbs-graph.v1 file: use the axes of the given reference words.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        vertex: Option<String>,
        #[arg(long)]
        dot: bool,
        /// Reference words, separated by `,`.
        tokens: Vec<String>,
    },
    /// Certificate of non-simplicity for reference words.
    Certify {
        graph: PathBuf,
        /// Random trees to search for a splitting when no certificate exists.
        #[arg(long, default_value_t = 0)]
        tries: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(required = true)]
        tokens: Vec<String>,
    },
}

#[derive(Args)]
struct AxisArgs {
    /// ExperimentConfig JSON; its `projection` part configures the axis.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Parameter `n` of the bundled example.
    #[arg(long, default_value_t = corpus::DEFAULT_N)]
    n: i64,
}

#[derive(Subcommand)]
enum AxisCmd {
    /// Projection of a marked graph (over the example's reference).
    Project {
        #[command(flatten)]
        axis: AxisArgs,
        graph: PathBuf,
    },
    /// Grid minimizers of a reference element's length along the axis.
    Theta {
        #[command(flatten)]
        axis: AxisArgs,
        #[arg(required = true)]
        tokens: Vec<String>,
    },
    /// Estimate ε₀ and N from sampled elements.
    Epsilon {
        #[command(flatten)]
        axis: AxisArgs,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Contraction experiment; writes CSV with `--out`.
    Experiment {
        #[command(flatten)]
        axis: AxisArgs,
        /// Also write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ExamplesArgs {
    /// One of bs24, rose3, traintrack-ex, traintrack-inverse; all if absent.
    #[arg(long)]
    name: Option<String>,
    #[arg(long, default_value_t = corpus::DEFAULT_N)]
    n: i64,
    /// Output directory.
    #[arg(long, default_value = ".")]
    dir: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let diag = json!({
                "schema": gj::REPORT_SCHEMA,
                "kind": "error",
                "data": { "message": message(&e) },
            });
            eprintln!("{}", serde_json::to_string_pretty(&diag).unwrap());
            ExitCode::from(1)
        }
    }
}

/// Error chain joined by `: `, skipping causes already quoted by their parent.
fn message(e: &anyhow::Error) -> String {
    let mut out: Vec<String> = Vec::new();
    for c in e.chain() {
        let s = c.to_string();
        if !out.last().is_some_and(|p| p.contains(&s)) {
            out.push(s);
        }
    }
    out.join(": ")
}

fn run(cli: &Cli) -> Result<()> {
    let exec = setup_threads(cli.threads)?;
    let out = cli.out.as_deref();
    match &cli.cmd {
        Cmd::Graph(c) => graph_cmd(c, out),
        Cmd::Word(c) => word_cmd(c, out),
        Cmd::Move(c) => move_cmd(c, out),
        Cmd::Dist(a) => dist_cmd(a, exec, out),
        Cmd::Tt(c) => tt_cmd(c, out),
        Cmd::Lam(c) => lam_cmd(c, exec, out),
        Cmd::Wh(c) => wh_cmd(c, exec, out),
        Cmd::Axis(c) => axis_cmd(c, exec, out),
        Cmd::Examples(a) => examples_cmd(a),
    }
}

fn setup_threads(threads: usize) -> Result<Exec> {
    if threads == 1 {
        return Ok(Exec::Sequential);
    }
    #[cfg(feature = "parallel")]
    if threads > 1 {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().context("thread pool")?;
    }
    Ok(Exec::default())
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn report(out: Option<&Path>, kind: &str, data: impl Serialize) -> Result<()> {
    emit(out, &gj::to_string(&ReportDoc::new(kind, data)?)?)
}

fn read(p: &Path) -> Result<String> {
    fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))
}

fn load_graph(p: &Path) -> Result<MarkedGraph> {
    gj::parse_graph(&read(p)?).with_context(|| format!("loading {}", p.display()))
}

fn load_map(p: &Path) -> Result<(String, MapSpec)> {
    let text = read(p)?;
    let spec = gj::parse_map(&text).with_context(|| format!("loading {}", p.display()))?;
    Ok((text, spec))
}

fn vertex(g: &GbsGraph, name: &str) -> Result<VertexId> {
    g.vertex_by_name(name).ok_or_else(|| anyhow!("unknown vertex {name}"))
}

fn edge(g: &GbsGraph, name: &str) -> Result<gbs_core::graph::EdgeId> {
    g.edge_by_name(name).ok_or_else(|| anyhow!("unknown edge {name}"))
}

fn turn_name(g: &GbsGraph, t: &TurnKey) -> String {
    format!(
        "{{{}.{}, {}.{}}}",
        g.edge_name(t.a.edge),
        t.a.residue,
        g.edge_name(t.b.edge),
        t.b.residue
    )
}

fn graph_cmd(c: &GraphCmd, out: Option<&Path>) -> Result<()> {
    match c {
        GraphCmd::Validate { file } => {
            let doc: GraphDoc = serde_json::from_str(&read(file)?)?;
            let edges = gj::edges_from_docs(&doc.graph.vertices, &doc.graph.edges)?;
            let g = GbsGraph::from_parts_unchecked(doc.graph.vertices.clone(), edges);
            let rep = validate_graph(&g);
            let valid = rep.is_valid();
            report(out, "graph-validate", &rep)?;
            if !valid {
                return Err(anyhow!("graph is invalid"));
            }
            Ok(())
        }
        GraphCmd::Stats { file } => {
            let m = load_graph(file)?;
            let g = m.graph();
            report(out, "graph-stats", json!({ "stats": g.stats(), "betti_number": g.betti_number()? }))
        }
        GraphCmd::Normalize { file } => emit(out, &gj::graph_json(&load_graph(file)?.normalize_volume())?),
    }
}

/// A word argument as a word in the graph of `m`.
fn parse_word(m: &MarkedGraph, a: &WordArgs) -> Result<GroupWord> {
    if a.reference {
        let r = m.reference();
        let w = GroupWord::parse(r.graph(), r.base(), &a.tokens)?;
        return Ok(m.realize(&w)?);
    }
    let g = m.graph();
    let base = match &a.base {
        Some(b) => vertex(g, b)?,
        None => m.base(),
    };
    Ok(GroupWord::parse(g, base, &a.tokens)?)
}

fn word_cmd(c: &WordCmd, out: Option<&Path>) -> Result<()> {
    let a = match c {
        WordCmd::Reduce(a) | WordCmd::Cyclic(a) | WordCmd::Length(a) | WordCmd::Turns(a) => a,
    };
    let m = load_graph(&a.graph)?;
    let g = m.graph();
    let w = parse_word(&m, a)?;
    match c {
        WordCmd::Reduce(_) => report(out, "word-reduce", json!({ "reduced": britton_reduce(g, &w).tokens(g) })),
        WordCmd::Cyclic(_) => {
            let (cw, conj) = cyclic_reduce(g, &britton_reduce(g, &w))?;
            report(
                out,
                "word-cyclic",
                json!({
                    "cyclic": cw.to_word().tokens(g),
                    "start": g.vertex_name(cw.start()),
                    "conjugator": conj.tokens(g),
                    "elliptic": cw.is_elliptic(),
                }),
            )
        }
        WordCmd::Length(_) => {
            let l = gbs_core::cyclic::translation_length(g, &britton_reduce(g, &w))?;
            report(out, "word-length", json!({ "translation_length": l }))
        }
        WordCmd::Turns(_) => {
            let turns = axis_turns(g, &britton_reduce(g, &w))?;
            report(out, "word-turns", json!({ "turns": turns.iter().map(|t| turn_name(g, t)).collect::<Vec<_>>() }))
        }
    }
}

fn move_cmd(c: &MoveCmd, out: Option<&Path>) -> Result<()> {
    let m = match c {
        MoveCmd::Subdivide { file, edge: e, split } => {
            let m = load_graph(file)?;
            let e = edge(m.graph(), e)?;
            moves::subdivide(&m, e, (split[0], split[1]))?
        }
        MoveCmd::Collapse { file, edge: e } => {
            let m = load_graph(file)?;
            let e = edge(m.graph(), e)?;
            moves::collapse(&m, e)?
        }
        MoveCmd::Expand { file, vertex: v, dirs, d, len } => {
            let m = load_graph(file)?;
            let g = m.graph();
            let v = vertex(g, v)?;
            let dirs = dirs.iter().map(|n| edge(g, n)).collect::<Result<Vec<_>>>()?;
            moves::expand(&m, v, &dirs, *d, *len)?
        }
        MoveCmd::Random { file, steps, seed } => moves::random_deform(&load_graph(file)?, *steps, *seed),
    };
    emit(out, &gj::graph_json(&m)?)
}

fn dist_cmd(a: &DistArgs, exec: Exec, out: Option<&Path>) -> Result<()> {
    let x = load_graph(&a.a)?;
    let y = load_graph(&a.b)?;
    let r = lipschitz_distance_with(&x, &y, exec)?;
    let mut data = json!({
        "lip": r.lip,
        "d_lip": r.d_lip,
        "witness_word": r.witness.word.tokens(x.graph()),
    });
    if a.report.as_deref() == Some("witness") {
        data["witness_shape"] = serde_json::to_value(r.witness.shape)?;
        data["witness_cyclic"] = json!(r.witness.cyclic.to_word().tokens(x.graph()));
        data["candidates"] = json!(enumerate_candidates(&x)?.len());
    } else if let Some(other) = &a.report {
        return Err(anyhow!("unknown report kind {other}"));
    }
    if a.sup_samples > 0 {
        data["sup_random"] = json!(sup_check_random(&x, &y, a.sup_samples, a.seed)?);
    }
    report(out, "dist", data)
}

fn tt_cmd(c: &TtCmd, out: Option<&Path>) -> Result<()> {
    match c {
        TtCmd::Check { map } => {
            let (_, spec) = load_map(map)?;
            let tt = TrainTrackMap::new(&spec)?;
            let g = tt.graph();
            let (tt, pf) = tt.with_pf_metric(1e-13)?;
            let v = tt.verdict();
            let gates: Vec<Vec<Vec<String>>> = v
                .gates
                .gates
                .iter()
                .map(|gs| {
                    gs.iter()
                        .map(|gate| gate.iter().map(|d| format!("{}.{}", g.edge_name(d.edge), d.residue)).collect())
                        .collect()
                })
                .collect();
            report(
                out,
                "tt-check",
                json!({
                    "verdict": if v.is_train_track { "train track" } else { "not a train track" },
                    "lambda": pf.lambda,
                    "pf_residual": pf.residual,
                    "lengths": pf.edges.iter().zip(&pf.lengths)
                        .map(|(e, l)| (g.edge_name(*e).to_string(), *l))
                        .collect::<std::collections::BTreeMap<_, _>>(),
                    "transition_matrix": pf.matrix,
                    "gates": gates,
                    "illegal_taken": v.illegal_taken.iter().map(|t| turn_name(g, t)).collect::<Vec<_>>(),
                    "corrections": g.edges().map(|e| tt.correction(e).to_string()).collect::<Vec<_>>(),
                }),
            )
        }
        TtCmd::Constants { map } => {
            let (_, spec) = load_map(map)?;
            let (tt, pf) = TrainTrackMap::new(&spec)?.with_pf_metric(1e-13)?;
            report(out, "tt-constants", tt.constants(pf.lambda))
        }
        TtCmd::Iterate { map, from, n, tokens } => {
            let (_, spec) = load_map(map)?;
            let tt = TrainTrackMap::new(&spec)?;
            let g = tt.graph();
            let start = match from {
                Some(v) => vertex(g, v)?,
                None => tt.domain().base(),
            };
            let w = britton_reduce(g, &GroupWord::parse(g, start, tokens)?);
            let mut steps = vec![json!({ "word": w.tokens(g), "illegal_turns": tt.illegal_turn_count(&w) })];
            let mut cur = w;
            for _ in 0..*n {
                cur = tt.iterate(&cur, 1)?;
                steps.push(json!({ "word": cur.tokens(g), "illegal_turns": tt.illegal_turn_count(&cur) }));
            }
            report(out, "tt-iterate", json!({ "steps": steps }))
        }
    }
}

/// Library for a map, read from or written to a cache keyed by the SHA-256
/// of the map document and `k_max`.
fn library(text: &str, tt: &TrainTrackMap, a: &LamArgs, exec: Exec) -> Result<(LeafLibrary, Option<PathBuf>)> {
    let Some(dir) = &a.cache else {
        return Ok((lamination::leaf_library_with(tt, a.k_max, exec)?, None));
    };
    let mut h = Sha256::new();
    h.update(text.as_bytes());
    h.update(a.k_max.to_le_bytes());
    let key: String = h.finalize().iter().map(|b| format!("{b:02x}")).collect();
    let path = dir.join(format!("{key}.lib"));
    if let Ok(bytes) = fs::read(&path) {
        return Ok((LeafLibrary::from_bytes(tt.graph(), &bytes)?, Some(path)));
    }
    let lib = lamination::leaf_library_with(tt, a.k_max, exec)?;
    fs::create_dir_all(dir)?;
    fs::write(&path, lib.to_bytes())?;
    Ok((lib, Some(path)))
}

fn lam_cmd(c: &LamCmd, exec: Exec, out: Option<&Path>) -> Result<()> {
    let a = match c {
        LamCmd::Build(a) => a,
        LamCmd::Pieces { lam, .. } | LamCmd::Ratio { lam, .. } => lam,
    };
    let (text, spec) = load_map(&a.map)?;
    let (tt, _) = TrainTrackMap::new(&spec)?.with_pf_metric(1e-13)?;
    let (lib, cache) = library(&text, &tt, a, exec)?;
    let g = tt.graph();
    let axis_of = |tokens: &[String]| -> Result<_> {
        let r = tt.domain().reference();
        let w = tt.domain().realize(&GroupWord::parse(r.graph(), r.base(), tokens)?)?;
        let c = cyclic_reduce(g, &w)?.0;
        if c.is_elliptic() {
            return Err(anyhow!("element is elliptic"));
        }
        Ok(c)
    };
    match c {
        LamCmd::Build(_) => report(
            out,
            "lam-build",
            json!({
                "k_max": lib.k_max(),
                "words": lib.generations.iter().map(|x| x.len()).collect::<Vec<_>>(),
                "states": lib.index().state_count(),
                "quasi_periodicity_gap": lib.quasi_periodicity_gap(g, lib.k_max()),
                "cache": cache.map(|p| p.display().to_string()),
            }),
        ),
        LamCmd::Pieces { l, tokens, .. } => {
            let c = axis_of(tokens)?;
            report(out, "lam-pieces", json!({ "pieces": lamination::detect_pieces(g, &c, &lib, *l) }))
        }
        LamCmd::Ratio { l, tokens, .. } => {
            let c = axis_of(tokens)?;
            report(out, "lam-ratio", json!({ "ratio": lamination::lamination_ratio(g, &c, &lib, *l) }))
        }
    }
}

/// Reference words separated by `,` tokens.
fn reference_words(m: &MarkedGraph, tokens: &[String]) -> Result<Vec<GroupWord>> {
    let r = m.reference();
    tokens
        .split(|t| t == ",")
        .filter(|p| !p.is_empty())
        .map(|p| Ok(GroupWord::parse(r.graph(), r.base(), p)?))
        .collect()
}

fn wh_cmd(c: &WhCmd, exec: Exec, out: Option<&Path>) -> Result<()> {
    match c {
        WhCmd::Graph { map, graph, vertex: v, dot, tokens } => {
            let (g, turns) = match (map, graph) {
                (Some(p), _) => {
                    let (_, spec) = load_map(p)?;
                    let tt = TrainTrackMap::new(&spec)?;
                    let lib = lamination::leaf_library_with(&tt, lamination::DEFAULT_K_MAX, exec)?;
                    let g = tt.graph().clone();
                    let turns = whitehead::leaf_turn_set(&g, &lib);
                    (g, turns)
                }
                (None, Some(p)) => {
                    let m = load_graph(p)?;
                    let words = reference_words(&m, tokens)?
                        .iter()
                        .map(|w| m.realize(w))
                        .collect::<Result<Vec<_>, _>>()?;
                    let turns = whitehead::axis_turn_set(m.graph(), &words)?;
                    (m.graph().clone(), turns)
                }
                (None, None) => return Err(anyhow!("give --map or --graph")),
            };
            let vs: Vec<VertexId> = match v {
                Some(name) => vec![vertex(&g, name)?],
                None => g.vertices().collect(),
            };
            if *dot {
                let text: String = vs.iter().map(|&v| whitehead::to_dot(&g, &whitehead::whitehead_graph(&g, &turns, v))).collect();
                return emit(out, &text);
            }
            let rows: Vec<_> = vs
                .iter()
                .map(|&v| {
                    let wh = whitehead::whitehead_graph(&g, &turns, v);
                    let cut = whitehead::cut_analysis(&wh);
                    json!({
                        "vertex": g.vertex_name(v),
                        "directions": wh.directions.iter().map(|d| format!("{}.{}", g.edge_name(d.edge), d.residue)).collect::<Vec<_>>(),
                        "edges": wh.edges,
                        "connected": cut.connected,
                        "cut_vertices": cut.cut_vertices,
                    })
                })
                .collect();
            report(out, "wh-graph", json!({ "vertices": rows }))
        }
        WhCmd::Certify { graph, tries, seed, tokens } => {
            let m = load_graph(graph)?;
            let targets = reference_words(&m, tokens)?;
            let cert = whitehead::nonsimplicity_certificate(&m, &targets)?;
            let split = if cert.is_none() && *tries > 0 {
                whitehead::search_splitting_tree(&m, &targets, *tries, *seed, exec)?
            } else {
                None
            };
            report(out, "wh-certify", json!({ "certificate": cert, "splitting_hint": split }))
        }
    }
}

fn axis_setup(a: &AxisArgs) -> Result<(Axis, ExperimentConfig)> {
    let cfg: ExperimentConfig = match &a.config {
        Some(p) => serde_json::from_str(&read(p)?).with_context(|| format!("parsing {}", p.display()))?,
        None => ExperimentConfig::default(),
    };
    cfg.projection.validate()?;
    Ok((Axis::bundled(a.n)?, cfg))
}

fn axis_cmd(c: &AxisCmd, exec: Exec, out: Option<&Path>) -> Result<()> {
    match c {
        AxisCmd::Project { axis: a, graph } => {
            let (ax, cfg) = axis_setup(a)?;
            let x = load_graph(graph)?;
            check_reference(&x, &ax)?;
            let p = axis::project_tree(&ax, &x, &cfg.projection, exec)?;
            report(out, "axis-project", p)
        }
        AxisCmd::Theta { axis: a, tokens } => {
            let (ax, cfg) = axis_setup(a)?;
            let r = ax.phi().presentation();
            let g = GroupWord::parse(r.graph(), r.base(), tokens)?;
            report(out, "axis-theta", axis::theta_of_element(&ax, &g, &cfg.projection)?)
        }
        AxisCmd::Epsilon { axis: a, samples } => {
            let (ax, cfg) = axis_setup(a)?;
            let sample = ax.sample_loxodromics(*samples, cfg.projection.seed);
            report(out, "axis-epsilon", axis::estimate_epsilon0(&ax, &sample, 6, cfg.projection.max_edges, exec)?)
        }
        AxisCmd::Experiment { axis: a, report: rp } => {
            let (ax, cfg) = axis_setup(a)?;
            let rep = axis::contraction_experiment(&ax, &cfg, exec)?;
            if let Some(p) = rp {
                fs::write(p, gj::to_string(&ReportDoc::new("axis-experiment", &rep)?)?)?;
            }
            emit(out, &rep.to_csv())
        }
    }
}

/// Words of `x` are read in the axis's reference, so the two reference
/// presentations must agree.
fn check_reference(x: &MarkedGraph, ax: &Axis) -> Result<()> {
    if gj::presentation_to_doc(x.reference()) != gj::presentation_to_doc(ax.tree().reference()) {
        return Err(anyhow!("graph is not marked over the example's reference presentation"));
    }
    Ok(())
}

fn examples_cmd(a: &ExamplesArgs) -> Result<()> {
    let names: Vec<&str> = match &a.name {
        Some(n) if corpus::NAMES.contains(&n.as_str()) => vec![n.as_str()],
        Some(n) => return Err(anyhow!("unknown example {n}; choose from {}", corpus::NAMES.join(", "))),
        None => corpus::NAMES.to_vec(),
    };
    fs::create_dir_all(&a.dir)?;
    let mut written = Vec::new();
    for name in names {
        let text = match name {
            "bs24" => gj::graph_json(&corpus::bs24_marked())?,
            "rose3" => gj::graph_json(&corpus::reference_point(corpus::rose3(a.n))?)?,
            "traintrack-ex" => gj::map_json(&corpus::traintrack_spec(a.n))?,
            _ => gj::map_json(&corpus::traintrack_spec_minus(a.n))?,
        };
        let path = a.dir.join(format!("{name}.json"));
        fs::write(&path, text)?;
        written.push(path.display().to_string());
    }
    report(None, "examples", json!({ "written": written }))
}
