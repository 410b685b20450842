use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use honeycut::json::{self, JsonError};
use honeycut::lattice::{build_graph, nodes_from_points, Edge, GraphConfig, NeighborBand};
use honeycut::pgm::{self, PgmError};
use honeycut::svg::{CutMark, SvgScene};
use honeycut::synth::{apply_defects, generate_lattice, render_heatmap, DefectSpec, Orientation};
use honeycut::{
    detect_nodes, plan_cuts, CentroidOptions, CentroidWeighting, Heatmap, LatticeGraph, NodePoint,
    OffsetMode, PipelineConfig, PlanInput, Point2, Polygon,
};

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Stage(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Stage(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<JsonError> for CliError {
    fn from(e: JsonError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<PgmError> for CliError {
    fn from(e: PgmError) -> Self {
        match e {
            PgmError::NotFound(_) | PgmError::Io { .. } => CliError::Io(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser)]
#[command(name = "honeycut", version, about = "Cut planning for honeycomb blocks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic lattice and its detector-style heatmap
    Synth(SynthArgs),
    /// Detect lattice nodes in a heatmap
    Detect(DetectArgs),
    /// Link detected nodes into a lattice graph
    Graph(GraphArgs),
    /// Plan cuts for a target outline
    Plan(PlanArgs),
    /// Render a graph, target and plan as SVG
    Render(RenderArgs),
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
    rows: u32,
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
    cols: u32,
    /// Edge length in pixels
    #[arg(long, default_value_t = 40.0, value_parser = positive)]
    edge_len: f64,
    /// Gaussian blob width in pixels
    #[arg(long, default_value_t = 2.0, value_parser = positive)]
    sigma: f64,
    /// Per-node positional noise in pixels
    #[arg(long, default_value_t = 0.0, value_parser = non_negative)]
    jitter: f64,
    /// Number of dented nodes
    #[arg(long, default_value_t = 0)]
    dents: usize,
    /// Dent displacement in pixels
    #[arg(long, default_value_t = 0.0, value_parser = non_negative)]
    dent_magnitude: f64,
    /// Probability of dropping each node
    #[arg(long, default_value_t = 0.0, value_parser = unit_open)]
    dropout: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Flat-top cells instead of pointy-top
    #[arg(long)]
    flat_top: bool,
    #[arg(long, default_value = "lattice.json")]
    lattice_out: PathBuf,
    #[arg(long, default_value = "heatmap.pgm")]
    heatmap_out: PathBuf,
}

#[derive(Args)]
struct DetectArgs {
    /// Heatmap (binary PGM)
    #[arg(long)]
    input: PathBuf,
    /// Brightness threshold; pixels strictly above it are kept
    #[arg(long, default_value_t = 0.3, value_parser = parse_tau)]
    tau: f64,
    #[arg(long, default_value_t = 2)]
    min_blob_area: usize,
    /// Intensity-weighted centroids
    #[arg(long)]
    weighted: bool,
    #[arg(long, default_value = "nodes.json")]
    out: PathBuf,
}

#[derive(Args)]
struct GraphArgs {
    /// Any JSON document with a `nodes` array
    #[arg(long)]
    nodes: PathBuf,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    k: u32,
    /// Accepted edge lengths as multiples of the mean kNN distance
    #[arg(long, default_value = "0.5,1.3", value_parser = parse_band)]
    band: Band,
    #[arg(long, default_value = "graph.json")]
    out: PathBuf,
}

#[derive(Args)]
struct PlanArgs {
    /// Nodes/graph/lattice JSON, or a heatmap PGM
    #[arg(long)]
    input: PathBuf,
    /// Target outline JSON: {"vertices": [[x, y], ...]}
    #[arg(long)]
    target: PathBuf,
    #[arg(long, default_value_t = 0.3, value_parser = parse_tau)]
    tau: f64,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    k: u32,
    #[arg(long, default_value = "0.5,1.3", value_parser = parse_band)]
    band: Band,
    /// Clearance as a fraction of the edge length
    #[arg(long, default_value_t = 0.4, value_parser = parse_offset)]
    offset_coeff: f64,
    /// Mask pixels per image pixel
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    supersample: u32,
    #[arg(long, default_value_t = 2)]
    min_blob_area: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Drop out-of-band crossings instead of clamping them
    #[arg(long)]
    reject: bool,
    #[arg(long)]
    weighted: bool,
    #[arg(long, default_value = "plan.json")]
    out: PathBuf,
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Grown region as PGM
    #[arg(long)]
    mask_out: Option<PathBuf>,
    /// Traced outline as SVG
    #[arg(long)]
    contour_out: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    /// Graph or lattice JSON
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    target: Option<PathBuf>,
    /// Plan JSON whose cuts are drawn
    #[arg(long)]
    plan: Option<PathBuf>,
    #[arg(long, default_value = "render.svg")]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy)]
struct Band(NeighborBand<f64>);

fn number(s: &str) -> std::result::Result<f64, String> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| format!("not a finite number: {s}"))
}

fn positive(s: &str) -> std::result::Result<f64, String> {
    number(s).and_then(|v| if v > 0.0 { Ok(v) } else { Err(format!("must be positive: {v}")) })
}

fn non_negative(s: &str) -> std::result::Result<f64, String> {
    number(s).and_then(|v| if v >= 0.0 { Ok(v) } else { Err(format!("must be non-negative: {v}")) })
}

fn unit_open(s: &str) -> std::result::Result<f64, String> {
    number(s).and_then(|v| {
        if (0.0..1.0).contains(&v) {
            Ok(v)
        } else {
            Err(format!("must be in [0, 1): {v}"))
        }
    })
}

fn parse_tau(s: &str) -> std::result::Result<f64, String> {
    number(s).and_then(|v| {
        if (0.0..1.0).contains(&v) {
            Ok(v)
        } else {
            Err(format!("tau out of range: {v} not in [0, 1)"))
        }
    })
}

fn parse_offset(s: &str) -> std::result::Result<f64, String> {
    number(s).and_then(|v| {
        if v > 0.0 && v < 0.5 {
            Ok(v)
        } else {
            Err(format!("offset coefficient out of range: {v} not in (0, 0.5)"))
        }
    })
}

fn parse_band(s: &str) -> std::result::Result<Band, String> {
    let (lo, hi) = s.split_once(',').ok_or("band must be LO,HI")?;
    NeighborBand::new(number(lo)?, number(hi)?)
        .map(Band)
        .map_err(|e| e.to_string())
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

fn read_text(path: &Path) -> Result<String> {
    let bytes = read_bytes(path)?;
    String::from_utf8(bytes).map_err(|_| CliError::Usage(format!("{} is not UTF-8", path.display())))
}

fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, contents).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn write_mask(path: &Path, mask: &honeycut::BinaryMask) -> Result<()> {
    pgm::save_mask(mask, path).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn synth(a: &SynthArgs) -> Result<()> {
    let orientation = if a.flat_top { Orientation::FlatTop } else { Orientation::PointyTop };
    let margin = (5.0 * a.sigma).ceil().max(8.0) + (6.0 * a.jitter + a.dent_magnitude).ceil();
    let lat = generate_lattice(
        a.rows as usize,
        a.cols as usize,
        a.edge_len,
        Point2::new(margin, margin),
        orientation,
    )
    .map_err(|e| CliError::Usage(e.to_string()))?;
    let spec = DefectSpec {
        jitter_sigma: a.jitter,
        dent_count: a.dents,
        dent_magnitude: a.dent_magnitude,
        dropout_prob: a.dropout,
    };
    let lat = apply_defects(&lat, &spec, a.seed).map_err(|e| CliError::Usage(e.to_string()))?;
    let (w, h) = lat.canvas_size(margin);
    let hm = render_heatmap(&lat, a.sigma, w, h).map_err(|e| CliError::Usage(e.to_string()))?;
    write(&a.lattice_out, json::to_json(&json::lattice_doc(&lat, 3)))?;
    write(&a.heatmap_out, pgm::encode_heatmap(&hm))?;
    println!(
        "nodes: {}  edges: {}  faces: {}",
        lat.nodes.len(),
        lat.adjacency.len(),
        lat.faces.len()
    );
    Ok(())
}

fn detect(a: &DetectArgs) -> Result<()> {
    let hm: Heatmap<f64> = pgm::load_heatmap(&a.input)?;
    let nodes = detect_nodes(&hm, a.tau, &centroid_options(a.min_blob_area, a.weighted));
    write(&a.out, json::to_json(&json::nodes_doc(&nodes)))?;
    println!("nodes: {}", nodes.len());
    Ok(())
}

fn centroid_options(min_blob_area: usize, weighted: bool) -> CentroidOptions {
    CentroidOptions {
        min_blob_area,
        weighting: if weighted { CentroidWeighting::Intensity } else { CentroidWeighting::Unweighted },
    }
}

fn graph(a: &GraphArgs) -> Result<()> {
    let nodes: Vec<NodePoint<f64>> = json::parse_nodes(&read_text(&a.nodes)?)?;
    let cfg = GraphConfig { k: a.k as usize, band: a.band.0 };
    let g = build_graph(nodes, &cfg).map_err(|e| CliError::Stage(format!("graph stage failed: {e}")))?;
    write(&a.out, json::to_json(&json::graph_doc(&g)))?;
    println!("nodes: {}  edges: {}", g.nodes.len(), g.edges.len());
    Ok(())
}

fn plan(a: &PlanArgs) -> Result<()> {
    let bytes = read_bytes(&a.input)?;
    let target: Polygon<f64> = json::parse_target(&read_text(&a.target)?)?;
    let config = PipelineConfig {
        tau: a.tau,
        k: a.k as usize,
        band: a.band.0,
        offset_coeff: a.offset_coeff,
        supersample: a.supersample as usize,
        min_blob_area: a.min_blob_area,
        rng_seed: a.seed,
        offset_mode: if a.reject { OffsetMode::Reject } else { OffsetMode::Clamp },
        weighting: centroid_options(a.min_blob_area, a.weighted).weighting,
        ..PipelineConfig::default()
    };
    let heatmap: Heatmap<f64>;
    let input = if bytes.starts_with(b"P") {
        heatmap = pgm::parse_heatmap(&bytes)?;
        PlanInput::Heatmap(&heatmap)
    } else {
        let text = String::from_utf8(bytes)
            .map_err(|_| CliError::Usage(format!("{} is not UTF-8", a.input.display())))?;
        PlanInput::Nodes(json::parse_nodes(&text)?)
    };
    let report = plan_cuts(input, &target, &config).map_err(|e| CliError::Stage(e.to_string()))?;
    write(&a.out, json::to_json(&json::plan_doc(&report)))?;
    if let Some(path) = &a.svg {
        let cuts: Vec<CutMark> = report
            .plan
            .cuts
            .iter()
            .map(|c| CutMark { x: c.point.x, y: c.point.y, angle_deg: c.angle.degrees() })
            .collect();
        let scene = SvgScene {
            graph: Some(&report.graph),
            target: Some(&target),
            contour: Some(&report.contour),
            cuts: &cuts,
            mark_half_len: 0.25 * report.graph.mean_edge_length,
        };
        write(path, scene.render())?;
    }
    if let Some(path) = &a.mask_out {
        write_mask(path, &report.dilated)?;
    }
    if let Some(path) = &a.contour_out {
        let scene: SvgScene<'_, f64> = SvgScene {
            graph: None,
            target: None,
            contour: Some(&report.contour),
            cuts: &[],
            mark_half_len: 0.0,
        };
        write(path, scene.render())?;
    }
    let d = &report.diagnostics;
    println!(
        "cuts: {}  clamped: {}  travel: {:.3} px",
        report.plan.cuts.len(),
        d.clamped_count,
        report.plan.travel_length
    );
    Ok(())
}

fn render(a: &RenderArgs) -> Result<()> {
    let doc = json::parse_graph(&read_text(&a.graph)?)?;
    let nodes: Vec<NodePoint<f64>> = json::parse_nodes(&read_text(&a.graph)?)?;
    let points: Vec<Point2<f64>> = nodes.iter().map(|n| n.position).collect();
    let mut edges = Vec::with_capacity(doc.edges.len());
    for e in &doc.edges {
        if e.a >= points.len() || e.b >= points.len() {
            return Err(CliError::Usage(format!("edge ({}, {}) references a missing node", e.a, e.b)));
        }
        edges.push(Edge { a: e.a, b: e.b, length: points[e.a].distance(points[e.b]) });
    }
    let graph = LatticeGraph {
        nodes: nodes_from_points(&points),
        edges,
        mean_knn_distance: doc.mean_knn_distance.0,
        mean_edge_length: doc.mean_edge_length.0,
    };
    let target: Option<Polygon<f64>> = match &a.target {
        Some(p) => Some(json::parse_target(&read_text(p)?)?),
        None => None,
    };
    let cuts: Vec<CutMark> = match &a.plan {
        Some(p) => json::parse_plan(&read_text(p)?)?
            .cuts
            .iter()
            .map(|c| CutMark { x: c.x.0, y: c.y.0, angle_deg: c.angle_deg.0 })
            .collect(),
        None => Vec::new(),
    };
    let scene = SvgScene {
        graph: Some(&graph),
        target: target.as_ref(),
        contour: None,
        cuts: &cuts,
        mark_half_len: 0.25 * graph.mean_edge_length,
    };
    write(&a.out, scene.render())?;
    println!("wrote {}", a.out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Synth(a) => synth(a),
        Command::Detect(a) => detect(a),
        Command::Graph(a) => graph(a),
        Command::Plan(a) => plan(a),
        Command::Render(a) => render(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
