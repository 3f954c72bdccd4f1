//! The `ship` subcommands.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use ship_core::hierarchy::{build_hierarchy, kz_annotate, optimize_annotations, Objective};
use ship_core::io::{
    load_hierarchy, load_points, load_tree, read_matrix_json, save_hierarchy, save_tree, write_labels_csv, CsvLimits,
};
use ship_core::metrics::{build_hst_tree, fit_dc};
use ship_core::partition::{elbow_index, median_of_elbows};
use ship_core::ultra::build_from_dissimilarity;
use ship_core::{Exec, LcaTree};

use crate::select::{resolve_objective, select, Method};
use crate::server::serve;
use crate::session::Session;

#[derive(Debug, Parser)]
#[command(name = "ship", version, about = "Optimal center-based cluster hierarchies over ultrametrics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit an ultrametric to a dataset and save it as a tree.
    Fit(FitArgs),
    /// Build the cluster hierarchy of a tree for one objective.
    Hierarchy(HierarchyArgs),
    /// Select a partition from a hierarchy and write labels.
    Partition(PartitionArgs),
    /// Print the loss curve of a tree for one objective.
    Curve(CurveArgs),
    /// Serve a fitted tree over a read-only JSON API.
    Serve(ServeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    /// Density-connectivity distance over Euclidean points.
    Dc,
    /// Axis-aligned hierarchically well-separated tree.
    Hst,
    /// A JSON dissimilarity matrix that is already a relaxed ultrametric.
    Precomputed,
}

#[derive(Debug, Args)]
pub struct Limits {
    /// Maximum CSV rows.
    #[arg(long, default_value_t = CsvLimits::default().max_rows)]
    pub max_rows: usize,
    /// Maximum CSV columns.
    #[arg(long, default_value_t = CsvLimits::default().max_cols)]
    pub max_cols: usize,
}

impl Limits {
    fn get(&self) -> CsvLimits {
        CsvLimits {
            max_rows: self.max_rows,
            max_cols: self.max_cols,
        }
    }
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Points (CSV or `{"points": ...}` JSON), or a `{"matrix": ...}` JSON file for `precomputed`.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "dc")]
    pub metric: Metric,
    /// Neighbour count for the core distance (dc only).
    #[arg(long)]
    pub mu: Option<usize>,
    /// Subdivision depth (hst only).
    #[arg(long, default_value_t = 16)]
    pub max_depth: u32,
    #[arg(long)]
    pub out: PathBuf,
    /// Run the fit on one thread.
    #[arg(long)]
    pub sequential: bool,
    #[command(flatten)]
    pub limits: Limits,
}

#[derive(Debug, Args)]
pub struct ObjectiveArgs {
    /// center, median, means, z=N or z (with --z).
    #[arg(long)]
    pub objective: Option<String>,
    /// Power for the (k, z) objective.
    #[arg(long)]
    pub z: Option<u32>,
}

impl ObjectiveArgs {
    fn resolve(&self, default: Objective) -> Result<Objective> {
        resolve_objective(self.objective.as_deref(), self.z, default).map_err(anyhow::Error::msg)
    }
}

#[derive(Debug, Args)]
pub struct HierarchyArgs {
    #[arg(long)]
    pub tree: PathBuf,
    #[command(flatten)]
    pub objective: ObjectiveArgs,
    /// Reassign equal-cost parents to the Euclidean-closest center.
    #[arg(long)]
    pub optimize: bool,
    /// Points used by --optimize.
    #[arg(long, requires = "optimize")]
    pub points: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub limits: Limits,
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    #[arg(long)]
    pub hierarchy: PathBuf,
    #[arg(long, value_parser = ["k", "elbow", "moe", "threshold", "stability"])]
    pub method: String,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub min_cluster_size: Option<usize>,
    /// Powers for median-of-elbows, comma separated (default 1,2,3,4,5).
    #[arg(long, value_delimiter = ',')]
    pub z: Option<Vec<u32>>,
    /// Tree the hierarchy was built from; needed by median-of-elbows.
    #[arg(long)]
    pub tree: Option<PathBuf>,
    /// Labels CSV; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(long)]
    pub tree: PathBuf,
    #[command(flatten)]
    pub objective: ObjectiveArgs,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long)]
    pub tree: PathBuf,
    #[arg(long)]
    pub points: Option<PathBuf>,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: IpAddr,
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    #[command(flatten)]
    pub limits: Limits,
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Fit(a) => fit(&a),
        Command::Hierarchy(a) => hierarchy(&a),
        Command::Partition(a) => partition(&a),
        Command::Curve(a) => curve(&a),
        Command::Serve(a) => serve_cmd(&a),
    }
}

fn fit(a: &FitArgs) -> Result<()> {
    let exec = if a.sequential { Exec::Sequential } else { Exec::default() };
    if a.metric != Metric::Dc && a.mu.is_some() {
        bail!("--mu only applies to --metric dc");
    }
    let start = Instant::now();
    let tree: LcaTree = match a.metric {
        Metric::Dc => {
            let mu = a.mu.context("--metric dc needs --mu")?;
            let points = load_points(&a.input, a.limits.get()).with_context(|| format!("reading {}", a.input.display()))?;
            fit_dc(&points, mu, exec)?.tree
        }
        Metric::Hst => {
            let points = load_points(&a.input, a.limits.get()).with_context(|| format!("reading {}", a.input.display()))?;
            build_hst_tree(&points, a.max_depth)?
        }
        Metric::Precomputed => {
            let file = File::open(&a.input).with_context(|| format!("opening {}", a.input.display()))?;
            build_from_dissimilarity(&read_matrix_json(io::BufReader::new(file))?)?
        }
    };
    let elapsed = start.elapsed();
    save_tree(&a.out, &tree).with_context(|| format!("writing {}", a.out.display()))?;
    println!(
        "fit n={} nodes={} root_value={} wall_ms={:.3} out={}",
        tree.n_points(),
        tree.len(),
        tree.value(tree.root()),
        elapsed.as_secs_f64() * 1e3,
        a.out.display()
    );
    Ok(())
}

fn hierarchy(a: &HierarchyArgs) -> Result<()> {
    let objective = a.objective.resolve(Objective::MEDIAN)?;
    let tree = load_tree(&a.tree).with_context(|| format!("reading {}", a.tree.display()))?;
    let start = Instant::now();
    let mut annotations = kz_annotate(&tree, objective)?;
    if a.optimize {
        let points = match &a.points {
            Some(p) => Some(load_points(p, a.limits.get()).with_context(|| format!("reading {}", p.display()))?),
            None => None,
        };
        annotations = optimize_annotations(&annotations, &tree, points.as_ref())?;
    }
    let h = build_hierarchy(&annotations)?;
    let elapsed = start.elapsed();
    save_hierarchy(&a.out, &h).with_context(|| format!("writing {}", a.out.display()))?;
    println!(
        "hierarchy objective={} n={} nodes={} wall_ms={:.3} out={}",
        objective,
        h.n_points(),
        h.len(),
        elapsed.as_secs_f64() * 1e3,
        a.out.display()
    );
    Ok(())
}

fn partition(a: &PartitionArgs) -> Result<()> {
    let method = Method::from_params(&a.method, a.k, a.eps, a.min_cluster_size, a.z.clone()).map_err(anyhow::Error::msg)?;
    let h = load_hierarchy(&a.hierarchy).with_context(|| format!("reading {}", a.hierarchy.display()))?;
    let sel = select(&h, &method, |powers| {
        let path = a.tree.as_ref().ok_or_else(|| {
            ship_core::error::FormatError::Value("median-of-elbows needs the tree (--tree)".into())
        })?;
        let tree = load_tree(path)?;
        if tree.n_points() != h.n_points() {
            return Err(ship_core::error::FormatError::Value(format!(
                "tree has {} points but the hierarchy has {}",
                tree.n_points(),
                h.n_points()
            ))
            .into());
        }
        Ok(median_of_elbows(&tree, powers, Exec::default())?.elbows)
    })?;

    let mut report = format!("partition method={} k={} noise={}", method.name(), sel.partition.k(), sel.partition.noise_count());
    if let Some(k) = sel.chosen_k {
        report += &format!(" chosen_k={k}");
    }
    if let Some(elbows) = &sel.elbows {
        let list: Vec<String> = elbows.iter().map(|(z, k)| format!("{z}:{k}")).collect();
        report += &format!(" elbows={}", list.join(","));
    }
    match &a.out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("writing {}", path.display()))?;
            write_labels_csv(BufWriter::new(file), &sel.partition)?;
            println!("{report} out={}", path.display());
        }
        None => {
            write_labels_csv(io::stdout().lock(), &sel.partition)?;
            eprintln!("{report}");
        }
    }
    Ok(())
}

fn curve(a: &CurveArgs) -> Result<()> {
    let objective = a.objective.resolve(Objective::MEDIAN)?;
    let tree = load_tree(&a.tree).with_context(|| format!("reading {}", a.tree.display()))?;
    let annotations = kz_annotate(&tree, objective)?;
    let curve = ship_core::hierarchy::cost_curve(&annotations);
    let out = json!({
        "schema": crate::server::CURVE_SCHEMA,
        "objective": objective.to_string(),
        "losses": curve.losses(),
        "elbow": elbow_index(&curve).ok(),
    });
    let mut stdout = io::stdout().lock();
    serde_json::to_writer(&mut stdout, &out)?;
    writeln!(stdout)?;
    Ok(())
}

fn serve_cmd(a: &ServeArgs) -> Result<()> {
    let tree = load_tree(&a.tree).with_context(|| format!("reading {}", a.tree.display()))?;
    let points = match &a.points {
        Some(p) => Some(load_points(p, a.limits.get()).with_context(|| format!("reading {}", p.display()))?),
        None => None,
    };
    let session = Arc::new(Session::new(tree, points).map_err(anyhow::Error::msg)?);
    let addr = SocketAddr::new(a.host, a.port);
    let runtime = tokio::runtime::Runtime::new()?;
    runtime
        .block_on(serve(session, addr))
        .with_context(|| format!("serving on {addr}"))
}
