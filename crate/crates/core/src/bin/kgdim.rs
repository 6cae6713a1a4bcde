use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::{info, warn};

use kgdim::clustering::{
    cluster_dimension_jaccard, cluster_profile, dimension_partition, kmeans, load_vectors,
    sample_ids, write_assignments, KMeansParams,
};
use kgdim::coverage::coverage_counts_dedup;
use kgdim::ingest::{self, maybe_gzip, open_input, EdgeWriter};
use kgdim::lexicalize::TemplateTable;
use kgdim::output::{write_atomic, write_dir_atomic};
use kgdim::overlap::write_report_csv;
use kgdim::qa::{self, AtomicSplit, BuildOptions};
use kgdim::{
    assign_dimensions, coverage_counts, default_mapping, default_templates, lexicalize_edge,
    pairwise_overlap, render_coverage, Edge, MappingTable, OverlapMode, ReadOptions, TableFormat,
};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "kgdim", about = "Commonsense knowledge dimensions toolkit", disable_version_flag = true)]
struct Cli {
    /// Print version and default-mapping checksum.
    #[arg(long, short = 'V')]
    version: bool,

    /// Worker threads (results do not depend on this).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Assign a dimension to every edge and write the enriched edge file.
    MapDims {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        out: PathBuf,
        /// Also write the default mapping TSV here.
        #[arg(long)]
        dump_mapping: Option<PathBuf>,
    },
    /// Edge counts per dimension and source.
    Coverage {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value = "csv")]
        format: TableFormat,
        /// Count distinct (node1, relation, node2) per source.
        #[arg(long)]
        dedup: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pairwise triple overlap between sources.
    Overlap {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        sources: Vec<String>,
        #[arg(long, default_value = "dimension")]
        mode: OverlapMode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render every edge as a sentence (`id<TAB>sentence`).
    Lexicalize {
        #[command(flatten)]
        input: InputArgs,
        /// `relation<TAB>template` overrides for the built-in templates.
        #[arg(long)]
        templates: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// k-means over edge vectors and agreement with the dimensions.
    Cluster {
        #[arg(long)]
        vectors: PathBuf,
        #[command(flatten)]
        input: EdgeArgs,
        #[arg(long, default_value_t = 13)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 300)]
        max_iter: usize,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        /// Nodes listed per cluster profile.
        #[arg(long, default_value_t = 10)]
        top_nodes: usize,
        /// JSON report path (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write `id<TAB>cluster<TAB>dimension` rows here.
        #[arg(long)]
        assignments: Option<PathBuf>,
        /// Restrict the assignment export to a seeded uniform sample.
        #[arg(long)]
        sample: Option<usize>,
    },
    /// Per-dimension synthetic QA buckets.
    QaGen {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        templates: Option<PathBuf>,
        /// Official ATOMIC split (`event<TAB>train|dev|test`).
        #[arg(long)]
        atomic_split: Option<PathBuf>,
        #[arg(long, default_value_t = qa::DEFAULT_DEV_FRACTION)]
        dev_fraction: f64,
        #[arg(long, value_delimiter = ',', default_value = qa::DEFAULT_EXCLUDED_RELATION)]
        exclude_relations: Vec<String>,
        /// Replace a non-empty output directory.
        #[arg(long)]
        overwrite: bool,
    },
    /// Per-source and per-relation edge statistics.
    Stats {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct EdgeArgs {
    /// Edge TSV (gzip when the name ends in .gz).
    #[arg(long = "edges", alias = "input")]
    path: PathBuf,
    #[command(flatten)]
    opts: EdgeOpts,
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Edge TSV (gzip when the name ends in .gz).
    #[arg(long = "input")]
    path: PathBuf,
    #[command(flatten)]
    opts: EdgeOpts,
}

#[derive(Debug, Args)]
struct EdgeOpts {
    /// Mapping TSV replacing the built-in relation -> dimension table.
    #[arg(long)]
    mapping: Option<PathBuf>,
    /// Trust the file's relation;dimension column instead of re-mapping.
    #[arg(long)]
    keep_dimensions: bool,
    /// Keep only these sources.
    #[arg(long, value_delimiter = ',')]
    source_filter: Vec<String>,
    /// Abort on malformed rows.
    #[arg(long)]
    strict: bool,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(kgdim::Error),
}

impl From<kgdim::Error> for Failure {
    fn from(e: kgdim::Error) -> Self {
        Failure::Data(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Data(e.into())
    }
}

type CmdResult = Result<(), Failure>;

fn load_edges(path: &Path, opts: &EdgeOpts) -> Result<Vec<Edge>, Failure> {
    let mut read = ReadOptions {
        strict: opts.strict,
        ..Default::default()
    };
    if !opts.source_filter.is_empty() {
        read = read.with_sources(opts.source_filter.iter().cloned());
    }
    let (edges, stats) = ingest::read_all(open_input(path)?, read)?;
    info!(
        "read {} edges from {} ({} rows, {} filtered, {} malformed)",
        edges.len(),
        path.display(),
        stats.rows,
        stats.filtered,
        stats.errors.len()
    );
    for e in stats.errors.iter().take(5) {
        warn!("skipped line {}: {}", e.line, e.message);
    }
    if opts.keep_dimensions {
        return Ok(edges);
    }
    let table = mapping_for(opts)?;
    let (edges, stats) = assign_dimensions(edges, &table);
    info!(
        "dimensions: {} mapped, {} excluded, {} unmapped ({} relations)",
        stats.mapped,
        stats.excluded,
        stats.unmapped_total(),
        stats.unmapped.len()
    );
    Ok(edges)
}

fn mapping_for(opts: &EdgeOpts) -> Result<MappingTable, Failure> {
    match &opts.mapping {
        Some(p) => Ok(MappingTable::load(p)?),
        None => Ok(default_mapping()),
    }
}

fn templates_for(path: &Option<PathBuf>) -> Result<TemplateTable, Failure> {
    let defaults = default_templates();
    match path {
        Some(p) => Ok(defaults.overlay(&TemplateTable::load(p)?)),
        None => Ok(defaults),
    }
}

/// Writes to `out` atomically, or to stdout.
fn emit(out: &Option<PathBuf>, text: &str) -> CmdResult {
    match out {
        Some(p) => write_atomic(p, |w| Ok(w.write_all(text.as_bytes())?))?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(command: Command) -> CmdResult {
    match command {
        Command::MapDims {
            input,
            out,
            dump_mapping,
        } => {
            let edges = load_edges(&input.path, &input.opts)?;
            write_atomic(&out, |w| {
                let mut writer = EdgeWriter::new(maybe_gzip(&out, w))?;
                for e in &edges {
                    writer.write(e)?;
                }
                writer.finish()?.flush()?;
                Ok(())
            })?;
            if let Some(p) = dump_mapping {
                let table = mapping_for(&input.opts)?;
                write_atomic(&p, |w| table.write(w))?;
            }
            info!("wrote {} edges to {}", edges.len(), out.display());
            Ok(())
        }
        Command::Coverage {
            input,
            format,
            dedup,
            out,
        } => {
            let edges = load_edges(&input.path, &input.opts)?;
            let matrix = if dedup {
                coverage_counts_dedup(&edges)
            } else {
                coverage_counts(&edges)
            };
            info!("{} edges without a dimension", matrix.unassigned());
            emit(&out, &render_coverage(&matrix, format))
        }
        Command::Overlap {
            input,
            sources,
            mode,
            out,
        } => {
            if sources.len() < 2 {
                return Err(Failure::Usage(
                    "--sources needs at least two comma-separated source ids".into(),
                ));
            }
            let edges = load_edges(&input.path, &input.opts)?;
            let refs: Vec<&str> = sources.iter().map(String::as_str).collect();
            let reports = pairwise_overlap(&edges, &refs, mode)?;
            let mut buf = Vec::new();
            write_report_csv(&reports, &mut buf)?;
            emit(&out, &String::from_utf8_lossy(&buf))
        }
        Command::Lexicalize {
            input,
            templates,
            out,
        } => {
            let edges = load_edges(&input.path, &input.opts)?;
            let templates = templates_for(&templates)?;
            let mut text = String::from("id\tsentence\n");
            let mut skipped = 0;
            for e in &edges {
                match lexicalize_edge(e, &templates) {
                    Ok(s) if !s.contains(['\t', '\n', '\r']) => {
                        text.push_str(&format!("{}\t{s}\n", e.id));
                    }
                    Ok(_) => {
                        if input.opts.strict {
                            return Err(Failure::Data(kgdim::Error::IllegalField {
                                id: e.id.clone(),
                                field: "sentence",
                            }));
                        }
                        skipped += 1;
                    }
                    Err(err) if input.opts.strict => return Err(err.into()),
                    Err(_) => skipped += 1,
                }
            }
            if skipped > 0 {
                warn!("{skipped} edges could not be lexicalized");
            }
            emit(&out, &text)
        }
        Command::Cluster {
            vectors,
            input,
            k,
            seed,
            max_iter,
            tol,
            top_nodes,
            out,
            assignments,
            sample,
        } => {
            let edges = load_edges(&input.path, &input.opts)?;
            let (dims, excluded) = dimension_partition(&edges);
            let table = load_vectors(open_input(&vectors)?)?;
            let table = table.filter(|id| dims.contains_key(id));
            let dims: HashMap<_, _> = dims
                .into_iter()
                .filter(|(id, _)| table.position(id).is_some())
                .collect();
            info!(
                "clustering {} vectors of width {} ({} edges without dimension)",
                table.len(),
                table.width(),
                excluded
            );
            let params = KMeansParams {
                k,
                seed,
                max_iter,
                tol,
            };
            let clustering = kmeans(&table, &params)?;
            let agreement = cluster_dimension_jaccard(&clustering, &dims)?;
            let profiles = cluster_profile(&clustering, &edges, top_nodes);
            let report = serde_json::json!({
                "k": clustering.k,
                "seed": clustering.seed,
                "iterations": clustering.iterations,
                "inertia": clustering.inertia,
                "cluster_sizes": clustering.cluster_sizes(),
                "ari": agreement.ari,
                "top_pairs": agreement.top_pairs.iter().take(10).collect::<Vec<_>>(),
                "per_cluster_top": agreement.per_cluster_top,
                "profiles": profiles,
            });
            let mut text = serde_json::to_string_pretty(&report).map_err(kgdim::Error::from)?;
            text.push('\n');
            emit(&out, &text)?;
            if let Some(path) = assignments {
                let ids = match sample {
                    Some(n) => sample_ids(&clustering, n, seed),
                    None => clustering.ids.iter().map(String::as_str).collect(),
                };
                write_atomic(&path, |w| write_assignments(&clustering, &dims, ids, w))?;
            }
            Ok(())
        }
        Command::QaGen {
            input,
            seed,
            out,
            templates,
            atomic_split,
            dev_fraction,
            exclude_relations,
            overwrite,
        } => {
            if !(dev_fraction > 0.0 && dev_fraction < 1.0) {
                return Err(Failure::Usage(format!(
                    "--dev-fraction must be in (0, 1), got {dev_fraction}"
                )));
            }
            let edges = load_edges(&input.path, &input.opts)?;
            let templates = templates_for(&templates)?;
            let mut options = BuildOptions::with_seed(seed);
            options.exclude_relations = exclude_relations.into_iter().collect::<HashSet<_>>();
            options.split.dev_fraction = dev_fraction;
            options.split.strict = input.opts.strict;
            options.split.atomic_split = atomic_split.map(AtomicSplit::load).transpose()?;
            let (buckets, report) = qa::build_buckets(&edges, &templates, &options)?;
            write_dir_atomic(&out, overwrite, |dir| qa::write_buckets(dir, &buckets, &report))?;
            info!(
                "wrote {} items in {} buckets to {} ({} edges dropped for lack of distractors)",
                report.total_items(),
                buckets.len(),
                out.display(),
                report.insufficient_distractors
            );
            Ok(())
        }
        Command::Stats { input, out } => {
            let edges = load_edges(&input.path, &input.opts)?;
            let mut per: BTreeMap<(String, String), (u64, Option<String>)> = BTreeMap::new();
            for e in &edges {
                for s in e.sources() {
                    let slot = per
                        .entry((s.to_owned(), e.relation.clone()))
                        .or_insert((0, e.dimension.map(|d| d.to_string())));
                    slot.0 += 1;
                }
            }
            let mut text = String::from("source\trelation\tdimension\tedges\n");
            for ((s, r), (n, d)) in per {
                text.push_str(&format!("{s}\t{r}\t{}\t{n}\n", d.unwrap_or_default()));
            }
            emit(&out, &text)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .target(env_logger::Target::Stderr)
        .init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.version {
        println!(
            "kgdim {VERSION} (default mapping sha256 {})",
            default_mapping().checksum()
        );
        return ExitCode::SUCCESS;
    }
    let Some(command) = cli.command else {
        eprintln!("error: missing subcommand\n\nRun `kgdim --help` for usage.");
        return ExitCode::from(1);
    };
    info!("kgdim {VERSION} threads={:?} {command:?}", cli.threads);
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(err)) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
