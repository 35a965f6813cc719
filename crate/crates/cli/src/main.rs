//! `hashdrift`: replay hashtag streams into an aging co-occurrence graph and
//! report per-period communities and drift.
//!
//! Every flag can also be set through an environment variable with the
//! `HASHDRIFT_` prefix (for example `HASHDRIFT_WINDOW=100`).

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::builder::RangedU64ValueParser;
use clap::{Args, Parser, Subcommand, ValueEnum};
use hashdrift_core::analytics::{
    drift_report, Cadence, DriftEngine, EngineConfig, PeriodTally, Snapshot,
};
use hashdrift_core::export::{export_graph, report_to_json, snapshot_to_json, ExportFormat};
use hashdrift_core::graph::{
    GraphConfig, DEFAULT_MIN_FREQ, DEFAULT_PREGRAPH_CAP, DEFAULT_WINDOW_SIZE,
};
use hashdrift_core::ingest::{open_input, FieldMap, InputFormat, StreamRunner};
use hashdrift_core::normalize::{normalize_str, DEFAULT_MIN_LEN};
use hashdrift_core::synth::{generate_synthetic, SynthConfig};

#[derive(Parser)]
#[command(
    name = "hashdrift",
    version,
    about = "Streaming hashtag co-occurrence graphs and drift snapshots"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay a stream and write one snapshot per period plus a run report
    Run(RunArgs),
    /// Replay a stream and export the final graph with its communities
    Export(ExportArgs),
    /// Write a deterministic synthetic JSONL stream
    Synth(SynthArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Jsonl,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum CadenceArg {
    Year,
    Month,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportArg {
    Graphml,
    Dot,
    Json,
}

impl From<ExportArg> for ExportFormat {
    fn from(a: ExportArg) -> Self {
        match a {
            ExportArg::Graphml => ExportFormat::GraphMl,
            ExportArg::Dot => ExportFormat::Dot,
            ExportArg::Json => ExportFormat::Json,
        }
    }
}

#[derive(Args)]
struct StreamArgs {
    /// Input files, read in order; `-` is stdin, `*.gz` is decompressed
    #[arg(long, short, required = true, num_args = 1.., env = "HASHDRIFT_INPUT", value_delimiter = ',')]
    input: Vec<PathBuf>,

    #[arg(long, value_enum, default_value = "jsonl", env = "HASHDRIFT_FORMAT")]
    format: FormatArg,

    /// Maximum number of hashtag nodes kept in the graph
    #[arg(long, default_value_t = DEFAULT_WINDOW_SIZE, env = "HASHDRIFT_WINDOW",
          value_parser = RangedU64ValueParser::<usize>::new().range(1..))]
    window: usize,

    /// Posts a hashtag must appear in before it becomes a node
    #[arg(long, default_value_t = DEFAULT_MIN_FREQ, env = "HASHDRIFT_MIN_FREQ",
          value_parser = clap::value_parser!(u32).range(1..))]
    min_freq: u32,

    /// Hashtags shorter than this (after cleanup) are discarded
    #[arg(long, default_value_t = DEFAULT_MIN_LEN, env = "HASHDRIFT_MIN_LEN",
          value_parser = RangedU64ValueParser::<usize>::new().range(1..))]
    min_len: usize,

    /// Tracked hashtag, excluded from the graph; empty to keep every tag
    #[arg(long, default_value = "mybodymychoice", env = "HASHDRIFT_QUERY_TAG")]
    query_tag: String,

    #[arg(long, value_enum, default_value = "year", env = "HASHDRIFT_CADENCE")]
    cadence: CadenceArg,

    /// Communities and hashtags listed per snapshot
    #[arg(long, short = 'k', default_value_t = 5, env = "HASHDRIFT_TOP_K",
          value_parser = RangedU64ValueParser::<usize>::new().range(1..))]
    top_k: usize,

    #[arg(long, default_value_t = DEFAULT_PREGRAPH_CAP, env = "HASHDRIFT_PREGRAPH_CAP",
          value_parser = RangedU64ValueParser::<usize>::new().range(1..))]
    pregraph_cap: usize,

    /// Count pregraph tags once per nested-loop sighting rather than once per post
    #[arg(long, env = "HASHDRIFT_LITERAL_COUNTING")]
    literal_counting: bool,

    /// Hours a timestamp may lag the stream before the record is rejected
    #[arg(long, default_value_t = 24, env = "HASHDRIFT_SLACK_HOURS")]
    slack_hours: u32,

    #[arg(long, default_value = "timestamp", env = "HASHDRIFT_FIELD_TIMESTAMP")]
    field_timestamp: String,

    #[arg(long, default_value = "text", env = "HASHDRIFT_FIELD_TEXT")]
    field_text: String,

    #[arg(long, default_value = "hashtags", env = "HASHDRIFT_FIELD_HASHTAGS")]
    field_hashtags: String,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    stream: StreamArgs,

    /// Output directory
    #[arg(long, short, env = "HASHDRIFT_OUT")]
    out: PathBuf,

    /// Also write each snapshot's graph in these formats
    #[arg(long, value_enum, value_delimiter = ',', env = "HASHDRIFT_EXPORT")]
    export: Vec<ExportArg>,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    stream: StreamArgs,

    #[arg(long = "to", value_enum, default_value = "graphml")]
    to: ExportArg,

    /// Output file (stdout when omitted)
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 42, env = "HASHDRIFT_SEED")]
    seed: u64,

    #[arg(long, default_value_t = 10_000)]
    posts: u64,

    /// Number of drift phases with disjoint topic pools
    #[arg(long, default_value_t = 1, value_parser = RangedU64ValueParser::<usize>::new().range(1..))]
    phases: usize,

    #[arg(long)]
    interval_secs: Option<i64>,

    /// Full generator config as JSON (overrides --posts/--phases)
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output file (stdout when omitted)
    #[arg(long, short)]
    out: Option<PathBuf>,
}

/// Failures that map to exit status 2 rather than 1.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn engine_config(args: &StreamArgs) -> anyhow::Result<EngineConfig> {
    let query_tag = if args.query_tag.is_empty() {
        None
    } else {
        Some(
            normalize_str(&args.query_tag, 1)
                .ok_or_else(|| usage(format!("invalid --query-tag {:?}", args.query_tag)))?,
        )
    };
    Ok(EngineConfig {
        graph: GraphConfig {
            window_size: args.window,
            min_freq: args.min_freq,
            pregraph_cap: args.pregraph_cap,
            literal_counting: args.literal_counting,
        },
        query_tag,
        min_len: args.min_len,
        cadence: match args.cadence {
            CadenceArg::Year => Cadence::Year,
            CadenceArg::Month => Cadence::Month,
        },
        top_k: args.top_k,
        slack: chrono::Duration::hours(i64::from(args.slack_hours)),
    })
}

fn replay(
    args: &StreamArgs,
    engine: &mut DriftEngine,
) -> anyhow::Result<hashdrift_core::RunOutcome> {
    let format = match args.format {
        FormatArg::Jsonl => InputFormat::Jsonl,
        FormatArg::Csv => InputFormat::Csv,
    };
    let fields = FieldMap {
        timestamp: args.field_timestamp.clone(),
        text: args.field_text.clone(),
        hashtags: args.field_hashtags.clone(),
    };
    let mut runner = StreamRunner::new(engine, format, fields);
    for path in &args.input {
        let source = open_input(path).with_context(|| format!("cannot open {}", path.display()))?;
        runner
            .feed(source)
            .with_context(|| format!("reading {}", path.display()))?;
    }
    Ok(runner.finish())
}

fn write_file(path: &Path, contents: &str) -> anyhow::Result<()> {
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn cmd_run(args: RunArgs) -> anyhow::Result<()> {
    let mut engine =
        DriftEngine::new(engine_config(&args.stream)?).map_err(|e| usage(e.to_string()))?;
    let outcome = replay(&args.stream, &mut engine)?;
    fs::create_dir_all(&args.out)
        .with_context(|| format!("cannot create {}", args.out.display()))?;

    for snap in &outcome.snapshots {
        write_file(
            &args.out.join(format!("snapshot-{}.json", snap.period)),
            &snapshot_to_json(snap),
        )?;
        for &fmt in &args.export {
            let fmt = ExportFormat::from(fmt);
            let doc = export_graph(&snap.graph, &snap.best.partition, fmt);
            write_file(
                &args
                    .out
                    .join(format!("graph-{}.{}", snap.period, fmt.extension())),
                &doc,
            )?;
        }
    }
    let drift = drift_report(&outcome.snapshots);
    write_file(
        &args.out.join("report.json"),
        &report_to_json(&outcome.report, &outcome.snapshots, &drift),
    )?;

    let r = &outcome.report;
    for d in &r.diagnostics {
        eprintln!("skipped {d}");
    }
    eprintln!(
        "{} posts processed, {} skipped, {} snapshots written to {}",
        r.posts_processed,
        r.skipped,
        r.snapshots_emitted,
        args.out.display()
    );
    Ok(())
}

fn cmd_export(args: ExportArgs) -> anyhow::Result<()> {
    let mut engine =
        DriftEngine::new(engine_config(&args.stream)?).map_err(|e| usage(e.to_string()))?;
    replay(&args.stream, &mut engine)?;
    let graph = engine.graph().freeze();
    let tally = engine
        .tally()
        .cloned()
        .unwrap_or_else(|| PeriodTally::new(hashdrift_core::PeriodLabel::Year(0)));
    let snap = Snapshot::build(graph, &tally, args.stream.top_k);
    let doc = export_graph(&snap.graph, &snap.best.partition, args.to.into());
    match &args.out {
        Some(path) => write_file(path, &doc),
        None => io::stdout()
            .write_all(doc.as_bytes())
            .context("cannot write to stdout"),
    }
}

fn cmd_synth(args: SynthArgs) -> anyhow::Result<()> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            serde_json::from_str::<SynthConfig>(&text)
                .map_err(|e| usage(format!("bad synth config: {e}")))?
        }
        None => SynthConfig::demo(args.seed, args.posts, args.phases),
    };
    if let Some(secs) = args.interval_secs {
        cfg.interval_secs = secs;
    }
    let stream = generate_synthetic(cfg).map_err(|e| usage(e.to_string()))?;

    let sink: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(
            fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        ),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = BufWriter::new(sink);
    for record in stream {
        writeln!(sink, "{}", record.to_json_line()).context("write failed")?;
    }
    sink.flush().context("write failed")?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Export(args) => cmd_export(args),
        Command::Synth(args) => cmd_synth(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.is::<UsageError>() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
