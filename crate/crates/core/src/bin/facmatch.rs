use std::io::{BufReader, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use facmatch::clock::{parse_timestamp, Clock, SystemClock};
use facmatch::ingest::{diff_snapshots, enrich_entity, load_snapshot, write_records, CatalogSnapshot, PatchSet};
use facmatch::model::{Catalog, SourceId};
use facmatch::pipeline::{Pipeline, PipelineError, RunConfig, ValidatorChoice};
use facmatch::resolver::{load_index, serve, ResolverHandle};
use facmatch::strategy::{validate_strategy, Strategy};
use facmatch::{Diagnostic, Level};

#[derive(Parser)]
#[command(name = "facmatch", version, about = "Observation-facility catalog matching")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load a catalog snapshot, enrich it and diff it against the previous one.
    Ingest(IngestArgs),
    /// Run the mapping pipeline described by a run configuration.
    Map(MapArgs),
    /// Serve the name resolver over HTTP.
    Serve(ServeArgs),
    /// Parse and lint a mapping-strategy file.
    ValidateStrategy(LintArgs),
}

#[derive(clap::Args)]
struct IngestArgs {
    /// New snapshot, one record per line.
    snapshot: PathBuf,
    /// Source name; defaults to the file stem.
    #[arg(long)]
    source: Option<SourceId>,
    /// Previous versioned snapshot to diff against.
    #[arg(long)]
    previous: Option<PathBuf>,
    /// Manual corrections applied after enrichment.
    #[arg(long)]
    patch: Option<PathBuf>,
    #[arg(long)]
    no_enrich: bool,
    /// Versioned snapshot output; stdout when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Where to write the delta as JSON; stderr summary when absent.
    #[arg(long)]
    delta: Option<PathBuf>,
    /// Timestamp stamped on changed records.
    #[arg(long)]
    now: Option<String>,
}

#[derive(clap::Args)]
struct MapArgs {
    /// Run configuration (TOML).
    #[arg(long, short)]
    config: PathBuf,
    /// Overrides the configured strategy file.
    #[arg(long)]
    strategy: Option<PathBuf>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
    #[arg(long)]
    validator: Option<ValidatorArg>,
    /// Fixed start instant for mapping dates.
    #[arg(long)]
    clock_start: Option<String>,
    /// Continue with the next strategy line when one fails.
    #[arg(long)]
    keep_going: bool,
    #[arg(long)]
    sssom: Option<PathBuf>,
    #[arg(long)]
    sssom_tsv: Option<PathBuf>,
    #[arg(long)]
    resolver_json: Option<PathBuf>,
    #[arg(long)]
    facilities_csv: Option<PathBuf>,
    #[arg(long)]
    linked_catalog: Option<PathBuf>,
    #[arg(long)]
    run_report: Option<PathBuf>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ValidatorArg {
    Rule,
    Llm,
}

#[derive(clap::Args)]
struct ServeArgs {
    #[arg(long, env = "FACMATCH_DICTIONARY")]
    dictionary: PathBuf,
    /// Meronymy CSV used for `expand`.
    #[arg(long, env = "FACMATCH_FACILITIES")]
    facilities: Option<PathBuf>,
    #[arg(long, env = "FACMATCH_PORT", default_value_t = 8080)]
    port: u16,
    #[arg(long, env = "FACMATCH_HOST", default_value = "127.0.0.1")]
    host: std::net::IpAddr,
}

#[derive(clap::Args)]
struct LintArgs {
    strategy: PathBuf,
    /// Registered sources, comma-separated; the eight defaults when absent.
    #[arg(long, value_delimiter = ',')]
    sources: Vec<SourceId>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Ingest(a) => ingest(a),
        Command::Map(a) => map(a),
        Command::Serve(a) => serve_cmd(a),
        Command::ValidateStrategy(a) => lint(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn report(diagnostics: &[Diagnostic]) {
    for d in diagnostics {
        match d.level {
            Level::Info => log::debug!("{d}"),
            Level::Warning => log::warn!("{d}"),
            Level::Error => log::error!("{d}"),
        }
    }
}

fn data(path: &Path, e: impl std::fmt::Display) -> PipelineError {
    PipelineError::Data(format!("{}: {e}", path.display()))
}

fn read_snapshot(path: &Path, source: Option<&SourceId>) -> Result<CatalogSnapshot, PipelineError> {
    let source = match source {
        Some(s) => s.clone(),
        None => path
            .file_stem()
            .and_then(|s| s.to_str())
            .and_then(|s| SourceId::new(s).ok())
            .ok_or_else(|| PipelineError::Config(format!("cannot infer a source from {}; pass --source", path.display())))?,
    };
    let file = std::fs::File::open(path).map_err(|e| data(path, e))?;
    load_snapshot(BufReader::new(file), source).map_err(|e| data(path, e))
}

fn ingest(args: IngestArgs) -> Result<(), PipelineError> {
    let mut snapshot = read_snapshot(&args.snapshot, args.source.as_ref())?;
    if !args.no_enrich {
        snapshot.records.iter_mut().for_each(enrich_entity);
    }
    if let Some(p) = &args.patch {
        let patches = PatchSet::load(p).map_err(|e| data(p, e))?;
        let mut catalog = Catalog::from_entities(std::mem::take(&mut snapshot.records)).map_err(|e| data(&args.snapshot, e))?;
        report(&patches.apply(&mut catalog).map_err(|e| data(p, e))?);
        snapshot.records = catalog.into_entities();
    }
    let now = match &args.now {
        Some(t) => parse_timestamp(t).ok_or_else(|| PipelineError::Config(format!("--now {t:?} is not a timestamp")))?,
        None => SystemClock.now(),
    };
    let (records, delta) = match &args.previous {
        Some(p) => {
            let old = read_snapshot(p, Some(&snapshot.source))?;
            let update = diff_snapshots(&old, &snapshot, now).map_err(|e| data(p, e))?;
            (update.snapshot.records, Some(update.delta))
        }
        None => (snapshot.records, None),
    };
    let mut out: Box<dyn Write> = match &args.output {
        Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p).map_err(|e| data(p, e))?)),
        None => Box::new(std::io::stdout().lock()),
    };
    write_records(&mut out, &records).map_err(|e| PipelineError::Data(e.to_string()))?;
    if let Some(delta) = delta {
        let json = serde_json::to_string_pretty(&delta).expect("delta serializes");
        match &args.delta {
            Some(p) => std::fs::write(p, json + "\n").map_err(|e| data(p, e))?,
            None => eprintln!(
                "{} added, {} modified, {} deprecated",
                delta.added.len(),
                delta.modified.len(),
                delta.deprecated.len()
            ),
        }
    }
    Ok(())
}

fn map(args: MapArgs) -> Result<(), PipelineError> {
    let mut config = RunConfig::load(&args.config)?;
    let cwd = std::env::current_dir().map_err(|e| PipelineError::Config(e.to_string()))?;
    if let Some(s) = args.strategy {
        config.strategy = cwd.join(s);
    }
    if let Some(d) = args.output_dir {
        config.output_dir = cwd.join(d);
    }
    if let Some(v) = args.validator {
        config.validator = match v {
            ValidatorArg::Rule => ValidatorChoice::Rule,
            ValidatorArg::Llm => ValidatorChoice::Llm,
        };
    }
    if args.clock_start.is_some() {
        config.clock_start = args.clock_start;
    }
    let names = &mut config.outputs;
    for (flag, slot) in [
        (args.sssom, &mut names.sssom),
        (args.sssom_tsv, &mut names.sssom_tsv),
        (args.resolver_json, &mut names.resolver_json),
        (args.facilities_csv, &mut names.facilities_csv),
        (args.linked_catalog, &mut names.linked_catalog),
        (args.run_report, &mut names.run_report),
    ] {
        if let Some(p) = flag {
            *slot = cwd.join(p);
        }
    }

    let mut pipeline = Pipeline::new(config)?.keep_going(args.keep_going);
    let outcome = pipeline.run()?;
    report(&outcome.diagnostics);
    let config = pipeline.config();
    let written = outcome.write(&config.output_dir, &config.outputs)?;
    let r = &outcome.report;
    log::info!(
        "{} entities, {} sets ({} merged), {} mappings, {} validator calls",
        r.entities,
        r.synonym_sets,
        r.merged_sets,
        r.records,
        r.validator_calls
    );
    for p in written {
        println!("{}", p.display());
    }
    if r.failed_lines > 0 {
        return Err(PipelineError::Data(format!("{} strategy line(s) failed", r.failed_lines)));
    }
    Ok(())
}

fn serve_cmd(args: ServeArgs) -> Result<(), PipelineError> {
    let load = {
        let dictionary = args.dictionary.clone();
        let facilities = args.facilities.clone();
        move || {
            load_index(&dictionary, facilities.as_deref()).map(|(index, diags)| {
                report(&diags);
                index
            })
        }
    };
    let index = load().map_err(|e| PipelineError::Config(e.to_string()))?;
    let handle = ResolverHandle::new(index);
    let addr = SocketAddr::new(args.host, args.port);
    let runtime = tokio::runtime::Runtime::new().map_err(|e| PipelineError::Transport(e.to_string()))?;
    runtime.block_on(async move {
        #[cfg(unix)]
        {
            let handle = handle.clone();
            tokio::spawn(async move {
                use tokio::signal::unix::{signal, SignalKind};
                let Ok(mut hup) = signal(SignalKind::hangup()) else { return };
                while hup.recv().await.is_some() {
                    match load() {
                        Ok(index) => {
                            log::info!("dictionary reloaded ({} entries)", facmatch::resolver::NameIndex::len(&index));
                            handle.reload(index);
                        }
                        Err(e) => log::error!("reload failed, keeping the current index: {e}"),
                    }
                }
            });
        }
        let shutdown = async {
            let _ = tokio::signal::ctrl_c().await;
        };
        serve(addr, handle, shutdown)
            .await
            .map_err(|e| PipelineError::Transport(format!("{addr}: {e}")))
    })
}

fn lint(args: LintArgs) -> Result<(), PipelineError> {
    let text = std::fs::read_to_string(&args.strategy).map_err(|e| PipelineError::Config(format!("{}: {e}", args.strategy.display())))?;
    let strategy = Strategy::parse(&text).map_err(|e| PipelineError::Config(format!("{}: {e}", args.strategy.display())))?;
    let sources = if args.sources.is_empty() { SourceId::defaults() } else { args.sources };
    let diagnostics = validate_strategy(&strategy, &sources);
    for d in &diagnostics {
        println!("{d}");
    }
    let errors = diagnostics.iter().filter(|d| d.level == Level::Error).count();
    println!("{} line(s), {} error(s), {} warning(s)", strategy.lines.len(), errors, diagnostics.len() - errors);
    if errors > 0 {
        return Err(PipelineError::Config(format!("{errors} error(s) in {}", args.strategy.display())));
    }
    Ok(())
}
