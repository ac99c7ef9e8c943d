use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use odsearch_core::annotate::{read_annotated, write_annotated};
use odsearch_core::engine::SearchEngine;
use odsearch_core::harvest::{harvest_portal, reference_portals, HarvestOptions, PortalSpec, Source};
use odsearch_core::index::{build_index, load_index, save_index};
use odsearch_core::linker::{ConceptId, ExternalLinker, LinkerBackend};
use odsearch_core::record::read_canonical;
use odsearch_core::resources::ResourcePaths;
use odsearch_core::synth::synth_corpus;
use odsearch_core::{annotate_dataset, write_canonical, LanguageTag, Resources};

#[derive(Parser)]
#[command(name = "odsearch", version, about = "Cross-lingual open dataset search pipeline")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Harvest CKAN package metadata into canonical NDJSON
    Harvest(HarvestArgs),
    /// Detect languages and link concepts for a canonical corpus
    Annotate(AnnotateArgs),
    /// Build an index file from annotated NDJSON
    Index(IndexArgs),
    /// Run one query against an index file
    Query(QueryArgs),
    /// Serve the HTTP API
    Serve(ServeArgs),
    /// Count datasets per portal and language
    Stats(StatsArgs),
    /// Generate a synthetic corpus with the reference portal sizes
    Synth(SynthArgs),
}

#[derive(Args, Clone, Default)]
struct ResourceArgs {
    /// Lexicon TSV (surface, lang, concept, prior) replacing the bundled one
    #[arg(long, env = "ODSEARCH_LEXICON")]
    lexicon: Option<PathBuf>,
    /// Concept graph TSV replacing the bundled one
    #[arg(long, env = "ODSEARCH_GRAPH")]
    graph: Option<PathBuf>,
    /// Concept labels TSV replacing the bundled one
    #[arg(long, env = "ODSEARCH_LABELS")]
    labels: Option<PathBuf>,
    /// Directory of *.profile language profiles replacing the bundled ones
    #[arg(long, env = "ODSEARCH_PROFILES")]
    profiles: Option<PathBuf>,
}

impl ResourceArgs {
    fn load(&self) -> Result<Resources, String> {
        let paths = ResourcePaths {
            lexicon: self.lexicon.clone(),
            graph: self.graph.clone(),
            labels: self.labels.clone(),
            profiles: self.profiles.clone(),
        };
        Resources::load(&paths).map_err(|e| e.to_string())
    }
}

#[derive(Args)]
struct HarvestArgs {
    /// Portal id (host name), e.g. data.gv.at
    #[arg(long)]
    portal: String,
    /// Read CKAN package JSON files from this directory
    #[arg(long, conflicts_with = "base_url")]
    offline: Option<PathBuf>,
    /// CKAN API base URL; defaults to the known URL of a reference portal
    #[arg(long)]
    base_url: Option<String>,
    /// Packages per API page
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    page_size: u64,
    /// Output file (stdout when omitted)
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct AnnotateArgs {
    /// Canonical records NDJSON
    input: PathBuf,
    /// Output file (stdout when omitted)
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    resources: ResourceArgs,
}

#[derive(Args)]
struct IndexArgs {
    /// Annotated NDJSON
    input: PathBuf,
    /// Index file to write
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct QueryArgs {
    /// Index file
    #[arg(long, env = "ODSEARCH_INDEX")]
    index: PathBuf,
    /// Query language; detected when omitted
    #[arg(long)]
    lang: Option<LanguageTag>,
    /// Required concept ids (AND refinement)
    #[arg(long = "filter", value_name = "CONCEPT")]
    filters: Vec<ConceptId>,
    /// Print the API JSON response instead of a table
    #[arg(long)]
    json: bool,
    /// Query text
    #[arg(required = true)]
    text: Vec<String>,
    #[command(flatten)]
    resources: ResourceArgs,
}

#[derive(Args)]
struct ServeArgs {
    /// Index file
    #[arg(long, env = "ODSEARCH_INDEX")]
    index: PathBuf,
    /// Listen address
    #[arg(long, env = "ODSEARCH_LISTEN", default_value = "127.0.0.1:8080")]
    listen: SocketAddr,
    /// Idle seconds before a chat session expires
    #[arg(long, env = "ODSEARCH_SESSION_TTL", default_value_t = 1800)]
    session_ttl: u64,
    /// External linking service URL; the bundled linker is used when omitted
    #[arg(long, env = "ODSEARCH_LINKER_URL")]
    linker_url: Option<String>,
    /// Timeout for external linker calls, in milliseconds
    #[arg(long, default_value_t = 5000)]
    linker_timeout_ms: u64,
    #[command(flatten)]
    resources: ResourceArgs,
}

#[derive(Args)]
struct StatsArgs {
    /// Canonical or annotated NDJSON corpus
    input: PathBuf,
}

#[derive(Args)]
struct SynthArgs {
    /// Output file (stdout when omitted)
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// RNG seed
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    tracing_subscriber::fmt()
        .with_writer(io::stderr)
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
        )
        .init();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, String> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| format!("{}: {e}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn open(path: &Path) -> Result<BufReader<File>, String> {
    File::open(path).map(BufReader::new).map_err(|e| format!("{}: {e}", path.display()))
}

fn run(cmd: Command) -> Result<(), String> {
    match cmd {
        Command::Harvest(a) => harvest(a),
        Command::Annotate(a) => annotate(a),
        Command::Index(a) => index(a),
        Command::Query(a) => query(a),
        Command::Serve(a) => serve(a),
        Command::Stats(a) => stats(a),
        Command::Synth(a) => synth(a),
    }
}

fn harvest(a: HarvestArgs) -> Result<(), String> {
    let spec = reference_portals()
        .into_iter()
        .find(|p| p.portal_id == a.portal)
        .unwrap_or_else(|| PortalSpec::new(a.portal.clone(), a.base_url.clone().unwrap_or_default()));
    let source = match (&a.offline, &a.base_url) {
        (Some(dir), _) => Source::Offline(dir.clone()),
        (None, url) => {
            if url.is_none() && spec.api_base_url.is_empty() {
                return Err(format!("unknown portal {}: pass --base-url or --offline", a.portal));
            }
            Source::Online(url.clone())
        }
    };
    let opts = HarvestOptions { page_size: a.page_size as usize, ..HarvestOptions::default() };
    let mut out = output(&a.output)?;
    let mut write_err = None;
    let n = harvest_portal(
        &spec,
        &source,
        &opts,
        |rec| {
            if write_err.is_none() {
                if let Err(e) = writeln!(out, "{}", write_canonical(&rec)) {
                    write_err = Some(e);
                }
            }
        },
        |skip| eprintln!("{skip}"),
    )
    .map_err(|e| e.to_string())?;
    if let Some(e) = write_err {
        return Err(e.to_string());
    }
    out.flush().map_err(|e| e.to_string())?;
    tracing::info!(portal = %spec.portal_id, records = n, "harvest finished");
    Ok(())
}

fn annotate(a: AnnotateArgs) -> Result<(), String> {
    let resources = a.resources.load()?;
    let records = read_canonical(open(&a.input)?).map_err(|e| format!("{}: {e}", a.input.display()))?;
    let lines: Vec<String> = records
        .into_par_iter()
        .map(|r| write_annotated(&annotate_dataset(r, &resources.linker, &resources.profiles)))
        .collect();
    let mut out = output(&a.output)?;
    for line in &lines {
        writeln!(out, "{line}").map_err(|e| e.to_string())?;
    }
    out.flush().map_err(|e| e.to_string())
}

fn index(a: IndexArgs) -> Result<(), String> {
    let datasets = read_annotated(open(&a.input)?).map_err(|e| format!("{}: {e}", a.input.display()))?;
    let index = build_index(datasets).map_err(|e| e.to_string())?;
    save_index(&index, &a.output).map_err(|e| format!("{}: {e}", a.output.display()))?;
    tracing::info!(datasets = index.len(), concepts = index.concept_count(), "index written");
    Ok(())
}

fn engine(index_path: &Path, resources: &ResourceArgs, linker: Option<Box<dyn LinkerBackend<f64>>>) -> Result<SearchEngine, String> {
    let index = load_index(index_path).map_err(|e| format!("{}: {e}", index_path.display()))?;
    let res = resources.load()?;
    let linker = linker.unwrap_or_else(|| Box::new(res.linker));
    Ok(SearchEngine::new(index, res.profiles, res.labels, linker))
}

fn query(a: QueryArgs) -> Result<(), String> {
    let engine = engine(&a.index, &a.resources, None)?;
    let text = a.text.join(" ");
    let mut resp = engine.search(&text, a.lang).map_err(|e| e.to_string())?;
    if !a.filters.is_empty() {
        let query: BTreeSet<ConceptId> = resp.query_concepts.iter().map(|c| c.id).collect();
        let filters: BTreeSet<ConceptId> = a.filters.iter().copied().collect();
        let ambiguous = std::mem::take(&mut resp.ambiguous);
        resp = engine.refine(&query, &filters);
        resp.ambiguous = ambiguous;
    }
    let mut out = io::stdout().lock();
    if a.json {
        let s = serde_json::to_string_pretty(&resp).map_err(|e| e.to_string())?;
        writeln!(out, "{s}").map_err(|e| e.to_string())?;
        return Ok(());
    }
    let concepts: Vec<String> = resp.query_concepts.iter().map(|c| format!("{} ({})", c.label, c.id)).collect();
    let w = |r: io::Result<()>| r.map_err(|e| e.to_string());
    w(writeln!(out, "concepts: {}", if concepts.is_empty() { "-".into() } else { concepts.join(", ") }))?;
    for amb in &resp.ambiguous {
        let senses: Vec<String> = amb.senses.iter().map(|s| format!("{} ({})", s.label, s.id)).collect();
        w(writeln!(out, "ambiguous: \"{}\" could be {}", amb.surface, senses.join(" or ")))?;
    }
    w(writeln!(out, "hits: {} (showing {})", resp.total_hits, resp.hits.len()))?;
    if !resp.hits.is_empty() {
        w(writeln!(out, "{:>4}  {:>5}  {:<4}  {:<20}  title", "rank", "score", "lang", "portal"))?;
        for h in &resp.hits {
            w(writeln!(out, "{:>4}  {:>5}  {:<4}  {:<20}  {}", h.rank, h.score, h.language.code(), h.portal, h.title))?;
        }
    }
    if !resp.suggestions.is_empty() {
        let s: Vec<String> = resp.suggestions.iter().map(|s| format!("{} ({}, {})", s.label, s.id, s.doc_count)).collect();
        w(writeln!(out, "refine with: {}", s.join(", ")))?;
    }
    Ok(())
}

fn serve(a: ServeArgs) -> Result<(), String> {
    let linker: Option<Box<dyn LinkerBackend<f64>>> = a
        .linker_url
        .as_ref()
        .map(|url| Box::new(ExternalLinker::new(url.clone(), Duration::from_millis(a.linker_timeout_ms))) as _);
    let engine = engine(&a.index, &a.resources, linker)?;
    let state = odsearch_service::AppState::new(engine, a.session_ttl.saturating_mul(1000));
    let rt = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
    rt.block_on(odsearch_service::serve(state, a.listen)).map_err(|e| e.to_string())
}

fn stats(a: StatsArgs) -> Result<(), String> {
    let mut portals: BTreeMap<String, usize> = BTreeMap::new();
    let mut languages: BTreeMap<LanguageTag, usize> = BTreeMap::new();
    let reader = open(&a.input)?;
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| e.to_string())?;
        if line.trim().is_empty() {
            continue;
        }
        let ctx = |e: odsearch_core::IngestError| format!("{}: line {}: {e}", a.input.display(), i + 1);
        let rec = if line.starts_with("{\"record\"") {
            odsearch_core::annotate::parse_annotated(&line).map_err(ctx)?.record
        } else {
            odsearch_core::parse_canonical(&line).map_err(ctx)?
        };
        *portals.entry(rec.portal_id).or_default() += 1;
        *languages.entry(rec.language).or_default() += 1;
    }
    let mut by_count: Vec<(&String, &usize)> = portals.iter().collect();
    by_count.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(b.0)));
    let total: usize = portals.values().sum();
    let mut out = io::stdout().lock();
    let w = |out: &mut dyn Write, s: String| writeln!(out, "{s}").map_err(|e| e.to_string());
    w(&mut out, format!("{:<24}{:>8}", "portal", "datasets"))?;
    for (p, n) in by_count {
        w(&mut out, format!("{p:<24}{n:>8}"))?;
    }
    w(&mut out, format!("{:<24}{total:>8}", "total"))?;
    w(&mut out, String::new())?;
    w(&mut out, format!("{:<24}{:>8}", "language", "datasets"))?;
    for (l, n) in &languages {
        w(&mut out, format!("{:<24}{n:>8}", l.code()))?;
    }
    Ok(())
}

fn synth(a: SynthArgs) -> Result<(), String> {
    let res = Resources::bundled().map_err(|e| e.to_string())?;
    let records = synth_corpus(&reference_portals(), &res.linker.lexicon, a.seed);
    let mut out = output(&a.output)?;
    for r in &records {
        writeln!(out, "{}", write_canonical(r)).map_err(|e| e.to_string())?;
    }
    out.flush().map_err(|e| e.to_string())
}
