use std::fmt::Write as _;
use std::io::{IsTerminal as _, Write as _};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tracing_subscriber::filter::LevelFilter;
use vqbrowse_core::stats::{corpus_stats, CorpusStats};
use vqbrowse_core::wire::{self, ApiError};
use vqbrowse_core::{generate_synthetic_corpus, load_corpus, CorpusError, Engine, ResultPage};
use vqbrowse_server::{ConfigFile, LogLevel, ServerConfig};

/// Browse, query and serve annotated visual question corpora.
#[derive(Debug, Parser)]
#[command(name = "vqbrowse", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a corpus directory and report every invalid record.
    Validate {
        #[arg(long)]
        corpus: PathBuf,
    },
    /// Run the HTTP server.
    Serve(ServeArgs),
    /// Run one search and print the result page.
    Query(QueryArgs),
    /// Write a synthetic corpus.
    Gen {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print label histograms and answer entropy quantiles.
    Stats {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
struct ServeArgs {
    /// TOML config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    listen: Option<String>,
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long)]
    images: Option<PathBuf>,
    #[arg(long)]
    ui: Option<PathBuf>,
    #[arg(long)]
    log_level: Option<LogLevel>,
}

/// Flags mirror the `/api/search` parameters one to one.
#[derive(Debug, Args)]
struct QueryArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    q_question: Option<String>,
    #[arg(long)]
    q_answers: Option<String>,
    #[arg(long)]
    q_captions: Option<String>,
    #[arg(long)]
    filename: Option<String>,
    /// CATEGORY.LABEL[.MIN_COUNT], repeatable.
    #[arg(long, value_name = "CAT.LABEL[.N]")]
    sel: Vec<String>,
    #[arg(long)]
    text_present: Option<String>,
    #[arg(long)]
    order: Option<String>,
    #[arg(long)]
    page: Option<String>,
    /// Annotation group to include, repeatable. Default: all.
    #[arg(long)]
    show: Vec<String>,
    /// Print the exact `/api/search` response body.
    #[arg(long)]
    json: bool,
}

impl QueryArgs {
    fn params(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        let single = [
            ("q_question", &self.q_question),
            ("q_answers", &self.q_answers),
            ("q_captions", &self.q_captions),
            ("filename", &self.filename),
            ("text_present", &self.text_present),
            ("order", &self.order),
            ("page", &self.page),
        ];
        for (key, value) in single {
            if let Some(v) = value {
                out.push((key, v.clone()));
            }
        }
        out.extend(self.sel.iter().map(|s| ("sel", s.clone())));
        out.extend(self.show.iter().map(|s| ("show", s.clone())));
        out
    }
}

/// Exit status 1 for bad input or data, 2 for environment failures.
#[derive(Debug)]
enum Failure {
    Domain(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Domain(_) => 1,
            Failure::Io(_) => 2,
        }
    }
}

impl From<CorpusError> for Failure {
    fn from(err: CorpusError) -> Self {
        if err.is_io() {
            Failure::Io(err.to_string())
        } else {
            Failure::Domain(err.to_string())
        }
    }
}

impl From<ApiError> for Failure {
    fn from(err: ApiError) -> Self {
        Failure::Domain(format!("{}: {}", err.code.as_str(), err.detail))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            let (Failure::Domain(msg) | Failure::Io(msg)) = &failure;
            eprintln!("error: {msg}");
            ExitCode::from(failure.code())
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Validate { corpus } => validate(corpus),
        Command::Serve(args) => serve(args),
        Command::Query(args) => query(args),
        Command::Gen { seed, count, out } => {
            generate_synthetic_corpus(seed, count)
                .write_dir(&out)
                .map_err(|e| Failure::Io(e.to_string()))?;
            println!("wrote {count} records to {}", out.display());
            Ok(())
        }
        Command::Stats { corpus, json } => {
            let stats = corpus_stats(&load_corpus(&corpus)?);
            if json {
                emit(&wire::to_body(&stats));
            } else {
                emit(&render_stats(&stats));
            }
            Ok(())
        }
    }
}

fn validate(dir: PathBuf) -> Result<(), Failure> {
    match load_corpus(&dir) {
        Ok(corpus) => {
            println!("ok: {} records in {}", corpus.len(), dir.display());
            Ok(())
        }
        Err(CorpusError::Invalid(violations)) => {
            for v in &violations {
                println!("{v}");
            }
            Err(Failure::Domain(format!(
                "{} invalid record(s) in {}",
                violations.len(),
                dir.display()
            )))
        }
        Err(err) => Err(err.into()),
    }
}

fn serve(args: ServeArgs) -> Result<(), Failure> {
    let file = match &args.config {
        Some(path) => ConfigFile::read(path).map_err(|e| Failure::Io(e.to_string()))?,
        None => ConfigFile::default(),
    };
    let config = ServerConfig::try_from(file.merge(ConfigFile {
        listen: args.listen,
        corpus_dir: args.corpus,
        image_dir: args.images,
        ui_dir: args.ui,
        log_level: args.log_level,
    }))
    .map_err(|e| Failure::Io(e.to_string()))?;

    let level: LevelFilter = config
        .log_level
        .as_str()
        .parse()
        .unwrap_or(LevelFilter::INFO);
    tracing_subscriber::fmt()
        .with_max_level(level)
        .with_writer(std::io::stderr)
        .with_ansi(std::io::stderr().is_terminal())
        .init();

    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::Io(e.to_string()))?;
    runtime
        .block_on(vqbrowse_server::serve(config))
        .map_err(|err| match err {
            vqbrowse_server::ServerError::Corpus(e) => e.into(),
            other => Failure::Io(other.to_string()),
        })
}

fn query(args: QueryArgs) -> Result<(), Failure> {
    let engine = Engine::new(load_corpus(&args.corpus)?);
    let params = args.params();
    if args.json {
        // errors are printed as the same body the server would send
        match wire::search_body(&engine, params) {
            Ok(body) => emit(&body),
            Err(err) => {
                emit(&err.to_body());
                return Err(err.into());
            }
        }
    } else {
        let query = wire::parse_search_params(params)?;
        let page = engine.execute(&query).map_err(ApiError::from)?;
        emit(&render_page(&page));
    }
    Ok(())
}

/// Writes to stdout; a closed pipe (`| head`) is not an error.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    if let Err(err) = out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        if err.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: cannot write output: {err}");
        }
    }
}

const TEXT_COLUMNS: usize = 60;

fn truncate(text: &str, width: usize) -> String {
    let flat: String = text
        .chars()
        .map(|c| if c.is_control() { ' ' } else { c })
        .collect();
    if flat.chars().count() <= width {
        flat
    } else {
        let mut cut: String = flat.chars().take(width - 1).collect();
        cut.push('…');
        cut
    }
}

fn render_page(page: &ResultPage) -> String {
    let mut out = String::new();
    if page.items.is_empty() {
        writeln!(
            out,
            "No results (page {} of {} total)",
            page.page, page.total_count
        )
        .unwrap();
        return out;
    }
    writeln!(
        out,
        "Showing {}-{} of {}",
        page.first_index, page.last_index, page.total_count
    )
    .unwrap();
    let name_width = page
        .items
        .iter()
        .map(|i| i.filename.len())
        .max()
        .unwrap_or(8);
    writeln!(
        out,
        "{:>5}  {:<name_width$}  {:>5}  {:>7}  question",
        "#", "filename", "score", "entropy"
    )
    .unwrap();
    for (offset, item) in page.items.iter().enumerate() {
        let question = match &item.question {
            Some(q) => q.as_str(),
            None => "",
        };
        writeln!(
            out,
            "{:>5}  {:<name_width$}  {:>5}  {:>7.3}  {}",
            page.first_index + offset,
            item.filename,
            item.match_score,
            item.entropy,
            truncate(question, TEXT_COLUMNS)
        )
        .unwrap();
    }
    out
}

fn render_stats(stats: &CorpusStats) -> String {
    let mut out = String::new();
    writeln!(out, "records: {}", stats.records).unwrap();
    for cat in &stats.categories {
        writeln!(out, "\n{} (records by worker count 0..5)", cat.category).unwrap();
        for label in &cat.labels {
            let bins: Vec<String> = label.histogram.iter().map(u64::to_string).collect();
            writeln!(
                out,
                "  {:<4} votes {:>7}  records {:>7}  [{}]",
                label.code,
                label.votes,
                label.records,
                bins.join(" ")
            )
            .unwrap();
        }
    }
    let bins: Vec<String> = stats.text_present.iter().map(u64::to_string).collect();
    writeln!(out, "\ntext_present [{}]", bins.join(" ")).unwrap();
    match &stats.entropy {
        Some(e) => writeln!(
            out,
            "answer entropy (bits): min {:.6}  median {:.6}  max {:.6}",
            e.min, e.median, e.max
        )
        .unwrap(),
        None => writeln!(out, "answer entropy (bits): n/a").unwrap(),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncation() {
        assert_eq!(truncate("short", 10), "short");
        assert_eq!(truncate("line\nbreak", 20), "line break");
        let long = "x".repeat(80);
        let cut = truncate(&long, TEXT_COLUMNS);
        assert_eq!(cut.chars().count(), TEXT_COLUMNS);
        assert!(cut.ends_with('…'));
    }

    #[test]
    fn query_flags_become_parameters() {
        let cli = Cli::parse_from([
            "vqbrowse",
            "query",
            "--corpus",
            "c",
            "--q-question",
            "milk",
            "--sel",
            "skills.TXT",
            "--sel",
            "quality_issues.ROT.2",
            "--show",
            "question",
            "--page",
            "2",
        ]);
        let Command::Query(args) = cli.command else {
            panic!("not a query");
        };
        let q = wire::parse_search_params(args.params()).unwrap();
        assert_eq!(q.page, 2);
        assert_eq!(q.selections.len(), 2);
        assert_eq!(q.visible_groups.len(), 1);
    }
}
