//! The `isopath` command line.
//!
//! Exit codes: 0 success, 1 invalid cover (`verify`), 2 input is not a block
//! graph, 3 unreadable or malformed input, 4 internal verification failure,
//! 5 instance too large for the oracle, 64 bad usage.

use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use thiserror::Error;

use crate::cover::{parse_cover_text, write_cover_text, Cover, StructuredOutput};
use crate::decomposition::{blocks_and_cut_vertices, check_block_graph};
use crate::generate::{params_for_size, random_block_graph, GeneratorParams};
use crate::graph::{parse_edge_list, write_edge_list, Graph};
use crate::labeling::{parse_labels, write_labels, VertexLabeling};
use crate::oracle::{brute_force_ip, OracleError, SearchStart};
use crate::solver::{solve, SolveError};
use crate::verify::verify_cover;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NOT_BLOCK_GRAPH: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;
pub const EXIT_TOO_LARGE: i32 = 5;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "isopath",
    version,
    about = "Isometric-path covers of block graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute the isometric-path number and an optimal cover.
    Solve {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check a cover file against a graph and labels.
    Verify {
        #[command(flatten)]
        input: GraphInput,
        /// Cover in text (`ip N` then one path per line) or structured form.
        cover: PathBuf,
    },
    /// Minimum cover by exhaustive search (at most 10 vertices, any graph).
    Oracle {
        #[command(flatten)]
        input: GraphInput,
        /// Start the search at one path instead of the endpoint bound.
        #[arg(long)]
        paranoid: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print blocks and cut vertices.
    Decompose {
        /// Edge-list file, or `-` for standard input.
        graph: PathBuf,
    },
    /// Write a random block graph and its labels.
    Gen(GenArgs),
    /// Time `solve` on generated graphs of the given sizes.
    Bench {
        /// Target vertex counts, comma separated; `1e5` style is accepted.
        #[arg(long, value_delimiter = ',', value_parser = parse_size, required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Worker threads; instances are reported in input order regardless.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Args, Debug)]
pub struct GraphInput {
    /// Edge-list file, or `-` for standard input.
    pub graph: PathBuf,
    /// Label file with `v f(v)` lines; unlisted vertices get 0.
    #[arg(long)]
    pub labels: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Number of cliques to attach.
    #[arg(long, conflicts_with = "vertices")]
    pub blocks: Option<usize>,
    /// Aim for about this many vertices instead of a block count.
    #[arg(long, value_parser = parse_size)]
    pub vertices: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub min_block: usize,
    #[arg(long, default_value_t = 4)]
    pub max_block: usize,
    #[arg(long, default_value_t = 2)]
    pub max_label: u32,
    /// Edge-list destination; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Label-file destination; defaults to `<out>.labels` when `--out` is set.
    #[arg(long)]
    pub labels: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

fn parse_size(s: &str) -> Result<usize, String> {
    let s = s.trim();
    if let Ok(n) = s.parse::<usize>() {
        return Ok(n);
    }
    match s.parse::<f64>() {
        Ok(x) if x >= 0.0 && x.fract() == 0.0 && x <= 1e15 => Ok(x as usize),
        _ => Err(format!("`{s}` is not a size")),
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    NotBlockGraph(String),
    #[error("{0}")]
    Internal(String),
    #[error("{0}")]
    TooLarge(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::NotBlockGraph(_) => EXIT_NOT_BLOCK_GRAPH,
            CliError::Internal(_) => EXIT_INTERNAL,
            CliError::TooLarge(_) => EXIT_TOO_LARGE,
        }
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::NotBlockGraph { .. } => CliError::NotBlockGraph(e.to_string()),
            SolveError::Internal(_) => CliError::Internal(e.to_string()),
            SolveError::LabelOverflow { .. }
            | SolveError::LabelCount { .. }
            | SolveError::NotRegular { .. } => CliError::Input(e.to_string()),
        }
    }
}

/// Parses `args` (program name first) and runs the command, returning the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    let text = match command {
        Command::Solve { input, format } => cmd_solve(&input, format)?,
        Command::Verify { input, cover } => {
            let (report, code) = cmd_verify(&input, &cover)?;
            emit(out, &report)?;
            return Ok(code);
        }
        Command::Oracle {
            input,
            paranoid,
            format,
        } => cmd_oracle(&input, paranoid, format)?,
        Command::Decompose { graph } => cmd_decompose(&graph)?,
        Command::Gen(args) => cmd_gen(&args)?,
        Command::Bench { sizes, seed, jobs } => cmd_bench(&sizes, seed, jobs)?,
    };
    emit(out, &text)?;
    Ok(EXIT_OK)
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| CliError::Input(format!("cannot write output: {e}")))
}

fn read_source(path: &Path) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Input(format!("standard input: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }
}

fn load(input: &GraphInput) -> Result<(Graph, VertexLabeling), CliError> {
    let g = load_graph(&input.graph)?;
    let f = match &input.labels {
        Some(path) => parse_labels(&read_source(path)?, g.vertex_count())
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?,
        None => VertexLabeling::zeros(g.vertex_count()),
    };
    Ok((g, f))
}

fn load_graph(path: &Path) -> Result<Graph, CliError> {
    parse_edge_list(&read_source(path)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn render(format: Format, value: u64, cover: &Cover, labels: &[u32], verified: bool) -> String {
    match format {
        Format::Text => write_cover_text(value, cover),
        Format::Structured => {
            let doc = StructuredOutput::new(value, cover, labels, verified);
            let mut s = serde_json::to_string(&doc).expect("plain data serializes");
            s.push('\n');
            s
        }
    }
}

pub fn cmd_solve(input: &GraphInput, format: Format) -> Result<String, CliError> {
    let (g, f) = load(input)?;
    let sol = solve(&g, &f)?;
    Ok(render(
        format,
        sol.value,
        &sol.cover,
        sol.regularized.as_slice(),
        true,
    ))
}

/// Returns the report text and the exit code.
pub fn cmd_verify(input: &GraphInput, cover_path: &Path) -> Result<(String, i32), CliError> {
    let (g, f) = load(input)?;
    let text = read_source(cover_path)?;
    let (claimed, cover) = if text.trim_start().starts_with('{') {
        let doc: StructuredOutput = serde_json::from_str(&text)
            .map_err(|e| CliError::Input(format!("{}: {e}", cover_path.display())))?;
        (Some(doc.value), doc.cover())
    } else {
        parse_cover_text(&text)
            .map_err(|e| CliError::Input(format!("{}: {e}", cover_path.display())))?
    };

    let report = verify_cover(&g, &f, &cover);
    let mut out = String::new();
    for v in &report.violations {
        let _ = writeln!(out, "{v}");
    }
    let mut valid = report.is_valid();
    if let Some(value) = claimed.filter(|&value| value != cover.len()) {
        let _ = writeln!(
            out,
            "count-mismatch: header says {value} but {} paths follow",
            cover.len()
        );
        valid = false;
    }
    if valid {
        let _ = writeln!(out, "valid {} paths", cover.len());
        Ok((out, EXIT_OK))
    } else {
        Ok((out, EXIT_INVALID))
    }
}

pub fn cmd_oracle(input: &GraphInput, paranoid: bool, format: Format) -> Result<String, CliError> {
    let (g, f) = load(input)?;
    let start = if paranoid {
        SearchStart::One
    } else {
        SearchStart::EndpointBound
    };
    let (value, cover) = brute_force_ip(&g, &f, start).map_err(|e| match e {
        OracleError::TooLarge { .. } => CliError::TooLarge(e.to_string()),
        OracleError::LabelCount { .. } => CliError::Input(e.to_string()),
    })?;
    let verified = verify_cover(&g, &f, &cover).is_valid();
    if !verified {
        return Err(CliError::Internal(
            "oracle cover failed verification".into(),
        ));
    }
    Ok(render(format, value, &cover, f.as_slice(), verified))
}

pub fn cmd_decompose(path: &Path) -> Result<String, CliError> {
    let g = load_graph(path)?;
    let bc = blocks_and_cut_vertices(&g);
    let mut out = String::new();
    let _ = writeln!(out, "blocks {}", bc.block_count());
    for (b, vs) in bc.blocks().enumerate() {
        let list: Vec<String> = vs.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "block {b}: {}", list.join(" "));
    }
    let cuts: Vec<String> = bc.cut_vertices().iter().map(ToString::to_string).collect();
    let _ = writeln!(out, "cut-vertices {}: {}", cuts.len(), cuts.join(" "));
    let verdict = match check_block_graph(&g, &bc) {
        Ok(()) => "yes".to_string(),
        Err(e) => format!("no ({e})"),
    };
    let _ = writeln!(out, "block-graph {verdict}");
    Ok(out)
}

pub fn cmd_gen(args: &GenArgs) -> Result<String, CliError> {
    let params = match args.vertices {
        Some(n) => params_for_size(n, args.min_block, args.max_block, args.max_label, args.seed),
        None => GeneratorParams {
            block_count: args.blocks.unwrap_or(8),
            min_block_size: args.min_block,
            max_block_size: args.max_block,
            max_label: args.max_label,
            seed: args.seed,
        },
    };
    let (g, f) = random_block_graph(&params).map_err(|e| CliError::Input(e.to_string()))?;
    let edges = write_edge_list(&g);
    let labels = write_labels(&f);

    let label_path = args.labels.clone().or_else(|| {
        args.out.as_ref().map(|p| {
            let mut s = p.clone().into_os_string();
            s.push(".labels");
            PathBuf::from(s)
        })
    });
    if let Some(path) = &label_path {
        write_file(path, &labels)?;
    }
    match &args.out {
        Some(path) => {
            write_file(path, &edges)?;
            Ok(String::new())
        }
        None => Ok(edges),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// One row per size: vertices, edges, seconds, nanoseconds per edge.
pub fn cmd_bench(sizes: &[usize], seed: u64, jobs: usize) -> Result<String, CliError> {
    let run_one = |&size: &usize| -> Result<String, CliError> {
        let params = params_for_size(size.max(1), 2, 5, 3, seed);
        let (g, f) = random_block_graph(&params).map_err(|e| CliError::Input(e.to_string()))?;
        let start = Instant::now();
        solve(&g, &f)?;
        let secs = start.elapsed().as_secs_f64();
        let per_edge = secs * 1e9 / g.edge_count().max(1) as f64;
        Ok(format!(
            "{:>10} {:>10} {:>10.4} {:>10.1}\n",
            g.vertex_count(),
            g.edge_count(),
            secs,
            per_edge
        ))
    };

    let rows: Vec<Result<String, CliError>> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| CliError::Internal(e.to_string()))?;
        pool.install(|| sizes.par_iter().map(run_one).collect())
    } else {
        sizes.iter().map(run_one).collect()
    };

    let mut out = format!(
        "{:>10} {:>10} {:>10} {:>10}\n",
        "n", "m", "seconds", "ns/edge"
    );
    for row in rows {
        out.push_str(&row?);
    }
    Ok(out)
}
