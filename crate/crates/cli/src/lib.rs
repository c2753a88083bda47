//! The `allotax` command: `compare` renders two ranked-list files to SVG,
//! `serve` exposes the same pipeline over HTTP for the browser UI.

pub mod compare;
pub mod serve;

use std::path::PathBuf;
use std::process::ExitCode;

use allotax_core::{
    assemble, merge_systems, AllotaxDocument, Alpha, RankedList, RenderOptions, Result,
};
use clap::{Args, Parser, Subcommand};

/// Per-file size limit when neither `--max-bytes` nor the environment sets one.
pub const DEFAULT_FILE_LIMIT: u64 = allotax_core::ingest::DEFAULT_MAX_BYTES;
/// Request body limit for the service.
pub const DEFAULT_PAYLOAD_LIMIT: u64 = 256 << 20;

pub const EXIT_INPUT: u8 = 2;
pub const EXIT_WRITE: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "allotax",
    version,
    about = "Rank-turbulence divergence and allotaxonographs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare two ranked lists and write an allotaxonograph SVG.
    Compare(CompareArgs),
    /// Serve the HTTP API and the browser UI.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    pub file_1: PathBuf,
    pub file_2: PathBuf,
    /// Decimal, fraction such as 1/3, or inf.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    /// Defaults to the first file's stem.
    #[arg(long)]
    pub title1: Option<String>,
    /// Defaults to the second file's stem.
    #[arg(long)]
    pub title2: Option<String>,
    #[arg(short, long)]
    pub output: PathBuf,
    /// Also write the JSON report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[command(flatten)]
    pub render: RenderArgs,
    #[arg(long, env = "ALLOTAX_MAX_BYTES", default_value_t = DEFAULT_FILE_LIMIT)]
    pub max_bytes: u64,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct RenderArgs {
    /// Cells per diamond axis.
    #[arg(long, default_value_t = RenderOptions::default().cells)]
    pub cells: usize,
    /// Rows in the contribution chart.
    #[arg(long, default_value_t = RenderOptions::default().wordshift_n)]
    pub wordshift_n: usize,
    /// Number of contour levels.
    #[arg(long, default_value_t = RenderOptions::default().contour_levels)]
    pub contours: usize,
}

impl From<RenderArgs> for RenderOptions {
    fn from(a: RenderArgs) -> Self {
        RenderOptions {
            cells: a.cells,
            wordshift_n: a.wordshift_n,
            contour_levels: a.contours,
            ..RenderOptions::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub bind: String,
    /// Directory of built UI assets; an embedded entry page is served otherwise.
    #[arg(long)]
    pub ui_dir: Option<PathBuf>,
    /// Request body limit in bytes.
    #[arg(long, env = "ALLOTAX_MAX_BYTES", default_value_t = DEFAULT_PAYLOAD_LIMIT)]
    pub max_bytes: u64,
}

pub fn run(cli: Cli) -> ExitCode {
    match cli.command {
        Command::Compare(args) => compare::run(&args),
        Command::Serve(args) => serve::run(&args),
    }
}

/// Merges, scores and lays out two lists. Shared by both subcommands so
/// their output is byte-identical for the same inputs.
pub fn build_document(
    a: &RankedList,
    b: &RankedList,
    alpha: Alpha,
    title_1: &str,
    title_2: &str,
    options: &RenderOptions,
) -> Result<AllotaxDocument> {
    options.validate()?;
    let lex = merge_systems(a, b);
    assemble(&lex, alpha, title_1, title_2, options)
}
