use std::fs;
use std::path::Path;
use std::process::ExitCode;

use allotax_core::ingest::load_file;
use allotax_core::{
    assemble, merge_systems, render_report, render_svg, Alpha, Error, RankedList, RenderOptions,
};

use crate::{CompareArgs, EXIT_INPUT, EXIT_WRITE};

enum Failure {
    Input(String),
    Write(String),
}

pub fn run(args: &CompareArgs) -> ExitCode {
    match compare(args) {
        Ok(divergence) => {
            println!("D = {divergence:.12}");
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Write(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_WRITE)
        }
    }
}

fn load(path: &Path, max_bytes: u64) -> Result<RankedList, Failure> {
    let ingested = load_file(path, max_bytes).map_err(|e| input_error(path, e))?;
    for label in &ingested.dropped {
        eprintln!(
            "warning: {}: dropped {label:?} with zero count",
            path.display()
        );
    }
    Ok(ingested.list)
}

fn input_error(path: &Path, e: Error) -> Failure {
    match e {
        Error::Io { .. } => Failure::Input(e.to_string()),
        e => Failure::Input(format!("{}: {e}", path.display())),
    }
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn compare(args: &CompareArgs) -> Result<f64, Failure> {
    let alpha = Alpha::parse(&args.alpha).map_err(|e| Failure::Input(e.to_string()))?;
    let options = RenderOptions::from(args.render);
    options
        .validate()
        .map_err(|e| Failure::Input(e.to_string()))?;

    let a = load(&args.file_1, args.max_bytes)?;
    let b = load(&args.file_2, args.max_bytes)?;
    let lex = merge_systems(&a, &b);
    // The lexicon holds every label it needs.
    drop((a, b));

    let title_1 = args.title1.clone().unwrap_or_else(|| stem(&args.file_1));
    let title_2 = args.title2.clone().unwrap_or_else(|| stem(&args.file_2));
    let doc = assemble(&lex, alpha, &title_1, &title_2, &options)
        .map_err(|e| Failure::Input(e.to_string()))?;
    drop(lex);

    write(&args.output, &render_svg(&doc))?;
    if let Some(path) = &args.report {
        write(path, &render_report(&doc))?;
    }
    Ok(doc.divergence)
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text)
        .map_err(|e| Failure::Write(format!("cannot write {}: {e}", path.display())))
}
