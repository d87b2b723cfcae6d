use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;

use primkg_cli::{render, run, Command, Options};

/// Primitive ideal spaces of finite self-similar k-graph algebras.
#[derive(Parser, Debug)]
#[command(name = "primkg", version)]
struct Cli {
    command: Command,
    /// Input file in the `.kg` text format.
    input: PathBuf,
    /// Degree bound for bounded searches, as `d1,..,dk`.
    #[arg(long, value_delimiter = ',')]
    bound: Option<Vec<u32>>,
    /// Orbit depth for representation checks.
    #[arg(long)]
    depth: Option<usize>,
    /// Write the specialization preorder as DOT to this file.
    #[arg(long)]
    dot: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(text) => {
            println!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn execute(cli: &Cli) -> anyhow::Result<String> {
    let text = std::fs::read_to_string(&cli.input).with_context(|| format!("reading {}", cli.input.display()))?;
    let opts = Options { bound: cli.bound.clone(), depth: cli.depth };
    let out = run(cli.command, &text, &opts)?;
    if let (Some(path), Some(dot)) = (&cli.dot, &out.dot) {
        std::fs::write(path, dot).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(render(&out.json))
}
