use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use serde::Serialize;

use kneser::verify::{parse_grid, run, Command, Scenario};
use kneser::Error;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Extend,
    Verify,
    Tfun,
    Qc,
    Mollify,
    Probe,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Extend => Command::Extend,
            Cmd::Verify => Command::Verify,
            Cmd::Tfun => Command::Tfun,
            Cmd::Qc => Command::Qc,
            Cmd::Mollify => Command::Mollify,
            Cmd::Probe => Command::Probe,
        }
    }
}

/// Harmonic extensions of boundary maps onto Jordan curves.
#[derive(Debug, Parser)]
#[command(name = "kneser", version)]
struct Cli {
    #[arg(value_enum)]
    command: Cmd,
    /// Scenario file (JSON).
    #[arg(long)]
    scenario: PathBuf,
    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Overrides `quadrature_N`.
    #[arg(long)]
    nodes: Option<usize>,
    /// Overrides `grid`, as `RxT`.
    #[arg(long)]
    grid: Option<String>,
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    command: &'a str,
    error: String,
    exit_code: i32,
}

fn load(cli: &Cli) -> kneser::Result<Scenario> {
    let text = fs::read_to_string(&cli.scenario)
        .map_err(|e| Error::InvalidSpec(format!("{}: {e}", cli.scenario.display())))?;
    let mut s = Scenario::from_json(&text)?;
    if let Some(n) = cli.nodes {
        s.quadrature_n = n;
    }
    if let Some(g) = &cli.grid {
        s.grid = parse_grid(g)?;
    }
    s.validate()?;
    Ok(s)
}

fn write(dir: &Path, name: &str, contents: &str) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), contents)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = format!("{:?}", cli.command).to_lowercase();
    let result = load(&cli).and_then(|s| run(cli.command.into(), &s));
    match result {
        Ok(artifacts) => {
            for a in &artifacts {
                if let Err(e) = write(&cli.out, &a.name, &a.contents) {
                    eprintln!("kneser: cannot write {}: {e}", a.name);
                    return ExitCode::from(1);
                }
                println!("{}", cli.out.join(&a.name).display());
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            let code = err.exit_code();
            eprintln!("kneser {name}: {err}");
            let report = ErrorReport {
                command: &name,
                error: err.to_string(),
                exit_code: code,
            };
            if let Ok(text) = serde_json::to_string_pretty(&report) {
                let _ = write(&cli.out, "error.json", &(text + "\n"));
            }
            ExitCode::from(code as u8)
        }
    }
}
