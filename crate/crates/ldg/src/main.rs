use std::process::ExitCode;

use clap::Parser;
use ldg::cli::{Cli, Command, RunArgs};
use ldg::{resolve_config, run, LdgError};

fn execute(cli: Cli) -> Result<bool, LdgError> {
    match cli.command {
        Some(Command::ExportMesh { mesh, path }) => {
            let text = ldg::meshio::format_mesh(&mesh.build()?);
            std::fs::write(&path, text).map_err(|source| LdgError::Output { path, source })?;
            Ok(true)
        }
        Some(Command::Run(args)) => run_args(&args),
        None => run_args(&RunArgs::default()),
    }
}

fn run_args(args: &RunArgs) -> Result<bool, LdgError> {
    let config = resolve_config(args)?;
    let summary = run(&config)?;
    for (name, ok, failed) in &summary.results {
        if *ok {
            println!("{name}: pass");
        } else {
            println!("{name}: FAIL ({})", failed.join(", "));
        }
    }
    for f in &summary.files {
        println!("wrote {}", f.display());
    }
    Ok(summary.passed())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
