use std::fs;
use std::io::{self, IsTerminal, Read, Write};
use std::process::ExitCode;

use biphoton::measurement::ExperimentConfig;
use biphoton_cli::{
    canonical_line, compare_json, parse_documents, quantify_json, reconstruct_json, resolve_state,
    simulate, sweep_csv, sweep_grid, CliError, Cli, Command, State,
};
use clap::Parser;

fn read_source(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))
    }
}

fn emit(text: &str) -> Result<(), CliError> {
    io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io(format!("stdout: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Quantify { state, density } => {
            let s = resolve_state(&state, read_source)?;
            emit(&canonical_line(&quantify_json(&s, density)))
        }
        Command::Compare2Qubit { state } => match resolve_state(&state, read_source)? {
            State::Ququart(s) => emit(&canonical_line(&compare_json(&s))),
            State::Qutrit(_) => Err(CliError::Input("compare-2qubit takes a ququart".into())),
        },
        Command::Sweep { family, points, param, out } => {
            let params = if param.is_empty() { sweep_grid(family, points) } else { param };
            let csv = sweep_csv(family, &params)?;
            match out {
                Some(path) => fs::write(&path, csv).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
                None => emit(&csv),
            }
        }
        Command::Simulate { state, basis, eta, pairs, seed, noise, no_stdin } => {
            let s = resolve_state(&state, read_source)?;
            let cfg = ExperimentConfig::new(pairs, eta, basis, noise, seed)
                .map_err(|e| CliError::Input(e.to_string()))?;
            // Pass earlier records through so invocations can be chained.
            let stdin_is_spec = state.spec.as_deref() == Some("-");
            if !no_stdin && !stdin_is_spec && !io::stdin().is_terminal() {
                for doc in parse_documents(&read_source("-")?)? {
                    emit(&canonical_line(&doc))?;
                }
            }
            emit(&canonical_line(&simulate(&s, &cfg).to_json()))
        }
        Command::Reconstruct { files } => {
            let mut docs = Vec::new();
            if files.is_empty() {
                docs.extend(parse_documents(&read_source("-")?)?);
            }
            for f in &files {
                docs.extend(parse_documents(&read_source(f)?)?);
            }
            emit(&canonical_line(&reconstruct_json(&docs)?))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("biphoton: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
