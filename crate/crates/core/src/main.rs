use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;

use wreathkit::cli::{self, Cli, Report, RunConfig};
use wreathkit::Result;

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())).into())
}

fn emit(cfg: &RunConfig, report: &Report) -> Result<()> {
    match print_stdout(cfg, report) {
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => {}
        r => r?,
    }
    if let Some(path) = &cfg.json {
        write_file(path, &(serde_json::to_string_pretty(report)? + "\n"))?;
    }
    eprintln!("elapsed {:.3} s", report.elapsed.as_secs_f64());
    Ok(())
}

fn print_stdout(cfg: &RunConfig, report: &Report) -> io::Result<()> {
    let mut out = io::stdout().lock();
    for l in &report.lines {
        writeln!(out, "{l}")?;
    }
    let table = report.csv.as_ref().or(report.artifact.as_ref());
    match (table, cfg.command.emit()) {
        (Some(text), Some(path)) => {
            fs::write(path, text).map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())))?
        }
        (Some(text), None) => out.write_all(text.as_bytes())?,
        _ => {}
    }
    out.flush()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = RunConfig::from_cli(cli).and_then(|cfg| {
        let report = cli::run(&cfg)?;
        emit(&cfg, &report)?;
        Ok(report.exit_code())
    });
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
