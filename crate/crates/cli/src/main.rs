mod args;
mod commands;
mod config;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use commands::RunOptions;
use error::CliError;
use output::{Provenance, Writer, TOOL_VERSION};

const EXIT_AUDIT: u8 = 3;

fn run(cli: &Cli) -> Result<bool, CliError> {
    let (kind, common) = cli.command.split();
    let cfg = config::load(common.preset.as_deref(), common.input.as_deref(), &common.set)?;
    if common.jobs == Some(0) {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let jobs = common
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let prov = Provenance {
        tool: "rydcryst",
        version: TOOL_VERSION,
        core_version: rydcryst_core::VERSION,
        subcommand: kind.name(),
        config_name: cfg.name.clone(),
        config_sha256: config::config_hash(&cfg),
        seed: common.seed,
        units: if common.si { "si" } else { "natural" },
    };
    let mut writer = Writer::new(&common.out, prov, serde_json::to_value(&cfg).expect("config serializes"))?;
    let opts = RunOptions {
        si: common.si,
        seed: common.seed,
        jobs,
        quiet: common.quiet,
    };
    let outcome = commands::run(kind, &cfg, &mut writer, &opts)?;
    if !common.quiet {
        for p in writer.written() {
            println!("wrote {}", p.display());
        }
    }
    if !outcome.audit_passed {
        eprintln!("warning: validity audit failed");
    }
    Ok(outcome.audit_passed || !common.strict)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_AUDIT),
        Err(e) => {
            eprintln!("rydcryst: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
