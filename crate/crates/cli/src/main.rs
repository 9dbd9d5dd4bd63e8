use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cofun_cli::manifest::{parse_manifest, parse_module_expr};
use cofun_cli::run::{run, Flags};

#[derive(Parser)]
#[command(name = "cofun", version, about = "Check module, morphism and telescope manifests")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every `analyze` line of a manifest.
    Check {
        manifest: PathBuf,
        /// Write the JSON report here (`-` for stdout, replacing the summary).
        #[arg(long)]
        json: Option<PathBuf>,
        /// Default bound K for telescopes without their own.
        #[arg(long, value_parser = clap::value_parser!(u64).range(0..=64))]
        bound: Option<u64>,
        /// Skip re-checking witnesses.
        #[arg(long)]
        no_replay: bool,
        /// Add a probe module: a manifest name, `free n` or `rel [[..]]`.
        #[arg(long = "probe-extra", value_name = "MODULE")]
        probe_extra: Vec<String>,
    },
}

const INPUT_ERROR: u8 = 2;
const INTERNAL_ERROR: u8 = 3;

fn main() -> ExitCode {
    let Command::Check { manifest, json, bound, no_replay, probe_extra } = Cli::parse().command;
    let text = match std::fs::read_to_string(&manifest) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cofun: cannot read {}: {e}", manifest.display());
            return ExitCode::from(INPUT_ERROR);
        }
    };
    let parsed = match parse_manifest(&text) {
        Ok(m) => m,
        Err(diags) => {
            for d in diags {
                eprintln!("{}: {d}", manifest.display());
            }
            return ExitCode::from(INPUT_ERROR);
        }
    };
    let mut extra = Vec::new();
    for p in probe_extra {
        match parse_module_expr(&parsed, &p) {
            Ok(m) => extra.push((p, m)),
            Err(d) => {
                eprintln!("cofun: --probe-extra {p:?}: {}", d.message);
                return ExitCode::from(INPUT_ERROR);
            }
        }
    }
    let flags = Flags { bound: bound.map(|b| b as usize), replay: !no_replay, probe_extra: extra };
    let report = run(&parsed, &flags);

    let to_stdout = json.as_deref().is_some_and(|p| p.as_os_str() == "-");
    if to_stdout {
        print!("{}", report.to_json());
    } else {
        print!("{}", report.render_human());
        if let Some(path) = json {
            if let Err(e) = std::fs::write(&path, report.to_json()) {
                eprintln!("cofun: cannot write {}: {e}", path.display());
                return ExitCode::from(INPUT_ERROR);
            }
        }
    }
    let failures = report.internal_failures();
    if !failures.is_empty() {
        for f in failures {
            eprintln!("cofun: internal: {f}");
        }
        return ExitCode::from(INTERNAL_ERROR);
    }
    ExitCode::SUCCESS
}
