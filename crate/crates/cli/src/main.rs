mod analyses;
mod args;
mod config;
mod load;
mod output;

use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use epochscope_core::{Error, ErrorCategory, Result};
use rayon::prelude::*;
use serde_json::json;

use crate::args::{Cli, Family};
use crate::output::{Artifact, Renderer};

const DEFAULT_REPORT_DIR: &str = "epochscope-report";

fn write_artifact(dir: &Path, a: &Artifact) -> Result<()> {
    let path = dir.join(&a.file);
    fs::write(&path, &a.content).map_err(|source| Error::Io { path, source })
}

fn run(cli: Cli) -> Result<()> {
    let (families, is_report, opts) = cli.command.split();
    let resolved = config::resolve(families.clone(), &opts)?;
    let corpus = load::load(&resolved, opts.cache)?;
    let cfg = &resolved.config;
    let renderer = Renderer {
        hash: &resolved.hash,
        precision: cfg.precision,
        format: cfg.format,
    };

    let outputs: Vec<(Family, Result<Vec<Artifact>>)> = families
        .par_iter()
        .map(|&f| (f, analyses::run(f, cfg, &renderer, &corpus)))
        .collect();
    let mut produced = Vec::with_capacity(outputs.len());
    for (f, r) in outputs {
        produced.push((f, r?));
    }

    let out_dir = match (&opts.out, is_report) {
        (Some(d), _) => Some(d.clone()),
        (None, true) => Some(DEFAULT_REPORT_DIR.into()),
        (None, false) => None,
    };
    let Some(dir) = out_dir else {
        // single analysis to standard output: the artifact in the requested
        // format, or the first one
        let (_, artifacts) = &produced[0];
        let wanted = cfg.format.map(|f| f.extension());
        let a = artifacts
            .iter()
            .find(|a| wanted.is_some_and(|ext| a.file.ends_with(ext)))
            .unwrap_or(&artifacts[0]);
        let mut stdout = std::io::stdout().lock();
        return stdout.write_all(a.content.as_bytes()).map_err(|source| Error::Io {
            path: "<stdout>".into(),
            source,
        });
    };

    fs::create_dir_all(&dir).map_err(|source| Error::Io {
        path: dir.clone(),
        source,
    })?;
    produced
        .par_iter()
        .flat_map(|(_, arts)| arts.par_iter())
        .map(|a| write_artifact(&dir, a))
        .collect::<Result<Vec<()>>>()?;
    if is_report {
        let index = json!({
            "config_hash": resolved.hash,
            "config": cfg,
            "artifacts": produced.iter().map(|(f, arts)| json!({
                "family": f.name(),
                "files": arts.iter().map(|a| a.file.as_str()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        });
        let mut content = serde_json::to_string_pretty(&index)?;
        content.push('\n');
        write_artifact(
            &dir,
            &Artifact {
                file: "index.json".into(),
                content,
            },
        )?;
    }
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e.category() {
        ErrorCategory::Config => 1,
        ErrorCategory::Data => 2,
        ErrorCategory::Numeric => 3,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("epochscope: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
