//! `rf-forster` command-line front end.
//!
//! Exit codes: 0 on success, 2 on flag or usage errors (nothing is written),
//! 1 when a computation fails; the library error is printed verbatim.

pub mod args;
mod commands;
mod output;

use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::Parser;
use rf_forster::ParameterSet;

pub use args::{Cli, Command};
pub use output::{RunManifest, Sidecar};

/// Tool version with the source revision it was built from.
pub const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), " (rev ", env!("RF_FORSTER_GIT_REV"), ")");

/// A semantic flag error detected after parsing; maps to exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub(crate) fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Parameters in effect and where they came from.
pub(crate) struct Loaded {
    pub set: ParameterSet,
    pub path: Option<PathBuf>,
}

fn load(path: Option<&Path>) -> anyhow::Result<Loaded> {
    Ok(match path {
        Some(p) => Loaded {
            set: rf_forster::load_parameters(p)?,
            path: Some(p.to_path_buf()),
        },
        None => Loaded {
            set: ParameterSet::reference(),
            path: None,
        },
    })
}

/// Runs the tool on `argv` (including the program name) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}");
            eprintln!("For more information, try '--help'.");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn dispatch(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Replay(r) => {
            let text = std::fs::read_to_string(&r.manifest)
                .map_err(|e| anyhow::anyhow!("cannot read manifest {}: {e}", r.manifest.display()))?;
            let sidecar: Sidecar = serde_json::from_str(&text)
                .map_err(|e| anyhow::anyhow!("invalid manifest {}: {e}", r.manifest.display()))?;
            let mut cmd = sidecar.manifest.command;
            if let Some(out) = r.out {
                if let Some(o) = cmd.output_mut() {
                    o.out = Some(out);
                }
            }
            if let Command::Spectrum(s) = &mut cmd {
                s.threads = r.threads;
            }
            let params = load(sidecar.manifest.params.as_deref())?;
            execute(&cmd, &params)
        }
        cmd => {
            let params = load(cli.params.as_deref())?;
            execute(&cmd, &params)
        }
    }
}

fn execute(cmd: &Command, params: &Loaded) -> anyhow::Result<()> {
    let report = commands::run_command(cmd, &params.set)?;
    output::emit(cmd, params.path.as_deref(), &report)
}
