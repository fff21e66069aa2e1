//! Writing tables, JSON mirrors and the metadata sidecar.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use rf_forster::report::{Cell, Table};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::args::Command;
use crate::commands::Report;

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub subcommand: String,
    /// Parameter file; `None` means the built-in reference set.
    pub params: Option<PathBuf>,
    pub command: Command,
    pub seed: Option<u64>,
    pub outputs: Vec<PathBuf>,
}

/// Contents of `<stem>.meta.json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Sidecar {
    pub manifest: RunManifest,
    /// Seconds since the Unix epoch; only recorded with `--timestamp`.
    pub timestamp_unix: Option<u64>,
    pub details: Value,
}

pub fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("meta.json")
}

pub fn json_path(out: &Path) -> PathBuf {
    out.with_extension("json")
}

fn cell_json(c: &Cell) -> Value {
    match c {
        Cell::Int(v) => json!(v),
        Cell::Float(v) if v.is_finite() => json!(v),
        Cell::Float(_) => Value::Null,
        Cell::Text(s) => json!(s),
    }
}

pub fn table_json(t: &Table) -> Value {
    json!({
        "columns": t.header,
        "rows": t.rows.iter().map(|r| r.iter().map(cell_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

fn to_pretty(v: &impl Serialize) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

pub fn emit(cmd: &Command, params: Option<&Path>, report: &Report) -> anyhow::Result<()> {
    let out = cmd.output().expect("replay is resolved before execution");
    let csv = report.table.to_csv();
    let Some(path) = &out.out else {
        if out.json {
            print!("{}", to_pretty(&table_json(&report.table))?);
        } else {
            print!("{csv}");
        }
        eprintln!("{}", report.summary);
        return Ok(());
    };

    let mut outputs = vec![path.clone()];
    let mirror = out.json.then(|| json_path(path));
    outputs.extend(mirror.clone());
    let meta = sidecar_path(path);
    let timestamp_unix = out.timestamp.then(|| {
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0)
    });
    let sidecar = Sidecar {
        manifest: RunManifest {
            tool: "rf-forster".into(),
            version: crate::VERSION.into(),
            subcommand: cmd.name().into(),
            params: params.map(Path::to_path_buf),
            command: cmd.clone(),
            seed: report.seed,
            outputs,
        },
        timestamp_unix,
        details: report.details.clone(),
    };

    fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?;
    if let Some(m) = &mirror {
        fs::write(m, to_pretty(&table_json(&report.table))?).with_context(|| format!("writing {}", m.display()))?;
    }
    fs::write(&meta, to_pretty(&sidecar)?).with_context(|| format!("writing {}", meta.display()))?;
    println!("{}", report.summary);
    Ok(())
}
