use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{SimSettings, SimSummary, SimTrace};
use crate::error::Result;

#[derive(Serialize, Deserialize)]
struct CsvRow {
    iter: usize,
    wall_clock: f64,
    recovered: usize,
    loss: f64,
    accuracy: Option<f64>,
}

/// Columns: iter, wall_clock, recovered, loss, accuracy (empty when the
/// task has no accuracy).
pub fn write_trace_csv<W: Write>(trace: &SimTrace, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in &trace.records {
        w.serialize(CsvRow { iter: r.iter, wall_clock: r.wall_clock, recovered: r.recovered, loss: r.loss, accuracy: r.accuracy })?;
    }
    w.flush()?;
    Ok(())
}

/// Rows of a trace CSV as (iter, wall_clock, recovered, loss, accuracy).
pub fn read_trace_csv(path: &Path) -> Result<Vec<(usize, f64, usize, f64, Option<f64>)>> {
    let mut rd = csv::Reader::from_path(path)?;
    rd.deserialize::<CsvRow>()
        .map(|row| {
            let r = row?;
            Ok((r.iter, r.wall_clock, r.recovered, r.loss, r.accuracy))
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ManifestEntry {
    pub name: String,
    pub label: String,
    pub n: usize,
    pub k: usize,
    pub s: usize,
    pub alpha: String,
    pub csv: String,
    pub summary: SimSummary,
}

#[derive(Clone, Debug, Serialize)]
pub struct BundleManifest {
    pub settings: SimSettings,
    pub schemes: Vec<ManifestEntry>,
}

/// One CSV per trace plus `manifest.json`, all in `dir`. Returns the paths
/// written, manifest last.
pub fn write_bundle(traces: &[SimTrace], settings: &SimSettings, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut schemes = Vec::new();
    for (i, t) in traces.iter().enumerate() {
        let stem: String = t.name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' }).collect();
        let file = format!("{i:02}_{stem}.csv");
        let path = dir.join(&file);
        write_trace_csv(t, fs::File::create(&path)?)?;
        written.push(path);
        schemes.push(ManifestEntry {
            name: t.name.clone(),
            label: t.label.to_string(),
            n: t.n,
            k: t.k,
            s: t.s,
            alpha: t.alpha.clone(),
            csv: file,
            summary: t.summary.clone(),
        });
    }
    let manifest = BundleManifest { settings: settings.clone(), schemes };
    let path = dir.join("manifest.json");
    fs::write(&path, serde_json::to_string_pretty(&manifest)?)?;
    written.push(path);
    Ok(written)
}
