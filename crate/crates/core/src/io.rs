//! Waveform files and atomic output.
//!
//! A waveform is stored as raw little-endian `f64` samples with a JSON
//! sidecar `<path>.json` holding `dt`, `label` and `count`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal_gen::Waveform;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveformHeader {
    pub dt: f64,
    pub label: String,
    pub count: usize,
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

/// Writes `bytes` to a temporary sibling and renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| Error::param(format!("not a file path: {}", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp = dir.join(tmp_name);
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })?;
    Ok(())
}

pub fn encode_samples(samples: &[f64]) -> Vec<u8> {
    samples.iter().flat_map(|v| v.to_le_bytes()).collect()
}

pub fn decode_samples(bytes: &[u8]) -> Result<Vec<f64>> {
    if !bytes.len().is_multiple_of(8) {
        return Err(Error::param(format!("sample data length {} is not a multiple of 8", bytes.len())));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect())
}

pub fn write_waveform(path: &Path, w: &Waveform) -> Result<()> {
    let header = WaveformHeader { dt: w.dt(), label: w.label().to_string(), count: w.len() };
    write_atomic(path, &encode_samples(w.samples()))?;
    write_atomic(&sidecar_path(path), serde_json::to_string_pretty(&header)?.as_bytes())?;
    Ok(())
}

pub fn read_waveform(path: &Path) -> Result<Waveform> {
    let header: WaveformHeader = serde_json::from_slice(&fs::read(sidecar_path(path))?)?;
    let samples = decode_samples(&fs::read(path)?)?;
    if samples.len() != header.count {
        return Err(Error::param(format!(
            "{} holds {} samples but its header declares {}",
            path.display(),
            samples.len(),
            header.count
        )));
    }
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::param(format!("{} contains non-finite samples", path.display())));
    }
    Waveform::new(samples, header.dt, header.label)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    write_atomic(path, text.as_bytes())
}
