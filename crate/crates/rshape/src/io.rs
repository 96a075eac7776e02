//! Point CSV ingestion and the run manifest.
//!
//! CSV format: one `x,y` pair per line, optional `x,y` header, `#`
//! starts a comment line, UTF-8, `.` decimal point.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geom::{Point2, PointCloud};

pub fn parse_points(text: &str, label: &str) -> Result<PointCloud> {
    let mut pts = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let row = raw.trim();
        if row.is_empty() || row.starts_with('#') {
            continue;
        }
        if idx == 0 && row.eq_ignore_ascii_case("x,y") {
            continue;
        }
        let mut fields = row.split(',');
        let (fx, fy) = match (fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), None) => (a.trim(), b.trim()),
            _ => {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected two comma-separated fields, got '{row}'"),
                })
            }
        };
        let parse = |f: &str| -> Result<f64> {
            f.parse::<f64>().map_err(|_| Error::Parse {
                line,
                msg: format!("not a number: '{f}'"),
            })
        };
        let p = Point2::new(parse(fx)?, parse(fy)?);
        if !p.is_finite() {
            return Err(Error::NonFinite(format!("line {line}: {fx},{fy}")));
        }
        pts.push(p);
    }
    PointCloud::new(pts, label)
}

pub fn read_points_csv(path: &Path) -> Result<PointCloud> {
    let text = std::fs::read_to_string(path)?;
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "cloud".into());
    parse_points(&text, &label)
}

/// Canonical form: `x,y` header and shortest exact decimal per
/// coordinate, so write(read(f)) is byte-stable.
pub fn points_csv(points: &[Point2]) -> String {
    let mut out = String::from("x,y\n");
    for p in points {
        let _ = writeln!(out, "{},{}", p.x, p.y);
    }
    out
}

pub fn write_points_csv(path: &Path, points: &[Point2]) -> Result<()> {
    Ok(std::fs::write(path, points_csv(points))?)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    format!("{:x}", h.finalize())
}

/// Everything needed to replay a run: the command, its flags, digests
/// of the inputs, the seed, and the library version. The timestamp is
/// informational; set SOURCE_DATE_EPOCH to pin it for byte-identical
/// reruns.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub flags: BTreeMap<String, String>,
    pub input_digests: BTreeMap<String, String>,
    pub seed: u64,
    pub version: String,
    pub timestamp: u64,
}

impl RunManifest {
    pub fn new(command: &str, seed: u64) -> RunManifest {
        let timestamp = std::env::var("SOURCE_DATE_EPOCH")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or_else(|| {
                std::time::SystemTime::now()
                    .duration_since(std::time::UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0)
            });
        RunManifest {
            command: command.to_string(),
            flags: BTreeMap::new(),
            input_digests: BTreeMap::new(),
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp,
        }
    }

    pub fn flag(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.flags.insert(key.to_string(), value.to_string());
        self
    }

    pub fn input(&mut self, path: &Path) -> Result<&mut Self> {
        let bytes = std::fs::read(path)?;
        self.input_digests
            .insert(path.display().to_string(), sha256_hex(&bytes));
        Ok(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        Ok(std::fs::write(path, self.to_json())?)
    }
}
