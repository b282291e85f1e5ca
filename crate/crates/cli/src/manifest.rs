use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Pins the manifest timestamp for reproducible output files.
pub const SOURCE_DATE_EPOCH: &str = "SOURCE_DATE_EPOCH";

/// Provenance block written at the top of every output file.
///
/// `input_digest` hashes the command, version and config echo, so two runs
/// with the same digest produce the same payload. The timestamp is the only
/// field outside that contract.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: &'static str,
    pub version: &'static str,
    pub timestamp: u64,
    pub input_digest: String,
    pub config: Value,
}

impl RunManifest {
    pub fn new(command: &'static str, config: Value) -> Self {
        let version = env!("CARGO_PKG_VERSION");
        let canonical = serde_json::json!({
            "command": command,
            "version": version,
            "config": config,
        });
        let digest = Sha256::digest(canonical.to_string().as_bytes());
        let input_digest = digest.iter().map(|b| format!("{b:02x}")).collect();
        RunManifest {
            command,
            version,
            timestamp: timestamp(),
            input_digest,
            config,
        }
    }
}

fn timestamp() -> u64 {
    if let Some(pinned) = std::env::var(SOURCE_DATE_EPOCH)
        .ok()
        .and_then(|v| v.trim().parse().ok())
    {
        return pinned;
    }
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// `{"manifest": ..., "payload": ...}`, pretty-printed with a trailing newline.
pub fn json_document<T: Serialize>(
    manifest: &RunManifest,
    payload: &T,
) -> serde_json::Result<String> {
    #[derive(Serialize)]
    struct Document<'a, T> {
        manifest: &'a RunManifest,
        payload: &'a T,
    }
    let mut text = serde_json::to_string_pretty(&Document { manifest, payload })?;
    text.push('\n');
    Ok(text)
}

/// CSV with the manifest as a leading `#` comment line.
pub fn csv_document(
    manifest: &RunManifest,
    header: &str,
    rows: &[String],
) -> serde_json::Result<String> {
    let mut text = format!(
        "# manifest: {}\n{header}\n",
        serde_json::to_string(manifest)?
    );
    for row in rows {
        text.push_str(row);
        text.push('\n');
    }
    Ok(text)
}
