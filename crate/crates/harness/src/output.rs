//! Per-invocation output directories and config loading.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{HarnessError, Result};

/// Parse a JSON config, returning the typed value and its canonical form
/// (object keys sorted) for hashing.
pub fn load_config<T: DeserializeOwned>(path: &Path) -> Result<(T, Value)> {
    let text = fs::read_to_string(path).map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
    let typed = serde_json::from_value(value.clone())
        .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
    Ok((typed, value))
}

/// First 16 hex digits of the SHA-256 of the command and canonical config.
pub fn config_hash(command: &str, canonical: &Value) -> String {
    let mut h = Sha256::new();
    h.update(command.as_bytes());
    h.update([0]);
    h.update(canonical.to_string().as_bytes());
    hex::encode(h.finalize())[..16].to_string()
}

/// Creates `<base>/<command>-<hash>`, or `<...>-<hash>-<n>` with the
/// smallest free `n` if that exists.
pub fn invocation_dir(base: &Path, command: &str, hash: &str) -> Result<PathBuf> {
    fs::create_dir_all(base).map_err(HarnessError::io(base))?;
    let stem = format!("{command}-{hash}");
    let mut dir = base.join(&stem);
    let mut n = 0;
    loop {
        match fs::create_dir(&dir) {
            Ok(()) => return Ok(dir),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                n += 1;
                dir = base.join(format!("{stem}-{n}"));
            }
            Err(e) => return Err(HarnessError::Io { path: dir, source: e }),
        }
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| HarnessError::Io {
        path: path.to_path_buf(),
        source: std::io::Error::other(e),
    })?;
    text.push('\n');
    fs::write(path, text).map_err(HarnessError::io(path))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(HarnessError::io(path))
}
