//! File emission: atomic writes and shared formatting.

use std::fs;
use std::path::{Path, PathBuf};

use crate::CliError;

/// Write through a temporary sibling and rename, so readers never observe
/// a half-written file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| {
                CliError::config(format!("cannot create output dir {}: {e}", dir.display()))
            })?;
        }
    }
    let mut tmp: PathBuf = path.to_path_buf();
    let file_name = path
        .file_name()
        .ok_or_else(|| CliError::config(format!("bad output path {}", path.display())))?
        .to_string_lossy()
        .into_owned();
    tmp.set_file_name(format!("{file_name}.tmp-{}", std::process::id()));
    fs::write(&tmp, contents)
        .map_err(|e| CliError::io(format!("cannot write {}: {e}", tmp.display())))?;
    fs::rename(&tmp, path)
        .map_err(|e| CliError::io(format!("cannot move {} into place: {e}", tmp.display())))?;
    Ok(())
}

/// 17-significant-digit float formatting shared by all CSV emitters.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Verbosity gate driven by the FIELDLINE_LOG environment variable.
pub fn log_enabled() -> bool {
    matches!(
        std::env::var("FIELDLINE_LOG").as_deref(),
        Ok("debug") | Ok("info")
    )
}

macro_rules! logln {
    ($($arg:tt)*) => {
        if $crate::output::log_enabled() {
            eprintln!($($arg)*);
        }
    };
}

pub(crate) use logln;
