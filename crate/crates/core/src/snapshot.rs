//! Timestamped copies of domain files.

use std::fs::{self, OpenOptions};
use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};

#[derive(Debug, thiserror::Error)]
#[error("snapshot failed: {context}: {source}")]
pub struct IoFailure {
    pub context: String,
    #[source]
    pub source: std::io::Error,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    pub source_path: PathBuf,
    pub copy_path: PathBuf,
    pub created_at: DateTime<Utc>,
}

/// Copy `path` to `snapshot_dir/<stem>-<YYYYMMDDThhmmss>.pddl`, adding `-1`,
/// `-2`, … when that name is taken. Existing files are never overwritten and
/// the source is only read.
pub fn snapshot(path: &Path, snapshot_dir: &Path) -> Result<Snapshot, IoFailure> {
    let io = |context: String| move |source| IoFailure { context, source };
    let bytes = fs::read(path).map_err(io(format!("reading {}", path.display())))?;
    fs::create_dir_all(snapshot_dir).map_err(io(format!("creating {}", snapshot_dir.display())))?;

    let created_at = Utc::now();
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "snapshot".to_string());
    let base = format!("{stem}-{}", created_at.format("%Y%m%dT%H%M%S"));
    for n in 0u32.. {
        let name = if n == 0 { format!("{base}.pddl") } else { format!("{base}-{n}.pddl") };
        let copy_path = snapshot_dir.join(name);
        match OpenOptions::new().write(true).create_new(true).open(&copy_path) {
            Ok(mut f) => {
                f.write_all(&bytes)
                    .and_then(|()| f.sync_all())
                    .map_err(io(format!("writing {}", copy_path.display())))?;
                return Ok(Snapshot { source_path: path.to_path_buf(), copy_path, created_at });
            }
            Err(e) if e.kind() == ErrorKind::AlreadyExists => continue,
            Err(e) => return Err(io(format!("creating {}", copy_path.display()))(e)),
        }
    }
    unreachable!("snapshot counter exhausted")
}
