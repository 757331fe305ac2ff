//! Atomic artifact writing.
//!
//! Every file a command produces is first written to a temporary file in
//! the destination directory and then renamed into place, so an
//! interrupted or failed run never leaves a truncated artifact. Commands
//! additionally compute all their outputs before writing any of them.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use crate::failure::{CmdResult, Failure};

/// One pending artifact: destination path plus fully rendered bytes.
pub struct Artifact {
    pub path: PathBuf,
    pub bytes: Vec<u8>,
}

impl Artifact {
    pub fn new(path: impl Into<PathBuf>, bytes: impl Into<Vec<u8>>) -> Artifact {
        Artifact {
            path: path.into(),
            bytes: bytes.into(),
        }
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> CmdResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir)
        .map_err(|e| Failure::Data(format!("cannot create {}: {e}", dir.display())))?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)
        .map_err(|e| Failure::Data(format!("cannot create temporary file in {}: {e}", dir.display())))?;
    tmp.write_all(bytes)
        .map_err(|e| Failure::Data(format!("cannot write {}: {e}", path.display())))?;
    tmp.persist(path)
        .map_err(|e| Failure::Data(format!("cannot finalize {}: {e}", path.display())))?;
    Ok(())
}

/// Writes every artifact atomically and reports each path on stderr.
/// Called once per command, after all computation has succeeded.
pub fn commit(artifacts: Vec<Artifact>) -> CmdResult<()> {
    for artifact in &artifacts {
        write_atomic(&artifact.path, &artifact.bytes)?;
    }
    for artifact in &artifacts {
        eprintln!("wrote {}", artifact.path.display());
    }
    Ok(())
}
