//! Atomic file and directory output: content is staged in a temporary
//! sibling and moved into place only once fully written.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use tempfile::{Builder, NamedTempFile};

use crate::error::{Error, Result};

fn parent_dir(path: &Path) -> &Path {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    }
}

/// Calls `write` with a buffered temp file next to `path`, then renames it over
/// `path`. On error nothing is left behind.
pub fn write_atomic<F>(path: &Path, write: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    let tmp = NamedTempFile::new_in(parent_dir(path)).map_err(|e| Error::file(path, e))?;
    {
        let mut w = BufWriter::new(tmp.as_file());
        write(&mut w)?;
        w.flush()?;
    }
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::file(path, e.error))?;
    Ok(())
}

/// Fills a fresh temp directory next to `dir` and renames it to `dir`.
///
/// An existing `dir` must be empty unless `overwrite` is set, in which case it
/// is replaced.
pub fn write_dir_atomic<F>(dir: &Path, overwrite: bool, fill: F) -> Result<()>
where
    F: FnOnce(&Path) -> Result<()>,
{
    if dir.exists() {
        let empty = fs::read_dir(dir)
            .map_err(|e| Error::file(dir, e))?
            .next()
            .is_none();
        if !empty && !overwrite {
            return Err(Error::InvalidArgument(format!(
                "output directory {} is not empty (pass --overwrite to replace it)",
                dir.display()
            )));
        }
    }
    let parent = parent_dir(dir);
    fs::create_dir_all(parent).map_err(|e| Error::file(parent, e))?;
    let staging = Builder::new()
        .prefix(".kgdim-")
        .tempdir_in(parent)
        .map_err(|e| Error::file(parent, e))?;
    fill(staging.path())?;
    if dir.exists() {
        fs::remove_dir_all(dir).map_err(|e| Error::file(dir, e))?;
    }
    let staged = staging.keep();
    fs::rename(&staged, dir).map_err(|e| Error::file(dir, e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failed_write_leaves_no_file() {
        let dir = tempfile::tempdir().unwrap();
        let target = dir.path().join("out.txt");
        let r = write_atomic(&target, |w| {
            w.write_all(b"partial")?;
            Err(Error::InvalidArgument("boom".into()))
        });
        assert!(r.is_err());
        assert!(!target.exists());
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
    }

    #[test]
    fn successful_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let target = dir.path().join("out.txt");
        fs::write(&target, "old").unwrap();
        write_atomic(&target, |w| Ok(w.write_all(b"new")?)).unwrap();
        assert_eq!(fs::read_to_string(&target).unwrap(), "new");
    }

    #[test]
    fn directory_staging() {
        let root = tempfile::tempdir().unwrap();
        let out = root.path().join("qa");
        write_dir_atomic(&out, false, |d| Ok(fs::write(d.join("a"), "1")?)).unwrap();
        assert_eq!(fs::read_to_string(out.join("a")).unwrap(), "1");

        assert!(write_dir_atomic(&out, false, |_| Ok(())).is_err());

        let r = write_dir_atomic(&out, true, |d| {
            fs::write(d.join("b"), "2")?;
            Err(Error::InvalidArgument("fail".into()))
        });
        assert!(r.is_err());
        assert!(out.join("a").exists(), "failed run must not touch the old output");
        assert_eq!(fs::read_dir(root.path()).unwrap().count(), 1);
    }
}
