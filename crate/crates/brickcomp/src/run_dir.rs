use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};

/// Output directory of one run, `<base>/<subcommand>-<seed>`.
#[derive(Debug, Clone)]
pub struct RunDir {
    path: PathBuf,
}

impl RunDir {
    /// Creates the directory. An existing one is an error unless `force`
    /// is set, in which case it is emptied first.
    pub fn create(base: &Path, name: &str, force: bool) -> anyhow::Result<Self> {
        let path = base.join(name);
        if path.exists() {
            if !force {
                bail!("{} already exists; pass --force to overwrite", path.display());
            }
            fs::remove_dir_all(&path).with_context(|| format!("clearing {}", path.display()))?;
        }
        fs::create_dir_all(&path).with_context(|| format!("creating {}", path.display()))?;
        Ok(Self { path })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn write(&self, rel: impl AsRef<Path>, bytes: impl AsRef<[u8]>) -> anyhow::Result<()> {
        let target = self.path.join(rel);
        if let Some(parent) = target.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(&target, bytes).with_context(|| format!("writing {}", target.display()))
    }
}
