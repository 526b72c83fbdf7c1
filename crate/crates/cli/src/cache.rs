//! On-disk cache of modular data, one canonical JSON document per
//! `(series, rank, level)`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use wzw_core::affine::ModularDataDocument;
use wzw_core::{Config, ModularData, Result, SimpleLieType};

pub const CACHE_DIR_ENV: &str = "WZW_CACHE_DIR";

pub fn file_name(t: SimpleLieType, level: u32) -> String {
    format!("{}-{}-{}.json", t.series().letter(), t.rank(), level)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lookup {
    Hit,
    Miss,
    Corrupt,
    Disabled,
}

pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn new(config: &Config) -> Self {
        let dir = if config.no_cache { None } else { config.cache_dir.clone() };
        Self { dir }
    }

    pub fn path(&self, t: SimpleLieType, level: u32) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(file_name(t, level)))
    }

    fn lookup(&self, path: &Path, config: &Config) -> (Lookup, Option<ModularData>) {
        let bytes = match fs::read(path) {
            Ok(b) => b,
            Err(_) => return (Lookup::Miss, None),
        };
        let parsed = serde_json::from_slice::<ModularDataDocument>(&bytes)
            .map_err(|e| e.to_string())
            .and_then(|doc| ModularData::from_document(&doc, config).map_err(|e| e.to_string()));
        match parsed {
            Ok(md) => (Lookup::Hit, Some(md)),
            Err(e) => {
                eprintln!("warning: cache file {} is corrupt ({e}); recomputing", path.display());
                (Lookup::Corrupt, None)
            }
        }
    }

    /// Writes through a temporary file and renames it into place.
    pub fn store(&self, path: &Path, md: &ModularData) -> std::io::Result<()> {
        let bytes = serde_json::to_vec(&md.to_document()).map_err(std::io::Error::other)?;
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        let tmp = path.with_extension(format!("json.tmp{}", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(&bytes)?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)
    }

    pub fn modular_data(&self, t: SimpleLieType, level: u32, config: &Config) -> Result<(ModularData, Lookup)> {
        let Some(path) = self.path(t, level) else {
            return Ok((ModularData::build(t, level, config)?, Lookup::Disabled));
        };
        let (status, hit) = self.lookup(&path, config);
        if let Some(md) = hit {
            return Ok((md, status));
        }
        let md = ModularData::build(t, level, config)?;
        if let Err(e) = self.store(&path, &md) {
            eprintln!("warning: could not write cache file {}: {e}", path.display());
        }
        Ok((md, status))
    }
}
