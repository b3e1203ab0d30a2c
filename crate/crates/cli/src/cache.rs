//! On-disk cache of character tables, enabled by `HCIZ_CACHE_DIR`.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use hciz_core::characters::{character_table, install_table, is_cached, CharacterTable, CharacterTableData};

pub const CACHE_ENV: &str = "HCIZ_CACHE_DIR";

pub fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).map(PathBuf::from)
}

fn table_path(dir: &Path, d: u32) -> PathBuf {
    dir.join(format!("character_table_{d}.json"))
}

/// Loads tables for `1..=d_max` from `dir`, computing and writing any that
/// are missing. Corrupt files are rebuilt.
pub fn warm(dir: &Path, d_max: u32) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for d in 1..=d_max {
        let path = table_path(dir, d);
        if let Ok(text) = std::fs::read_to_string(&path) {
            if let Ok(data) = serde_json::from_str::<CharacterTableData>(&text) {
                if let Ok(table) = CharacterTable::from_data(data) {
                    if !is_cached(d) {
                        install_table(table);
                    }
                    continue;
                }
            }
        }
        let table = character_table(d);
        let json = serde_json::to_string(&table.to_data())?;
        std::fs::write(&path, json).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

/// Warms from the environment-configured directory, if any.
pub fn warm_from_env(d_max: u32) -> Result<()> {
    match cache_dir() {
        Some(dir) => warm(&dir, d_max),
        None => Ok(()),
    }
}
