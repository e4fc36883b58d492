use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;
use tcss_core::encoding::canonical_json;
use tcss_core::tcss::{ParamsFile, SchemeParams};

use crate::Failure;

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_slice(&bytes)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())).into())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, canonical_json(value)).with_context(|| format!("writing {}", path.display()))
}

pub fn read_params(path: &Path) -> Result<SchemeParams> {
    let file: ParamsFile = read_json(path)?;
    Ok(SchemeParams::from_file(&file)?)
}

/// Seeded when asked, otherwise from the operating system.
pub fn rng(seed: Option<u64>) -> ChaCha20Rng {
    match seed {
        Some(s) => ChaCha20Rng::seed_from_u64(s),
        None => ChaCha20Rng::from_entropy(),
    }
}

pub fn share_path(dir: &Path, index: usize) -> std::path::PathBuf {
    dir.join(format!("share-{index}.json"))
}

pub fn commitment_path(dir: &Path) -> std::path::PathBuf {
    dir.join("commitment.json")
}
