//! `manifest.json`: enough to re-run a command identically.

use std::io::Read;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct FileHash {
    pub path: PathBuf,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    /// Arguments after the program name.
    pub argv: Vec<String>,
    /// Fully resolved configuration.
    pub config: serde_json::Value,
    pub seed: Option<u64>,
    /// RNG stream of each chain.
    pub chain_streams: Vec<u64>,
    pub inputs: Vec<FileHash>,
    /// Files written next to this manifest.
    pub outputs: Vec<String>,
}

pub fn sha256_file(path: &Path) -> anyhow::Result<String> {
    let mut f = std::fs::File::open(path).with_context(|| format!("hashing {}", path.display()))?;
    let mut h = Sha256::new();
    let mut buf = vec![0u8; 1 << 16];
    loop {
        let n = f.read(&mut buf)?;
        if n == 0 {
            break;
        }
        h.update(&buf[..n]);
    }
    Ok(hex::encode(h.finalize()))
}

impl Manifest {
    pub fn new(command: &str, argv: Vec<String>, config: impl Serialize) -> anyhow::Result<Self> {
        Ok(Manifest {
            tool: "xg",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            argv,
            config: serde_json::to_value(config)?,
            seed: None,
            chain_streams: Vec::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
        })
    }

    pub fn input(&mut self, path: &Path) -> anyhow::Result<()> {
        let sha256 = sha256_file(path)?;
        self.inputs.push(FileHash {
            path: path.to_path_buf(),
            sha256,
        });
        Ok(())
    }

    pub fn output(&mut self, name: &str) {
        if !self.outputs.iter().any(|o| o == name) {
            self.outputs.push(name.to_string());
        }
    }

    pub fn seeds(&mut self, seed: u64, chains: usize) {
        self.seed = Some(seed);
        self.chain_streams = (1..=chains as u64).collect();
    }

    pub fn write(&self, dir: &Path) -> anyhow::Result<()> {
        let path = dir.join("manifest.json");
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))
    }
}
