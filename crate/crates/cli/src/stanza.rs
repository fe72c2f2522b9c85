//! The reproducibility header written at the top of every output.

use sha2::{Digest, Sha256};

/// Resolved parameters of one run. Only settings that can change the output
/// belong here; the worker count and output paths do not.
#[derive(Debug, Clone, Default)]
pub struct Stanza {
    command: String,
    entries: Vec<(String, String)>,
    seed: Option<u64>,
}

impl Stanza {
    pub fn new(command: &str) -> Self {
        Stanza {
            command: command.to_string(),
            ..Default::default()
        }
    }

    pub fn set(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.entries.push((key.to_string(), value.to_string()));
        self
    }

    pub fn seed(&mut self, seed: u64) -> &mut Self {
        self.seed = Some(seed);
        self.set("seed", seed)
    }

    /// Records an input file by content hash, so renaming does not matter.
    pub fn input(&mut self, key: &str, content: &str) -> &mut Self {
        let h = Sha256::digest(content.as_bytes());
        self.set(key, format!("sha256:{}", hex::encode(&h[..16])))
    }

    pub fn config_hash(&self) -> String {
        let mut entries = self.entries.clone();
        entries.sort();
        let mut h = Sha256::new();
        h.update(self.command.as_bytes());
        for (k, v) in &entries {
            h.update(b"\n");
            h.update(k.as_bytes());
            h.update(b"=");
            h.update(v.as_bytes());
        }
        hex::encode(&h.finalize()[..16])
    }

    /// `# `-prefixed lines.
    pub fn render(&self) -> String {
        let mut s = format!("# tbflab {}\n# command {}\n# config-hash {}\n", env!("CARGO_PKG_VERSION"), self.command, self.config_hash());
        if let Some(seed) = self.seed {
            s.push_str(&format!("# seed {seed}\n"));
        }
        let mut entries = self.entries.clone();
        entries.sort();
        for (k, v) in entries {
            if k != "seed" {
                s.push_str(&format!("# {k} {v}\n"));
            }
        }
        s
    }
}
