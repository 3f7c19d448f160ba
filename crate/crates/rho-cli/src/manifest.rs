//! Run manifests: every output embeds a hash of the inputs that determine
//! the numbers, so results can be traced back to the run that made them.

use serde::Serialize;
use sha2::{Digest, Sha256};

use rho_core::EngineConfig;

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    /// Semantic description of the command (subcommand and the arguments
    /// that affect the result). Execution details like thread counts are
    /// deliberately excluded: they must not change any output byte.
    pub command: serde_json::Value,
    pub spec_path: String,
    pub spec_sha256: String,
    /// Effective engine configuration after file and flag overrides.
    pub config: EngineConfig,
    pub seed: u64,
    pub tool_version: String,
    /// Wall-clock seconds since the Unix epoch. Not part of the hash.
    pub timestamp_unix: u64,
}

impl RunManifest {
    pub fn new(
        command: serde_json::Value,
        spec_path: &str,
        spec_bytes: &[u8],
        config: &EngineConfig,
        seed: u64,
    ) -> Self {
        RunManifest {
            command,
            spec_path: spec_path.to_string(),
            spec_sha256: hex_digest(spec_bytes),
            config: config.clone(),
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp_unix: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }

    /// Hash of everything that determines the output bytes: command,
    /// spec content, effective config, seed, and tool version.
    pub fn hash(&self) -> String {
        #[derive(Serialize)]
        struct Hashed<'a> {
            command: &'a serde_json::Value,
            spec_sha256: &'a str,
            config: &'a EngineConfig,
            seed: u64,
            tool_version: &'a str,
        }
        let canon = serde_json::to_vec(&Hashed {
            command: &self.command,
            spec_sha256: &self.spec_sha256,
            config: &self.config,
            seed: self.seed,
            tool_version: &self.tool_version,
        })
        .expect("manifest serialization cannot fail");
        hex_digest(&canon)
    }
}

pub fn hex_digest(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let out = hasher.finalize();
    let mut s = String::with_capacity(64);
    for b in out {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_ignores_timestamp() {
        let cfg = EngineConfig::default();
        let mut m1 = RunManifest::new(serde_json::json!({"cmd": "eval"}), "s.json", b"{}", &cfg, 0);
        let mut m2 = m1.clone();
        m1.timestamp_unix = 1;
        m2.timestamp_unix = 2;
        assert_eq!(m1.hash(), m2.hash());
    }

    #[test]
    fn hash_tracks_inputs() {
        let cfg = EngineConfig::default();
        let m1 = RunManifest::new(serde_json::json!({"cmd": "eval"}), "s.json", b"{}", &cfg, 0);
        let m2 = RunManifest::new(serde_json::json!({"cmd": "eval"}), "s.json", b"{x}", &cfg, 0);
        let m3 = RunManifest::new(serde_json::json!({"cmd": "eval"}), "s.json", b"{}", &cfg, 1);
        assert_ne!(m1.hash(), m2.hash());
        assert_ne!(m1.hash(), m3.hash());
    }
}
