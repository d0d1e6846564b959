//! Report bundle output: summary.json, CSV tables, and a manifest tying
//! every number to its configuration and seed.

use serde::Serialize;
use std::path::Path;
use std::path::PathBuf;

pub struct ReportWriter {
    out_dir: PathBuf,
}

impl ReportWriter {
    pub fn new(out_dir: &Path) -> Result<Self, String> {
        std::fs::create_dir_all(out_dir)
            .map_err(|e| format!("cannot create {}: {e}", out_dir.display()))?;
        Ok(Self {
            out_dir: out_dir.to_path_buf(),
        })
    }


    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<(), String> {
        let path = self.out_dir.join(name);
        let text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
        std::fs::write(&path, text + "\n").map_err(|e| format!("write {}: {e}", path.display()))
    }

    pub fn write_text(&self, name: &str, text: &str) -> Result<(), String> {
        let path = self.out_dir.join(name);
        std::fs::write(&path, text).map_err(|e| format!("write {}: {e}", path.display()))
    }

    /// manifest.json: config echo, seed, command, version, timestamp. The
    /// timestamp is the single field exempt from byte-for-byte determinism.
    pub fn write_manifest<C: Serialize>(
        &self,
        command: &str,
        config: &C,
        seed: u64,
    ) -> Result<(), String> {
        #[derive(Serialize)]
        struct Manifest<'a, C> {
            command: &'a str,
            version: &'a str,
            seed: u64,
            config: &'a C,
            timestamp_unix_s: u64,
        }
        let timestamp_unix_s = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        self.write_json(
            "manifest.json",
            &Manifest {
                command,
                version: env!("CARGO_PKG_VERSION"),
                seed,
                config,
                timestamp_unix_s,
            },
        )
    }
}
