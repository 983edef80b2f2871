#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hybridlink_core::annotation::to_jsonl;
use hybridlink_core::corpus::write_corpus;
use hybridlink_core::synthetic::{end_to_end_fixture, Fixture, GeneralistDials};
use tempfile::TempDir;

/// Synthetic corpus, KB, portfolio map and mock configuration on disk.
pub struct Workspace {
    pub dir: TempDir,
    pub fixture: Fixture,
}

impl Workspace {
    pub fn new(debates: usize, seed: u64) -> Workspace {
        let dir = tempfile::tempdir().unwrap();
        let fixture = end_to_end_fixture(debates, seed);
        fs::write(dir.path().join("corpus.jsonl"), write_corpus(&fixture.corpus)).unwrap();
        fs::write(dir.path().join("kb.jsonl"), to_jsonl(&fixture.world.kb_records())).unwrap();
        fs::write(dir.path().join("portfolios.tsv"), fixture.world.portfolio_map_tsv()).unwrap();
        let mock = fixture.world.mock_config(&GeneralistDials::weak_on_persons(), 7);
        fs::write(
            dir.path().join("mock.json"),
            serde_json::to_string_pretty(&mock).unwrap(),
        )
        .unwrap();
        Workspace { dir, fixture }
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    pub fn arg(&self, name: &str) -> String {
        self.path(name).display().to_string()
    }
}

pub fn hybridlink(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hybridlink"))
        .args(args)
        .output()
        .unwrap()
}

/// Runs the binary and fails the test with its stderr when it exits nonzero.
pub fn ok(args: &[&str]) -> String {
    let out = hybridlink(args);
    assert!(
        out.status.success(),
        "hybridlink {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

pub fn read(path: &Path) -> String {
    fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}
