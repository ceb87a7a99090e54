#![allow(dead_code)]

use std::path::{Path, PathBuf};

use tubewave_cli::{Overrides, RunConfig};

pub const CORPUS: [&str; 7] = [
    "homogeneous",
    "bump-g1",
    "bump-g2",
    "rational-both",
    "newtonian",
    "maxwell",
    "oldroyd",
];

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn config_path(name: &str) -> PathBuf {
    crate_dir().join("regression").join(format!("{name}.toml"))
}

pub fn golden_dir(name: &str) -> PathBuf {
    crate_dir().join("tests/golden").join(name)
}

/// Loads a corpus config with its output redirected to `out`.
pub fn load(name: &str, out: &Path) -> RunConfig {
    let mut cfg = RunConfig::load(&config_path(name)).unwrap();
    cfg.apply(&Overrides {
        out: Some(out.to_path_buf()),
        ..Overrides::default()
    });
    cfg
}
