// SPDX-License-Identifier: MIT OR Apache-2.0

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn seglens(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seglens"))
        .args(args)
        .env_remove("SEGLENS_THREADS")
        .output()
        .expect("spawn seglens")
}

pub fn ok(args: &[&str]) -> Output {
    let out = seglens(args);
    assert!(
        out.status.success(),
        "seglens {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

pub fn path(p: &Path) -> &str {
    p.to_str().expect("utf-8 temp path")
}

/// Runs `synth` into `dir` and returns the directory.
pub fn synth(dir: &Path, seed: u64, frames: usize, dims: usize, runs: usize, shift: f64) -> PathBuf {
    ok(&[
        "synth",
        "--output",
        path(dir),
        "--seed",
        &seed.to_string(),
        "--frames",
        &frames.to_string(),
        "--dims",
        &dims.to_string(),
        "--runs",
        &runs.to_string(),
        "--shift",
        &shift.to_string(),
    ]);
    dir.to_owned()
}

pub fn json(p: &Path) -> serde_json::Value {
    let text = std::fs::read_to_string(p).expect("read json");
    serde_json::from_str(&text).expect("parse json")
}

pub fn usizes(v: &serde_json::Value) -> Vec<usize> {
    v.as_array()
        .expect("array")
        .iter()
        .map(|x| x.as_u64().expect("integer") as usize)
        .collect()
}

pub fn seglens_with_env(args: &[&str], vars: &[(&str, &str)]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seglens"))
        .args(args)
        .envs(vars.iter().copied())
        .output()
        .expect("spawn seglens")
}
