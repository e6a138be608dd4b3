//! Reading JSON arguments: inline text, a file path, or `-` for stdin.

use std::io::Read;

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;

pub fn read_text(arg: &str) -> Result<String> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(arg.to_string());
    }
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        return Ok(s);
    }
    std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"))
}

pub fn parse<T: DeserializeOwned>(arg: &str, what: &str) -> Result<T> {
    let text = read_text(arg)?;
    serde_json::from_str(&text).with_context(|| format!("malformed {what} JSON"))
}
