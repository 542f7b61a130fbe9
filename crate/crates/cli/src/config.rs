//! Flat `key = value` config files spliced into the argument list.

use std::ffi::OsString;
use std::path::Path;

use crate::error::{CliError, Result};

/// Parses `key = value` lines; `#` starts a comment, blank lines are skipped.
pub fn parse(text: &str) -> Result<Vec<(String, String)>> {
    let mut out: Vec<(String, String)> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Validation(format!("config line {}: expected key = value", n + 1)))?;
        let key = k.trim().replace('_', "-");
        if key.is_empty() || key.starts_with('-') {
            return Err(CliError::Validation(format!("config line {}: bad key {:?}", n + 1, k.trim())));
        }
        if out.iter().any(|(o, _)| *o == key) {
            return Err(CliError::Validation(format!("config line {}: duplicate key {key}", n + 1)));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

/// Removes `--config FILE` from `args` and inserts the file's entries as
/// flags right after the subcommand, so flags given on the command line
/// (which come later) take precedence.
pub fn expand(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let mut rest = Vec::with_capacity(args.len());
    let mut file = None;
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy().into_owned();
        if s == "--config" {
            let v = it.next().ok_or_else(|| CliError::Usage("--config needs a file".into()))?;
            file = Some(v);
        } else if let Some(v) = s.strip_prefix("--config=") {
            file = Some(OsString::from(v));
        } else {
            rest.push(a);
        }
    }
    let Some(file) = file else { return Ok(rest) };
    let text = std::fs::read_to_string(Path::new(&file))
        .map_err(|e| CliError::Io(format!("{}: {e}", Path::new(&file).display())))?;
    let entries = parse(&text)?;
    let Some(sub) = rest.iter().skip(1).position(|a| !a.to_string_lossy().starts_with('-')) else {
        return Ok(rest);
    };
    let mut flags = Vec::new();
    for (k, v) in entries {
        match v.as_str() {
            "true" => flags.push(OsString::from(format!("--{k}"))),
            "false" => {}
            _ => {
                flags.push(OsString::from(format!("--{k}")));
                flags.push(OsString::from(v));
            }
        }
    }
    let at = sub + 2;
    rest.splice(at..at, flags);
    Ok(rest)
}
