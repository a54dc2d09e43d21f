use std::ffi::OsString;
use std::path::Path;

use anyhow::Context;

use crate::error::CliError;

const SUBCOMMANDS: [&str; 6] = ["kernel", "regularize", "solve", "converge", "table1", "table2"];

/// Parses `key = value` lines into flag tokens. `true` turns a key into a
/// bare flag and `false` drops it; blank lines and `#` comments are skipped.
pub fn config_tokens(text: &str) -> Result<Vec<String>, CliError> {
    let mut tokens = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", lineno + 1)))?;
        let key = key.trim().trim_start_matches("--");
        let value = value.trim();
        if key.is_empty() {
            return Err(CliError::Usage(format!("config line {}: empty key", lineno + 1)));
        }
        if key == "config" {
            return Err(CliError::Usage("config files cannot include other config files".into()));
        }
        match value {
            "true" => tokens.push(format!("--{key}")),
            "false" => {}
            _ => {
                tokens.push(format!("--{key}"));
                tokens.push(value.to_string());
            }
        }
    }
    Ok(tokens)
}

fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut iter = args.iter();
    while let Some(arg) = iter.next() {
        let s = arg.to_string_lossy();
        if s == "--" {
            return None;
        }
        if s == "--config" {
            return iter.next().cloned();
        }
        if let Some(path) = s.strip_prefix("--config=") {
            return Some(path.into());
        }
    }
    None
}

/// Splices the flags of a `--config` file in right after the subcommand so
/// that flags given on the command line, which come later, take precedence.
pub fn expand_config(args: Vec<OsString>) -> anyhow::Result<Vec<OsString>> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let path = Path::new(&path);
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config file {}: {e}", path.display())))
        .context("loading --config")?;
    let tokens = config_tokens(&text)?;
    let Some(pos) = args.iter().position(|a| SUBCOMMANDS.contains(&a.to_string_lossy().as_ref())) else {
        return Ok(args);
    };
    let mut out = args[..=pos].to_vec();
    out.extend(tokens.into_iter().map(OsString::from));
    out.extend_from_slice(&args[pos + 1..]);
    Ok(out)
}
