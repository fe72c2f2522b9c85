//! `key=value` config files.
//!
//! Each key is a long flag name of the subcommand being run (without the
//! leading dashes). Values `true`/`false` toggle switches. Entries are turned
//! into flags placed before the command-line ones, so the command line wins.

use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("config line {line}: {message}")]
    Syntax { line: usize, message: String },
}

pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(ConfigError::Syntax {
                line: i + 1,
                message: format!("expected key=value, got {line:?}"),
            });
        };
        let k = k.trim();
        if k.is_empty() || !k.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_') {
            return Err(ConfigError::Syntax {
                line: i + 1,
                message: format!("bad key {k:?}"),
            });
        }
        if k == "config" {
            return Err(ConfigError::Syntax {
                line: i + 1,
                message: "config files cannot include other config files".into(),
            });
        }
        out.insert(k.replace('_', "-"), v.trim().to_string());
    }
    Ok(out)
}

/// Flags for the config entries, switches expanded.
pub fn config_args(entries: &BTreeMap<String, String>) -> Vec<String> {
    let mut args = Vec::new();
    for (k, v) in entries {
        match v.as_str() {
            "true" => args.push(format!("--{k}")),
            "false" => {}
            _ => {
                args.push(format!("--{k}"));
                args.push(v.clone());
            }
        }
    }
    args
}

/// Pulls `--config FILE` (or `--config=FILE`) out of `argv`, returning the
/// remaining arguments and the path.
pub fn take_config_flag(argv: Vec<String>) -> (Vec<String>, Option<String>) {
    let mut rest = Vec::with_capacity(argv.len());
    let mut path = None;
    let mut it = argv.into_iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            path = it.next();
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        } else {
            rest.push(a);
        }
    }
    (rest, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_expands() {
        let c = parse_config("# comment\nn_max = 7\nrandom-codewords=true\nquiet=false\n").unwrap();
        assert_eq!(config_args(&c), vec!["--n-max", "7", "--random-codewords"]);
        assert!(parse_config("junk").is_err());
        assert!(parse_config("config=x").is_err());
    }

    #[test]
    fn config_flag_extraction() {
        let argv = ["tbflab", "profile", "--config", "a.cfg", "--n-max", "5"].map(String::from).to_vec();
        let (rest, p) = take_config_flag(argv);
        assert_eq!(p.as_deref(), Some("a.cfg"));
        assert_eq!(rest, vec!["tbflab", "profile", "--n-max", "5"]);
    }
}
