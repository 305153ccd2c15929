//! `key=value` config files merged into argv ahead of explicit flags.

use std::ffi::OsString;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context};

/// Options that take no value; `true` adds the flag, `false` drops it.
const SWITCHES: &[&str] = &["knn-auto"];

pub fn parse_config(text: &str) -> anyhow::Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("config line {}: expected key=value, got {raw:?}", n + 1);
        };
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        pairs.push((key, value.trim().to_string()));
    }
    Ok(pairs)
}

fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(p.into());
        }
    }
    None
}

fn given(args: &[OsString], key: &str) -> bool {
    let flag = format!("--{key}");
    let prefixed = format!("--{key}=");
    args.iter().any(|a| {
        let s = a.to_string_lossy();
        s == flag || s.starts_with(&prefixed)
    })
}

/// Inserts config entries right after the subcommand so that flags on the
/// command line, which come later, take precedence.
pub fn merge_config(args: Vec<OsString>, subcommands: &[&str]) -> anyhow::Result<Vec<OsString>> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let path = Path::new(&path);
    let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let pairs = parse_config(&text)?;
    let Some(at) = args
        .iter()
        .position(|a| subcommands.contains(&a.to_string_lossy().as_ref()))
    else {
        return Ok(args);
    };
    let mut extra: Vec<OsString> = Vec::new();
    for (key, value) in pairs {
        if given(&args, &key) {
            continue;
        }
        if SWITCHES.contains(&key.as_str()) {
            match value.as_str() {
                "true" | "on" | "yes" | "1" => extra.push(format!("--{key}").into()),
                "false" | "off" | "no" | "0" => {}
                other => bail!("config key {key}: expected true or false, got {other:?}"),
            }
        } else {
            extra.push(format!("--{key}").into());
            extra.push(value.into());
        }
    }
    let mut out = args;
    out.splice(at + 1..at + 1, extra);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn comments_and_underscores() {
        let pairs = parse_config("# runs\nruns = 5\n\ntrain_idioms=3\n").unwrap();
        assert_eq!(
            pairs,
            vec![("runs".into(), "5".into()), ("train-idioms".into(), "3".into())]
        );
        assert!(parse_config("runs 5").is_err());
    }

    #[test]
    fn flags_win_over_file() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("run.conf");
        fs::write(&cfg, "runs=5\nseed=3\nknn-auto=true\ncorpus=a.jsonl\n").unwrap();
        let cfg = cfg.to_str().unwrap();
        let args = os(&["topspace", "--config", cfg, "evaluate", "--seed", "9"]);
        let merged = merge_config(args, &["evaluate"]).unwrap();
        let expect = os(&[
            "topspace",
            "--config",
            cfg,
            "evaluate",
            "--runs",
            "5",
            "--knn-auto",
            "--corpus",
            "a.jsonl",
            "--seed",
            "9",
        ]);
        assert_eq!(merged, expect);
    }

    #[test]
    fn without_config_args_are_untouched() {
        let args = os(&["topspace", "evaluate", "--runs", "2"]);
        assert_eq!(merge_config(args.clone(), &["evaluate"]).unwrap(), args);
    }
}
