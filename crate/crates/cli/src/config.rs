//! Run configuration: flags over ZSCREW_* environment variables over a
//! key=value file over defaults.

use crate::error::CliError;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Jsonl,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub zeros_path: PathBuf,
    pub zeros_limit: usize,
    pub prime_limit: u64,
    pub abs_tol: f64,
    pub t_cut: f64,
    pub output_format: Format,
    pub threads: usize,
    /// Binary cache for the full prime-power table; read if present,
    /// written after a fresh sieve.
    pub sieve_cache: Option<PathBuf>,
}

/// (config key, environment variable)
pub const KEYS: [(&str, &str); 8] = [
    ("zeros_path", "ZSCREW_ZEROS"),
    ("zeros_limit", "ZSCREW_ZEROS_LIMIT"),
    ("prime_limit", "ZSCREW_PRIME_LIMIT"),
    ("abs_tol", "ZSCREW_ABS_TOL"),
    ("t_cut", "ZSCREW_T_CUT"),
    ("output_format", "ZSCREW_FORMAT"),
    ("threads", "ZSCREW_THREADS"),
    ("sieve_cache", "ZSCREW_SIEVE_CACHE"),
];

fn default_zeros_path() -> PathBuf {
    let local = PathBuf::from("data/zeros.txt");
    if local.exists() {
        return local;
    }
    let bundled = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/zeros.txt");
    if bundled.exists() {
        bundled
    } else {
        local
    }
}

fn defaults() -> BTreeMap<&'static str, String> {
    let mut m = BTreeMap::new();
    m.insert("zeros_path", default_zeros_path().display().to_string());
    m.insert("zeros_limit", "100000".into());
    m.insert("prime_limit", (1u64 << 31).to_string());
    m.insert("abs_tol", "1e-15".into());
    m.insert("t_cut", "200".into());
    m.insert("output_format", "csv".into());
    m.insert("threads", "1".into());
    m
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_file(path: &Path) -> Result<Vec<(String, String)>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read config file {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::config(format!("{}:{}: expected key = value", path.display(), i + 1)));
        };
        let k = k.trim();
        if !KEYS.iter().any(|(key, _)| *key == k) {
            return Err(CliError::config(format!("{}:{}: unknown key {k:?}", path.display(), i + 1)));
        }
        out.push((k.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Layers the sources and validates the result. `flags` holds values given
/// on the command line, keyed like the config file.
pub fn resolve(
    flags: &[(&str, Option<String>)],
    config_file: Option<&Path>,
    env: impl Fn(&str) -> Option<String>,
) -> Result<RunConfig, CliError> {
    let mut m: BTreeMap<&str, String> = defaults();
    let file = match config_file {
        Some(p) => Some(p.to_path_buf()),
        None => env("ZSCREW_CONFIG").map(PathBuf::from),
    };
    if let Some(p) = file {
        for (k, v) in parse_config_file(&p)? {
            let key = KEYS.iter().find(|(key, _)| *key == k).unwrap().0;
            m.insert(key, v);
        }
    }
    for (key, var) in KEYS {
        if let Some(v) = env(var) {
            m.insert(key, v);
        }
    }
    for (key, v) in flags {
        if let Some(v) = v {
            let key = KEYS.iter().find(|(k, _)| k == key).expect("known flag key").0;
            m.insert(key, v.clone());
        }
    }
    build(&m)
}

fn parse<T: std::str::FromStr>(m: &BTreeMap<&str, String>, key: &str) -> Result<T, CliError> {
    let v = &m[key];
    v.parse().map_err(|_| CliError::config(format!("{key}: cannot parse {v:?}")))
}

fn build(m: &BTreeMap<&str, String>) -> Result<RunConfig, CliError> {
    let output_format = match m["output_format"].as_str() {
        "csv" => Format::Csv,
        "jsonl" => Format::Jsonl,
        other => return Err(CliError::config(format!("output_format: expected csv or jsonl, got {other:?}"))),
    };
    let cfg = RunConfig {
        zeros_path: PathBuf::from(&m["zeros_path"]),
        zeros_limit: parse(m, "zeros_limit")?,
        prime_limit: parse::<f64>(m, "prime_limit").and_then(|x| {
            if x.fract() == 0.0 && x >= 0.0 && x < 1.8e19 {
                Ok(x as u64)
            } else {
                Err(CliError::config(format!("prime_limit: {x} is not a whole number")))
            }
        })?,
        abs_tol: parse(m, "abs_tol")?,
        t_cut: parse(m, "t_cut")?,
        output_format,
        threads: parse(m, "threads")?,
        sieve_cache: m.get("sieve_cache").filter(|s| !s.is_empty()).map(PathBuf::from),
    };
    validate(&cfg)?;
    Ok(cfg)
}

pub fn validate(c: &RunConfig) -> Result<(), CliError> {
    if c.zeros_limit < 100 {
        return Err(CliError::config(format!("zeros_limit = {} below 100", c.zeros_limit)));
    }
    if c.prime_limit < 10_000 {
        return Err(CliError::config(format!("prime_limit = {} below 10000", c.prime_limit)));
    }
    if c.prime_limit > u32::MAX as u64 {
        return Err(CliError::config(format!("prime_limit = {} above 2^32 - 1", c.prime_limit)));
    }
    if !(c.abs_tol > 0.0 && c.abs_tol <= 1e-2) {
        return Err(CliError::config(format!("abs_tol = {} outside (0, 1e-2]", c.abs_tol)));
    }
    if !(c.t_cut >= 40.0 && c.t_cut.is_finite()) {
        return Err(CliError::config(format!("t_cut = {} below 40", c.t_cut)));
    }
    if c.threads == 0 {
        return Err(CliError::config("threads must be at least 1"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn env_of(pairs: &[(&str, &str)]) -> impl Fn(&str) -> Option<String> {
        let m: HashMap<String, String> = pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        move |k| m.get(k).cloned()
    }

    #[test]
    fn defaults_are_valid() {
        let c = resolve(&[], None, env_of(&[])).unwrap();
        assert_eq!(c.zeros_limit, 100_000);
        assert_eq!(c.prime_limit, 1 << 31);
        assert_eq!(c.output_format, Format::Csv);
        assert_eq!(c.sieve_cache, None);
    }

    #[test]
    fn precedence() {
        let dir = std::env::temp_dir().join(format!("zscrew-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let file = dir.join("run.cfg");
        std::fs::write(&file, "# test\nzeros_limit = 500\nthreads = 3\nabs_tol=1e-9\n").unwrap();
        let env = env_of(&[("ZSCREW_THREADS", "5"), ("ZSCREW_ABS_TOL", "1e-10")]);
        let c = resolve(&[("abs_tol", Some("1e-11".into())), ("zeros_limit", None)], Some(&file), env).unwrap();
        assert_eq!(c.zeros_limit, 500);
        assert_eq!(c.threads, 5);
        assert_eq!(c.abs_tol, 1e-11);
        std::fs::write(&file, "bogus = 1\n").unwrap();
        assert!(resolve(&[], Some(&file), env_of(&[])).is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn validation() {
        let bad = |k: &str, v: &str| resolve(&[(k, Some(v.to_string()))], None, env_of(&[])).unwrap_err().code;
        assert_eq!(bad("zeros_limit", "99"), 1);
        assert_eq!(bad("prime_limit", "9999"), 1);
        assert_eq!(bad("abs_tol", "0"), 1);
        assert_eq!(bad("abs_tol", "0.02"), 1);
        assert_eq!(bad("output_format", "xml"), 1);
        assert_eq!(bad("threads", "0"), 1);
        assert_eq!(bad("t_cut", "30"), 1);
        assert!(resolve(&[("prime_limit", Some("1e6".into()))], None, env_of(&[])).is_ok());
    }
}
