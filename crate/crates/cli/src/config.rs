//! `key = value` settings files.

use std::collections::BTreeMap;

use crate::error::{HarnessError, Result};

/// Parses one setting per line; `#` starts a comment, blank lines are skipped.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| HarnessError::InvalidSetting(format!("line {}: expected key = value", n + 1)))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

/// Comma-separated list, e.g. `4,8,16`.
pub fn parse_list<T: std::str::FromStr>(what: &str, text: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(|item| {
            item.trim()
                .parse()
                .map_err(|_| HarnessError::InvalidSetting(format!("{what}: cannot parse `{}`", item.trim())))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_lines() {
        let c = parse_config("# sweep\nm-list = 4, 8\n\nell=256  # fixed\n").unwrap();
        assert_eq!(c["m-list"], "4, 8");
        assert_eq!(c["ell"], "256");
        assert!(parse_config("nonsense").is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(parse_list::<usize>("m", "4, 8,16").unwrap(), vec![4, 8, 16]);
        assert_eq!(parse_list::<f64>("s", "0.1,0.99").unwrap(), vec![0.1, 0.99]);
        assert!(parse_list::<usize>("m", "4,x").is_err());
    }
}
