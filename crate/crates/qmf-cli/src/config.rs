//! `key = value` configuration files.
//!
//! Blank lines and lines starting with `#` are skipped. Values may be
//! quoted. Command-line flags override anything read here.

use std::collections::BTreeMap;
use std::path::Path;

const KEYS: [&str; 8] = ["order", "format", "threads", "out", "G", "H", "D", "N"];

/// Canonical key for the accepted spellings.
fn canonical(key: &str) -> Option<&'static str> {
    let k = match key {
        "gmax" => "G",
        "hmax" => "H",
        "dmax" => "D",
        "nmax" => "N",
        other => other,
    };
    KEYS.iter().copied().find(|x| *x == k)
}

#[derive(Clone, Debug, Default)]
pub struct FileConfig {
    values: BTreeMap<&'static str, String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut values = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| format!("config line {}: expected key = value", i + 1))?;
            let key = canonical(k.trim()).ok_or_else(|| format!("config line {}: unknown key `{}`", i + 1, k.trim()))?;
            let v = v.trim().trim_matches('"').to_string();
            values.insert(key, v);
        }
        Ok(FileConfig { values })
    }

    pub fn get_str(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, String> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| format!("config: bad value `{v}` for `{key}`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_aliases() {
        let c = FileConfig::parse("# bounds\nhmax = 5\n\nformat = \"csv\"\nG=2\n").unwrap();
        assert_eq!(c.get::<u32>("H").unwrap(), Some(5));
        assert_eq!(c.get::<u32>("G").unwrap(), Some(2));
        assert_eq!(c.get_str("format"), Some("csv"));
        assert_eq!(c.get::<u32>("D").unwrap(), None);
    }

    #[test]
    fn rejects_unknown_keys_and_junk() {
        assert!(FileConfig::parse("colour = red").is_err());
        assert!(FileConfig::parse("order").is_err());
        assert!(FileConfig::parse("order = x").unwrap().get::<i32>("order").is_err());
    }
}
