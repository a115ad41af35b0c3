//! `key = value` configuration files.

use std::collections::BTreeMap;
use std::path::Path;

/// Parsed configuration; keys use the long flag names (`omega`, `root-tol`,
/// ...). Underscores are accepted in place of dashes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut entries = BTreeMap::new();
        for (no, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected `key = value`", no + 1))?;
            let key = key.trim().replace('_', "-");
            if key.is_empty() {
                return Err(format!("line {}: empty key", no + 1));
            }
            entries.insert(key, value.trim().to_string());
        }
        Ok(Self { entries })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// Fails on keys outside `allowed`.
    pub fn check_keys(&self, allowed: &[&str]) -> Result<(), String> {
        match self.entries.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(format!("unknown config key {k:?}")),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_blank_lines() {
        let c = ConfigFile::parse("# fig 1\nomega = 2\n\nroot_tol=1e-12 # inline\n").unwrap();
        assert_eq!(c.get("omega"), Some("2"));
        assert_eq!(c.get("root-tol"), Some("1e-12"));
        assert_eq!(c.get("gamma"), None);
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(ConfigFile::parse("omega 2").is_err());
        assert!(ConfigFile::parse("= 2").is_err());
    }

    #[test]
    fn unknown_keys() {
        let c = ConfigFile::parse("kappa = 1").unwrap();
        assert!(c.check_keys(&["omega"]).is_err());
    }
}
