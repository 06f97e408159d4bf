//! Flat key-value config files (`key = value`, `#` comments). Flags override
//! file values; keys mirror the long flag names one-to-one.

use std::collections::BTreeMap;
use std::path::Path;

pub struct FileConfig {
    map: BTreeMap<String, String>,
}

impl FileConfig {
    pub fn empty() -> Self {
        FileConfig {
            map: BTreeMap::new(),
        }
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(format!(
                    "{}:{}: expected 'key = value', got '{raw}'",
                    path.display(),
                    lineno + 1
                ));
            };
            map.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(FileConfig { map })
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str)
    }

    pub fn string(&self, cli: Option<String>, key: &str) -> Option<String> {
        cli.or_else(|| self.raw(key).map(str::to_string))
    }

    pub fn f64(&self, cli: Option<f64>, key: &str) -> Result<Option<f64>, String> {
        if cli.is_some() {
            return Ok(cli);
        }
        self.raw(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| format!("config key '{key}': '{v}' is not a number"))
            })
            .transpose()
    }

    pub fn usize(&self, cli: Option<usize>, key: &str) -> Result<Option<usize>, String> {
        if cli.is_some() {
            return Ok(cli);
        }
        self.raw(key)
            .map(|v| {
                v.parse::<usize>()
                    .map_err(|_| format!("config key '{key}': '{v}' is not an integer"))
            })
            .transpose()
    }

    pub fn u64(&self, cli: Option<u64>, key: &str) -> Result<Option<u64>, String> {
        if cli.is_some() {
            return Ok(cli);
        }
        self.raw(key)
            .map(|v| {
                v.parse::<u64>()
                    .map_err(|_| format!("config key '{key}': '{v}' is not an integer"))
            })
            .transpose()
    }

    pub fn flag(&self, cli: bool, key: &str) -> Result<bool, String> {
        if cli {
            return Ok(true);
        }
        match self.raw(key) {
            None => Ok(false),
            Some(v) => match v {
                "true" | "1" | "yes" => Ok(true),
                "false" | "0" | "no" => Ok(false),
                other => Err(format!("config key '{key}': '{other}' is not a boolean")),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn parse_and_override() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "# run setup\nineq = hardy_4.3\npoints = 48\nrefine = true").unwrap();
        let cfg = FileConfig::load(f.path()).unwrap();
        assert_eq!(cfg.string(None, "ineq").as_deref(), Some("hardy_4.3"));
        assert_eq!(
            cfg.string(Some("agmon_4.2".into()), "ineq").as_deref(),
            Some("agmon_4.2")
        );
        assert_eq!(cfg.usize(None, "points").unwrap(), Some(48));
        assert_eq!(cfg.usize(Some(64), "points").unwrap(), Some(64));
        assert!(cfg.flag(false, "refine").unwrap());
        assert_eq!(cfg.f64(None, "absent").unwrap(), None);
    }

    #[test]
    fn malformed_line_is_an_error() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "points 48").unwrap();
        assert!(FileConfig::load(f.path()).is_err());
    }
}
