//! Server configuration: a flat TOML file merged with command-line
//! overrides.
//!
//! ```toml
//! listen = "127.0.0.1:8750"
//! corpus_dir = "data/corpus"
//! image_dir = "data/images"   # optional
//! ui_dir = "webui/dist"       # optional
//! log_level = "info"
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;
use thiserror::Error;

pub const DEFAULT_LISTEN: &str = "127.0.0.1:8750";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LogLevel {
    Error,
    Warn,
    #[default]
    Info,
    Debug,
    Trace,
}

impl LogLevel {
    pub fn as_str(self) -> &'static str {
        match self {
            LogLevel::Error => "error",
            LogLevel::Warn => "warn",
            LogLevel::Info => "info",
            LogLevel::Debug => "debug",
            LogLevel::Trace => "trace",
        }
    }
}

impl fmt::Display for LogLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LogLevel {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "error" => Ok(LogLevel::Error),
            "warn" => Ok(LogLevel::Warn),
            "info" => Ok(LogLevel::Info),
            "debug" => Ok(LogLevel::Debug),
            "trace" => Ok(LogLevel::Trace),
            _ => Err(ConfigError::Invalid(format!("unknown log level `{s}`"))),
        }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {}: {source}", path.display())]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("corpus directory not set")]
    MissingCorpusDir,
    #[error("corpus directory {} does not exist", .0.display())]
    CorpusDirNotFound(PathBuf),
}

/// Every setting optional; used both for the file and for flag overrides.
#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub listen: Option<String>,
    pub corpus_dir: Option<PathBuf>,
    pub image_dir: Option<PathBuf>,
    pub ui_dir: Option<PathBuf>,
    pub log_level: Option<LogLevel>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    /// Reads a config file. Relative paths inside it resolve against the
    /// file's directory.
    pub fn read(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        let mut file = ConfigFile::parse(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        for dir in [&mut file.corpus_dir, &mut file.image_dir, &mut file.ui_dir]
            .into_iter()
            .flatten()
        {
            if dir.is_relative() {
                *dir = base.join(&*dir);
            }
        }
        Ok(file)
    }

    /// Values in `overrides` win.
    pub fn merge(self, overrides: ConfigFile) -> ConfigFile {
        ConfigFile {
            listen: overrides.listen.or(self.listen),
            corpus_dir: overrides.corpus_dir.or(self.corpus_dir),
            image_dir: overrides.image_dir.or(self.image_dir),
            ui_dir: overrides.ui_dir.or(self.ui_dir),
            log_level: overrides.log_level.or(self.log_level),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ServerConfig {
    pub listen: String,
    pub corpus_dir: PathBuf,
    pub image_dir: Option<PathBuf>,
    pub ui_dir: Option<PathBuf>,
    pub log_level: LogLevel,
}

impl TryFrom<ConfigFile> for ServerConfig {
    type Error = ConfigError;

    fn try_from(file: ConfigFile) -> Result<Self, Self::Error> {
        let corpus_dir = file.corpus_dir.ok_or(ConfigError::MissingCorpusDir)?;
        if !corpus_dir.is_dir() {
            return Err(ConfigError::CorpusDirNotFound(corpus_dir));
        }
        Ok(ServerConfig {
            listen: file.listen.unwrap_or_else(|| DEFAULT_LISTEN.to_string()),
            corpus_dir,
            image_dir: file.image_dir,
            ui_dir: file.ui_dir,
            log_level: file.log_level.unwrap_or_default(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        let dir = tempfile::tempdir().unwrap();
        let file = ConfigFile::parse(&format!(
            "corpus_dir = {:?}\nlog_level = \"debug\"\n",
            dir.path()
        ))
        .unwrap();
        let cfg = ServerConfig::try_from(file.clone()).unwrap();
        assert_eq!(cfg.listen, DEFAULT_LISTEN);
        assert_eq!(cfg.log_level, LogLevel::Debug);
        assert_eq!(cfg.image_dir, None);

        let merged = file.merge(ConfigFile {
            listen: Some("0.0.0.0:9000".into()),
            ..ConfigFile::default()
        });
        assert_eq!(
            ServerConfig::try_from(merged).unwrap().listen,
            "0.0.0.0:9000"
        );
    }

    #[test]
    fn corpus_dir_must_exist() {
        assert!(matches!(
            ServerConfig::try_from(ConfigFile::default()),
            Err(ConfigError::MissingCorpusDir)
        ));
        let missing = ConfigFile {
            corpus_dir: Some("/definitely/not/here".into()),
            ..ConfigFile::default()
        };
        assert!(matches!(
            ServerConfig::try_from(missing),
            Err(ConfigError::CorpusDirNotFound(_))
        ));
    }

    #[test]
    fn relative_paths_follow_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("vqbrowse.toml");
        std::fs::write(
            &path,
            "corpus_dir = \"corpus\"\nimage_dir = \"/abs/images\"\n",
        )
        .unwrap();
        let file = ConfigFile::read(&path).unwrap();
        assert_eq!(file.corpus_dir, Some(dir.path().join("corpus")));
        assert_eq!(file.image_dir, Some(PathBuf::from("/abs/images")));
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(ConfigFile::parse("port = 80\n").is_err());
        assert!("loud".parse::<LogLevel>().is_err());
        assert_eq!("WARN".parse::<LogLevel>().unwrap(), LogLevel::Warn);
    }
}
