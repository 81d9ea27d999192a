use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Build,
    Sheaf,
    Derham,
    Ih,
    Duality,
    Kunneth,
    Intersect,
    Mezzo,
    Reproduce,
    Proptest,
}

impl Command {
    pub const ALL: [Command; 10] = [
        Command::Build,
        Command::Sheaf,
        Command::Derham,
        Command::Ih,
        Command::Duality,
        Command::Kunneth,
        Command::Intersect,
        Command::Mezzo,
        Command::Reproduce,
        Command::Proptest,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Build => "build",
            Command::Sheaf => "sheaf",
            Command::Derham => "derham",
            Command::Ih => "ih",
            Command::Duality => "duality",
            Command::Kunneth => "kunneth",
            Command::Intersect => "intersect",
            Command::Mezzo => "mezzo",
            Command::Reproduce => "reproduce",
            Command::Proptest => "proptest",
        }
    }

    /// Whether the command reads a space.
    pub fn needs_input(self) -> bool {
        !matches!(self, Command::Reproduce | Command::Proptest)
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::BadInput { pointer: "/command".into(), message: format!("unknown command `{s}`") })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(Error::BadInput { pointer: "/format".into(), message: format!("unknown format `{s}`") }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputSource {
    /// A shipped example name or constructor expression.
    Example(String),
    /// A JSON file in the space input schema.
    Path(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub input: Option<InputSource>,
    pub perversity: Option<String>,
    /// JSON file with mezzoperversity bases.
    pub mezzo: Option<PathBuf>,
    pub mode: Option<String>,
    pub format: Format,
    pub seed: u64,
    pub degree: Option<usize>,
    pub dump: bool,
    /// `stratumwise`, `hypercohomology` or both when absent.
    pub table: Option<String>,
    /// JSON file with graded cocycles for `intersect`.
    pub cycles: Option<PathBuf>,
    /// Flip the cup product sign in the property suite.
    pub mutate: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            input: None,
            perversity: None,
            mezzo: None,
            mode: None,
            format: Format::Json,
            seed: 0,
            degree: None,
            dump: false,
            table: None,
            cycles: None,
            mutate: false,
        }
    }

    pub fn example(command: Command, name: &str) -> Self {
        RunConfig { input: Some(InputSource::Example(name.into())), ..Self::new(command) }
    }

    /// Sets the input from optional example and path arguments; both at once is an error.
    pub fn with_sources(mut self, example: Option<String>, path: Option<PathBuf>) -> Result<Self> {
        self.input = match (example, path) {
            (Some(_), Some(_)) => {
                return Err(Error::BadInput {
                    pointer: "/input".into(),
                    message: "give either an example or an input file, not both".into(),
                })
            }
            (Some(e), None) => Some(InputSource::Example(e)),
            (None, Some(p)) => Some(InputSource::Path(p)),
            (None, None) => None,
        };
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.command.needs_input() && self.input.is_none() {
            return Err(Error::BadInput {
                pointer: "/input".into(),
                message: format!("`{}` needs an example or an input file", self.command),
            });
        }
        if let Some(t) = &self.table {
            if t != "stratumwise" && t != "hypercohomology" {
                return Err(Error::BadInput { pointer: "/table".into(), message: format!("unknown table `{t}`") });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exactly_one_source() {
        let c = RunConfig::new(Command::Ih);
        assert!(c.clone().with_sources(Some("s1".into()), Some("x.json".into())).is_err());
        assert!(c.validate().is_err());
        assert!(c.with_sources(Some("s1".into()), None).unwrap().validate().is_ok());
        assert!(RunConfig::new(Command::Reproduce).validate().is_ok());
    }

    #[test]
    fn names_roundtrip() {
        for c in Command::ALL {
            assert_eq!(c.name().parse::<Command>().unwrap(), c);
        }
        assert!("nope".parse::<Command>().is_err());
        assert_eq!("csv".parse::<Format>().unwrap(), Format::Csv);
    }
}
