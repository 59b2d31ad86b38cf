//! `config.toml` loading.
//!
//! Lookup order: `--config`, then `$PDDL_FORGE_CONFIG`, then
//! `$XDG_CONFIG_HOME/pddl-forge/config.toml` (or `~/.config/...`). Only the
//! last one may be missing.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use pddl_forge_core::ast::Name;
use pddl_forge_core::distance::DistanceConfig;
use pddl_forge_core::lint::{AnsiColor, ColorMap};
use pddl_forge_core::Scope;
use serde::Deserialize;

use crate::error::CliError;

pub const ENV_VAR: &str = "PDDL_FORGE_CONFIG";

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum CommandLine {
    /// Split on whitespace.
    Line(String),
    Argv(Vec<String>),
}

impl CommandLine {
    pub fn argv(&self) -> Vec<String> {
        match self {
            CommandLine::Line(s) => s.split_whitespace().map(str::to_string).collect(),
            CommandLine::Argv(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    /// Planner invocation with `{domain}`, `{problem}` and `{output}` placeholders.
    pub planner_command: Option<CommandLine>,
    /// DOT renderer program; `dot` from the search path when unset.
    pub renderer_command: Option<String>,
    /// Directory with `domain.pddl`, `problem.pddl` and `README.md` overrides.
    pub template_dir: Option<PathBuf>,
    /// Directory with `<name>.pddl` snippet overrides.
    pub snippet_dir: Option<PathBuf>,
    /// Scope name to color, applied over the built-in palette.
    #[serde(default)]
    pub colors: BTreeMap<String, String>,
    #[serde(default)]
    pub distance: DistanceSettings,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistanceSettings {
    pub x_function: Option<String>,
    pub y_function: Option<String>,
    pub z_function: Option<String>,
    pub distance_function: Option<String>,
    pub target_type: Option<String>,
    pub decimal_places: Option<u32>,
    pub symmetric: Option<bool>,
}

impl DistanceSettings {
    pub fn to_config(&self) -> DistanceConfig {
        let d = DistanceConfig::default();
        DistanceConfig {
            x_function: self.x_function.as_deref().map_or(d.x_function, Name::new),
            y_function: self.y_function.as_deref().map_or(d.y_function, Name::new),
            z_function: self.z_function.as_deref().map(Name::new).or(d.z_function),
            distance_function: self.distance_function.as_deref().map_or(d.distance_function, Name::new),
            target_type: self.target_type.as_deref().map(Name::new),
            decimal_places: self.decimal_places.unwrap_or(d.decimal_places),
            symmetric: self.symmetric.unwrap_or(d.symmetric),
            overwrite: false,
        }
    }
}

impl Config {
    pub fn load(flag: Option<&Path>) -> Result<Config, CliError> {
        if let Some(p) = flag {
            return Config::read(p);
        }
        if let Some(p) = std::env::var_os(ENV_VAR).filter(|v| !v.is_empty()) {
            return Config::read(Path::new(&p));
        }
        match default_path() {
            Some(p) if p.is_file() => Config::read(&p),
            _ => Ok(Config::default()),
        }
    }

    pub fn read(path: &Path) -> Result<Config, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::env(format!("cannot read config file {}: {e}", path.display())))?;
        Config::parse(&text).map_err(|e| CliError::usage(format!("invalid config file {}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Config, String> {
        let cfg: Config = toml::from_str(text).map_err(|e| e.to_string())?;
        cfg.color_map()?;
        cfg.distance.to_config().validate().map_err(|e| e.to_string())?;
        Ok(cfg)
    }

    pub fn color_map(&self) -> Result<ColorMap, String> {
        let mut map = ColorMap::default_palette();
        for (scope, color) in &self.colors {
            let scope: Scope = scope.parse().map_err(|e| format!("colors: {e}"))?;
            let color: AnsiColor = color.parse().map_err(|e| format!("colors.{scope}: {e}"))?;
            map.0.insert(scope, color);
        }
        Ok(map)
    }
}

fn default_path() -> Option<PathBuf> {
    let base = std::env::var_os("XDG_CONFIG_HOME")
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".config")))?;
    Some(base.join("pddl-forge").join("config.toml"))
}
