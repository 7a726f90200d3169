//! Optional TOML configuration: resource caps and the external solver.
//!
//! ```toml
//! [limits]
//! enum_vars = 24
//! tableau_vars = 1048576
//!
//! [solver]
//! path = "/usr/bin/minisat"
//! args = []
//! ```

use nplogic::sat::ExternalSolver;
use nplogic::Limits;
use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub limits: LimitOverrides,
    #[serde(default)]
    pub solver: SolverConfig,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitOverrides {
    pub enum_vars: Option<usize>,
    pub max_models: Option<usize>,
    pub qbf_prefix: Option<usize>,
    pub brute_force_atoms: Option<usize>,
    pub asp_universe: Option<usize>,
    pub tableau_vars: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub args: Vec<String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn limits(&self) -> Limits {
        let d = Limits::default();
        let o = &self.limits;
        Limits {
            enum_vars: o.enum_vars.unwrap_or(d.enum_vars),
            max_models: o.max_models.unwrap_or(d.max_models),
            qbf_prefix: o.qbf_prefix.unwrap_or(d.qbf_prefix),
            brute_force_atoms: o.brute_force_atoms.unwrap_or(d.brute_force_atoms),
            asp_universe: o.asp_universe.unwrap_or(d.asp_universe),
            tableau_vars: o.tableau_vars.unwrap_or(d.tableau_vars),
        }
    }

    /// The environment variable takes precedence over the config key.
    pub fn solver(&self) -> Option<ExternalSolver> {
        if let Some(s) = ExternalSolver::from_env() {
            return Some(s);
        }
        self.solver.path.as_ref().map(|p| ExternalSolver {
            program: p.clone(),
            args: self.solver.args.clone(),
        })
    }
}
