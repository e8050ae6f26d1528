//! Run configuration: a JSON file (or bundled preset) overlaid with flags.

use std::path::Path;

use anyhow::Context;
use serde::{Deserialize, Serialize};
use v2x_secrecy::montecarlo::{EdgeCorrection, EveModel, SimConfig, TypicalPolicy};
use v2x_secrecy::{db_to_linear, NetworkParams, Thresholds};

/// Bundled figure presets, by file name.
pub const PRESETS: [(&str, &str); 7] = [
    ("fig2.json", include_str!("../presets/fig2.json")),
    ("fig3.json", include_str!("../presets/fig3.json")),
    ("fig4.json", include_str!("../presets/fig4.json")),
    ("fig5.json", include_str!("../presets/fig5.json")),
    ("fig6.json", include_str!("../presets/fig6.json")),
    ("fig7.json", include_str!("../presets/fig7.json")),
    ("fig8.json", include_str!("../presets/fig8.json")),
];

/// Preset used when no `--config` is given.
pub const DEFAULT_PRESET: &str = "fig5.json";

/// `--config` named neither an existing file nor a bundled preset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownConfig(pub String);

impl std::fmt::Display for UnknownConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "config `{}` is neither a file nor a bundled preset",
            self.0
        )
    }
}

impl std::error::Error for UnknownConfig {}

/// Every key a config file may carry. Absent keys fall back to the base
/// layer; unknown keys are an error.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub lambda_b: Option<f64>,
    pub lambda_u: Option<f64>,
    pub lambda_e: Option<f64>,
    pub lambda_l: Option<f64>,
    pub u_b: Option<f64>,
    pub u_u: Option<f64>,
    pub u_e: Option<f64>,
    pub n_antennas: Option<u32>,
    pub phi: Option<f64>,
    pub alpha: Option<f64>,
    pub gamma_db: Option<f64>,
    pub beta_db: Option<f64>,
    pub n_trials: Option<u64>,
    pub window_radius: Option<f64>,
    pub master_seed: Option<u64>,
    pub eve_model: Option<EveModel>,
    pub typical_kind_policy: Option<TypicalPolicy>,
    pub edge_correction: Option<EdgeCorrection>,
    pub fast_bounds: Option<bool>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> anyhow::Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// A file path, or the name of a bundled preset (`fig5` or `fig5.json`)
    /// when no such file exists.
    pub fn load(location: &str) -> anyhow::Result<Self> {
        if Path::new(location).is_file() {
            let text =
                std::fs::read_to_string(location).with_context(|| format!("reading {location}"))?;
            return Self::parse(&text).with_context(|| format!("parsing {location}"));
        }
        match preset(location) {
            Some(text) => Self::parse(text).with_context(|| format!("parsing preset {location}")),
            None => Err(UnknownConfig(location.to_owned()).into()),
        }
    }

    /// Keys set in `top` win over keys set here.
    pub fn overlay(self, top: ConfigFile) -> Self {
        macro_rules! pick {
            ($($f:ident),*) => { Self { $($f: top.$f.or(self.$f)),* } };
        }
        pick!(
            lambda_b,
            lambda_u,
            lambda_e,
            lambda_l,
            u_b,
            u_u,
            u_e,
            n_antennas,
            phi,
            alpha,
            gamma_db,
            beta_db,
            n_trials,
            window_radius,
            master_seed,
            eve_model,
            typical_kind_policy,
            edge_correction,
            fast_bounds
        )
    }

    /// Fills simulation and threshold defaults, then requires every network
    /// key to be present.
    pub fn resolve(&self) -> anyhow::Result<RunConfig> {
        let sim = SimConfig::default();
        macro_rules! need {
            ($f:ident) => {
                self.$f
                    .with_context(|| format!("missing config key `{}`", stringify!($f)))?
            };
        }
        let config = RunConfig {
            params: NetworkParams {
                lambda_b: need!(lambda_b),
                lambda_u: need!(lambda_u),
                lambda_e: need!(lambda_e),
                lambda_l: need!(lambda_l),
                u_b: need!(u_b),
                u_u: need!(u_u),
                u_e: need!(u_e),
                n_antennas: need!(n_antennas),
                phi: need!(phi),
                alpha: need!(alpha),
            },
            gamma_db: self.gamma_db.unwrap_or(10.0),
            beta_db: self.beta_db.unwrap_or(0.0),
            sim: SimConfig {
                n_trials: self.n_trials.unwrap_or(sim.n_trials),
                window_radius: self.window_radius.unwrap_or(sim.window_radius),
                master_seed: self.master_seed.unwrap_or(sim.master_seed),
                eve_model: self.eve_model.unwrap_or(sim.eve_model),
                typical_kind_policy: self.typical_kind_policy.unwrap_or(sim.typical_kind_policy),
                edge_correction: self.edge_correction.unwrap_or(sim.edge_correction),
            },
            fast_bounds: self.fast_bounds.unwrap_or(true),
        };
        config.params.validate()?;
        config.sim.validate()?;
        Ok(config)
    }
}

pub fn preset(name: &str) -> Option<&'static str> {
    let file = if name.ends_with(".json") {
        name.to_owned()
    } else {
        format!("{name}.json")
    };
    let file = Path::new(&file).file_name()?.to_str()?.to_owned();
    PRESETS
        .iter()
        .find(|(n, _)| *n == file)
        .map(|(_, text)| *text)
}

/// Fully resolved inputs of one evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub params: NetworkParams,
    pub gamma_db: f64,
    pub beta_db: f64,
    pub sim: SimConfig,
    /// Use the cheaper vehicular secrecy bounds in totals.
    pub fast_bounds: bool,
}

impl RunConfig {
    pub fn gamma(&self) -> f64 {
        db_to_linear(self.gamma_db)
    }

    pub fn beta(&self) -> f64 {
        db_to_linear(self.beta_db)
    }

    pub fn thresholds(&self) -> anyhow::Result<Thresholds> {
        Ok(Thresholds::from_db(self.gamma_db, self.beta_db)?)
    }

    pub fn has_eves(&self) -> bool {
        let p = &self.params;
        p.lambda_e > 0.0 || p.u_e > 0.0
    }
}
