//! Argument parsing and subcommand dispatch.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{ensure, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use v2x_secrecy::montecarlo::{
    coverage_realization, secrecy_realization, simulate_coverage_traced, simulate_secrecy_traced,
    EveModel,
};

use crate::config::{ConfigFile, RunConfig, UnknownConfig, DEFAULT_PRESET};
use crate::eval::{self, CheckKind, EngineChoice, EvalOptions, SweepSpec, SweepVariable};
use crate::output::{write_rows, Quantity, TraceRow};

#[derive(Debug, Parser)]
#[command(
    name = "v2x-secrecy",
    version,
    about = "Coverage, secrecy and secrecy throughput of AN-assisted C-V2X networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coverage probability at the gamma threshold.
    Coverage(Common),
    /// Secrecy probability bounds at the beta threshold.
    Secrecy(Common),
    /// Effective secrecy throughput.
    Throughput {
        #[command(flatten)]
        common: Common,
        /// Use the simulated secrecy probability in analytic rows.
        #[arg(long)]
        mc_secrecy: bool,
    },
    /// Evaluate a quantity over a range of one variable.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        variable: VariableArg,
        /// Explicit comma-separated values.
        #[arg(long, value_delimiter = ',', conflicts_with_all = ["start", "stop", "count"])]
        values: Option<Vec<f64>>,
        #[arg(long, requires_all = ["stop", "count"])]
        start: Option<f64>,
        #[arg(long)]
        stop: Option<f64>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(value_enum)]
        quantity: QuantityArg,
    },
    /// Monte Carlo only, with optional per-trial trace and realization dump.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "coverage")]
        quantity: QuantityArg,
        /// Per-trial CSV trace (coverage and secrecy).
        #[arg(long)]
        trace: Option<PathBuf>,
        /// JSON dump of one trial's network.
        #[arg(long)]
        dump_realization: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        dump_trial: u64,
    },
    /// Compare the analytic engine with the simulator; exits 1 on a violation.
    Validate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "auto")]
        check: CheckArg,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        gammas_db: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        betas_db: Option<Vec<f64>>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// JSON config file or bundled preset name (fig2 ... fig8). Defaults to fig5.
    #[arg(long)]
    pub config: Option<String>,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<u64>,
    /// Simulation window radius in metres.
    #[arg(long = "window-m")]
    pub window_m: Option<f64>,
    #[arg(long, value_enum)]
    pub engine: Option<EngineArg>,
    #[arg(long, value_enum)]
    pub eve_model: Option<EveModelArg>,
    #[arg(long, value_name = "BOOL")]
    pub fast_bounds: Option<bool>,
    /// Record wall-clock time per row.
    #[arg(long)]
    pub timing: bool,
    #[arg(long)]
    pub phi: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long = "N")]
    pub n_antennas: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma_db: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta_db: Option<f64>,
    #[arg(long)]
    pub lambda_b: Option<f64>,
    #[arg(long)]
    pub lambda_l: Option<f64>,
    #[arg(long)]
    pub u_b: Option<f64>,
    #[arg(long)]
    pub u_e: Option<f64>,
    #[arg(long)]
    pub lambda_e: Option<f64>,
    #[arg(long)]
    pub lambda_u: Option<f64>,
    #[arg(long)]
    pub u_u: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    Analytic,
    Mc,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EveModelArg {
    Sic,
    Optimistic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QuantityArg {
    Coverage,
    Secrecy,
    Throughput,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckArg {
    Auto,
    Coverage,
    Secrecy,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariableArg {
    #[value(name = "gamma_db")]
    GammaDb,
    #[value(name = "beta_db")]
    BetaDb,
    #[value(name = "phi")]
    Phi,
    #[value(name = "n_antennas")]
    NAntennas,
    #[value(name = "eve_intensity_scale")]
    EveIntensityScale,
    #[value(name = "tx_intensity_scale")]
    TxIntensityScale,
}

impl From<QuantityArg> for Quantity {
    fn from(q: QuantityArg) -> Self {
        match q {
            QuantityArg::Coverage => Quantity::Coverage,
            QuantityArg::Secrecy => Quantity::Secrecy,
            QuantityArg::Throughput => Quantity::Throughput,
        }
    }
}

impl From<VariableArg> for SweepVariable {
    fn from(v: VariableArg) -> Self {
        match v {
            VariableArg::GammaDb => SweepVariable::GammaDb,
            VariableArg::BetaDb => SweepVariable::BetaDb,
            VariableArg::Phi => SweepVariable::Phi,
            VariableArg::NAntennas => SweepVariable::NAntennas,
            VariableArg::EveIntensityScale => SweepVariable::EveIntensityScale,
            VariableArg::TxIntensityScale => SweepVariable::TxIntensityScale,
        }
    }
}

impl Common {
    fn overrides(&self) -> ConfigFile {
        ConfigFile {
            lambda_b: self.lambda_b,
            lambda_u: self.lambda_u,
            lambda_e: self.lambda_e,
            lambda_l: self.lambda_l,
            u_b: self.u_b,
            u_u: self.u_u,
            u_e: self.u_e,
            n_antennas: self.n_antennas,
            phi: self.phi,
            alpha: self.alpha,
            gamma_db: self.gamma_db,
            beta_db: self.beta_db,
            n_trials: self.trials,
            window_radius: self.window_m,
            master_seed: self.seed,
            eve_model: self.eve_model.map(|m| match m {
                EveModelArg::Sic => EveModel::WorstCaseSIC,
                EveModelArg::Optimistic => EveModel::Optimistic,
            }),
            typical_kind_policy: None,
            edge_correction: None,
            fast_bounds: self.fast_bounds,
        }
    }

    pub fn resolve(&self) -> anyhow::Result<RunConfig> {
        let base = ConfigFile::load(self.config.as_deref().unwrap_or(DEFAULT_PRESET))?;
        base.overlay(self.overrides()).resolve()
    }

    fn options(&self, default_engine: EngineChoice) -> EvalOptions {
        EvalOptions {
            engine: match self.engine {
                None => default_engine,
                Some(EngineArg::Analytic) => EngineChoice::Analytic,
                Some(EngineArg::Mc) => EngineChoice::Montecarlo,
                Some(EngineArg::Both) => EngineChoice::Both,
            },
            timing: self.timing,
            mc_secrecy: false,
        }
    }

    fn sink(&self) -> anyhow::Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(path) => Box::new(BufWriter::new(
                File::create(path).with_context(|| format!("creating {}", path.display()))?,
            )),
            None => Box::new(io::stdout().lock()),
        })
    }
}

/// What the process should report once a command has run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Done,
    /// `validate` found analytic values outside their relation to the
    /// simulated intervals.
    Violations {
        violations: usize,
        checks: usize,
    },
}

pub fn run(cli: Cli) -> anyhow::Result<Outcome> {
    match cli.command {
        Command::Coverage(common) => single(&common, Quantity::Coverage, false),
        Command::Secrecy(common) => single(&common, Quantity::Secrecy, false),
        Command::Throughput { common, mc_secrecy } => {
            single(&common, Quantity::Throughput, mc_secrecy)
        }
        Command::Sweep {
            common,
            variable,
            values,
            start,
            stop,
            count,
            quantity,
        } => {
            let config = common.resolve()?;
            let spec = match (values, start, stop, count) {
                (Some(v), ..) => SweepSpec::list(variable.into(), v)?,
                (None, Some(a), Some(b), Some(n)) => SweepSpec::grid(variable.into(), a, b, n)?,
                _ => anyhow::bail!("sweep needs --values or --start/--stop/--count"),
            };
            let rows = eval::sweep(
                &spec,
                quantity.into(),
                &config,
                &common.options(EngineChoice::Analytic),
            )?;
            write_rows(common.sink()?, &rows)?;
            Ok(Outcome::Done)
        }
        Command::Simulate {
            common,
            quantity,
            trace,
            dump_realization,
            dump_trial,
        } => simulate(
            &common,
            quantity.into(),
            trace,
            dump_realization,
            dump_trial,
        ),
        Command::Validate {
            common,
            check,
            gammas_db,
            betas_db,
        } => {
            let config = common.resolve()?;
            let kind = match check {
                CheckArg::Auto => CheckKind::Auto,
                CheckArg::Coverage => CheckKind::Coverage,
                CheckArg::Secrecy => CheckKind::Secrecy,
                CheckArg::All => CheckKind::All,
            };
            let gammas = gammas_db.unwrap_or_else(|| eval::DEFAULT_VALIDATE_GAMMAS_DB.to_vec());
            let betas = betas_db.unwrap_or_else(|| eval::DEFAULT_VALIDATE_BETAS_DB.to_vec());
            let v = eval::validate(&config, kind, &gammas, &betas, common.timing)?;
            write_rows(common.sink()?, &v.rows)?;
            Ok(if v.violations == 0 {
                Outcome::Done
            } else {
                Outcome::Violations {
                    violations: v.violations,
                    checks: v.checks,
                }
            })
        }
    }
}

fn single(common: &Common, quantity: Quantity, mc_secrecy: bool) -> anyhow::Result<Outcome> {
    let config = common.resolve()?;
    let options = EvalOptions {
        mc_secrecy,
        ..common.options(EngineChoice::Analytic)
    };
    let rows = eval::evaluate(quantity, &config, &options)?;
    write_rows(common.sink()?, &rows)?;
    Ok(Outcome::Done)
}

fn simulate(
    common: &Common,
    quantity: Quantity,
    trace: Option<PathBuf>,
    dump: Option<PathBuf>,
    dump_trial: u64,
) -> anyhow::Result<Outcome> {
    let config = common.resolve()?;
    let options = EvalOptions {
        engine: EngineChoice::Montecarlo,
        ..common.options(EngineChoice::Montecarlo)
    };
    let rows = eval::evaluate(quantity, &config, &options)?;
    write_rows(common.sink()?, &rows)?;
    if let Some(path) = trace {
        let records = match quantity {
            Quantity::Coverage => {
                simulate_coverage_traced(&config.params, config.gamma(), &config.sim)?.1
            }
            Quantity::Secrecy => {
                simulate_secrecy_traced(&config.params, config.beta(), &config.sim)?.1
            }
            Quantity::Throughput => {
                anyhow::bail!("traces exist for coverage and secrecy runs only")
            }
        };
        let rows: Vec<TraceRow> = records.iter().map(TraceRow::from).collect();
        let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        write_rows(BufWriter::new(file), &rows)?;
    }
    if let Some(path) = dump {
        ensure!(
            dump_trial < config.sim.n_trials,
            "dump trial {dump_trial} is beyond n_trials"
        );
        let net = match quantity {
            Quantity::Coverage => coverage_realization(&config.params, &config.sim, dump_trial)?,
            _ => secrecy_realization(&config.params, &config.sim, dump_trial)?,
        };
        let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        let mut w = BufWriter::new(file);
        serde_json::to_writer_pretty(&mut w, &net)?;
        writeln!(w)?;
        w.flush()?;
    }
    Ok(Outcome::Done)
}

/// Short machine-readable category of a failure.
pub fn error_kind(e: &anyhow::Error) -> &'static str {
    use v2x_secrecy::Error;
    if let Some(err) = e.downcast_ref::<Error>() {
        return match err {
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::Quadrature(_) => "convergence",
            Error::OutOfRange { .. } => "out_of_range",
            Error::AlreadyConditioned | Error::Unsupported(_) => "unsupported",
        };
    }
    if e.downcast_ref::<serde_json::Error>().is_some()
        || e.downcast_ref::<UnknownConfig>().is_some()
    {
        return "config";
    }
    if e.downcast_ref::<io::Error>().is_some() {
        return "io";
    }
    "usage"
}
