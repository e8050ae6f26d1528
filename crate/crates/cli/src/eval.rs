//! Single-point evaluation, sweeps and engine validation.

use std::time::Instant;

use anyhow::{bail, ensure};
use rayon::prelude::*;
use v2x_secrecy::coverage::CoverageEngine;
use v2x_secrecy::montecarlo::{
    simulate_coverage, simulate_coverage_curve, simulate_secrecy, simulate_secrecy_curve,
    simulate_throughput,
};
use v2x_secrecy::numerics::QuadratureSpec;
use v2x_secrecy::secrecy::{SecrecyEngine, VehicularForm};
use v2x_secrecy::throughput::{throughput_with_secrecy, ThroughputEvaluator};
use v2x_secrecy::{db_to_linear, NetworkParams};

use crate::config::RunConfig;
use crate::output::{Engine, Quantity, ResultRow};

/// Largest gap between analytic and simulated coverage tolerated by
/// `validate`, on top of the interval half-width.
pub const COVERAGE_MODEL_TOLERANCE: f64 = 0.03;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EngineChoice {
    #[default]
    Analytic,
    Montecarlo,
    Both,
}

impl EngineChoice {
    pub fn engines(self) -> &'static [Engine] {
        match self {
            Self::Analytic => &[Engine::Analytic],
            Self::Montecarlo => &[Engine::Montecarlo],
            Self::Both => &[Engine::Analytic, Engine::Montecarlo],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EvalOptions {
    pub engine: EngineChoice,
    /// Fill `runtime_ms`; rows are then no longer reproducible byte for byte.
    pub timing: bool,
    /// Analytic throughput rows use the simulated secrecy probability instead
    /// of the lower bound.
    pub mc_secrecy: bool,
}

fn form(config: &RunConfig) -> VehicularForm {
    if config.fast_bounds {
        VehicularForm::Fast
    } else {
        VehicularForm::Full
    }
}

/// Rows for one configuration, one per requested engine.
pub fn evaluate(
    quantity: Quantity,
    config: &RunConfig,
    options: &EvalOptions,
) -> anyhow::Result<Vec<ResultRow>> {
    options
        .engine
        .engines()
        .iter()
        .map(|&engine| {
            let start = Instant::now();
            let mut row = evaluate_one(quantity, engine, config, options)?;
            if options.timing {
                row.runtime_ms = Some(start.elapsed().as_secs_f64() * 1e3);
            }
            Ok(row)
        })
        .collect()
}

fn evaluate_one(
    quantity: Quantity,
    engine: Engine,
    config: &RunConfig,
    options: &EvalOptions,
) -> anyhow::Result<ResultRow> {
    let quad = QuadratureSpec::default();
    let p = &config.params;
    let mut row = ResultRow::new(quantity, engine, config);
    match (quantity, engine) {
        (Quantity::Coverage, Engine::Analytic) => {
            let c = CoverageEngine::new(p, &quad)?.total(config.gamma())?;
            row.p_c = Some(c.p_c_total);
            row.p_c_planar = Some(c.p_c_planar);
            row.p_c_vehicular = Some(c.p_c_vehicular);
        }
        (Quantity::Coverage, Engine::Montecarlo) => {
            row = row.with_estimate(&simulate_coverage(p, config.gamma(), &config.sim)?);
        }
        (Quantity::Secrecy, Engine::Analytic) => {
            let b = SecrecyEngine::new(p, &quad)?.bounds(config.beta(), form(config))?;
            row.p_sec_lower = Some(b.lower_total);
            row.p_sec_upper = Some(b.upper_total);
            row.p_sec_lower_planar = Some(b.lower_planar);
            row.p_sec_upper_planar = Some(b.upper_planar);
            (row.p_sec_lower_vehicular, row.p_sec_upper_vehicular) = match form(config) {
                VehicularForm::Fast => (Some(b.lower_vehicular_fast), Some(b.upper_vehicular_fast)),
                VehicularForm::Full => (Some(b.lower_vehicular_full), Some(b.upper_vehicular)),
            };
        }
        (Quantity::Secrecy, Engine::Montecarlo) => {
            row = row.with_estimate(&simulate_secrecy(p, config.beta(), &config.sim)?);
        }
        (Quantity::Throughput, Engine::Analytic) => {
            let thresholds = config.thresholds()?;
            let t = if options.mc_secrecy {
                let e = simulate_secrecy(p, thresholds.beta, &config.sim)?;
                row = row.with_estimate(&e);
                throughput_with_secrecy(p, &thresholds, e.p_hat, &quad)?
            } else {
                let t = ThroughputEvaluator::new(p, &quad)?
                    .with_form(form(config))
                    .evaluate(p.phi, &thresholds)?;
                row.p_sec_lower = Some(t.p_sec);
                t
            };
            row.p_c = Some(t.p_c);
            row.r_s = Some(t.r_s);
            row.eta = Some(t.eta);
        }
        (Quantity::Throughput, Engine::Montecarlo) => {
            let t = simulate_throughput(p, &config.thresholds()?, &config.sim)?;
            row = row.with_estimate(&t.secrecy);
            row.p_c = Some(t.coverage.p_hat);
            row.r_s = Some(t.r_s);
            row.eta = Some(t.eta_hat);
            row.eta_std_err = Some(t.eta_std_err);
        }
    }
    Ok(row)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    GammaDb,
    BetaDb,
    Phi,
    NAntennas,
    /// Multiplies `lambda_e` and `u_e`.
    EveIntensityScale,
    /// Multiplies `lambda_b` and `u_b`.
    TxIntensityScale,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            Self::GammaDb => "gamma_db",
            Self::BetaDb => "beta_db",
            Self::Phi => "phi",
            Self::NAntennas => "n_antennas",
            Self::EveIntensityScale => "eve_intensity_scale",
            Self::TxIntensityScale => "tx_intensity_scale",
        }
    }

    /// `base` with this variable set to `value`.
    pub fn apply(self, base: &RunConfig, value: f64) -> anyhow::Result<RunConfig> {
        let mut c = *base;
        let p = &mut c.params;
        match self {
            Self::GammaDb => c.gamma_db = value,
            Self::BetaDb => c.beta_db = value,
            Self::Phi => p.phi = value,
            Self::NAntennas => {
                ensure!(
                    value.fract() == 0.0 && value >= 1.0 && value <= f64::from(u32::MAX),
                    "n_antennas sweep value {value} is not a positive integer"
                );
                p.n_antennas = value as u32;
            }
            Self::EveIntensityScale => {
                ensure!(
                    value >= 0.0,
                    "eve_intensity_scale must be >= 0, got {value}"
                );
                p.lambda_e *= value;
                p.u_e *= value;
            }
            Self::TxIntensityScale => {
                ensure!(value >= 0.0, "tx_intensity_scale must be >= 0, got {value}");
                p.lambda_b *= value;
                p.u_b *= value;
            }
        }
        c.params.validate()?;
        Ok(c)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub values: Vec<f64>,
}

impl SweepSpec {
    pub fn list(variable: SweepVariable, values: Vec<f64>) -> anyhow::Result<Self> {
        ensure!(!values.is_empty(), "sweep needs at least one value");
        ensure!(
            values.iter().all(|v| v.is_finite()),
            "sweep values must be finite"
        );
        Ok(Self { variable, values })
    }

    /// `count` evenly spaced values from `start` to `stop` inclusive.
    pub fn grid(
        variable: SweepVariable,
        start: f64,
        stop: f64,
        count: usize,
    ) -> anyhow::Result<Self> {
        ensure!(count >= 1, "sweep count must be >= 1");
        ensure!(
            start.is_finite() && stop.is_finite(),
            "sweep bounds must be finite"
        );
        if count == 1 {
            return Self::list(variable, vec![start]);
        }
        ensure!(
            start != stop,
            "sweep grid with several points needs start != stop"
        );
        let last = (count - 1) as f64;
        let values = (0..count)
            .map(|i| {
                let w = i as f64 / last;
                (1.0 - w) * start + w * stop
            })
            .collect();
        Self::list(variable, values)
    }
}

/// Sweep points run in parallel; rows come back in input order.
pub fn sweep(
    spec: &SweepSpec,
    quantity: Quantity,
    base: &RunConfig,
    options: &EvalOptions,
) -> anyhow::Result<Vec<ResultRow>> {
    let per_point: Vec<Vec<ResultRow>> = spec
        .values
        .par_iter()
        .map(|&v| {
            let config = spec.variable.apply(base, v)?;
            let mut rows = evaluate(quantity, &config, options)?;
            for r in &mut rows {
                r.sweep_variable = Some(spec.variable.name().to_owned());
                r.sweep_value = Some(v);
            }
            Ok(rows)
        })
        .collect::<anyhow::Result<_>>()?;
    Ok(per_point.into_iter().flatten().collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CheckKind {
    /// Secrecy when the configuration has Eves, coverage otherwise.
    #[default]
    Auto,
    Coverage,
    Secrecy,
    All,
}

pub const DEFAULT_VALIDATE_GAMMAS_DB: [f64; 3] = [1.5, 5.0, 10.0];
pub const DEFAULT_VALIDATE_BETAS_DB: [f64; 4] = [-5.0, 0.0, 5.0, 10.0];

/// Outcome of `validate`: an analytic and a simulated row per threshold; the
/// analytic row carries the verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct Validation {
    pub rows: Vec<ResultRow>,
    pub violations: usize,
    pub checks: usize,
}

/// Coverage: `|p_c - p̂| ≤ 0.03 + half-width`. Secrecy: the lower bound does
/// not exceed the interval's upper end and the upper bound does not fall
/// below its lower end.
pub fn validate(
    config: &RunConfig,
    kind: CheckKind,
    gammas_db: &[f64],
    betas_db: &[f64],
    timing: bool,
) -> anyhow::Result<Validation> {
    let (coverage, secrecy) = match kind {
        CheckKind::Auto => (!config.has_eves(), config.has_eves()),
        CheckKind::Coverage => (true, false),
        CheckKind::Secrecy => (false, true),
        CheckKind::All => (true, true),
    };
    if secrecy && !config.has_eves() {
        bail!("secrecy validation needs eavesdroppers in the configuration");
    }
    let mut out = Validation {
        rows: Vec::new(),
        violations: 0,
        checks: 0,
    };
    let quad = QuadratureSpec::default();
    let p: &NetworkParams = &config.params;
    if coverage {
        let start = Instant::now();
        let gammas: Vec<f64> = gammas_db.iter().map(|&g| db_to_linear(g)).collect();
        let mc = simulate_coverage_curve(p, &gammas, &config.sim)?;
        let mc_ms = start.elapsed().as_secs_f64() * 1e3;
        let engine = CoverageEngine::new(p, &quad)?;
        for ((&g_db, &g), e) in gammas_db.iter().zip(&gammas).zip(&mc) {
            let c = RunConfig {
                gamma_db: g_db,
                ..*config
            };
            let start = Instant::now();
            let result = engine.total(g)?;
            let mut a = ResultRow::new(Quantity::Coverage, Engine::Analytic, &c);
            a.p_c = Some(result.p_c_total);
            a.p_c_planar = Some(result.p_c_planar);
            a.p_c_vehicular = Some(result.p_c_vehicular);
            let holds =
                (result.p_c_total - e.p_hat).abs() <= COVERAGE_MODEL_TOLERANCE + e.half_width();
            a.relation_holds = Some(holds);
            let mut m = ResultRow::new(Quantity::Coverage, Engine::Montecarlo, &c).with_estimate(e);
            if timing {
                a.runtime_ms = Some(start.elapsed().as_secs_f64() * 1e3);
                m.runtime_ms = Some(mc_ms);
            }
            out.checks += 1;
            out.violations += usize::from(!holds);
            out.rows.push(a);
            out.rows.push(m);
        }
    }
    if secrecy {
        let start = Instant::now();
        let betas: Vec<f64> = betas_db.iter().map(|&b| db_to_linear(b)).collect();
        let mc = simulate_secrecy_curve(p, &betas, &config.sim)?;
        let mc_ms = start.elapsed().as_secs_f64() * 1e3;
        let engine = SecrecyEngine::new(p, &quad)?;
        for ((&b_db, &b), e) in betas_db.iter().zip(&betas).zip(&mc) {
            let c = RunConfig {
                beta_db: b_db,
                ..*config
            };
            let start = Instant::now();
            let bounds = engine.bounds(b, form(config))?;
            let mut a = ResultRow::new(Quantity::Secrecy, Engine::Analytic, &c);
            a.p_sec_lower = Some(bounds.lower_total);
            a.p_sec_upper = Some(bounds.upper_total);
            let holds = bounds.lower_total <= e.ci_high && bounds.upper_total >= e.ci_low;
            a.relation_holds = Some(holds);
            let mut m = ResultRow::new(Quantity::Secrecy, Engine::Montecarlo, &c).with_estimate(e);
            if timing {
                a.runtime_ms = Some(start.elapsed().as_secs_f64() * 1e3);
                m.runtime_ms = Some(mc_ms);
            }
            out.checks += 1;
            out.violations += usize::from(!holds);
            out.rows.push(a);
            out.rows.push(m);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ConfigFile;

    fn config(name: &str) -> RunConfig {
        ConfigFile::load(name).unwrap().resolve().unwrap()
    }

    #[test]
    fn grid_hits_both_ends() {
        let s = SweepSpec::grid(SweepVariable::Phi, 0.05, 0.95, 19).unwrap();
        assert_eq!(s.values.len(), 19);
        assert_eq!(s.values[0], 0.05);
        assert_eq!(s.values[18], 0.95);
        assert!(SweepSpec::grid(SweepVariable::Phi, 0.1, 0.1, 3).is_err());
        assert!(SweepSpec::list(SweepVariable::Phi, vec![]).is_err());
    }

    #[test]
    fn variables_edit_the_right_fields() {
        let base = config("fig6");
        let c = SweepVariable::EveIntensityScale.apply(&base, 10.0).unwrap();
        assert!((c.params.lambda_e - 1e-3).abs() < 1e-18);
        assert!((c.params.u_e - 5e-3).abs() < 1e-18);
        let c = SweepVariable::TxIntensityScale.apply(&base, 2.0).unwrap();
        assert_eq!(c.params.lambda_b, 2e-5);
        assert_eq!(c.params.u_b, 2e-3);
        assert_eq!(
            SweepVariable::NAntennas
                .apply(&base, 3.0)
                .unwrap()
                .params
                .n_antennas,
            3
        );
        assert!(SweepVariable::NAntennas.apply(&base, 2.5).is_err());
        assert!(SweepVariable::Phi.apply(&base, 1.5).is_err());
    }

    #[test]
    fn analytic_rows_fill_their_columns() {
        let c = config("fig2");
        let rows = evaluate(Quantity::Coverage, &c, &EvalOptions::default()).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].p_c.unwrap() > 0.0 && rows[0].mc_p_hat.is_none());
        let rows = evaluate(
            Quantity::Throughput,
            &config("fig5"),
            &EvalOptions::default(),
        )
        .unwrap();
        let r = &rows[0];
        assert!(
            (r.eta.unwrap() - r.r_s.unwrap() * r.p_c.unwrap() * r.p_sec_lower.unwrap()).abs()
                < 1e-15
        );
    }

    #[test]
    fn equal_thresholds_give_no_throughput() {
        let c = RunConfig {
            beta_db: 10.0,
            ..config("fig5")
        };
        let rows = evaluate(Quantity::Throughput, &c, &EvalOptions::default()).unwrap();
        assert_eq!(rows[0].eta, Some(0.0));
    }

    #[test]
    fn secrecy_validation_needs_eves() {
        assert!(validate(&config("fig2"), CheckKind::Secrecy, &[], &[0.0], false).is_err());
    }
}
