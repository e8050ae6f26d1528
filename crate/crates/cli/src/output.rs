//! CSV records. Every row repeats the resolved configuration it came from.

use std::io::Write;

use serde::Serialize;
use v2x_secrecy::montecarlo::{EdgeCorrection, EveModel, TypicalPolicy};

use crate::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Analytic,
    Montecarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Coverage,
    Secrecy,
    Throughput,
}

/// One output record. Empty cells mean "not computed for this row".
///
/// `mc_*` columns describe the simulated coverage probability on coverage
/// rows and the simulated secrecy probability on secrecy and throughput rows.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub quantity: Quantity,
    pub engine: Engine,
    pub sweep_variable: Option<String>,
    pub sweep_value: Option<f64>,
    pub lambda_b: f64,
    pub lambda_u: f64,
    pub lambda_e: f64,
    pub lambda_l: f64,
    pub u_b: f64,
    pub u_u: f64,
    pub u_e: f64,
    pub n_antennas: u32,
    pub phi: f64,
    pub alpha: f64,
    pub gamma_db: f64,
    pub beta_db: f64,
    pub n_trials: u64,
    pub window_radius: f64,
    pub master_seed: u64,
    pub eve_model: EveModel,
    pub typical_kind_policy: TypicalPolicy,
    pub edge_correction: EdgeCorrection,
    pub fast_bounds: bool,
    pub p_c: Option<f64>,
    pub p_c_planar: Option<f64>,
    pub p_c_vehicular: Option<f64>,
    pub p_sec_lower: Option<f64>,
    pub p_sec_upper: Option<f64>,
    pub p_sec_lower_planar: Option<f64>,
    pub p_sec_upper_planar: Option<f64>,
    pub p_sec_lower_vehicular: Option<f64>,
    pub p_sec_upper_vehicular: Option<f64>,
    /// bits/s/Hz.
    pub r_s: Option<f64>,
    /// bits/s/Hz.
    pub eta: Option<f64>,
    pub eta_std_err: Option<f64>,
    pub mc_p_hat: Option<f64>,
    pub mc_std_err: Option<f64>,
    pub mc_ci_low: Option<f64>,
    pub mc_ci_high: Option<f64>,
    /// Set by `validate`: whether the analytic value keeps its stated
    /// relation to the simulated interval.
    pub relation_holds: Option<bool>,
    pub runtime_ms: Option<f64>,
}

impl ResultRow {
    pub fn new(quantity: Quantity, engine: Engine, config: &RunConfig) -> Self {
        let p = &config.params;
        let s = &config.sim;
        Self {
            quantity,
            engine,
            sweep_variable: None,
            sweep_value: None,
            lambda_b: p.lambda_b,
            lambda_u: p.lambda_u,
            lambda_e: p.lambda_e,
            lambda_l: p.lambda_l,
            u_b: p.u_b,
            u_u: p.u_u,
            u_e: p.u_e,
            n_antennas: p.n_antennas,
            phi: p.phi,
            alpha: p.alpha,
            gamma_db: config.gamma_db,
            beta_db: config.beta_db,
            n_trials: s.n_trials,
            window_radius: s.window_radius,
            master_seed: s.master_seed,
            eve_model: s.eve_model,
            typical_kind_policy: s.typical_kind_policy,
            edge_correction: s.edge_correction,
            fast_bounds: config.fast_bounds,
            p_c: None,
            p_c_planar: None,
            p_c_vehicular: None,
            p_sec_lower: None,
            p_sec_upper: None,
            p_sec_lower_planar: None,
            p_sec_upper_planar: None,
            p_sec_lower_vehicular: None,
            p_sec_upper_vehicular: None,
            r_s: None,
            eta: None,
            eta_std_err: None,
            mc_p_hat: None,
            mc_std_err: None,
            mc_ci_low: None,
            mc_ci_high: None,
            relation_holds: None,
            runtime_ms: None,
        }
    }

    pub fn with_estimate(mut self, e: &v2x_secrecy::montecarlo::ProbEstimate) -> Self {
        self.mc_p_hat = Some(e.p_hat);
        self.mc_std_err = Some(e.std_err);
        self.mc_ci_low = Some(e.ci_low);
        self.mc_ci_high = Some(e.ci_high);
        self
    }
}

fn writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

/// Header plus one line per row, LF terminated.
pub fn write_rows<W: Write, R: Serialize>(out: W, rows: &[R]) -> anyhow::Result<()> {
    let mut w = writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRow {
    pub trial: u64,
    pub typical_kind: &'static str,
    pub n_tx: usize,
    pub n_eve: usize,
    pub max_sir_db: f64,
    pub outcome: bool,
}

impl From<&v2x_secrecy::montecarlo::TraceRecord> for TraceRow {
    fn from(r: &v2x_secrecy::montecarlo::TraceRecord) -> Self {
        Self {
            trial: r.trial,
            typical_kind: match r.typical_kind {
                v2x_secrecy::pointprocess::TypicalKind::PlanarNode => "planar",
                v2x_secrecy::pointprocess::TypicalKind::VehicularNode => "vehicular",
            },
            n_tx: r.n_tx,
            n_eve: r.n_eve,
            max_sir_db: r.max_sir_db,
            outcome: r.outcome,
        }
    }
}
