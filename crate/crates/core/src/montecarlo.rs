//! Monte Carlo reference engine.
//!
//! Each trial samples the network in a disk window, places the typical node
//! at the origin, draws Rayleigh-type fading gains and records the largest
//! SIR among candidate transmitters (coverage) or Eves (secrecy). One run
//! therefore answers every threshold at once.
//!
//! Randomness is keyed by `(master_seed, purpose)` and streamed by trial
//! index, so estimates do not depend on thread count or scheduling.
//! Transmitter-to-Eve gains are read at a position derived from the pair's
//! indices, which lets the secrecy trial evaluate Eves in any order and
//! makes both Eve models see identical noise gains.
//!
//! Interference from nodes outside the window is replaced by its mean (see
//! [`EdgeCorrection`]); with path loss exponents close to two the truncated
//! far field is otherwise comparable to a typical serving signal.

use alloc::vec::Vec;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check, Result};
use crate::math::{log, pow, sqrt, PI};
use crate::model::{check_beta, mixture_weights, NetworkParams, Thresholds};
use crate::pointprocess::{
    palm_condition, sample_realization, NetworkRealization, Point2, TypicalKind,
};
use crate::throughput::secrecy_rate;

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// What an Eve has to cancel before decoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum EveModel {
    /// Eves cancel every information signal; only artificial noise remains.
    #[default]
    WorstCaseSIC,
    /// Information beams of other transmitters also interfere at Eves.
    Optimistic,
}

/// Which node type sits at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum TypicalPolicy {
    Planar,
    Vehicular,
    /// Drawn per trial with the population weights of the node type in
    /// question (receivers for coverage, transmitters for secrecy).
    #[default]
    MixByWeights,
}

/// Treatment of interferers outside the window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum EdgeCorrection {
    /// Ignore them.
    Truncate,
    /// Add their mean interference at the receiving point.
    #[default]
    MeanField,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimConfig {
    pub n_trials: u64,
    /// Metres.
    pub window_radius: f64,
    pub master_seed: u64,
    pub eve_model: EveModel,
    pub typical_kind_policy: TypicalPolicy,
    pub edge_correction: EdgeCorrection,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            n_trials: 10_000,
            window_radius: 3_000.0,
            master_seed: 2024,
            eve_model: EveModel::WorstCaseSIC,
            typical_kind_policy: TypicalPolicy::MixByWeights,
            edge_correction: EdgeCorrection::MeanField,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        check(
            self.n_trials >= 1,
            "n_trials",
            self.n_trials as f64,
            "n_trials >= 1",
        )?;
        crate::pointprocess::check_radius(self.window_radius)
    }
}

/// A Bernoulli proportion with its Wilson 95% interval.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProbEstimate {
    pub p_hat: f64,
    pub std_err: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n_trials: u64,
}

impl ProbEstimate {
    pub fn from_counts(successes: u64, n_trials: u64) -> Self {
        let n = n_trials as f64;
        let p = successes as f64 / n;
        let z2 = Z_95 * Z_95;
        let denom = 1.0 + z2 / n;
        let center = (p + z2 / (2.0 * n)) / denom;
        let half = Z_95 / denom * sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
        Self {
            p_hat: p,
            std_err: sqrt(p * (1.0 - p) / n),
            ci_low: (center - half).clamp(0.0, p),
            ci_high: (center + half).clamp(p, 1.0),
            n_trials,
        }
    }

    pub fn half_width(&self) -> f64 {
        (self.ci_high - self.ci_low) / 2.0
    }

    pub fn contains(&self, p: f64) -> bool {
        self.ci_low <= p && p <= self.ci_high
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ThroughputEstimate {
    pub coverage: ProbEstimate,
    pub secrecy: ProbEstimate,
    pub r_s: f64,
    pub eta_hat: f64,
    /// Delta-method standard error of `eta_hat`, the two estimates being
    /// independent.
    pub eta_std_err: f64,
}

/// One line of the optional per-trial trace.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TraceRecord {
    pub trial: u64,
    pub typical_kind: TypicalKind,
    pub n_tx: usize,
    pub n_eve: usize,
    /// Largest SIR found, `-inf` dB when there was nothing to evaluate. For
    /// secrecy trials it is exact whenever it reaches the smallest threshold
    /// asked for; below that, Eves that cannot matter are skipped.
    pub max_sir_db: f64,
    /// Covered (coverage) or secure (secrecy) at the first threshold.
    pub outcome: bool,
}

/// Per-trial summary kept by the runner.
#[derive(Debug, Clone, Copy, PartialEq)]
struct TrialSummary {
    typical_kind: TypicalKind,
    n_tx: usize,
    n_eve: usize,
    max_sir: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
enum Purpose {
    CoverageNetwork = 1,
    CoverageGains = 2,
    SecrecyNetwork = 3,
    SecrecyGains = 4,
    SecrecyPairGains = 5,
    GainDraws = 6,
}

/// Generator for one purpose and trial: the key holds the master seed and
/// the purpose, the stream is the trial index.
fn trial_rng(master_seed: u64, purpose: Purpose, trial: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&master_seed.to_le_bytes());
    key[8..16].copy_from_slice(&(purpose as u64).to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(trial);
    rng
}

/// `Exp(1)` by inversion; consumes exactly one `u64`.
#[inline]
fn exp1<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    // 1 - U lies in (0, 1].
    -log(1.0 - rng.random::<f64>())
}

/// `Gamma(k, 1)` for integer `k` as a sum of `k` exponentials.
#[inline]
fn gamma_int<R: RngCore + ?Sized>(k: u32, rng: &mut R) -> f64 {
    (0..k).map(|_| exp1(rng)).sum()
}

/// Interferer gain at a legitimate receiver, `φE + (1-φ)/(N-1) G` with
/// `E ~ Exp(1)`, `G ~ Gamma(N-1, 1)`.
pub fn sample_mixture_gain<R: RngCore + ?Sized>(params: &NetworkParams, rng: &mut R) -> f64 {
    params.phi * exp1(rng) + params.an_power() * gamma_int(params.n_antennas - 1, rng)
}

/// Fading gains of one Palm-conditioned realization, in the iteration order
/// of [`NetworkRealization::transmitters`] and
/// [`NetworkRealization::eavesdroppers`].
#[derive(Debug, Clone, PartialEq)]
pub struct LinkGains {
    /// Beamforming gain `Gamma(N, 1)` of each transmitter towards the typical
    /// receiver, used when it serves.
    pub serving: Vec<f64>,
    /// Mixture gain of each transmitter towards the typical receiver, used
    /// when it interferes.
    pub interference: Vec<f64>,
    /// `Exp(1)` gain of the typical transmitter's information beam at each Eve.
    pub eve_signal: Vec<f64>,
    /// `(1-φ)/(N-1) · Gamma(N-1, 1)` artificial noise of the typical
    /// transmitter at each Eve.
    pub eve_own_noise: Vec<f64>,
}

/// Draws the per-node gains of a realization. Transmitter-to-Eve noise gains
/// are not included: a trial draws those lazily per pair.
pub fn sample_gains<R: RngCore + ?Sized>(
    realization: &NetworkRealization,
    params: &NetworkParams,
    rng: &mut R,
) -> Result<LinkGains> {
    check(
        realization.typical_kind.is_some(),
        "typical_kind",
        0.0,
        "realization must be Palm-conditioned",
    )?;
    let n = params.n_antennas;
    let n_tx = realization.transmitter_count();
    let n_eve = realization.eavesdropper_count();
    let mut gains = LinkGains {
        serving: Vec::with_capacity(n_tx),
        interference: Vec::with_capacity(n_tx),
        eve_signal: Vec::with_capacity(n_eve),
        eve_own_noise: Vec::with_capacity(n_eve),
    };
    for _ in 0..n_tx {
        gains.serving.push(gamma_int(n, rng));
        gains.interference.push(sample_mixture_gain(params, rng));
    }
    for _ in 0..n_eve {
        gains.eve_signal.push(exp1(rng));
        gains
            .eve_own_noise
            .push(params.an_power() * gamma_int(n - 1, rng));
    }
    Ok(gains)
}

/// Mean interference from outside the window of radius `radius`.
#[derive(Debug, Clone, Copy)]
struct FarField {
    alpha: f64,
    radius: f64,
    /// Mean gain times planar-equivalent intensity of all transmitters.
    planar_weight: f64,
    /// Mean gain times intensity on the typical road, if it carries
    /// transmitters.
    road_weight: f64,
}

/// Largest `|y|/R` used in the off-centre far-field series.
const FAR_FIELD_MAX_RATIO: f64 = 0.99;

impl FarField {
    fn new(
        params: &NetworkParams,
        radius: f64,
        mean_gain: f64,
        typical_road: bool,
        correction: EdgeCorrection,
    ) -> Self {
        let on = correction == EdgeCorrection::MeanField;
        let planar_weight = if on {
            mean_gain * (params.lambda_b + params.lambda_l * params.u_b)
        } else {
            0.0
        };
        let road_weight = if on && typical_road {
            mean_gain * params.u_b
        } else {
            0.0
        };
        Self {
            alpha: params.alpha,
            radius,
            planar_weight,
            road_weight,
        }
    }

    /// At the origin: `2π w R^{2-α}/(α-2) + 2 w_road R^{1-α}/(α-1)`.
    fn at_origin(&self) -> f64 {
        let a = self.alpha;
        let r = self.radius;
        2.0 * PI * self.planar_weight * pow(r, 2.0 - a) / (a - 2.0)
            + 2.0 * self.road_weight * pow(r, 1.0 - a) / (a - 1.0)
    }

    /// At `y` inside the window. The planar part averages `|x-y|^{-α}` over
    /// circles `|x| = ρ > |y|`, which gives
    /// `2π w R^{2-α} Σ_k c_k² (|y|/R)^{2k} / (α-2+2k)`, `c_k = (α/2)_k / k!`.
    /// The road part treats `y` as lying on the typical road.
    fn at(&self, y: &Point2) -> f64 {
        if self.planar_weight == 0.0 && self.road_weight == 0.0 {
            return 0.0;
        }
        let a = self.alpha;
        let r = self.radius;
        let ratio = (y.norm() / r).min(FAR_FIELD_MAX_RATIO);
        let x = ratio * ratio;
        let mut c = 1.0;
        let mut power = 1.0;
        let mut sum = 0.0;
        let mut k = 0.0;
        loop {
            let term = c * c * power / (a - 2.0 + 2.0 * k);
            sum += term;
            if term <= 1e-13 * sum {
                break;
            }
            c *= (a / 2.0 + k) / (k + 1.0);
            power *= x;
            k += 1.0;
        }
        let mut value = 2.0 * PI * self.planar_weight * pow(r, 2.0 - a) * sum;
        if self.road_weight > 0.0 {
            let t = y.y.abs().min(FAR_FIELD_MAX_RATIO * r);
            value += self.road_weight * (pow(r - t, 1.0 - a) + pow(r + t, 1.0 - a)) / (a - 1.0);
        }
        value
    }
}

fn choose_kind<R: RngCore + ?Sized>(
    policy: TypicalPolicy,
    planar_weight: f64,
    rng: &mut R,
) -> TypicalKind {
    match policy {
        TypicalPolicy::Planar => TypicalKind::PlanarNode,
        TypicalPolicy::Vehicular => TypicalKind::VehicularNode,
        TypicalPolicy::MixByWeights => {
            if rng.random::<f64>() < planar_weight {
                TypicalKind::PlanarNode
            } else {
                TypicalKind::VehicularNode
            }
        }
    }
}

fn conditioned_realization(
    params: &NetworkParams,
    sim: &SimConfig,
    purpose: Purpose,
    planar_weight: f64,
    trial: u64,
) -> Result<NetworkRealization> {
    let mut rng = trial_rng(sim.master_seed, purpose, trial);
    let kind = choose_kind(sim.typical_kind_policy, planar_weight, &mut rng);
    let realization = sample_realization(params, sim.window_radius, &mut rng)?;
    palm_condition(realization, kind, params, &mut rng)
}

/// The network seen by trial `trial` of a coverage run, receiver at the origin.
pub fn coverage_realization(
    params: &NetworkParams,
    sim: &SimConfig,
    trial: u64,
) -> Result<NetworkRealization> {
    params.validate()?;
    sim.validate()?;
    let (kappa_p, _) = mixture_weights(params.lambda_u, params.u_u * params.lambda_l);
    conditioned_realization(params, sim, Purpose::CoverageNetwork, kappa_p, trial)
}

/// The network seen by trial `trial` of a secrecy run, transmitter at the origin.
pub fn secrecy_realization(
    params: &NetworkParams,
    sim: &SimConfig,
    trial: u64,
) -> Result<NetworkRealization> {
    params.validate()?;
    sim.validate()?;
    let (rho_p, _) = mixture_weights(params.lambda_b, params.u_b * params.lambda_l);
    conditioned_realization(params, sim, Purpose::SecrecyNetwork, rho_p, trial)
}

fn coverage_trial(params: &NetworkParams, sim: &SimConfig, trial: u64) -> Result<TrialSummary> {
    let net = coverage_realization(params, sim, trial)?;
    let kind = net.typical_kind.unwrap_or(TypicalKind::PlanarNode);
    let mut rng = trial_rng(sim.master_seed, Purpose::CoverageGains, trial);
    let gains = sample_gains(&net, params, &mut rng)?;
    let far = FarField::new(
        params,
        sim.window_radius,
        1.0,
        kind == TypicalKind::VehicularNode,
        sim.edge_correction,
    )
    .at_origin();

    let alpha = params.alpha;
    let path: Vec<f64> = net.transmitters().map(|x| pow(x.norm(), -alpha)).collect();
    let received: Vec<f64> = path
        .iter()
        .zip(&gains.interference)
        .map(|(l, g)| l * g)
        .collect();
    // Keep the strongest interferer out of the sum so excluding it is exact.
    let strongest = (0..received.len()).fold(None, |best: Option<usize>, i| match best {
        Some(b) if received[b] >= received[i] => Some(b),
        _ => Some(i),
    });
    let others = neumaier(
        received
            .iter()
            .enumerate()
            .filter(|&(i, _)| Some(i) != strongest)
            .map(|(_, &v)| v),
    );
    let mut max_sir = 0.0f64;
    for i in 0..received.len() {
        let interference = if Some(i) == strongest {
            others
        } else {
            others + strongest.map_or(0.0, |s| received[s]) - received[i]
        };
        let sir = params.phi * gains.serving[i] * path[i] / (interference.max(0.0) + far);
        max_sir = max_sir.max(sir);
    }
    Ok(TrialSummary {
        typical_kind: kind,
        n_tx: received.len(),
        n_eve: net.eavesdropper_count(),
        max_sir,
    })
}

fn neumaier(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for x in values {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `u64` draws reserved per transmitter-Eve pair: `N-1` for the noise gain,
/// one for the information beam under the optimistic model.
fn draws_per_pair(params: &NetworkParams) -> u64 {
    u64::from(params.n_antennas)
}

/// Secrecy trial. Every Eve has the SIR bound `φ|q|²/(own noise + D^α ·
/// far-field at the origin)`; Eves are evaluated exactly in decreasing order
/// of that bound until it falls below both the running maximum and
/// `min_threshold`, or the running maximum exceeds `max_threshold`.
fn secrecy_trial(
    params: &NetworkParams,
    sim: &SimConfig,
    trial: u64,
    min_threshold: f64,
    max_threshold: f64,
) -> Result<TrialSummary> {
    let net = secrecy_realization(params, sim, trial)?;
    let kind = net.typical_kind.unwrap_or(TypicalKind::PlanarNode);
    let mut rng = trial_rng(sim.master_seed, Purpose::SecrecyGains, trial);
    let gains = sample_gains(&net, params, &mut rng)?;
    let optimistic = sim.eve_model == EveModel::Optimistic;
    let mean_gain = if optimistic { 1.0 } else { 1.0 - params.phi };
    let far = FarField::new(
        params,
        sim.window_radius,
        mean_gain,
        kind == TypicalKind::VehicularNode,
        sim.edge_correction,
    );
    let far_origin = far.at_origin();
    let alpha = params.alpha;
    let phi = params.phi;

    let eves: Vec<Point2> = net.eavesdroppers().collect();
    let txs: Vec<Point2> = net.transmitters().collect();
    let mut order: Vec<(f64, usize)> = eves
        .iter()
        .enumerate()
        .map(|(e, y)| {
            let bound = phi * gains.eve_signal[e]
                / (gains.eve_own_noise[e] + pow(y.norm(), alpha) * far_origin);
            (bound, e)
        })
        .filter(|&(bound, _)| bound > min_threshold)
        .collect();
    order.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));

    let mut pair_rng = trial_rng(sim.master_seed, Purpose::SecrecyPairGains, trial);
    let per_pair = draws_per_pair(params);
    let shape = params.n_antennas - 1;
    let an = params.an_power();
    let mut max_sir = 0.0f64;
    for (bound, e) in order {
        if bound <= max_sir || max_sir > max_threshold {
            break;
        }
        let y = eves[e];
        // Two 32-bit words per u64 draw.
        pair_rng.set_word_pos(u128::from(2 * per_pair) * (e as u128) * (txs.len() as u128));
        let mut interference = 0.0;
        for x in &txs {
            let noise = an * gamma_int(shape, &mut pair_rng);
            let info = exp1(&mut pair_rng);
            let g = if optimistic {
                noise + phi * info
            } else {
                noise
            };
            interference += g * pow(x.distance(&y), -alpha);
        }
        let d_alpha = pow(y.norm(), alpha);
        let sir = phi * gains.eve_signal[e]
            / (gains.eve_own_noise[e] + d_alpha * (interference + far.at(&y)));
        max_sir = max_sir.max(sir);
    }
    Ok(TrialSummary {
        typical_kind: kind,
        n_tx: txs.len(),
        n_eve: eves.len(),
        max_sir,
    })
}

#[cfg(feature = "parallel")]
fn run_trials<T: Send>(n: u64, f: impl Fn(u64) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn run_trials<T>(n: u64, f: impl Fn(u64) -> Result<T>) -> Result<Vec<T>> {
    (0..n).map(f).collect()
}

fn check_thresholds(values: &[f64], name: &'static str) -> Result<()> {
    check(!values.is_empty(), name, 0.0, "at least one threshold")?;
    for &v in values {
        check(
            v.is_finite() && v > 0.0,
            name,
            v,
            "thresholds must be finite and > 0",
        )?;
    }
    Ok(())
}

fn coverage_summaries(
    params: &NetworkParams,
    gammas: &[f64],
    sim: &SimConfig,
) -> Result<Vec<TrialSummary>> {
    params.validate()?;
    sim.validate()?;
    check_thresholds(gammas, "gamma")?;
    run_trials(sim.n_trials, |trial| coverage_trial(params, sim, trial))
}

fn secrecy_summaries(
    params: &NetworkParams,
    betas: &[f64],
    sim: &SimConfig,
) -> Result<Vec<TrialSummary>> {
    params.validate()?;
    sim.validate()?;
    check_thresholds(betas, "beta")?;
    let lo = betas.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = betas.iter().copied().fold(0.0, f64::max);
    run_trials(sim.n_trials, |trial| {
        secrecy_trial(params, sim, trial, lo, hi)
    })
}

fn covered(s: &TrialSummary, gamma: f64) -> bool {
    s.n_tx > 0 && s.max_sir >= gamma
}

fn secure(s: &TrialSummary, beta: f64) -> bool {
    s.max_sir <= beta
}

fn estimate(summaries: &[TrialSummary], hit: impl Fn(&TrialSummary) -> bool) -> ProbEstimate {
    let successes = summaries.iter().filter(|s| hit(s)).count() as u64;
    ProbEstimate::from_counts(successes, summaries.len() as u64)
}

fn trace(summaries: &[TrialSummary], outcome: impl Fn(&TrialSummary) -> bool) -> Vec<TraceRecord> {
    summaries
        .iter()
        .enumerate()
        .map(|(i, s)| TraceRecord {
            trial: i as u64,
            typical_kind: s.typical_kind,
            n_tx: s.n_tx,
            n_eve: s.n_eve,
            max_sir_db: 10.0 * libm::log10(s.max_sir),
            outcome: outcome(s),
        })
        .collect()
}

/// Max-SIR coverage probability at threshold `gamma` (linear).
pub fn simulate_coverage(
    params: &NetworkParams,
    gamma: f64,
    sim: &SimConfig,
) -> Result<ProbEstimate> {
    Ok(simulate_coverage_curve(params, &[gamma], sim)?[0])
}

/// Coverage at several thresholds from the same trials.
pub fn simulate_coverage_curve(
    params: &NetworkParams,
    gammas: &[f64],
    sim: &SimConfig,
) -> Result<Vec<ProbEstimate>> {
    let s = coverage_summaries(params, gammas, sim)?;
    Ok(gammas
        .iter()
        .map(|&g| estimate(&s, |t| covered(t, g)))
        .collect())
}

/// Coverage plus the per-trial trace, outcomes at `gamma`.
pub fn simulate_coverage_traced(
    params: &NetworkParams,
    gamma: f64,
    sim: &SimConfig,
) -> Result<(ProbEstimate, Vec<TraceRecord>)> {
    let s = coverage_summaries(params, &[gamma], sim)?;
    Ok((
        estimate(&s, |t| covered(t, gamma)),
        trace(&s, |t| covered(t, gamma)),
    ))
}

/// Probability that no Eve in the window exceeds SIR `beta` (linear).
pub fn simulate_secrecy(
    params: &NetworkParams,
    beta: f64,
    sim: &SimConfig,
) -> Result<ProbEstimate> {
    check_beta(beta)?;
    Ok(simulate_secrecy_curve(params, &[beta], sim)?[0])
}

/// Secrecy at several thresholds from the same trials.
pub fn simulate_secrecy_curve(
    params: &NetworkParams,
    betas: &[f64],
    sim: &SimConfig,
) -> Result<Vec<ProbEstimate>> {
    let s = secrecy_summaries(params, betas, sim)?;
    Ok(betas
        .iter()
        .map(|&b| estimate(&s, |t| secure(t, b)))
        .collect())
}

pub fn simulate_secrecy_traced(
    params: &NetworkParams,
    beta: f64,
    sim: &SimConfig,
) -> Result<(ProbEstimate, Vec<TraceRecord>)> {
    let s = secrecy_summaries(params, &[beta], sim)?;
    Ok((
        estimate(&s, |t| secure(t, beta)),
        trace(&s, |t| secure(t, beta)),
    ))
}

/// `η̂ = R_s p̂_c p̂_sec` from independent coverage and secrecy runs.
pub fn simulate_throughput(
    params: &NetworkParams,
    thresholds: &Thresholds,
    sim: &SimConfig,
) -> Result<ThroughputEstimate> {
    thresholds.validate()?;
    let coverage = simulate_coverage(params, thresholds.gamma, sim)?;
    let secrecy = simulate_secrecy(params, thresholds.beta, sim)?;
    let r_s = secrecy_rate(thresholds);
    let (p, q) = (coverage.p_hat, secrecy.p_hat);
    let var = r_s
        * r_s
        * (q * q * coverage.std_err * coverage.std_err + p * p * secrecy.std_err * secrecy.std_err);
    Ok(ThroughputEstimate {
        coverage,
        secrecy,
        r_s,
        eta_hat: r_s * p * q,
        eta_std_err: sqrt(var),
    })
}

/// How often the nearest Eve to a transmitter at the origin is of each type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearestEveFrequencies {
    pub off_typical_road: ProbEstimate,
    pub on_typical_road: ProbEstimate,
    pub planar: ProbEstimate,
    /// No Eve in the window.
    pub none: ProbEstimate,
}

/// Classifies the nearest Eve over `sim.n_trials` realizations, with the
/// typical transmitter type fixed by `typical_kind`.
pub fn simulate_nearest_eve(
    params: &NetworkParams,
    typical_kind: TypicalKind,
    sim: &SimConfig,
) -> Result<NearestEveFrequencies> {
    params.validate()?;
    sim.validate()?;
    let policy = match typical_kind {
        TypicalKind::PlanarNode => TypicalPolicy::Planar,
        TypicalKind::VehicularNode => TypicalPolicy::Vehicular,
    };
    let sim = SimConfig {
        typical_kind_policy: policy,
        ..*sim
    };
    // 0: off typical road, 1: on it, 2: planar, 3: none.
    let classes = run_trials(sim.n_trials, |trial| {
        let net = secrecy_realization(params, &sim, trial)?;
        let mut best = (f64::INFINITY, 3u8);
        for e in &net.planar_eve {
            best = closer(best, e.norm(), 2);
        }
        for (i, road) in net.roads.iter().enumerate() {
            let class = if Some(i) == net.typical_road_index {
                1
            } else {
                0
            };
            for &t in &road.nodes_e {
                best = closer(best, road.distance_to_origin(t), class);
            }
        }
        Ok(best.1)
    })?;
    let count = |c: u8| {
        ProbEstimate::from_counts(
            classes.iter().filter(|&&k| k == c).count() as u64,
            sim.n_trials,
        )
    };
    Ok(NearestEveFrequencies {
        off_typical_road: count(0),
        on_typical_road: count(1),
        planar: count(2),
        none: count(3),
    })
}

fn closer(best: (f64, u8), d: f64, class: u8) -> (f64, u8) {
    if d < best.0 {
        (d, class)
    } else {
        best
    }
}

/// `n` independent mixture gains from the seed's gain-draw stream, for
/// moment checks.
pub fn mixture_gain_draws(params: &NetworkParams, n: usize, master_seed: u64) -> Result<Vec<f64>> {
    params.validate()?;
    let mut rng = trial_rng(master_seed, Purpose::GainDraws, 0);
    Ok((0..n)
        .map(|_| sample_mixture_gain(params, &mut rng))
        .collect())
}
