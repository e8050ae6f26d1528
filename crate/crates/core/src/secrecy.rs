//! Secrecy-probability bounds against non-colluding worst-case Eves.
//!
//! An Eve at distance `d` from the typical transmitter intercepts with
//! probability
//!
//! `Λ(d) = (1+s)^{1-N} · L_Φ(s d^α) · L_Ψ(s d^α) · Π_roads L_ψ(s d^α)`,
//!
//! with `s = (φ⁻¹-1)β/(N-1)`. The first factor is the transmitter's own
//! artificial noise; the others are the noise of every other transmitter,
//! seen with a gamma(N-1) gain. Writing `m = s^{1/α}`, every factor depends on
//! the distance only through `c = m d`, so [`FieldKernel`] tables serve all
//! of them.
//!
//! Lower bounds take every Eve into account through the probability
//! generating functional of its population; upper bounds keep only the
//! nearest Eve.

use alloc::vec::Vec;

use crate::coverage::{clamp_probability, unit_exponent_scale, Estimate};
use crate::error::{check, Error, Result};
use crate::laplace::{secrecy_gain, FieldKernel};
use crate::math::{abs, cos, exp, expm1, log1p, pow, sin, sqrt, PI};
use crate::model::{check_beta, mixture_weights, secrecy_scale, NetworkParams};
use crate::numerics::{
    try_integrate_finite, try_integrate_semi_infinite, GaussLegendre, QuadratureSpec, TailPolicy,
};

/// Node counts tried, in order, for the nearest-Eve angular average.
const ANGLE_RULES: [usize; 6] = [32, 64, 128, 256, 512, 1024];
/// Largest accepted gap between consecutive angular rules.
const ANGLE_RULE_TOL: f64 = 1e-6;

/// Every bound at one Eve threshold, plus the transmitter-type mixtures.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SecrecyBounds {
    pub lower_planar: f64,
    pub upper_planar: f64,
    pub lower_vehicular_full: f64,
    pub lower_vehicular_fast: f64,
    pub upper_vehicular: f64,
    pub upper_vehicular_fast: f64,
    pub lower_total: f64,
    pub upper_total: f64,
    pub beta: f64,
}

/// Which vehicular bounds enter the mixture totals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VehicularForm {
    /// Own-road transforms of off-road Eves dropped; one integral less.
    #[default]
    Fast,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum EveKind {
    VehicularOffTypicalRoad,
    /// Only exists when the typical transmitter is itself a vehicle.
    VehicularOnTypicalRoad,
    Planar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum TransmitterKind {
    PlanarTx,
    VehicularTx,
}

/// The nearest Eve is of type `kind`, seen from a transmitter of type
/// `transmitter_kind`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MinDistEvent {
    pub kind: EveKind,
    pub transmitter_kind: TransmitterKind,
}

impl MinDistEvent {
    pub fn new(kind: EveKind, transmitter_kind: TransmitterKind) -> Result<Self> {
        let event = Self {
            kind,
            transmitter_kind,
        };
        event.validate()?;
        Ok(event)
    }

    pub fn validate(&self) -> Result<()> {
        if self.kind == EveKind::VehicularOnTypicalRoad
            && self.transmitter_kind == TransmitterKind::PlanarTx
        {
            return Err(Error::Unsupported(
                "a planar transmitter has no typical road to host an Eve".into(),
            ));
        }
        Ok(())
    }

    /// The events that partition "some Eve is nearest" for a transmitter kind.
    pub fn all_for(transmitter_kind: TransmitterKind) -> Vec<Self> {
        let kinds: &[EveKind] = match transmitter_kind {
            TransmitterKind::PlanarTx => &[EveKind::VehicularOffTypicalRoad, EveKind::Planar],
            TransmitterKind::VehicularTx => &[
                EveKind::VehicularOffTypicalRoad,
                EveKind::VehicularOnTypicalRoad,
                EveKind::Planar,
            ],
        };
        kinds
            .iter()
            .map(|&kind| Self {
                kind,
                transmitter_kind,
            })
            .collect()
    }
}

/// Secrecy evaluator for one parameter set. Building it tabulates the road
/// profiles of the artificial-noise gain once.
#[derive(Debug, Clone)]
pub struct SecrecyEngine {
    params: NetworkParams,
    kernel: FieldKernel,
    quad: QuadratureSpec,
    angle_rules: Vec<GaussLegendre>,
}

/// Interception probabilities for one threshold.
#[derive(Clone, Copy)]
struct EveChannel<'a> {
    params: &'a NetworkParams,
    kernel: &'a FieldKernel,
    /// `s^{1/α}`.
    m: f64,
    /// `(1-N) ln(1+s)`.
    ln_base: f64,
}

impl EveChannel<'_> {
    /// Exponent of the planar and line-process noise fields at distance `d`.
    fn field(&self, d: f64) -> f64 {
        let c = self.m * d;
        let p = self.params;
        self.kernel.planar_exponent(p.lambda_b, c)
            + self.kernel.line_field_exponent(p.lambda_l, p.u_b, c)
    }

    /// Exponent of one road at distance `h` from the Eve.
    fn road(&self, d: f64, h: f64) -> f64 {
        self.kernel
            .road_exponent(self.params.u_b, self.m * d, abs(h))
    }

    fn intercept(&self, exponent: f64) -> f64 {
        exp(self.ln_base - exponent)
    }

    /// Whether the noise seen by an Eve grows with distance, which every
    /// lower-bound integral needs to converge.
    fn decays(&self, with_roads: bool) -> bool {
        let p = self.params;
        p.lambda_b > 0.0 || p.lambda_l * p.u_b > 0.0 || (with_roads && p.u_b > 0.0)
    }

    fn scale(&self, roads: f64) -> f64 {
        unit_exponent_scale(|d| self.field(d) + roads * self.road(d, 0.0))
    }
}

enum Setup<'a> {
    Exact(f64),
    Channel(EveChannel<'a>),
}

/// Nearest-Eve void probability pieces at distance `τ`.
struct Void {
    /// `2λ_l ∫_0^τ (1 - e^{-2u_e√(τ²-r²)}) dr`.
    line: f64,
    /// `4λ_l u_e ∫_0^τ τ e^{-2u_e√(τ²-r²)} / √(τ²-r²) dr`.
    line_density: f64,
}

impl SecrecyEngine {
    pub fn new(params: &NetworkParams, quad: &QuadratureSpec) -> Result<Self> {
        params.validate()?;
        quad.validate()?;
        let kernel = FieldKernel::new(secrecy_gain(params), params.alpha, quad)?;
        Ok(Self::with_kernel(params, kernel, quad))
    }

    /// Reuses a kernel built for the gamma(N-1) gain and the same path loss.
    pub fn with_kernel(params: &NetworkParams, kernel: FieldKernel, quad: &QuadratureSpec) -> Self {
        Self {
            params: *params,
            kernel,
            quad: *quad,
            angle_rules: ANGLE_RULES.iter().map(|&n| GaussLegendre::new(n)).collect(),
        }
    }

    pub fn params(&self) -> &NetworkParams {
        &self.params
    }

    pub fn kernel(&self) -> &FieldKernel {
        &self.kernel
    }

    fn setup(&self, beta: f64, tx: TransmitterKind) -> Result<Setup<'_>> {
        check_beta(beta)?;
        let p = &self.params;
        let eves = p.lambda_e > 0.0
            || p.lambda_l * p.u_e > 0.0
            || (tx == TransmitterKind::VehicularTx && p.u_e > 0.0);
        if !eves {
            return Ok(Setup::Exact(1.0));
        }
        if p.phi == 1.0 {
            // No artificial noise: a worst-case Eve always decodes.
            return Ok(Setup::Exact(0.0));
        }
        let s = secrecy_scale(p.phi, p.n_antennas, beta);
        Ok(Setup::Channel(EveChannel {
            params: p,
            kernel: &self.kernel,
            m: pow(s, 1.0 / p.alpha),
            ln_base: -f64::from(p.n_antennas - 1) * log1p(s),
        }))
    }

    /// Lower bound for a planar transmitter.
    pub fn lower_planar(&self, beta: f64) -> Result<Estimate> {
        let ch = match self.setup(beta, TransmitterKind::PlanarTx)? {
            Setup::Exact(v) => return Ok(exact(v)),
            Setup::Channel(ch) => ch,
        };
        Ok(from_exponent(self.planar_tx_exponent(&ch)?))
    }

    /// Lower bound for a vehicular transmitter with the own-road transforms of
    /// off-road Eves dropped.
    pub fn lower_vehicular_fast(&self, beta: f64) -> Result<Estimate> {
        let ch = match self.setup(beta, TransmitterKind::VehicularTx)? {
            Setup::Exact(v) => return Ok(exact(v)),
            Setup::Channel(ch) => ch,
        };
        let a = self.planar_tx_exponent(&ch)?;
        let b = self.typical_road_exponent(&ch)?;
        Ok(from_exponent(add(a, b)))
    }

    /// Lower bound for a vehicular transmitter, keeping the typical road's
    /// noise at every Eve. Three nested integrals; the expensive path.
    pub fn lower_vehicular_full(&self, beta: f64) -> Result<Estimate> {
        let ch = match self.setup(beta, TransmitterKind::VehicularTx)? {
            Setup::Exact(v) => return Ok(exact(v)),
            Setup::Channel(ch) => ch,
        };
        let p = &self.params;
        let mut total = exact(0.0);
        if p.lambda_l * p.u_e > 0.0 {
            let t = if ch.decays(true) {
                angular_line_term(
                    p.lambda_l,
                    p.u_e,
                    |r, t, theta| {
                        let d = sqrt(r * r + t * t);
                        let h = r * sin(theta) - t * cos(theta);
                        Ok(ch.intercept(ch.field(d) + ch.road(d, 0.0) + ch.road(d, h)))
                    },
                    ch.scale(2.0),
                    &self.quad,
                )?
            } else {
                infinite()
            };
            total = add(total, t);
        }
        if p.lambda_e > 0.0 {
            let t = if ch.decays(true) {
                angular_planar_term(
                    p.lambda_e,
                    |r, theta| Ok(ch.intercept(ch.field(r) + ch.road(r, r * sin(theta)))),
                    ch.scale(1.0),
                    &self.quad,
                )?
            } else {
                infinite()
            };
            total = add(total, t);
        }
        total = add(total, self.typical_road_exponent(&ch)?);
        Ok(from_exponent(total))
    }

    /// Upper bound for a planar transmitter from the nearest Eve alone.
    pub fn upper_planar(&self, beta: f64) -> Result<Estimate> {
        self.nearest_eve_bound(beta, TransmitterKind::PlanarTx, true)
    }

    /// Upper bound for a vehicular transmitter, averaging the typical road's
    /// noise over the bearing of the nearest Eve.
    pub fn upper_vehicular(&self, beta: f64) -> Result<Estimate> {
        self.nearest_eve_bound(beta, TransmitterKind::VehicularTx, true)
    }

    /// As [`Self::upper_vehicular`] with the typical road taken to pass
    /// through the Eve, which can only raise the bound.
    pub fn upper_vehicular_fast(&self, beta: f64) -> Result<Estimate> {
        self.nearest_eve_bound(beta, TransmitterKind::VehicularTx, false)
    }

    /// All six bounds and the transmitter-type mixtures.
    pub fn bounds(&self, beta: f64, form: VehicularForm) -> Result<SecrecyBounds> {
        let p = &self.params;
        let lower_planar = self.lower_planar(beta)?.value;
        let upper_planar = self.upper_planar(beta)?.value;
        let lower_vehicular_full = self.lower_vehicular_full(beta)?.value;
        let lower_vehicular_fast = self.lower_vehicular_fast(beta)?.value;
        let upper_vehicular = self.upper_vehicular(beta)?.value;
        let upper_vehicular_fast = self.upper_vehicular_fast(beta)?.value;
        let (rho_p, rho_v) = mixture_weights(p.lambda_b, p.u_b * p.lambda_l);
        let (lower_v, upper_v) = match form {
            VehicularForm::Fast => (lower_vehicular_fast, upper_vehicular_fast),
            VehicularForm::Full => (lower_vehicular_full, upper_vehicular),
        };
        Ok(SecrecyBounds {
            lower_planar,
            upper_planar,
            lower_vehicular_full,
            lower_vehicular_fast,
            upper_vehicular,
            upper_vehicular_fast,
            lower_total: rho_p * lower_planar + rho_v * lower_v,
            upper_total: rho_p * upper_planar + rho_v * upper_v,
            beta,
        })
    }

    /// The transmitter-type mixture of the lower bounds only.
    pub fn lower_total(&self, beta: f64, form: VehicularForm) -> Result<f64> {
        let p = &self.params;
        let (rho_p, rho_v) = mixture_weights(p.lambda_b, p.u_b * p.lambda_l);
        let planar = if rho_p > 0.0 {
            self.lower_planar(beta)?.value
        } else {
            0.0
        };
        let vehicular = match (rho_v > 0.0, form) {
            (false, _) => 0.0,
            (true, VehicularForm::Fast) => self.lower_vehicular_fast(beta)?.value,
            (true, VehicularForm::Full) => self.lower_vehicular_full(beta)?.value,
        };
        Ok(rho_p * planar + rho_v * vehicular)
    }

    /// Density of the nearest-Eve distance jointly with its type.
    pub fn min_dist_pdf(&self, tau: f64, event: MinDistEvent) -> Result<f64> {
        density_of(&self.params, &self.quad, tau, event)
    }

    /// Eves off the typical road of a planar transmitter: road-borne Eves and
    /// planar Eves, both through the generating functional. `2λ_l ∫ (1 -
    /// e^{-2u_e ∫Λ dt}) dr + 2πλ_e ∫ Λ r dr`.
    fn planar_tx_exponent(&self, ch: &EveChannel<'_>) -> Result<Estimate> {
        let p = &self.params;
        let mut total = exact(0.0);
        if p.lambda_l * p.u_e > 0.0 {
            let t = if ch.decays(true) {
                collapsed_line_term(
                    p.lambda_l,
                    p.u_e,
                    |r, t| {
                        let d = sqrt(r * r + t * t);
                        Ok(ch.intercept(ch.field(d) + ch.road(d, 0.0)))
                    },
                    ch.scale(1.0),
                    &self.quad,
                )?
            } else {
                infinite()
            };
            total = add(total, t);
        }
        if p.lambda_e > 0.0 {
            let t = if ch.decays(false) {
                collapsed_planar_term(
                    p.lambda_e,
                    |r| Ok(ch.intercept(ch.field(r))),
                    ch.scale(0.0),
                    &self.quad,
                )?
            } else {
                infinite()
            };
            total = add(total, t);
        }
        Ok(total)
    }

    /// Eves on the typical road: `2u_e ∫_0^∞ Λ(t) dt`.
    fn typical_road_exponent(&self, ch: &EveChannel<'_>) -> Result<Estimate> {
        let p = &self.params;
        if p.u_e == 0.0 {
            return Ok(exact(0.0));
        }
        if !ch.decays(true) {
            return Ok(infinite());
        }
        typical_road_term(
            p.u_e,
            |t| Ok(ch.intercept(ch.field(t) + ch.road(t, 0.0))),
            ch.scale(1.0),
            &self.quad,
        )
    }

    fn nearest_eve_bound(
        &self,
        beta: f64,
        tx: TransmitterKind,
        bearing_average: bool,
    ) -> Result<Estimate> {
        let ch = match self.setup(beta, tx)? {
            Setup::Exact(v) => return Ok(exact(v)),
            Setup::Channel(ch) => ch,
        };
        let mut scale = void_scale(&self.params, tx);
        if ch.decays(tx == TransmitterKind::VehicularTx) {
            scale = scale.min(ch.scale(1.0));
        }
        let spec = semi_infinite_spec(&self.quad, scale);
        let r = try_integrate_semi_infinite(
            |tau| {
                let v = void(&self.params, &self.quad, tau)?;
                let [off, on, planar] = event_densities(&self.params, tau, &v, tx);
                let field = ch.field(tau);
                let own = ch.road(tau, 0.0);
                Ok::<_, Error>(match tx {
                    TransmitterKind::PlanarTx => {
                        ch.intercept(field + own) * off + ch.intercept(field) * planar
                    }
                    TransmitterKind::VehicularTx => {
                        let typical = if bearing_average {
                            self.bearing_average(&ch, tau)
                        } else {
                            exp(-own)
                        };
                        ch.intercept(field + own) * (typical * off + on)
                            + ch.intercept(field) * typical * planar
                    }
                })
            },
            0.0,
            &spec,
        )?;
        clamp_probability("secrecy upper bound", 1.0 - r.value, r.error_estimate)
    }

    /// Mean over a uniform bearing `θ` of the typical road's transform at an
    /// Eve a distance `τ` away, whose offset from that road is `τ|sin θ|`.
    fn bearing_average(&self, ch: &EveChannel<'_>, tau: f64) -> f64 {
        let g = |theta: f64| exp(-ch.road(tau, tau * sin(theta)));
        let mut prev = self.angle_rules[0].integrate(0.0, PI / 2.0, g) * (2.0 / PI);
        let mut current = prev;
        for rule in &self.angle_rules[1..] {
            current = rule.integrate(0.0, PI / 2.0, g) * (2.0 / PI);
            if abs(current - prev) <= ANGLE_RULE_TOL {
                break;
            }
            prev = current;
        }
        current
    }
}

fn void(params: &NetworkParams, quad: &QuadratureSpec, tau: f64) -> Result<Void> {
    let p = params;
    if p.lambda_l * p.u_e == 0.0 || tau == 0.0 {
        return Ok(Void {
            line: 0.0,
            line_density: 0.0,
        });
    }
    // r = τ sin u removes the inverse square root at r = τ.
    let z = 2.0 * p.u_e * tau;
    let spec = quad.tightened();
    let line = try_integrate_finite(
        |u| Ok::<_, Error>(-expm1(-z * cos(u)) * cos(u)),
        0.0,
        PI / 2.0,
        &spec,
    )?;
    let density = try_integrate_finite(|u| Ok::<_, Error>(exp(-z * cos(u))), 0.0, PI / 2.0, &spec)?;
    Ok(Void {
        line: 2.0 * p.lambda_l * tau * line.value,
        line_density: 4.0 * p.lambda_l * p.u_e * tau * density.value,
    })
}

/// `[off typical road, on typical road, planar]` densities at `τ`.
fn event_densities(params: &NetworkParams, tau: f64, void: &Void, tx: TransmitterKind) -> [f64; 3] {
    let p = params;
    let mut exponent = void.line + p.lambda_e * PI * tau * tau;
    if tx == TransmitterKind::VehicularTx {
        exponent += 2.0 * p.u_e * tau;
    }
    let none_closer = exp(-exponent);
    let on = match tx {
        TransmitterKind::PlanarTx => 0.0,
        TransmitterKind::VehicularTx => 2.0 * p.u_e * none_closer,
    };
    [
        void.line_density * none_closer,
        on,
        2.0 * p.lambda_e * PI * tau * none_closer,
    ]
}

/// Distance at which the nearest-Eve void exponent reaches about one,
/// from `V(τ) ≈ min(πλ_l u_e τ², 2λ_l τ)`.
fn void_scale(params: &NetworkParams, tx: TransmitterKind) -> f64 {
    let p = params;
    let vehicular = tx == TransmitterKind::VehicularTx;
    unit_exponent_scale(|t| {
        let line = (PI * p.lambda_l * p.u_e * t * t).min(2.0 * p.lambda_l * t);
        let own = if vehicular { 2.0 * p.u_e * t } else { 0.0 };
        line + p.lambda_e * PI * t * t + own
    })
}

fn density_of(
    params: &NetworkParams,
    quad: &QuadratureSpec,
    tau: f64,
    event: MinDistEvent,
) -> Result<f64> {
    event.validate()?;
    check(tau.is_finite() && tau >= 0.0, "tau", tau, "tau >= 0")?;
    let v = void(params, quad, tau)?;
    let [off, on, planar] = event_densities(params, tau, &v, event.transmitter_kind);
    Ok(match event.kind {
        EveKind::VehicularOffTypicalRoad => off,
        EveKind::VehicularOnTypicalRoad => on,
        EveKind::Planar => planar,
    })
}

fn exact(value: f64) -> Estimate {
    Estimate {
        value,
        error_estimate: 0.0,
    }
}

fn infinite() -> Estimate {
    exact(f64::INFINITY)
}

fn add(a: Estimate, b: Estimate) -> Estimate {
    Estimate {
        value: a.value + b.value,
        error_estimate: a.error_estimate + b.error_estimate,
    }
}

/// `exp(-T)` with the error of `T` propagated to first order.
fn from_exponent(t: Estimate) -> Estimate {
    let value = exp(-t.value);
    Estimate {
        value,
        error_estimate: if value > 0.0 {
            value * t.error_estimate
        } else {
            0.0
        },
    }
}

fn semi_infinite_spec(quad: &QuadratureSpec, scale: f64) -> QuadratureSpec {
    QuadratureSpec {
        tail_cut: TailPolicy::RationalMap { scale },
        ..*quad
    }
}

/// `2λ_l ∫_0^∞ (1 - exp(-2u ∫_0^∞ k(r, t) dt)) dr` for a kernel even in `t`.
/// Error estimates cover the outer integral; inner ones run ten times tighter.
pub(crate) fn collapsed_line_term(
    lambda_l: f64,
    u: f64,
    kernel: impl Fn(f64, f64) -> Result<f64>,
    scale: f64,
    quad: &QuadratureSpec,
) -> Result<Estimate> {
    let outer = semi_infinite_spec(quad, scale);
    let inner = outer.tightened();
    let r = try_integrate_semi_infinite(
        |r| {
            let along = try_integrate_semi_infinite(|t| kernel(r, t), 0.0, &inner)?;
            Ok::<_, Error>(-expm1(-2.0 * u * along.value))
        },
        0.0,
        &outer,
    )?;
    Ok(Estimate {
        value: 2.0 * lambda_l * r.value,
        error_estimate: 2.0 * lambda_l * r.error_estimate,
    })
}

/// `(λ_l/π) ∫_0^{2π} dθ ∫_0^∞ dr (1 - exp(-u ∫_ℝ k(r, t, θ) dt))`, roads
/// parametrised by their distance `r` and normal angle `θ`.
pub(crate) fn angular_line_term(
    lambda_l: f64,
    u: f64,
    kernel: impl Fn(f64, f64, f64) -> Result<f64>,
    scale: f64,
    quad: &QuadratureSpec,
) -> Result<Estimate> {
    let middle = semi_infinite_spec(quad, scale).tightened();
    let inner = middle.tightened();
    let r = try_integrate_finite(
        |theta| {
            let radial = try_integrate_semi_infinite(
                |r| {
                    let along = try_integrate_semi_infinite(
                        |t| Ok::<_, Error>(kernel(r, t, theta)? + kernel(r, -t, theta)?),
                        0.0,
                        &inner,
                    )?;
                    Ok::<_, Error>(-expm1(-u * along.value))
                },
                0.0,
                &middle,
            )?;
            Ok::<_, Error>(radial.value)
        },
        0.0,
        2.0 * PI,
        quad,
    )?;
    let w = lambda_l / PI;
    Ok(Estimate {
        value: w * r.value,
        error_estimate: w * r.error_estimate,
    })
}

/// `2πλ ∫_0^∞ k(r) r dr`.
pub(crate) fn collapsed_planar_term(
    intensity: f64,
    kernel: impl Fn(f64) -> Result<f64>,
    scale: f64,
    quad: &QuadratureSpec,
) -> Result<Estimate> {
    let r = try_integrate_semi_infinite(
        |r| Ok::<_, Error>(kernel(r)? * r),
        0.0,
        &semi_infinite_spec(quad, scale),
    )?;
    let w = 2.0 * PI * intensity;
    Ok(Estimate {
        value: w * r.value,
        error_estimate: w * r.error_estimate,
    })
}

/// `λ ∫_0^{2π} ∫_0^∞ k(r, θ) r dr dθ`.
pub(crate) fn angular_planar_term(
    intensity: f64,
    kernel: impl Fn(f64, f64) -> Result<f64>,
    scale: f64,
    quad: &QuadratureSpec,
) -> Result<Estimate> {
    let inner = semi_infinite_spec(quad, scale).tightened();
    let r = try_integrate_finite(
        |theta| {
            let radial = try_integrate_semi_infinite(
                |r| Ok::<_, Error>(kernel(r, theta)? * r),
                0.0,
                &inner,
            )?;
            Ok::<_, Error>(radial.value)
        },
        0.0,
        2.0 * PI,
        quad,
    )?;
    Ok(Estimate {
        value: intensity * r.value,
        error_estimate: intensity * r.error_estimate,
    })
}

/// `2u ∫_0^∞ k(t) dt`.
pub(crate) fn typical_road_term(
    u: f64,
    kernel: impl Fn(f64) -> Result<f64>,
    scale: f64,
    quad: &QuadratureSpec,
) -> Result<Estimate> {
    let r = try_integrate_semi_infinite(kernel, 0.0, &semi_infinite_spec(quad, scale))?;
    Ok(Estimate {
        value: 2.0 * u * r.value,
        error_estimate: 2.0 * u * r.error_estimate,
    })
}

pub fn secrecy_lb_planar(params: &NetworkParams, beta: f64, quad: &QuadratureSpec) -> Result<f64> {
    check_beta(beta)?;
    Ok(SecrecyEngine::new(params, quad)?.lower_planar(beta)?.value)
}

pub fn secrecy_ub_planar(params: &NetworkParams, beta: f64, quad: &QuadratureSpec) -> Result<f64> {
    check_beta(beta)?;
    Ok(SecrecyEngine::new(params, quad)?.upper_planar(beta)?.value)
}

pub fn secrecy_lb_vehicular_full(
    params: &NetworkParams,
    beta: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    check_beta(beta)?;
    Ok(SecrecyEngine::new(params, quad)?
        .lower_vehicular_full(beta)?
        .value)
}

pub fn secrecy_lb_vehicular_fast(
    params: &NetworkParams,
    beta: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    check_beta(beta)?;
    Ok(SecrecyEngine::new(params, quad)?
        .lower_vehicular_fast(beta)?
        .value)
}

pub fn secrecy_ub_vehicular(
    params: &NetworkParams,
    beta: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    check_beta(beta)?;
    Ok(SecrecyEngine::new(params, quad)?
        .upper_vehicular(beta)?
        .value)
}

pub fn secrecy_ub_vehicular_fast(
    params: &NetworkParams,
    beta: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    check_beta(beta)?;
    Ok(SecrecyEngine::new(params, quad)?
        .upper_vehicular_fast(beta)?
        .value)
}

/// All bounds with the fast vehicular forms in the totals.
pub fn secrecy_bounds_total(
    params: &NetworkParams,
    beta: f64,
    quad: &QuadratureSpec,
) -> Result<SecrecyBounds> {
    check_beta(beta)?;
    SecrecyEngine::new(params, quad)?.bounds(beta, VehicularForm::Fast)
}

pub fn min_dist_pdf(
    tau: f64,
    event: MinDistEvent,
    params: &NetworkParams,
    quad: &QuadratureSpec,
) -> Result<f64> {
    params.validate()?;
    quad.validate()?;
    density_of(params, quad, tau, event)
}

/// Probability that the nearest Eve is of the event's type, the integral of
/// [`min_dist_pdf`] over all distances.
pub fn event_mass(
    event: MinDistEvent,
    params: &NetworkParams,
    quad: &QuadratureSpec,
) -> Result<f64> {
    params.validate()?;
    quad.validate()?;
    event.validate()?;
    let spec = semi_infinite_spec(quad, void_scale(params, event.transmitter_kind));
    Ok(try_integrate_semi_infinite(|tau| density_of(params, quad, tau, event), 0.0, &spec)?.value)
}

/// Nearest-Eve densities when roads become dense (`λ_l → ∞`, `u_e → 0` with
/// `λ_l u_e` fixed): road-borne Eves act as a planar PPP of intensity
/// `λ_l u_e`. Eves on the typical road vanish in this limit.
pub fn min_dist_pdf_asymptotic(
    tau: f64,
    event: MinDistEvent,
    lambda_l: f64,
    u_e: f64,
    lambda_e: f64,
) -> f64 {
    let lambda_v = lambda_l * u_e;
    let none_closer = exp(-(lambda_v + lambda_e) * PI * tau * tau);
    match event.kind {
        EveKind::VehicularOffTypicalRoad => 2.0 * lambda_v * PI * tau * none_closer,
        EveKind::VehicularOnTypicalRoad => 0.0,
        EveKind::Planar => 2.0 * lambda_e * PI * tau * none_closer,
    }
}
