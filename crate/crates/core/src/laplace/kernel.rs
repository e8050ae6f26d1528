//! Tabulated road and line-field exponents for one gain law and path loss.
//!
//! With `c = s^{1/α}` every road transform reduces to two dimensionless
//! profiles:
//!
//! * `Q(a) = ∫_0^∞ (1 - L_ζ((a² + τ²)^{-α/2})) dτ`, so a road at distance
//!   `r` with intensity `u` contributes the exponent `2 u c Q(r/c)`;
//! * `J(k) = ∫_0^∞ (1 - e^{-2 k Q(a)}) da`, so all roads of a line process
//!   with intensity `λ_l` contribute `2 λ_l c J(u c)`.
//!
//! Both are tabulated once on log-log grids with exact derivatives, which
//! turns each nested quadrature into a table lookup.

use crate::error::{Error, Result};
use crate::math::{abs, exp, pow, tgamma, PI};
use crate::numerics::{try_integrate_semi_infinite, LogHermiteTable, QuadratureSpec};

use super::{road_profile_integral, GainDistribution};

const A_MIN: f64 = 1e-6;
const A_MAX: f64 = 1e6;
const K_MIN: f64 = 1e-14;
const K_MAX: f64 = 1e12;
const TABLE_STEP: f64 = 0.04;

#[derive(Debug, Clone)]
pub struct FieldKernel {
    gain: GainDistribution,
    alpha: f64,
    q_zero: f64,
    q_at_min: f64,
    /// `Q(a) ≈ tail_coeff · a^{1-α}` for large `a`.
    tail_coeff: f64,
    q_table: LogHermiteTable,
    j_table: LogHermiteTable,
}

impl FieldKernel {
    /// Builds both tables. Costs a few thousand adaptive quadratures.
    pub fn new(gain: GainDistribution, alpha: f64, quad: &QuadratureSpec) -> Result<Self> {
        gain.validate()?;
        crate::error::check(
            alpha.is_finite() && alpha > 2.0,
            "alpha",
            alpha,
            "alpha > 2",
        )?;
        let spec = quad.with_tolerances(quad.rel_tol.min(1e-11), quad.abs_tol.min(1e-300));
        let tail_coeff = gain.mean() * road_profile_integral(alpha);
        // ∫_0^∞ (1 - L(τ^{-α})) dτ = E[ζ^{1/α}] Γ(1 - 1/α).
        let q_zero = gain.fractional_moment(1.0 / alpha) * tgamma(1.0 - 1.0 / alpha);

        let q_table = LogHermiteTable::build(A_MIN, A_MAX, TABLE_STEP, |a| {
            Ok::<_, Error>((
                q_direct(&gain, alpha, a, &spec)?,
                q_slope_direct(&gain, alpha, a, &spec)?,
            ))
        })?;
        let mut kernel = Self {
            gain,
            alpha,
            q_zero,
            q_at_min: q_table.eval(A_MIN),
            tail_coeff,
            q_table,
            j_table: LogHermiteTable::build(1.0, 2.0, 1.0, |_| Ok::<_, Error>((1.0, 0.0)))?,
        };
        let j_table = LogHermiteTable::build(K_MIN, K_MAX, TABLE_STEP, |k| {
            Ok::<_, Error>((kernel.j_direct(k, &spec)?, kernel.j_slope_direct(k, &spec)?))
        })?;
        kernel.j_table = j_table;
        Ok(kernel)
    }

    pub fn gain(&self) -> &GainDistribution {
        &self.gain
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `Q(0)`, the profile of a road through the receiver.
    pub fn q_zero(&self) -> f64 {
        self.q_zero
    }

    /// `Q(a)` for `a >= 0`. Below the grid `Q(0) - Q(a)` is quadratic in `a`.
    pub fn q(&self, a: f64) -> f64 {
        if a < A_MIN {
            let t = a / A_MIN;
            return self.q_zero + (self.q_at_min - self.q_zero) * t * t;
        }
        self.q_table.eval(a)
    }

    /// `J(k)` for `k >= 0`.
    pub fn j(&self, k: f64) -> f64 {
        if k <= 0.0 {
            return 0.0;
        }
        self.j_table.eval(k)
    }

    /// `2 u c Q(r/c)`: exponent of a road at distance `r` with intensity `u`,
    /// where `c = s^{1/α}`.
    #[inline]
    pub fn road_exponent(&self, u: f64, c: f64, r: f64) -> f64 {
        if u == 0.0 || c == 0.0 {
            return 0.0;
        }
        2.0 * u * c * self.q(r / c)
    }

    /// `2 λ_l c J(u c)`: exponent of all roads of a line process.
    #[inline]
    pub fn line_field_exponent(&self, lambda_l: f64, u: f64, c: f64) -> f64 {
        if lambda_l == 0.0 || u == 0.0 || c == 0.0 {
            return 0.0;
        }
        2.0 * lambda_l * c * self.j(u * c)
    }

    /// `λ π E[ζ^δ] Γ(1-δ) c²`: exponent of a planar PPP field.
    #[inline]
    pub fn planar_exponent(&self, intensity: f64, c: f64) -> f64 {
        intensity * self.planar_coefficient() * c * c
    }

    /// `π E[ζ^δ] Γ(1-δ)`.
    pub fn planar_coefficient(&self) -> f64 {
        let delta = 2.0 / self.alpha;
        PI * self.gain.fractional_moment(delta) * tgamma(1.0 - delta)
    }

    /// `c = s^{1/α}`.
    #[inline]
    pub fn scale_of(&self, s: f64) -> f64 {
        pow(s, 1.0 / self.alpha)
    }

    /// `J(k)` by quadrature over the tabulated `Q`.
    pub fn j_direct(&self, k: f64, quad: &QuadratureSpec) -> Result<f64> {
        let spec = quad.with_power_tail(self.j_scale(k), self.alpha - 1.0);
        let r = try_integrate_semi_infinite(
            |a| Ok::<_, Error>(-libm::expm1(-2.0 * k * self.q(a))),
            0.0,
            &spec,
        )?;
        Ok(r.value)
    }

    fn j_slope_direct(&self, k: f64, quad: &QuadratureSpec) -> Result<f64> {
        let spec = quad.with_power_tail(self.j_scale(k), self.alpha - 1.0);
        let r = try_integrate_semi_infinite(
            |a| {
                let q = self.q(a);
                Ok::<_, Error>(2.0 * q * exp(-2.0 * k * q))
            },
            0.0,
            &spec,
        )?;
        Ok(r.value)
    }

    /// Where `2 k Q(a)` crosses one, or 1 if it never exceeds one.
    fn j_scale(&self, k: f64) -> f64 {
        if 2.0 * k * self.q_zero <= 1.0 {
            return 1.0;
        }
        pow(2.0 * k * self.tail_coeff, 1.0 / (self.alpha - 1.0)).max(1.0)
    }
}

/// `Q(a)` by quadrature.
pub(crate) fn q_direct(
    gain: &GainDistribution,
    alpha: f64,
    a: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let spec = quad.with_power_tail(a.max(1.0), alpha);
    let a2 = a * a;
    let r = try_integrate_semi_infinite(
        |t| Ok::<_, Error>(gain.one_minus_laplace(pow(a2 + t * t, -alpha / 2.0))),
        0.0,
        &spec,
    )?;
    Ok(r.value)
}

/// `Q'(a) = -∫_0^∞ L(x) |d ln L/dx| α a x / (a² + τ²) dτ`, `x = (a²+τ²)^{-α/2}`.
fn q_slope_direct(
    gain: &GainDistribution,
    alpha: f64,
    a: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let spec = quad.with_power_tail(a.max(1.0), alpha + 2.0);
    let a2 = a * a;
    let r = try_integrate_semi_infinite(
        |t| {
            let d2 = a2 + t * t;
            let x = pow(d2, -alpha / 2.0);
            let l = exp(gain.ln_laplace(x));
            Ok::<_, Error>(l * abs(gain.ln_laplace_slope(x)) * alpha * a * x / d2)
        },
        0.0,
        &spec,
    )?;
    Ok(-r.value)
}
