//! Coverage probability under max-SIR association.
//!
//! With `γ > 1` at most one transmitter can exceed the threshold, so coverage
//! is the sum over transmitters of `Pr(SIR_x ≥ γ)`. The gamma(N) signal gain
//! is handled with the lower bound `Pr(G ≤ y) ≳ (1 - e^{-κy})^N`, which turns
//! each term into an alternating binomial sum of Laplace transforms evaluated
//! at `n κ γ d^α / φ`.
//!
//! Writing `m_n = (n κ γ / φ)^{1/α}`, the transform argument at distance `d`
//! has scale `c = m_n d`, and every field exponent is a function of `c` only
//! (see [`FieldKernel`]). The serving populations contribute:
//!
//! * planar transmitters: `2πλ_b ∫ r e^{-E(r)} dr`;
//! * vehicular transmitters on other roads, in polar coordinates
//!   `(ρ, ϑ)` over the `(r_b, t_b)` quarter plane:
//!   `4λ_l u_b ∫ ρ e^{-E(ρ)} ∫_0^{π/2} e^{-2u_b m_n ρ Q(cos ϑ / m_n)} dϑ dρ`;
//! * for a vehicular receiver, transmitters on its own road:
//!   `2u_b ∫ e^{-E(t)} dt`.
//!
//! `E` collects the interference exponents of all fields seen by the
//! receiver (planar PPP, line process, and the receiver's own road).

use alloc::vec::Vec;

use crate::error::{check, Error, Result};
use crate::laplace::{coverage_gain, FieldKernel};
use crate::math::{cos, exp, ln_binomial, pow, PI};
use crate::model::{check_gamma, gamma_cdf_scale, mixture_weights, NetworkParams};
use crate::numerics::{
    try_integrate_finite, try_integrate_semi_infinite, QuadratureSpec, TailPolicy,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageResult {
    pub p_c_planar: f64,
    pub p_c_vehicular: f64,
    pub p_c_total: f64,
    pub gamma: f64,
    /// Sum of the absolute quadrature error estimates of both components.
    pub quadrature_error: f64,
}

/// A coverage probability with its quadrature error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error_estimate: f64,
}

/// Which receiver sits at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Receiver {
    Planar,
    Vehicular,
}

/// Coverage evaluator for one parameter set. Building it tabulates the road
/// profiles once; evaluations at different thresholds reuse them.
#[derive(Debug, Clone)]
pub struct CoverageEngine {
    params: NetworkParams,
    kernel: FieldKernel,
    quad: QuadratureSpec,
}

impl CoverageEngine {
    pub fn new(params: &NetworkParams, quad: &QuadratureSpec) -> Result<Self> {
        params.validate()?;
        quad.validate()?;
        let kernel = FieldKernel::new(coverage_gain(params), params.alpha, quad)?;
        Ok(Self::with_kernel(params, kernel, quad))
    }

    /// Reuses a kernel built for the same gain law and path loss.
    pub fn with_kernel(params: &NetworkParams, kernel: FieldKernel, quad: &QuadratureSpec) -> Self {
        Self {
            params: *params,
            kernel,
            quad: *quad,
        }
    }

    pub fn params(&self) -> &NetworkParams {
        &self.params
    }

    pub fn kernel(&self) -> &FieldKernel {
        &self.kernel
    }

    pub fn planar(&self, gamma: f64) -> Result<Estimate> {
        self.evaluate(gamma, Receiver::Planar)
    }

    pub fn vehicular(&self, gamma: f64) -> Result<Estimate> {
        self.evaluate(gamma, Receiver::Vehicular)
    }

    pub fn total(&self, gamma: f64) -> Result<CoverageResult> {
        let p = &self.params;
        let (kappa_p, kappa_v) = mixture_weights(p.lambda_u, p.u_u * p.lambda_l);
        let planar = if kappa_p > 0.0 {
            self.planar(gamma)?
        } else {
            zero()
        };
        let vehicular = if kappa_v > 0.0 {
            self.vehicular(gamma)?
        } else {
            zero()
        };
        Ok(CoverageResult {
            p_c_planar: planar.value,
            p_c_vehicular: vehicular.value,
            p_c_total: kappa_p * planar.value + kappa_v * vehicular.value,
            gamma,
            quadrature_error: planar.error_estimate + vehicular.error_estimate,
        })
    }

    fn evaluate(&self, gamma: f64, receiver: Receiver) -> Result<Estimate> {
        check_gamma(gamma)?;
        let p = &self.params;
        if p.lambda_b == 0.0
            && p.lambda_l * p.u_b == 0.0
            && (receiver == Receiver::Planar || p.u_b == 0.0)
        {
            return Ok(zero());
        }
        let n_ant = p.n_antennas;
        let kappa = gamma_cdf_scale(n_ant);
        let mut terms = Vec::with_capacity(n_ant as usize);
        let mut error = 0.0;
        for n in 1..=n_ant {
            let m = pow(f64::from(n) * kappa * gamma / p.phi, 1.0 / p.alpha);
            let t = self.association_terms(m, receiver)?;
            let weight = exp(ln_binomial(n_ant, n));
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            terms.push(sign * weight * t.value);
            error += weight * t.error_estimate;
        }
        let value = compensated_sum(&terms);
        debug_assert!(bonferroni_consistent(&terms, value, 10.0 * error + 1e-12));
        clamp_probability("coverage probability", value, error)
    }

    /// Sum over serving populations for one binomial index, as a function of
    /// `m = (nκγ/φ)^{1/α}`.
    fn association_terms(&self, m: f64, receiver: Receiver) -> Result<Estimate> {
        let p = &self.params;
        let k = &self.kernel;
        let own_road = receiver == Receiver::Vehicular;
        let planar_coeff = p.lambda_b * k.planar_coefficient() * m * m;
        let own_coeff = if own_road {
            2.0 * p.u_b * m * k.q_zero()
        } else {
            0.0
        };
        let exponent = |d: f64| -> f64 {
            let c = m * d;
            planar_coeff * d * d + k.line_field_exponent(p.lambda_l, p.u_b, c) + own_coeff * d
        };
        let scale = unit_exponent_scale(exponent);
        let spec = self
            .quad
            .with_tolerances(self.quad.rel_tol.min(1e-10), self.quad.abs_tol.min(1e-15));
        let outer = QuadratureSpec {
            tail_cut: TailPolicy::RationalMap { scale },
            ..spec
        };

        let mut value = 0.0;
        let mut error = 0.0;

        if p.lambda_b > 0.0 {
            let r = try_integrate_semi_infinite(
                |d| Ok::<_, Error>(d * exp(-exponent(d))),
                0.0,
                &outer,
            )?;
            value += 2.0 * PI * p.lambda_b * r.value;
            error += 2.0 * PI * p.lambda_b * r.error_estimate;
        }

        if p.lambda_l * p.u_b > 0.0 {
            let inner_spec = spec.tightened();
            let two_u_m = 2.0 * p.u_b * m;
            let r = try_integrate_semi_infinite(
                |rho| {
                    let base = exp(-exponent(rho));
                    if base == 0.0 {
                        return Ok::<_, Error>(0.0);
                    }
                    let angular = try_integrate_finite(
                        |theta| Ok::<_, Error>(exp(-two_u_m * rho * k.q(cos(theta) / m))),
                        0.0,
                        PI / 2.0,
                        &inner_spec,
                    )?;
                    Ok(rho * base * angular.value)
                },
                0.0,
                &outer,
            )?;
            let w = 4.0 * p.lambda_l * p.u_b;
            value += w * r.value;
            error += w * r.error_estimate;
        }

        if own_road && p.u_b > 0.0 {
            let r =
                try_integrate_semi_infinite(|t| Ok::<_, Error>(exp(-exponent(t))), 0.0, &outer)?;
            value += 2.0 * p.u_b * r.value;
            error += 2.0 * p.u_b * r.error_estimate;
        }

        Ok(Estimate {
            value,
            error_estimate: error,
        })
    }
}

fn zero() -> Estimate {
    Estimate {
        value: 0.0,
        error_estimate: 0.0,
    }
}

/// Typical planar receiver.
pub fn coverage_planar(params: &NetworkParams, gamma: f64, quad: &QuadratureSpec) -> Result<f64> {
    check_gamma(gamma)?;
    Ok(CoverageEngine::new(params, quad)?.planar(gamma)?.value)
}

/// Typical vehicular receiver, whose own road adds serving transmitters and interferers.
pub fn coverage_vehicular(
    params: &NetworkParams,
    gamma: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    check_gamma(gamma)?;
    Ok(CoverageEngine::new(params, quad)?.vehicular(gamma)?.value)
}

/// Receiver-type mixture of the planar and vehicular coverage.
pub fn coverage_total(
    params: &NetworkParams,
    gamma: f64,
    quad: &QuadratureSpec,
) -> Result<CoverageResult> {
    check_gamma(gamma)?;
    CoverageEngine::new(params, quad)?.total(gamma)
}

/// Distance at which a non-decreasing exponent first reaches one, found by
/// doubling/halving from 1 m. Used as the length scale of the outer integrals.
pub(crate) fn unit_exponent_scale(exponent: impl Fn(f64) -> f64) -> f64 {
    let mut d = 1.0;
    if exponent(d) < 1.0 {
        for _ in 0..200 {
            d *= 2.0;
            if exponent(d) >= 1.0 {
                break;
            }
        }
    } else {
        for _ in 0..200 {
            let half = d / 2.0;
            if exponent(half) < 1.0 {
                break;
            }
            d = half;
        }
    }
    d
}

/// Neumaier summation in descending-magnitude order.
pub(crate) fn compensated_sum(terms: &[f64]) -> f64 {
    let mut sorted: Vec<f64> = terms.to_vec();
    sorted.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
    let mut sum = 0.0;
    let mut comp = 0.0;
    for x in sorted {
        let t = sum + x;
        if abs_f(sum) >= abs_f(x) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn abs_f(x: f64) -> f64 {
    crate::math::abs(x)
}

/// Inclusion–exclusion partial sums alternate around the full sum: odd
/// partial sums overshoot it and even ones undershoot it.
pub(crate) fn bonferroni_consistent(terms: &[f64], total: f64, tol: f64) -> bool {
    let mut partial = 0.0;
    for (i, t) in terms.iter().enumerate() {
        partial += t;
        let ok = if i % 2 == 0 {
            partial >= total - tol
        } else {
            partial <= total + tol
        };
        if !ok {
            return false;
        }
    }
    true
}

/// Clamps a probability to [0, 1] when it overshoots by less than ten times
/// its error estimate; larger excursions are reported as errors.
pub(crate) fn clamp_probability(
    quantity: &'static str,
    value: f64,
    error: f64,
) -> Result<Estimate> {
    let slack = 10.0 * error + 1e-12;
    if value < -slack || value > 1.0 + slack || !value.is_finite() {
        return Err(Error::OutOfRange {
            quantity,
            value,
            error_estimate: error,
        });
    }
    Ok(Estimate {
        value: value.clamp(0.0, 1.0),
        error_estimate: error,
    })
}

/// Coverage when only planar transmitters exist and the receiver is planar:
/// `Σ_n C(N,n) (-1)^{n+1} (nκγ/φ)^{-δ} / (ω Γ(1-δ))`.
pub fn coverage_planar_only_closed_form(params: &NetworkParams, gamma: f64) -> Result<f64> {
    params.validate()?;
    check_gamma(gamma)?;
    check(
        params.lambda_b > 0.0,
        "lambda_b",
        params.lambda_b,
        "lambda_b > 0",
    )?;
    let n_ant = params.n_antennas;
    let delta = params.delta();
    let kappa = gamma_cdf_scale(n_ant);
    let omega = crate::laplace::omega(params.phi, n_ant, params.alpha)?;
    let denom = omega * libm::tgamma(1.0 - delta);
    let terms: Vec<f64> = (1..=n_ant)
        .map(|n| {
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            sign * exp(ln_binomial(n_ant, n))
                * pow(f64::from(n) * kappa * gamma / params.phi, -delta)
                / denom
        })
        .collect();
    Ok(compensated_sum(&terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{db_to_linear, fixtures};

    fn quad() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    fn planar_only(n: u32) -> NetworkParams {
        let mut p = fixtures::fig2(n);
        p.lambda_l = 0.0;
        p
    }

    #[test]
    fn planar_only_matches_closed_form() {
        for n in [2u32, 4, 6] {
            let p = planar_only(n);
            let engine = CoverageEngine::new(&p, &quad()).unwrap();
            for g_db in [1.5, 5.0, 10.0] {
                let g = db_to_linear(g_db);
                let want = coverage_planar_only_closed_form(&p, g).unwrap();
                let got = engine.planar(g).unwrap().value;
                assert!(
                    (got - want).abs() < 1e-8,
                    "N={n} γ={g_db} dB: {got} vs {want}"
                );
            }
        }
        // Scale invariance: with planar nodes only the result does not depend on λ_b.
        let mut p = planar_only(2);
        let a = coverage_planar(&p, 10.0, &quad()).unwrap();
        p.lambda_b *= 37.0;
        let b = coverage_planar(&p, 10.0, &quad()).unwrap();
        assert!((a - b).abs() < 1e-8);
    }

    #[test]
    fn no_transmitters_means_no_coverage() {
        let mut p = fixtures::fig2(2);
        p.lambda_b = 0.0;
        p.u_b = 0.0;
        let r = coverage_total(&p, 10.0, &quad()).unwrap();
        assert_eq!(r.p_c_total, 0.0);
        assert_eq!(coverage_vehicular(&p, 10.0, &quad()).unwrap(), 0.0);
    }

    #[test]
    fn rejects_threshold_at_or_below_one() {
        let p = fixtures::fig2(2);
        assert!(matches!(
            coverage_total(&p, 1.0, &quad()),
            Err(Error::InvalidParameter { name: "gamma", .. })
        ));
    }

    #[test]
    fn extreme_threshold_vanishes() {
        let p = fixtures::fig2(2);
        let engine = CoverageEngine::new(&p, &quad()).unwrap();
        let a = engine.total(1e6).unwrap().p_c_total;
        let b = engine.total(1e7).unwrap().p_c_total;
        assert!(a < 1e-3 && b < a);
    }

    #[test]
    fn mixture_weights_select_components() {
        let mut p = fixtures::fig2(2);
        p.lambda_u = 0.0;
        let r = coverage_total(&p, 10.0, &quad()).unwrap();
        assert_eq!(r.p_c_total, r.p_c_vehicular);
        let mut p = fixtures::fig2(2);
        p.u_u = 0.0;
        let r = coverage_total(&p, 10.0, &quad()).unwrap();
        assert_eq!(r.p_c_total, r.p_c_planar);
    }

    #[test]
    fn monotone_in_threshold_and_antennas() {
        let mut prev_n = [0.0; 3];
        for n in 2..=6u32 {
            let engine = CoverageEngine::new(&fixtures::fig2(n), &quad()).unwrap();
            let mut prev = f64::INFINITY;
            let mut row = [0.0; 3];
            for (i, g_db) in [1.5, 3.0, 5.0, 7.5, 10.0, 15.0].iter().enumerate() {
                let r = engine.total(db_to_linear(*g_db)).unwrap();
                assert!(r.p_c_total <= prev);
                let lo = r.p_c_planar.min(r.p_c_vehicular);
                let hi = r.p_c_planar.max(r.p_c_vehicular);
                assert!(lo <= r.p_c_total && r.p_c_total <= hi);
                prev = r.p_c_total;
                if i < 3 {
                    row[i] = r.p_c_total;
                }
            }
            for i in 0..3 {
                assert!(row[i] >= prev_n[i] - 1e-9, "N={n}");
            }
            prev_n = row;
        }
    }

    #[test]
    fn vehicular_receiver_gains_from_its_own_road() {
        let engine = CoverageEngine::new(&fixtures::fig2(4), &quad()).unwrap();
        let p = engine.planar(10.0).unwrap().value;
        let v = engine.vehicular(10.0).unwrap().value;
        assert!(v > 0.0 && p > 0.0);
        // With vehicular transmitters switched off both receivers see the same network.
        let mut q = fixtures::fig2(4);
        q.u_b = 0.0;
        let engine = CoverageEngine::new(&q, &quad()).unwrap();
        let p = engine.planar(10.0).unwrap().value;
        let v = engine.vehicular(10.0).unwrap().value;
        assert!((p - v).abs() < 1e-12);
    }

    #[test]
    fn alternating_sum_brackets() {
        let terms = [0.9, -0.5, 0.2, -0.05];
        let total = compensated_sum(&terms);
        assert!(bonferroni_consistent(&terms, total, 0.0));
        assert!(!bonferroni_consistent(&[0.1, 0.5], 0.6, 0.0));
    }

    #[test]
    fn clamping_policy() {
        assert_eq!(
            clamp_probability("p", 1.0 + 1e-13, 1e-13).unwrap().value,
            1.0
        );
        assert!(clamp_probability("p", 1.1, 1e-6).is_err());
        assert!(clamp_probability("p", -0.01, 1e-6).is_err());
    }
}
