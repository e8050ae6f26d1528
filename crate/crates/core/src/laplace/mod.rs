//! Laplace transforms of interference power from planar PPP fields, Cox
//! fields on a Poisson line process, and single roads.
//!
//! Each transform is `exp(-exponent)`; exponents are what the coverage and
//! secrecy integrands actually combine, so every function here also exposes
//! its exponent. The `lt_*` functions evaluate the transforms by direct
//! (nested) quadrature and serve as the reference route; [`FieldKernel`]
//! provides the same quantities from precomputed tables for the hot loops.

mod kernel;

pub use kernel::FieldKernel;

use crate::error::{check, Error, Result};
use crate::math::{abs, exp, expm1, gamma_ratio, lgamma, log1p, pow, sqrt, tgamma, PI};
use crate::model::NetworkParams;
use crate::numerics::{try_integrate_semi_infinite, QuadratureSpec};

/// |φ - 1/N| below which the equal-power branch of `E[P^δ]` is used.
pub const OMEGA_BRANCH_EPS: f64 = 1e-9;

/// Fading power law of one interfering link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GainDistribution {
    /// Single-antenna Rayleigh link.
    UnitExponential,
    /// `Gamma(k, 1)`, e.g. the artificial-noise gain seen by an Eve.
    GammaShape(u32),
    /// Interference at a legitimate receiver from an MRT + AN transmitter:
    /// `φ E + (1-φ)/(N-1) G` with `E ~ Exp(1)`, `G ~ Gamma(N-1, 1)`.
    MrtAnMixture { phi: f64, n: u32 },
}

impl GainDistribution {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::UnitExponential => Ok(()),
            Self::GammaShape(k) => check(k >= 1, "gamma_shape", f64::from(k), "shape >= 1"),
            Self::MrtAnMixture { phi, n } => {
                check(n >= 2, "n_antennas", f64::from(n), "N >= 2")?;
                check(phi > 0.0 && phi <= 1.0, "phi", phi, "0 < phi <= 1")
            }
        }
    }

    /// `ln E[exp(-x ζ)]` for `x >= 0`.
    pub fn ln_laplace(&self, x: f64) -> f64 {
        match *self {
            Self::UnitExponential => -log1p(x),
            Self::GammaShape(k) => -f64::from(k) * log1p(x),
            Self::MrtAnMixture { phi, n } => {
                let b = (1.0 - phi) / f64::from(n - 1);
                -log1p(phi * x) - f64::from(n - 1) * log1p(b * x)
            }
        }
    }

    /// `d/dx ln E[exp(-x ζ)]`, always `<= 0`.
    pub fn ln_laplace_slope(&self, x: f64) -> f64 {
        match *self {
            Self::UnitExponential => -1.0 / (1.0 + x),
            Self::GammaShape(k) => -f64::from(k) / (1.0 + x),
            Self::MrtAnMixture { phi, n } => {
                let m = f64::from(n - 1);
                let b = (1.0 - phi) / m;
                -phi / (1.0 + phi * x) - m * b / (1.0 + b * x)
            }
        }
    }

    /// `1 - E[exp(-x ζ)]` without cancellation at small `x`.
    pub fn one_minus_laplace(&self, x: f64) -> f64 {
        -expm1(self.ln_laplace(x))
    }

    pub fn mean(&self) -> f64 {
        match *self {
            Self::UnitExponential => 1.0,
            Self::GammaShape(k) => f64::from(k),
            Self::MrtAnMixture { .. } => 1.0,
        }
    }

    /// `E[ζ^p]` for `0 < p < 1`.
    pub fn fractional_moment(&self, p: f64) -> f64 {
        match *self {
            Self::UnitExponential => tgamma(1.0 + p),
            Self::GammaShape(k) => gamma_ratio(f64::from(k) + p, f64::from(k)),
            Self::MrtAnMixture { phi, n } => mixture_moment(phi, n, p),
        }
    }
}

/// `E[exp(-s ζ)]`.
pub fn gain_laplace(gain: &GainDistribution, s: f64) -> Result<f64> {
    gain.validate()?;
    check_s(s)?;
    Ok(exp(gain.ln_laplace(s)))
}

/// `E[P^δ]` of the MRT + AN interference gain, `δ = 2/α`.
pub fn omega(phi: f64, n: u32, alpha: f64) -> Result<f64> {
    GainDistribution::MrtAnMixture { phi, n }.validate()?;
    check(
        alpha.is_finite() && alpha > 2.0,
        "alpha",
        alpha,
        "alpha > 2",
    )?;
    Ok(mixture_moment(phi, n, 2.0 / alpha))
}

/// `E[(φE + bG)^p]` with `b = (1-φ)/(N-1)`.
///
/// At `φ = 1/N` the gain is `φ·Gamma(N)`. Elsewhere, with
/// `x = (N - 1/φ)/(N-1)`, the closed form
/// `φ⁻¹ x^{1-N} (φ^{1+p}Γ(1+p) - b^{1+p} Σ_{k<N-1} x^k Γ(k+1+p)/k!)`
/// cancels catastrophically as `x → 0`; for `|x| <= 1/2` the equivalent
/// series `φ^p (1-x)^{1+p} Σ_{j>=0} x^j Γ(j+N+p)/(j+N-1)!` is used instead.
fn mixture_moment(phi: f64, n: u32, p: f64) -> f64 {
    let nf = f64::from(n);
    if abs(phi - 1.0 / nf) <= OMEGA_BRANCH_EPS {
        return pow(phi, p) * gamma_ratio(nf + p, nf);
    }
    let m = nf - 1.0;
    let x = (nf - 1.0 / phi) / m;
    if abs(x) <= 0.5 {
        let mut sum = 0.0;
        let mut xj = 1.0;
        let mut j = 0u32;
        loop {
            let jf = f64::from(j);
            let term = xj * exp(lgamma(jf + nf + p) - lgamma(jf + nf));
            sum += term;
            if abs(term) <= 1e-17 * abs(sum) || j > 400 {
                break;
            }
            xj *= x;
            j += 1;
        }
        return pow(phi, p) * pow(1.0 - x, 1.0 + p) * sum;
    }
    let b = (1.0 - phi) / m;
    let mut sum = 0.0;
    let mut xk = 1.0;
    for k in 0..n - 1 {
        let kf = f64::from(k);
        sum += xk * exp(lgamma(kf + 1.0 + p) - lgamma(kf + 1.0));
        xk *= x;
    }
    let head = pow(phi, 1.0 + p) * tgamma(1.0 + p);
    let tail = if b == 0.0 { 0.0 } else { pow(b, 1.0 + p) * sum };
    pow(x, -m) / phi * (head - tail)
}

/// Which expression produced a [`LaplaceEval`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LaplaceSource {
    CoveragePlanarField,
    CoverageVehicularField,
    CoverageSingleRoad,
    SecrecyPlanarField,
    SecrecyVehicularField,
    SecrecySingleRoad,
    AsymptoticVehicularField,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceEval {
    /// Transform value `exp(-exponent)`; may underflow to 0 for huge `s`.
    pub value: f64,
    /// The (non-negative) exponent.
    pub exponent: f64,
    pub s: f64,
    pub source: LaplaceSource,
    /// Absolute error estimate of `exponent` (zero for closed forms).
    pub error_estimate: f64,
}

impl LaplaceEval {
    fn new(s: f64, source: LaplaceSource, exponent: f64, error_estimate: f64) -> Self {
        Self {
            value: exp(-exponent),
            exponent,
            s,
            source,
            error_estimate,
        }
    }
}

fn check_s(s: f64) -> Result<()> {
    check(s.is_finite() && s >= 0.0, "s", s, "s >= 0")
}

/// Gain of interferers at a legitimate receiver.
pub fn coverage_gain(params: &NetworkParams) -> GainDistribution {
    GainDistribution::MrtAnMixture {
        phi: params.phi,
        n: params.n_antennas,
    }
}

/// Unit-scale artificial-noise gain at an Eve; the `(1-φ)/(N-1)` factor lives
/// in the transform argument.
pub fn secrecy_gain(params: &NetworkParams) -> GainDistribution {
    GainDistribution::GammaShape(params.n_antennas - 1)
}

/// `λ π E[ζ^δ] Γ(1-δ) s^δ`, the exponent of a planar PPP field.
pub fn planar_field_exponent(intensity: f64, gain: &GainDistribution, alpha: f64, s: f64) -> f64 {
    if intensity == 0.0 || s == 0.0 {
        return 0.0;
    }
    let delta = 2.0 / alpha;
    intensity * PI * gain.fractional_moment(delta) * tgamma(1.0 - delta) * pow(s, delta)
}

/// `2u ∫_0^∞ (1 - L_ζ(s (r²+t²)^{-α/2})) dt` by quadrature.
pub fn single_road_exponent(
    u: f64,
    gain: &GainDistribution,
    alpha: f64,
    s: f64,
    r: f64,
    quad: &QuadratureSpec,
) -> Result<(f64, f64)> {
    if u == 0.0 || s == 0.0 {
        return Ok((0.0, 0.0));
    }
    let c = pow(s, 1.0 / alpha);
    let spec = quad.with_power_tail(c.max(r), alpha);
    let r2 = r * r;
    let res = try_integrate_semi_infinite(
        |t| Ok::<_, Error>(gain.one_minus_laplace(s * pow(r2 + t * t, -alpha / 2.0))),
        0.0,
        &spec,
    )?;
    Ok((2.0 * u * res.value, 2.0 * u * res.error_estimate))
}

/// `2λ_l ∫_0^∞ (1 - exp(-single_road_exponent(r))) dr` by nested quadrature.
pub fn line_field_exponent(
    lambda_l: f64,
    u: f64,
    gain: &GainDistribution,
    alpha: f64,
    s: f64,
    quad: &QuadratureSpec,
) -> Result<(f64, f64)> {
    if lambda_l == 0.0 || u == 0.0 || s == 0.0 {
        return Ok((0.0, 0.0));
    }
    let c = pow(s, 1.0 / alpha);
    let inner = quad.tightened();
    let spec = quad.with_power_tail(c, alpha - 1.0);
    let res = try_integrate_semi_infinite(
        |r| {
            let (e, _) =
                single_road_exponent(u, gain, alpha, s, r, &inner).map_err(|e| tag_outer(e, r))?;
            Ok::<_, Error>(-expm1(-e))
        },
        0.0,
        &spec,
    )?;
    Ok((
        2.0 * lambda_l * res.value,
        2.0 * lambda_l * res.error_estimate,
    ))
}

fn tag_outer(e: Error, r: f64) -> Error {
    match e {
        Error::Quadrature(q) => Error::Quadrature(crate::numerics::QuadError::Inner {
            outer_abscissa: r,
            inner: alloc::boxed::Box::new(q),
        }),
        other => other,
    }
}

/// Interference from planar transmitters at a legitimate receiver.
pub fn lt_coverage_planar_field(s: f64, params: &NetworkParams) -> Result<LaplaceEval> {
    params.validate()?;
    check_s(s)?;
    let e = planar_field_exponent(params.lambda_b, &coverage_gain(params), params.alpha, s);
    Ok(LaplaceEval::new(
        s,
        LaplaceSource::CoveragePlanarField,
        e,
        0.0,
    ))
}

/// Interference from vehicular transmitters on all roads at a legitimate receiver.
pub fn lt_coverage_vehicular_field(
    s: f64,
    params: &NetworkParams,
    quad: &QuadratureSpec,
) -> Result<LaplaceEval> {
    params.validate()?;
    check_s(s)?;
    let (e, err) = line_field_exponent(
        params.lambda_l,
        params.u_b,
        &coverage_gain(params),
        params.alpha,
        s,
        quad,
    )?;
    Ok(LaplaceEval::new(
        s,
        LaplaceSource::CoverageVehicularField,
        e,
        err,
    ))
}

/// Interference from vehicular transmitters on one road at distance `r`.
pub fn lt_coverage_single_road(
    s: f64,
    r: f64,
    params: &NetworkParams,
    quad: &QuadratureSpec,
) -> Result<LaplaceEval> {
    params.validate()?;
    check_s(s)?;
    check(r.is_finite() && r >= 0.0, "r", r, "r >= 0")?;
    let (e, err) =
        single_road_exponent(params.u_b, &coverage_gain(params), params.alpha, s, r, quad)?;
    Ok(LaplaceEval::new(
        s,
        LaplaceSource::CoverageSingleRoad,
        e,
        err,
    ))
}

/// Artificial-noise interference from planar transmitters at an Eve.
pub fn lt_secrecy_planar_field(s: f64, params: &NetworkParams) -> Result<LaplaceEval> {
    params.validate()?;
    check_s(s)?;
    let e = planar_field_exponent(params.lambda_b, &secrecy_gain(params), params.alpha, s);
    Ok(LaplaceEval::new(
        s,
        LaplaceSource::SecrecyPlanarField,
        e,
        0.0,
    ))
}

pub fn lt_secrecy_vehicular_field(
    s: f64,
    params: &NetworkParams,
    quad: &QuadratureSpec,
) -> Result<LaplaceEval> {
    params.validate()?;
    check_s(s)?;
    let (e, err) = line_field_exponent(
        params.lambda_l,
        params.u_b,
        &secrecy_gain(params),
        params.alpha,
        s,
        quad,
    )?;
    Ok(LaplaceEval::new(
        s,
        LaplaceSource::SecrecyVehicularField,
        e,
        err,
    ))
}

pub fn lt_secrecy_single_road(
    s: f64,
    r: f64,
    params: &NetworkParams,
    quad: &QuadratureSpec,
) -> Result<LaplaceEval> {
    params.validate()?;
    check_s(s)?;
    check(r.is_finite() && r >= 0.0, "r", r, "r >= 0")?;
    let (e, err) =
        single_road_exponent(params.u_b, &secrecy_gain(params), params.alpha, s, r, quad)?;
    Ok(LaplaceEval::new(
        s,
        LaplaceSource::SecrecySingleRoad,
        e,
        err,
    ))
}

/// Vehicular field in the dense-road limit (`λ_l → ∞`, `u → 0`, `λ_l u = λ̄`),
/// where it behaves as a planar PPP: `exp(-2πλ̄ ∫_0^∞ (1 - L_ζ(s r^{-α})) r dr)`.
pub fn lt_asymptotic_vehicular_field(
    s: f64,
    lambda_bar: f64,
    gain: &GainDistribution,
    alpha: f64,
    quad: &QuadratureSpec,
) -> Result<LaplaceEval> {
    gain.validate()?;
    check_s(s)?;
    check(
        lambda_bar.is_finite() && lambda_bar >= 0.0,
        "lambda_bar",
        lambda_bar,
        "lambda_bar >= 0",
    )?;
    check(
        alpha.is_finite() && alpha > 2.0,
        "alpha",
        alpha,
        "alpha > 2",
    )?;
    if lambda_bar == 0.0 || s == 0.0 {
        return Ok(LaplaceEval::new(
            s,
            LaplaceSource::AsymptoticVehicularField,
            0.0,
            0.0,
        ));
    }
    let c = pow(s, 1.0 / alpha);
    let spec = quad.with_power_tail(c, alpha - 1.0);
    let res = try_integrate_semi_infinite(
        |r| Ok::<_, Error>(gain.one_minus_laplace(s * pow(r, -alpha)) * r),
        0.0,
        &spec,
    )?;
    let k = 2.0 * PI * lambda_bar;
    Ok(LaplaceEval::new(
        s,
        LaplaceSource::AsymptoticVehicularField,
        k * res.value,
        k * res.error_estimate,
    ))
}

/// `E[ζ^p] = p/Γ(1-p) ∫_0^∞ (1 - L_ζ(x)) x^{-p-1} dx`, a quadrature route to
/// fractional moments independent of their closed forms.
pub fn fractional_moment_by_quadrature(
    gain: &GainDistribution,
    p: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    gain.validate()?;
    check(p > 0.0 && p < 1.0, "p", p, "0 < p < 1")?;
    let spec = quad.with_power_tail(1.0, 1.0 + p);
    // On [0, 1] substitute x = w^{1/(1-p)} to remove the x^{-p} singularity.
    let head = crate::numerics::try_integrate_finite(
        |w| {
            if w == 0.0 {
                return Ok::<_, Error>(gain.mean() / (1.0 - p));
            }
            let x = pow(w, 1.0 / (1.0 - p));
            Ok(gain.one_minus_laplace(x) / x / (1.0 - p))
        },
        0.0,
        1.0,
        quad,
    )?;
    let tail = try_integrate_semi_infinite(
        |x| Ok::<_, Error>(gain.one_minus_laplace(x) * pow(x, -p - 1.0)),
        1.0,
        &spec,
    )?;
    Ok(p / tgamma(1.0 - p) * (head.value + tail.value))
}

/// `∫_0^∞ (1 + v²)^{-α/2} dv`.
pub(crate) fn road_profile_integral(alpha: f64) -> f64 {
    sqrt(PI) * gamma_ratio((alpha - 1.0) / 2.0, alpha / 2.0) / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures;

    fn quad() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn gain_laplace_examples() {
        assert_eq!(
            gain_laplace(&GainDistribution::UnitExponential, 1.0).unwrap(),
            0.5
        );
        assert_eq!(
            gain_laplace(&GainDistribution::GammaShape(3), 0.0).unwrap(),
            1.0
        );
        let m = GainDistribution::MrtAnMixture { phi: 1.0, n: 4 };
        assert!((gain_laplace(&m, 2.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(gain_laplace(&m, -1.0).is_err());
    }

    #[test]
    fn laplace_slope_matches_finite_difference() {
        let gains = [
            GainDistribution::UnitExponential,
            GainDistribution::GammaShape(3),
            GainDistribution::MrtAnMixture { phi: 0.3, n: 5 },
        ];
        for g in gains {
            for x in [0.01, 0.7, 3.0, 40.0] {
                let h = 1e-6 * x;
                let fd = (g.ln_laplace(x + h) - g.ln_laplace(x - h)) / (2.0 * h);
                assert!((fd / g.ln_laplace_slope(x) - 1.0).abs() < 1e-7, "{g:?} {x}");
            }
        }
    }

    #[test]
    fn omega_reductions() {
        for alpha in [2.3, 3.0, 4.0] {
            let full = omega(1.0, 4, alpha).unwrap();
            assert!((full - tgamma(1.0 + 2.0 / alpha)).abs() < 1e-14);
            let d = 2.0 / alpha;
            let eq = omega(0.25, 4, alpha).unwrap();
            assert!((eq - pow(0.25, d) * tgamma(4.0 + d) / tgamma(4.0)).abs() < 1e-14);
        }
    }

    #[test]
    fn omega_is_continuous_across_equal_power_branch() {
        for n in [2u32, 3, 5, 8] {
            let phi0 = 1.0 / f64::from(n);
            let at = omega(phi0, n, 3.0).unwrap();
            for eps in [1e-6, -1e-6, 1e-3, -1e-3] {
                let near = omega(phi0 + eps, n, 3.0).unwrap();
                let tol = if abs(eps) < 1e-5 { 1e-4 } else { 1e-2 };
                assert!(abs(near - at) <= tol, "n={n} eps={eps}: {near} vs {at}");
            }
        }
    }

    #[test]
    fn omega_series_and_closed_form_agree_where_both_are_accurate() {
        // x = ±0.5 sits on the switch; both routes are well conditioned there.
        for n in [2u32, 3, 5] {
            let nf = f64::from(n);
            for x in [0.45f64, 0.55, -0.45, -0.55] {
                let phi = 1.0 / (nf - x * (nf - 1.0));
                let by_quad = fractional_moment_by_quadrature(
                    &GainDistribution::MrtAnMixture { phi, n },
                    2.0 / 3.0,
                    &quad(),
                )
                .unwrap();
                let closed = omega(phi, n, 3.0).unwrap();
                assert!(
                    (closed / by_quad - 1.0).abs() < 1e-7,
                    "n={n} x={x}: {closed} vs {by_quad}"
                );
            }
        }
    }

    #[test]
    fn omega_matches_quadrature_moment_on_a_grid() {
        for n in [2u32, 3, 5, 8] {
            for phi in [0.05, 0.2, 0.3, 0.5, 0.6, 0.9, 0.999] {
                for alpha in [2.3, 3.0, 4.0] {
                    let g = GainDistribution::MrtAnMixture { phi, n };
                    let q = fractional_moment_by_quadrature(&g, 2.0 / alpha, &quad()).unwrap();
                    let w = omega(phi, n, alpha).unwrap();
                    assert!(
                        (w / q - 1.0).abs() < 1e-7,
                        "n={n} phi={phi} alpha={alpha}: {w} vs {q}"
                    );
                }
            }
        }
    }

    #[test]
    fn planar_fields_closed_forms() {
        let p = fixtures::fig2(2);
        assert_eq!(lt_coverage_planar_field(0.0, &p).unwrap().value, 1.0);
        let mut none = p;
        none.lambda_b = 0.0;
        assert_eq!(lt_coverage_planar_field(1e6, &none).unwrap().value, 1.0);
        // N = 2: Γ(N-1) = 1 so the exponent is λπΓ(1+δ)Γ(1-δ)s^δ.
        let s = 1e5;
        let d = 2.0 / p.alpha;
        let want = p.lambda_b * PI * tgamma(1.0 + d) * tgamma(1.0 - d) * pow(s, d);
        let got = lt_secrecy_planar_field(s, &p).unwrap();
        assert!((got.exponent / want - 1.0).abs() < 1e-13);
    }

    #[test]
    fn asymptotic_exponential_gain_matches_ppp_closed_form() {
        let alpha = 3.0;
        let d = 2.0 / alpha;
        for s in [1.0, 1e3, 1e6] {
            let got = lt_asymptotic_vehicular_field(
                s,
                5e-7,
                &GainDistribution::UnitExponential,
                alpha,
                &quad(),
            )
            .unwrap();
            let want = exp(-PI * 5e-7 * tgamma(1.0 + d) * tgamma(1.0 - d) * pow(s, d));
            assert!(abs(got.value - want) < 1e-8, "s={s}");
        }
        let zero = lt_asymptotic_vehicular_field(
            0.0,
            5e-7,
            &GainDistribution::UnitExponential,
            alpha,
            &quad(),
        )
        .unwrap();
        assert_eq!(zero.value, 1.0);
    }

    #[test]
    fn single_road_examples() {
        let p = fixtures::fig2(2);
        assert_eq!(
            lt_coverage_single_road(0.0, 10.0, &p, &quad())
                .unwrap()
                .value,
            1.0
        );
        let mut quiet = p;
        quiet.u_b = 0.0;
        assert_eq!(
            lt_coverage_single_road(1e6, 10.0, &quiet, &quad())
                .unwrap()
                .value,
            1.0
        );
        let near = lt_coverage_single_road(1e6, 0.0, &p, &quad())
            .unwrap()
            .value;
        let far = lt_coverage_single_road(1e6, 1000.0, &p, &quad())
            .unwrap()
            .value;
        assert!(near <= far);
    }

    #[test]
    fn single_road_vanishes_as_intensity_drops() {
        let mut p = fixtures::fig2(2);
        let mut last = 0.0;
        for u in [1e-3, 1e-5, 1e-7] {
            p.u_b = u;
            let v = lt_coverage_single_road(1e6, 50.0, &p, &quad())
                .unwrap()
                .value;
            assert!(v > last);
            last = v;
        }
        assert!(last > 0.999);
    }

    #[test]
    fn vehicular_field_examples() {
        let p = fixtures::fig2(2);
        assert_eq!(
            lt_coverage_vehicular_field(0.0, &p, &quad()).unwrap().value,
            1.0
        );
        let mut quiet = p;
        quiet.u_b = 0.0;
        assert_eq!(
            lt_coverage_vehicular_field(1e6, &quiet, &quad())
                .unwrap()
                .value,
            1.0
        );
        let v = lt_secrecy_vehicular_field(1e6, &p, &quad()).unwrap();
        assert!(v.value > 0.0 && v.value < 1.0);
    }

    #[test]
    fn transforms_are_monotone_on_a_geometric_grid() {
        let p = fixtures::fig3();
        let mut prev = [1.0; 5];
        let mut s = 1e-2;
        while s < 1e9 {
            let vals = [
                lt_coverage_planar_field(s, &p).unwrap().value,
                lt_coverage_vehicular_field(s, &p, &quad()).unwrap().value,
                lt_coverage_single_road(s, 30.0, &p, &quad()).unwrap().value,
                lt_secrecy_planar_field(s, &p).unwrap().value,
                lt_secrecy_vehicular_field(s, &p, &quad()).unwrap().value,
            ];
            for (v, pv) in vals.iter().zip(prev.iter()) {
                assert!(*v <= *pv && *v > 0.0 && *v <= 1.0, "s={s}");
            }
            prev = vals;
            s *= 10.0;
        }
    }

    #[test]
    fn dense_road_limit_approaches_planar_field() {
        // λ_l u_b fixed: the vehicular field converges to the planar form.
        let mut p = fixtures::fig2(2);
        let gain = coverage_gain(&p);
        let s_grid = [1e2, 1e3, 1e4, 1e5, 1e6];
        let mut prev = f64::INFINITY;
        for ll in [1e-4, 1e-3, 1e-2] {
            p.lambda_l = ll;
            p.u_b = 5e-7 / ll;
            let worst = s_grid
                .iter()
                .map(|&s| {
                    let v = lt_coverage_vehicular_field(s, &p, &quad()).unwrap().value;
                    let a = lt_asymptotic_vehicular_field(s, 5e-7, &gain, p.alpha, &quad())
                        .unwrap()
                        .value;
                    abs(v - a)
                })
                .fold(0.0, f64::max);
            assert!(worst < prev, "gap did not shrink at λ_l = {ll}");
            prev = worst;
        }
        assert!(prev < 0.01);
    }
}
