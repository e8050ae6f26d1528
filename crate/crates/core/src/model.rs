//! Network parameters, thresholds, and the constants derived from them.
//!
//! Transmit power is normalised to one; the network is interference limited
//! so the SIR does not depend on it. Thresholds are linear ratios; decibels
//! only appear at the CLI boundary through [`db_to_linear`].

use crate::error::{check, Result};
use crate::math::{exp, lgamma, log2, pow};

/// Largest antenna count accepted; `N!` stays finite in log space well past it.
pub const MAX_ANTENNAS: u32 = 64;

/// Spatial intensities, antenna count, power split and path loss.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NetworkParams {
    /// Planar transmitters per m².
    pub lambda_b: f64,
    /// Planar receivers per m².
    pub lambda_u: f64,
    /// Planar eavesdroppers per m².
    pub lambda_e: f64,
    /// Road (line) intensity per m.
    pub lambda_l: f64,
    /// Vehicular transmitters per m of road.
    pub u_b: f64,
    /// Vehicular receivers per m of road.
    pub u_u: f64,
    /// Vehicular eavesdroppers per m of road.
    pub u_e: f64,
    /// Transmit antennas per transmitter.
    pub n_antennas: u32,
    /// Fraction of power on the information beam; the rest is artificial noise.
    pub phi: f64,
    /// Path-loss exponent.
    pub alpha: f64,
}

impl NetworkParams {
    pub fn validate(&self) -> Result<()> {
        let intensities = [
            ("lambda_b", self.lambda_b),
            ("lambda_u", self.lambda_u),
            ("lambda_e", self.lambda_e),
            ("lambda_l", self.lambda_l),
            ("u_b", self.u_b),
            ("u_u", self.u_u),
            ("u_e", self.u_e),
        ];
        for (name, value) in intensities {
            check(
                value.is_finite() && value >= 0.0,
                name,
                value,
                "intensities must be finite and >= 0",
            )?;
        }
        let n = f64::from(self.n_antennas);
        check(
            self.n_antennas >= 2,
            "n_antennas",
            n,
            "N >= 2 (artificial noise needs N-1 >= 1 dimensions)",
        )?;
        check(self.n_antennas <= MAX_ANTENNAS, "n_antennas", n, "N <= 64")?;
        check(
            self.phi > 0.0 && self.phi <= 1.0,
            "phi",
            self.phi,
            "0 < phi <= 1",
        )?;
        check(
            self.alpha.is_finite() && self.alpha > 2.0,
            "alpha",
            self.alpha,
            "alpha > 2",
        )?;
        Ok(())
    }

    /// `δ = 2/α`.
    pub fn delta(&self) -> f64 {
        2.0 / self.alpha
    }

    /// Per-branch artificial-noise power `(1-φ)/(N-1)`.
    pub fn an_power(&self) -> f64 {
        (1.0 - self.phi) / f64::from(self.n_antennas - 1)
    }

    /// Planar-equivalent intensity of vehicular transmitters, `λ_l u_b`.
    pub fn vehicular_tx_density(&self) -> f64 {
        self.lambda_l * self.u_b
    }

    /// Planar-equivalent intensity of vehicular Eves, `λ_l u_e`.
    pub fn vehicular_eve_density(&self) -> f64 {
        self.lambda_l * self.u_e
    }

    /// True when no eavesdropper of any kind can exist around a typical node.
    pub fn eve_free(&self) -> bool {
        self.lambda_e == 0.0 && self.u_e == 0.0
    }
}

/// Legitimate (`gamma`) and eavesdropper (`beta`) SIR thresholds, linear scale.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Thresholds {
    pub gamma: f64,
    pub beta: f64,
}

impl Thresholds {
    /// Builds validated thresholds. `beta == gamma` is accepted and yields a
    /// zero secrecy rate.
    pub fn new(gamma: f64, beta: f64) -> Result<Self> {
        let t = Self { gamma, beta };
        t.validate()?;
        Ok(t)
    }

    pub fn from_db(gamma_db: f64, beta_db: f64) -> Result<Self> {
        Self::new(db_to_linear(gamma_db), db_to_linear(beta_db))
    }

    pub fn validate(&self) -> Result<()> {
        check_gamma(self.gamma)?;
        check_beta(self.beta)?;
        check(self.beta <= self.gamma, "beta", self.beta, "beta <= gamma")
    }
}

pub(crate) fn check_gamma(gamma: f64) -> Result<()> {
    check(
        gamma.is_finite() && gamma > 1.0,
        "gamma",
        gamma,
        "gamma > 1 (0 dB)",
    )
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    check(beta.is_finite() && beta > 0.0, "beta", beta, "beta > 0")
}

/// Constants shared by the coverage, secrecy and throughput expressions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedConstants {
    pub delta: f64,
    /// `(N!)^(-1/N)`, the scale in the gamma-cdf lower bound.
    pub kappa: f64,
    /// Probability that the typical receiver is a planar node.
    pub kappa_p: f64,
    pub kappa_v: f64,
    /// Probability that the typical transmitter is a planar node.
    pub rho_p: f64,
    pub rho_v: f64,
    /// `(φ⁻¹ - 1) β / (N - 1)`.
    pub s_secrecy: f64,
    /// Codeword rate `log2(1+γ)`, bits/s/Hz.
    pub r_b_rate: f64,
    /// Secrecy rate `log2(1+γ) - log2(1+β)`.
    pub r_s_rate: f64,
    /// Redundancy rate `log2(1+β)`.
    pub r_e_rate: f64,
}

/// Derives every shared constant after validating both inputs.
///
/// When a receiver (or transmitter) population is empty on both the planar
/// and vehicular side the mixture weight falls back to the planar type.
pub fn derive_constants(
    params: &NetworkParams,
    thresholds: &Thresholds,
) -> Result<DerivedConstants> {
    params.validate()?;
    thresholds.validate()?;
    let n = params.n_antennas;
    let r_b_rate = log2(1.0 + thresholds.gamma);
    let r_e_rate = log2(1.0 + thresholds.beta);
    let (kappa_p, kappa_v) = mixture_weights(params.lambda_u, params.u_u * params.lambda_l);
    let (rho_p, rho_v) = mixture_weights(params.lambda_b, params.u_b * params.lambda_l);
    Ok(DerivedConstants {
        delta: params.delta(),
        kappa: gamma_cdf_scale(n),
        kappa_p,
        kappa_v,
        rho_p,
        rho_v,
        s_secrecy: secrecy_scale(params.phi, n, thresholds.beta),
        r_b_rate,
        r_s_rate: r_b_rate - r_e_rate,
        r_e_rate,
    })
}

/// `(planar, vehicular)` weights of a two-type population.
pub(crate) fn mixture_weights(planar: f64, vehicular: f64) -> (f64, f64) {
    let total = planar + vehicular;
    if total > 0.0 {
        let p = planar / total;
        (p, 1.0 - p)
    } else {
        (1.0, 0.0)
    }
}

/// `κ = (N!)^(-1/N)`, computed in log space.
pub(crate) fn gamma_cdf_scale(n: u32) -> f64 {
    let n = f64::from(n);
    exp(-lgamma(n + 1.0) / n)
}

pub(crate) fn secrecy_scale(phi: f64, n: u32, beta: f64) -> f64 {
    (1.0 / phi - 1.0) * beta / f64::from(n - 1)
}

/// `10^(x/10)`.
pub fn db_to_linear(x_db: f64) -> f64 {
    pow(10.0, x_db / 10.0)
}

/// `10 log10(x)`.
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * libm::log10(x)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;

    fn base() -> NetworkParams {
        fixtures::fig3()
    }

    #[test]
    fn symmetric_receiver_mixture() {
        let mut p = base();
        p.lambda_u = p.u_u * p.lambda_l;
        let c = derive_constants(&p, &Thresholds::new(10.0, 1.0).unwrap()).unwrap();
        assert_eq!(c.kappa_p, 0.5);
        assert_eq!(c.kappa_v, 0.5);
    }

    #[test]
    fn kappa_for_two_antennas() {
        let c = derive_constants(&base(), &Thresholds::new(10.0, 1.0).unwrap()).unwrap();
        assert!((c.kappa - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn secrecy_scale_example() {
        let mut p = base();
        p.phi = 0.5;
        let c = derive_constants(&p, &Thresholds::new(2.0, 1.0).unwrap()).unwrap();
        assert!((c.s_secrecy - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rates_add_up() {
        let c = derive_constants(&base(), &Thresholds::new(10.0, 1.0).unwrap()).unwrap();
        assert!((c.r_b_rate - (c.r_s_rate + c.r_e_rate)).abs() < 1e-15);
        assert!((c.r_b_rate - 11f64.log2()).abs() < 1e-14);
        assert!(c.r_s_rate > 0.0);
    }

    #[test]
    fn kappa_is_finite_at_max_antennas() {
        let k = gamma_cdf_scale(MAX_ANTENNAS);
        assert!(k.is_finite() && k > 0.0 && k < 1.0);
    }

    #[test]
    fn decibels() {
        assert_eq!(db_to_linear(0.0), 1.0);
        assert!((db_to_linear(10.0) - 10.0).abs() < 1e-14);
        assert!((db_to_linear(-3.0103) - 0.5).abs() < 1e-6);
        assert!((linear_to_db(100.0) - 20.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_each_bound_by_name() {
        let t = Thresholds {
            gamma: 10.0,
            beta: 1.0,
        };
        type Mutation = fn(&mut NetworkParams);
        let cases: [(Mutation, &str); 5] = [
            (|p| p.n_antennas = 1, "n_antennas"),
            (|p| p.phi = 0.0, "phi"),
            (|p| p.phi = 1.5, "phi"),
            (|p| p.alpha = 2.0, "alpha"),
            (|p| p.lambda_e = -1.0, "lambda_e"),
        ];
        for (mutate, expected) in cases {
            let mut p = base();
            mutate(&mut p);
            match derive_constants(&p, &t) {
                Err(Error::InvalidParameter { name, .. }) => assert_eq!(name, expected),
                other => panic!("expected rejection of {expected}, got {other:?}"),
            }
        }
        match derive_constants(
            &base(),
            &Thresholds {
                gamma: 1.0,
                beta: 0.5,
            },
        ) {
            Err(Error::InvalidParameter { name, .. }) => assert_eq!(name, "gamma"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn equal_thresholds_give_zero_secrecy_rate() {
        let c = derive_constants(&base(), &Thresholds::new(4.0, 4.0).unwrap()).unwrap();
        assert_eq!(c.r_s_rate, 0.0);
    }

    proptest::proptest! {
        #[test]
        fn weights_are_probabilities(
            lu in 0.0f64..1e-3, uu in 0.0f64..1e-2, lb in 0.0f64..1e-3,
            ub in 0.0f64..1e-2, ll in 0.0f64..1e-2,
        ) {
            let mut p = base();
            p.lambda_u = lu; p.u_u = uu; p.lambda_b = lb; p.u_b = ub; p.lambda_l = ll;
            let t = Thresholds::new(10.0, 1.0).unwrap();
            let c = derive_constants(&p, &t).unwrap();
            for w in [c.kappa_p, c.kappa_v, c.rho_p, c.rho_v] {
                proptest::prop_assert!((0.0..=1.0).contains(&w));
            }
            proptest::prop_assert!((c.kappa_p + c.kappa_v - 1.0).abs() <= 1e-15);
            proptest::prop_assert!((c.rho_p + c.rho_v - 1.0).abs() <= 1e-15);
            let again = derive_constants(&p, &t).unwrap();
            proptest::prop_assert_eq!(format!("{c:?}"), format!("{again:?}"));
        }
    }
}
