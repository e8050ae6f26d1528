//! Effective secrecy throughput `η = R_s · p_c · p_sec` and its optimisation
//! over the power split `φ`.
//!
//! Rates are in bits/s/Hz: `R_s = log2(1+γ) - log2(1+β)`.

use alloc::vec::Vec;

use crate::coverage::CoverageEngine;
use crate::error::{check, Result};
use crate::laplace::{secrecy_gain, FieldKernel};
use crate::math::log2;
use crate::model::{NetworkParams, Thresholds};
use crate::numerics::QuadratureSpec;
use crate::secrecy::{SecrecyEngine, VehicularForm};

/// Where the secrecy probability inside `η` came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum SecrecySource {
    /// Mixture of lower bounds with the fast vehicular form.
    LowerBoundFast,
    /// Mixture of lower bounds with the full vehicular form.
    LowerBoundFull,
    /// Supplied by the caller, e.g. a Monte Carlo estimate.
    Supplied,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ThroughputResult {
    /// bits/s/Hz.
    pub eta: f64,
    pub p_c: f64,
    pub p_sec: f64,
    pub r_s: f64,
    pub p_sec_source: SecrecySource,
}

/// `log2(1+γ) - log2(1+β)`.
pub fn secrecy_rate(thresholds: &Thresholds) -> f64 {
    log2(1.0 + thresholds.gamma) - log2(1.0 + thresholds.beta)
}

/// `η` with the lower-bound secrecy mixture (fast vehicular form).
pub fn effective_secrecy_throughput(
    params: &NetworkParams,
    thresholds: &Thresholds,
    quad: &QuadratureSpec,
) -> Result<ThroughputResult> {
    ThroughputEvaluator::new(params, quad)?.evaluate(params.phi, thresholds)
}

/// `η` with a caller-supplied secrecy probability.
pub fn throughput_with_secrecy(
    params: &NetworkParams,
    thresholds: &Thresholds,
    p_sec: f64,
    quad: &QuadratureSpec,
) -> Result<ThroughputResult> {
    params.validate()?;
    thresholds.validate()?;
    check(
        (0.0..=1.0).contains(&p_sec),
        "p_sec",
        p_sec,
        "0 <= p_sec <= 1",
    )?;
    let p_c = CoverageEngine::new(params, quad)?
        .total(thresholds.gamma)?
        .p_c_total;
    Ok(compose(thresholds, p_c, p_sec, SecrecySource::Supplied))
}

fn compose(
    thresholds: &Thresholds,
    p_c: f64,
    p_sec: f64,
    p_sec_source: SecrecySource,
) -> ThroughputResult {
    let r_s = secrecy_rate(thresholds);
    ThroughputResult {
        eta: r_s * p_c * p_sec,
        p_c,
        p_sec,
        r_s,
        p_sec_source,
    }
}

/// Evaluates `η` at several power splits. The secrecy side depends on `φ`
/// only through its transform argument, so its kernel is built once.
#[derive(Debug, Clone)]
pub struct ThroughputEvaluator {
    params: NetworkParams,
    quad: QuadratureSpec,
    secrecy_kernel: FieldKernel,
    form: VehicularForm,
}

impl ThroughputEvaluator {
    pub fn new(params: &NetworkParams, quad: &QuadratureSpec) -> Result<Self> {
        params.validate()?;
        quad.validate()?;
        Ok(Self {
            params: *params,
            quad: *quad,
            secrecy_kernel: FieldKernel::new(secrecy_gain(params), params.alpha, quad)?,
            form: VehicularForm::Fast,
        })
    }

    pub fn with_form(mut self, form: VehicularForm) -> Self {
        self.form = form;
        self
    }

    /// `η` at power split `phi`, other parameters unchanged.
    pub fn evaluate(&self, phi: f64, thresholds: &Thresholds) -> Result<ThroughputResult> {
        thresholds.validate()?;
        let params = NetworkParams { phi, ..self.params };
        params.validate()?;
        let p_c = CoverageEngine::new(&params, &self.quad)?
            .total(thresholds.gamma)?
            .p_c_total;
        let secrecy = SecrecyEngine::with_kernel(&params, self.secrecy_kernel.clone(), &self.quad);
        let p_sec = secrecy.lower_total(thresholds.beta, self.form)?;
        let source = match self.form {
            VehicularForm::Fast => SecrecySource::LowerBoundFast,
            VehicularForm::Full => SecrecySource::LowerBoundFull,
        };
        Ok(compose(thresholds, p_c, p_sec, source))
    }
}

/// Evenly spaced `φ` values from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl PhiGrid {
    pub fn validate(&self) -> Result<()> {
        check(
            self.start > 0.0 && self.start < self.stop,
            "start",
            self.start,
            "0 < start < stop",
        )?;
        check(self.stop < 1.0, "stop", self.stop, "stop < 1")?;
        check(self.count >= 3, "count", self.count as f64, "count >= 3")?;
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let w = i as f64 / last;
                (1.0 - w) * self.start + w * self.stop
            })
            .collect()
    }
}

impl Default for PhiGrid {
    /// 0.05, 0.10, …, 0.95.
    fn default() -> Self {
        Self {
            start: 0.05,
            stop: 0.95,
            count: 19,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhiOptimum {
    pub phi_star: f64,
    pub eta_star: f64,
    /// `(φ, η)` on the grid.
    pub curve: Vec<(f64, f64)>,
    /// The grid curve has more than one local maximum or is flat; `phi_star`
    /// is then only the best grid point's neighbourhood optimum.
    pub multimodal: bool,
}

/// Bracket width at which the golden-section refinement stops.
const PHI_TOL: f64 = 1e-4;

/// Grid scan, then golden-section refinement around the best grid point.
pub fn optimize_phi(
    params: &NetworkParams,
    thresholds: &Thresholds,
    grid: &PhiGrid,
    quad: &QuadratureSpec,
) -> Result<PhiOptimum> {
    grid.validate()?;
    thresholds.validate()?;
    let evaluator = ThroughputEvaluator::new(params, quad)?;
    let phis = grid.values();
    let etas = scan(&evaluator, &phis, thresholds)?;
    let curve: Vec<(f64, f64)> = phis.iter().copied().zip(etas.iter().copied()).collect();

    let best = etas
        .iter()
        .enumerate()
        .fold(0, |best, (i, &v)| if v > etas[best] { i } else { best });
    let (min, max) = etas
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let flat = max - min <= 1e-12 * max.abs().max(1e-300);
    let multimodal = flat || local_maxima(&etas) > 1;

    if flat || best == 0 || best == etas.len() - 1 {
        return Ok(PhiOptimum {
            phi_star: phis[best],
            eta_star: etas[best],
            curve,
            multimodal,
        });
    }

    let eta_at = |phi: f64| -> Result<f64> { Ok(evaluator.evaluate(phi, thresholds)?.eta) };
    let (phi_star, eta_star) = golden_section_max(eta_at, phis[best - 1], phis[best + 1])?;
    let (phi_star, eta_star) = if eta_star >= etas[best] {
        (phi_star, eta_star)
    } else {
        (phis[best], etas[best])
    };
    Ok(PhiOptimum {
        phi_star,
        eta_star,
        curve,
        multimodal,
    })
}

#[cfg(feature = "parallel")]
fn scan(
    evaluator: &ThroughputEvaluator,
    phis: &[f64],
    thresholds: &Thresholds,
) -> Result<Vec<f64>> {
    use rayon::prelude::*;
    phis.par_iter()
        .map(|&phi| Ok(evaluator.evaluate(phi, thresholds)?.eta))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn scan(
    evaluator: &ThroughputEvaluator,
    phis: &[f64],
    thresholds: &Thresholds,
) -> Result<Vec<f64>> {
    phis.iter()
        .map(|&phi| Ok(evaluator.evaluate(phi, thresholds)?.eta))
        .collect()
}

/// Strict local maxima of a sampled curve, treating plateaus as one point.
pub(crate) fn local_maxima(values: &[f64]) -> usize {
    let mut dedup: Vec<f64> = Vec::with_capacity(values.len());
    for &v in values {
        if dedup.last() != Some(&v) {
            dedup.push(v);
        }
    }
    (0..dedup.len())
        .filter(|&i| {
            let left = i == 0 || dedup[i - 1] < dedup[i];
            let right = i + 1 == dedup.len() || dedup[i + 1] < dedup[i];
            left && right
        })
        .count()
}

fn golden_section_max(
    mut f: impl FnMut(f64) -> Result<f64>,
    mut a: f64,
    mut b: f64,
) -> Result<(f64, f64)> {
    let inv_phi = (libm::sqrt(5.0) - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while b - a > PHI_TOL {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc >= fd { (c, fc) } else { (d, fd) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures;

    fn quad() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn equal_thresholds_give_zero_throughput() {
        let t = Thresholds::new(10.0, 10.0).unwrap();
        let r = effective_secrecy_throughput(&fixtures::fig3(), &t, &quad()).unwrap();
        assert_eq!(r.r_s, 0.0);
        assert_eq!(r.eta, 0.0);
    }

    #[test]
    fn eve_free_throughput_is_rate_times_coverage() {
        let p = fixtures::fig2(2);
        let t = Thresholds::from_db(10.0, 0.0).unwrap();
        let r = effective_secrecy_throughput(&p, &t, &quad()).unwrap();
        assert_eq!(r.p_sec, 1.0);
        let want = (log2(11.0) - 1.0) * r.p_c;
        assert!((r.eta - want).abs() < 1e-12);
        assert!((r.eta - r.r_s * r.p_c * r.p_sec).abs() < 1e-12);
    }

    #[test]
    fn supplied_secrecy_is_recorded() {
        let t = Thresholds::from_db(10.0, 0.0).unwrap();
        let r = throughput_with_secrecy(&fixtures::fig3(), &t, 0.5, &quad()).unwrap();
        assert_eq!(r.p_sec_source, SecrecySource::Supplied);
        assert!((r.eta - r.r_s * r.p_c * 0.5).abs() < 1e-15);
        assert!(throughput_with_secrecy(&fixtures::fig3(), &t, 1.5, &quad()).is_err());
    }

    #[test]
    fn eve_free_optimum_sits_on_upper_grid_edge() {
        let t = Thresholds::from_db(10.0, 0.0).unwrap();
        let grid = PhiGrid {
            start: 0.2,
            stop: 0.9,
            count: 5,
        };
        let opt = optimize_phi(&fixtures::fig2(2), &t, &grid, &quad()).unwrap();
        assert_eq!(opt.phi_star, 0.9);
        assert!(!opt.multimodal);
        assert_eq!(opt.curve.len(), 5);
    }

    #[test]
    fn golden_section_finds_parabola_peak() {
        let (x, y) = golden_section_max(|x| Ok(-(x - 0.37) * (x - 0.37)), 0.2, 0.6).unwrap();
        assert!((x - 0.37).abs() < PHI_TOL);
        assert!(y <= 0.0);
    }

    #[test]
    fn local_maxima_counts_peaks_and_plateaus() {
        assert_eq!(local_maxima(&[1.0, 2.0, 3.0, 2.0]), 1);
        assert_eq!(local_maxima(&[1.0, 3.0, 2.0, 4.0, 1.0]), 2);
        assert_eq!(local_maxima(&[1.0, 2.0, 2.0, 1.0]), 1);
        assert_eq!(local_maxima(&[1.0, 2.0, 3.0]), 1);
    }

    #[test]
    fn grid_rejects_bad_ranges() {
        assert!(PhiGrid {
            start: 0.0,
            stop: 0.5,
            count: 5
        }
        .validate()
        .is_err());
        assert!(PhiGrid {
            start: 0.1,
            stop: 1.0,
            count: 5
        }
        .validate()
        .is_err());
        assert!(PhiGrid {
            start: 0.1,
            stop: 0.5,
            count: 2
        }
        .validate()
        .is_err());
        assert_eq!(PhiGrid::default().values().len(), 19);
    }
}
