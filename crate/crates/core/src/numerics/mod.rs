//! Adaptive quadrature for the finite, semi-infinite and nested integrals
//! behind every Laplace transform and bound.
//!
//! Integration is globally adaptive: the interval with the largest error
//! estimate is bisected until the total estimate meets
//! `max(abs_tol, rel_tol·|value|)`. Running out of subdivisions is an error,
//! never a silently returned value.

mod kronrod;
mod legendre;
mod table;

use alloc::boxed::Box;
use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

pub use legendre::GaussLegendre;
pub use table::LogHermiteTable;

use kronrod::{gk21, RuleEstimate, EVALS_PER_RULE};

/// How a semi-infinite domain `[a, ∞)` is reduced to a finite one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailPolicy {
    /// `t = a + scale · u / (1 - u)` on `u ∈ [0, 1)`. `scale` should be the
    /// length over which the integrand changes character.
    RationalMap { scale: f64 },
    /// Integrate `[a, a + w]`, then doubling panels, until two consecutive
    /// panels fall below tolerance. Suited to exponentially decaying tails.
    AdaptiveExtension { initial_width: f64 },
    /// `[a, a + scale]` directly, then `t = (a + scale) · v^{-1/(decay-1)}`
    /// on `v ∈ (0, 1]`, which makes an integrand decaying like `t^{-decay}`
    /// constant near `v = 0`. Required when `decay < 2`, where the rational
    /// map leaves a singularity that double precision cannot resolve.
    PowerLaw { scale: f64, decay: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of subintervals held by the adaptive scheme.
    pub max_depth: usize,
    pub tail_cut: TailPolicy,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            max_depth: 1000,
            tail_cut: TailPolicy::RationalMap { scale: 1.0 },
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<(), QuadError> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(QuadError::InvalidSpec("tolerances must be positive"));
        }
        if self.max_depth < 1 {
            return Err(QuadError::InvalidSpec("max_depth must be at least 1"));
        }
        match self.tail_cut {
            TailPolicy::RationalMap { scale } if !(scale > 0.0 && scale.is_finite()) => {
                Err(QuadError::InvalidSpec("tail scale must be positive"))
            }
            TailPolicy::AdaptiveExtension { initial_width }
                if !(initial_width > 0.0 && initial_width.is_finite()) =>
            {
                Err(QuadError::InvalidSpec(
                    "initial tail width must be positive",
                ))
            }
            TailPolicy::PowerLaw { scale, decay }
                if !(scale > 0.0 && scale.is_finite() && decay > 1.0) =>
            {
                Err(QuadError::InvalidSpec(
                    "power-law tail needs scale > 0 and decay > 1",
                ))
            }
            _ => Ok(()),
        }
    }

    /// Same spec with both tolerances divided by ten, for inner integrals.
    pub fn tightened(&self) -> Self {
        Self {
            rel_tol: self.rel_tol / 10.0,
            abs_tol: self.abs_tol / 10.0,
            ..*self
        }
    }

    /// Same spec with the tail length scale replaced.
    pub fn with_tail_scale(&self, scale: f64) -> Self {
        let tail_cut = match self.tail_cut {
            TailPolicy::RationalMap { .. } => TailPolicy::RationalMap { scale },
            TailPolicy::AdaptiveExtension { .. } => TailPolicy::AdaptiveExtension {
                initial_width: scale,
            },
            TailPolicy::PowerLaw { decay, .. } => TailPolicy::PowerLaw { scale, decay },
        };
        Self { tail_cut, ..*self }
    }

    /// Same spec with a power-law tail of the given scale and decay exponent.
    pub fn with_power_tail(&self, scale: f64, decay: f64) -> Self {
        Self {
            tail_cut: TailPolicy::PowerLaw { scale, decay },
            ..*self
        }
    }

    pub fn with_tolerances(&self, rel_tol: f64, abs_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol,
            ..*self
        }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

impl QuadResult {
    fn merge(self, other: Self) -> Self {
        Self {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            evaluations: self.evaluations + other.evaluations,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuadError {
    #[error("no convergence after {evaluations} evaluations (last estimate {value}, error {error_estimate})")]
    NotConverged {
        value: f64,
        error_estimate: f64,
        evaluations: usize,
    },
    #[error("integrand is not finite at x = {at}")]
    NonFinite { at: f64 },
    #[error("inner integral failed at outer abscissa {outer_abscissa}: {inner}")]
    Inner {
        outer_abscissa: f64,
        inner: Box<QuadError>,
    },
    #[error("invalid domain [{a}, {b}]")]
    InvalidDomain { a: f64, b: f64 },
    #[error("invalid quadrature spec: {0}")]
    InvalidSpec(&'static str),
}

/// Integration domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Finite(f64, f64),
    SemiInfinite(f64),
}

/// `∫_a^b f`.
pub fn integrate_finite(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult, QuadError> {
    try_integrate_finite(|x| Ok::<_, QuadError>(f(x)), a, b, spec)
}

/// `∫_a^∞ f` under `spec.tail_cut`.
pub fn integrate_semi_infinite(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult, QuadError> {
    try_integrate_semi_infinite(|x| Ok::<_, QuadError>(f(x)), a, spec)
}

pub fn integrate(
    f: impl FnMut(f64) -> f64,
    domain: Domain,
    spec: &QuadratureSpec,
) -> Result<QuadResult, QuadError> {
    match domain {
        Domain::Finite(a, b) => integrate_finite(f, a, b, spec),
        Domain::SemiInfinite(a) => integrate_semi_infinite(f, a, spec),
    }
}

/// `∫ outer(r, ∫ inner(r, t) dt) dr`. The inner integral runs with tolerances
/// one order tighter; an inner failure is reported with its outer abscissa.
pub fn integrate_nested(
    outer_domain: Domain,
    inner_domain: Domain,
    mut inner_kernel: impl FnMut(f64, f64) -> f64,
    mut outer_kernel: impl FnMut(f64, &QuadResult) -> f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult, QuadError> {
    let inner_spec = spec.tightened();
    let mut inner_evals = 0usize;
    let mut outer = |r: f64| -> Result<f64, QuadError> {
        let inner = integrate(|t| inner_kernel(r, t), inner_domain, &inner_spec).map_err(|e| {
            QuadError::Inner {
                outer_abscissa: r,
                inner: Box::new(e),
            }
        })?;
        inner_evals += inner.evaluations;
        Ok(outer_kernel(r, &inner))
    };
    let mut result = try_integrate(&mut outer, outer_domain, spec)?;
    result.evaluations += inner_evals;
    Ok(result)
}

/// Fallible variant of [`integrate`]: integrand errors abort and propagate.
pub fn try_integrate<E: From<QuadError>>(
    f: impl FnMut(f64) -> Result<f64, E>,
    domain: Domain,
    spec: &QuadratureSpec,
) -> Result<QuadResult, E> {
    match domain {
        Domain::Finite(a, b) => try_integrate_finite(f, a, b, spec),
        Domain::SemiInfinite(a) => try_integrate_semi_infinite(f, a, spec),
    }
}

pub fn try_integrate_finite<E: From<QuadError>>(
    mut f: impl FnMut(f64) -> Result<f64, E>,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult, E> {
    spec.validate()?;
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(QuadError::InvalidDomain { a, b }.into());
    }
    adaptive(&mut f, a, b, spec)
}

pub fn try_integrate_semi_infinite<E: From<QuadError>>(
    mut f: impl FnMut(f64) -> Result<f64, E>,
    a: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult, E> {
    spec.validate()?;
    if !a.is_finite() {
        return Err(QuadError::InvalidDomain {
            a,
            b: f64::INFINITY,
        }
        .into());
    }
    match spec.tail_cut {
        TailPolicy::RationalMap { scale } => {
            let mut mapped = |u: f64| -> Result<f64, E> {
                let w = 1.0 - u;
                let t = a + scale * u / w;
                let v = f(t)?;
                if !v.is_finite() {
                    return Err(QuadError::NonFinite { at: t }.into());
                }
                if v == 0.0 {
                    return Ok(0.0);
                }
                Ok(v * scale / (w * w))
            };
            adaptive(&mut mapped, 0.0, 1.0, spec)
        }
        TailPolicy::PowerLaw { scale, decay } => {
            let head = adaptive(&mut f, a, a + scale, spec)?;
            let start = a + scale;
            let p = 1.0 / (decay - 1.0);
            let mut mapped = |v: f64| -> Result<f64, E> {
                let w = libm::pow(v, -p);
                let t = start * w;
                if !t.is_finite() {
                    return Ok(0.0);
                }
                let y = f(t)?;
                if !y.is_finite() {
                    return Err(QuadError::NonFinite { at: t }.into());
                }
                if y == 0.0 {
                    return Ok(0.0);
                }
                Ok(y * start * p * w / v)
            };
            let tail_spec = QuadratureSpec {
                abs_tol: spec.abs_tol.max(spec.rel_tol * head.value.abs()) / 2.0,
                ..*spec
            };
            let tail = adaptive(&mut mapped, 0.0, 1.0, &tail_spec)?;
            Ok(head.merge(tail))
        }
        TailPolicy::AdaptiveExtension { initial_width } => {
            let mut total = QuadResult::default();
            let mut lo = a;
            let mut width = initial_width;
            let mut quiet = 0;
            for _ in 0..64 {
                let piece = adaptive(&mut f, lo, lo + width, spec)?;
                total = total.merge(piece);
                if piece.value.abs() <= spec.target(total.value) {
                    quiet += 1;
                    if quiet == 2 {
                        return Ok(total);
                    }
                } else {
                    quiet = 0;
                }
                lo += width;
                width *= 2.0;
            }
            Err(QuadError::NotConverged {
                value: total.value,
                error_estimate: total.error_estimate,
                evaluations: total.evaluations,
            }
            .into())
        }
    }
}

struct Panel {
    a: f64,
    b: f64,
    est: RuleEstimate,
    seq: usize,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.est
            .error
            .total_cmp(&other.est.error)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

fn rule<E: From<QuadError>>(
    f: &mut impl FnMut(f64) -> Result<f64, E>,
    a: f64,
    b: f64,
) -> Result<RuleEstimate, E> {
    gk21(f, a, b).map_err(|(at, e)| match e {
        Some(e) => e,
        None => QuadError::NonFinite { at }.into(),
    })
}

fn adaptive<E: From<QuadError>>(
    f: &mut impl FnMut(f64) -> Result<f64, E>,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult, E> {
    if a == b {
        return Ok(QuadResult::default());
    }
    let first = rule(f, a, b)?;
    let mut evaluations = EVALS_PER_RULE;
    if first.error <= spec.target(first.value) {
        return Ok(QuadResult {
            value: first.value,
            error_estimate: first.error,
            evaluations,
        });
    }

    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Panel> = Vec::new();
    let mut seq = 0usize;
    heap.push(Panel {
        a,
        b,
        est: first,
        seq,
    });
    let mut value = first.value;
    let mut error = first.error;

    loop {
        if error <= spec.target(value) {
            break;
        }
        if heap.len() + frozen.len() >= spec.max_depth {
            return Err(not_converged(&heap, &frozen, evaluations).into());
        }
        let Some(worst) = heap.pop() else {
            return Err(not_converged(&heap, &frozen, evaluations).into());
        };
        let mid = 0.5 * (worst.a + worst.b);
        let tiny = 4.0 * f64::EPSILON * worst.a.abs().max(worst.b.abs()).max(f64::MIN_POSITIVE);
        if worst.b - worst.a <= tiny || mid <= worst.a || mid >= worst.b {
            frozen.push(worst);
            continue;
        }
        let left = rule(f, worst.a, mid)?;
        let right = rule(f, mid, worst.b)?;
        evaluations += 2 * EVALS_PER_RULE;
        value += left.value + right.value - worst.est.value;
        error += left.error + right.error - worst.est.error;
        seq += 1;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            est: left,
            seq,
        });
        seq += 1;
        heap.push(Panel {
            a: mid,
            b: worst.b,
            est: right,
            seq,
        });
    }

    let (value, error_estimate) = totals(&heap, &frozen);
    Ok(QuadResult {
        value,
        error_estimate,
        evaluations,
    })
}

/// Sums panels in interval order so the result does not depend on heap layout.
fn totals(heap: &BinaryHeap<Panel>, frozen: &[Panel]) -> (f64, f64) {
    let mut panels: Vec<&Panel> = heap.iter().chain(frozen.iter()).collect();
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut value = 0.0;
    let mut comp = 0.0;
    let mut error = 0.0;
    for p in panels {
        let y = p.est.value - comp;
        let t = value + y;
        comp = (t - value) - y;
        value = t;
        error += p.est.error;
    }
    (value, error)
}

fn not_converged(heap: &BinaryHeap<Panel>, frozen: &[Panel], evaluations: usize) -> QuadError {
    let (value, error_estimate) = totals(heap, frozen);
    QuadError::NotConverged {
        value,
        error_estimate,
        evaluations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{exp, sin, PI};

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn finite_examples() {
        let one = integrate_finite(|_| 1.0, 0.0, 1.0, &spec()).unwrap();
        assert!((one.value - 1.0).abs() < 1e-15);
        let s = integrate_finite(sin, 0.0, PI, &spec()).unwrap();
        assert!((s.value - 2.0).abs() < 1e-10);
        let q = integrate_finite(|x| x * x, 0.0, 3.0, &spec()).unwrap();
        assert!((q.value - 9.0).abs() < 1e-10);
    }

    #[test]
    fn semi_infinite_examples() {
        let e = integrate_semi_infinite(|x| exp(-x), 0.0, &spec()).unwrap();
        assert!((e.value - 1.0).abs() < 1e-10);
        let g = integrate_semi_infinite(|x| x * exp(-x * x), 0.0, &spec()).unwrap();
        assert!((g.value - 0.5).abs() < 1e-10);
        let c = integrate_semi_infinite(|x| 1.0 / (1.0 + x * x), 0.0, &spec()).unwrap();
        assert!((c.value - PI / 2.0).abs() < 1e-10);
    }

    #[test]
    fn adaptive_extension_on_exponential_tail() {
        let s = spec().with_tail_scale(1.0);
        let s = QuadratureSpec {
            tail_cut: TailPolicy::AdaptiveExtension { initial_width: 1.0 },
            ..s
        };
        let e = integrate_semi_infinite(|x| exp(-x), 2.0, &s).unwrap();
        assert!((e.value - exp(-2.0)).abs() < 1e-10);
    }

    #[test]
    fn algebraic_tail_with_scale() {
        // ∫_0^∞ (1+t/1000)^{-2.3} dt = 1000/1.3
        let s = spec().with_tail_scale(1000.0);
        let r = integrate_semi_infinite(|t| libm::pow(1.0 + t / 1000.0, -2.3), 0.0, &s).unwrap();
        assert!((r.value / (1000.0 / 1.3) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn power_law_tail_slower_than_inverse_square() {
        // ∫_0^∞ (1+t)^{-1.3} dt = 1/0.3
        let s = spec().with_power_tail(1.0, 1.3);
        let r = integrate_semi_infinite(|t| libm::pow(1.0 + t, -1.3), 0.0, &s).unwrap();
        assert!((r.value * 0.3 - 1.0).abs() < 1e-8, "{}", r.value * 0.3);
        let r = integrate_semi_infinite(|t| libm::pow(1.0 + t, -1.3), 2.0, &s.with_tail_scale(5.0))
            .unwrap();
        assert!((r.value / (libm::pow(3.0, -0.3) / 0.3) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn endpoint_singularity() {
        let r = integrate_finite(|x| 1.0 / libm::sqrt(x), 0.0, 1.0, &spec()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-8);
    }

    #[test]
    fn nested_examples() {
        let d = Domain::SemiInfinite(0.0);
        let r = integrate_nested(
            d,
            d,
            |_, t| exp(-t),
            |r, inner| inner.value * exp(-r),
            &spec(),
        )
        .unwrap();
        assert!((r.value - 1.0).abs() < 1e-8);
        let z = integrate_nested(d, d, |_, _| 0.0, |_, inner| inner.value, &spec()).unwrap();
        assert_eq!(z.value, 0.0);
    }

    #[test]
    fn nested_inner_failure_carries_outer_abscissa() {
        let err = integrate_nested(
            Domain::Finite(1.0, 2.0),
            Domain::Finite(0.0, 1.0),
            |_, t| if t > 0.5 { f64::NAN } else { 1.0 },
            |_, inner| inner.value,
            &spec(),
        )
        .unwrap_err();
        match err {
            QuadError::Inner {
                outer_abscissa,
                inner,
            } => {
                assert!((1.0..=2.0).contains(&outer_abscissa));
                assert!(matches!(*inner, QuadError::NonFinite { .. }));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn non_convergence_is_reported() {
        let tight = QuadratureSpec {
            max_depth: 3,
            ..spec()
        };
        let err = integrate_finite(|x| sin(1.0 / x), 1e-6, 1.0, &tight).unwrap_err();
        assert!(matches!(err, QuadError::NotConverged { .. }));
    }

    #[test]
    fn invalid_inputs() {
        assert!(matches!(
            integrate_finite(|x| x, 1.0, 0.0, &spec()),
            Err(QuadError::InvalidDomain { .. })
        ));
        let bad = QuadratureSpec {
            rel_tol: 0.0,
            ..spec()
        };
        assert!(matches!(
            integrate_finite(|x| x, 0.0, 1.0, &bad),
            Err(QuadError::InvalidSpec(_))
        ));
    }

    #[test]
    fn fallible_integrand_error_propagates() {
        #[derive(Debug, PartialEq)]
        enum E {
            Quad,
            Mine,
        }
        impl From<QuadError> for E {
            fn from(_: QuadError) -> Self {
                E::Quad
            }
        }
        let r = try_integrate_finite(
            |x| if x > 0.9 { Err(E::Mine) } else { Ok(x) },
            0.0,
            1.0,
            &spec(),
        );
        assert_eq!(r.unwrap_err(), E::Mine);
    }

    fn wiggly(x: f64) -> f64 {
        exp(-x) * (1.0 + 0.5 * sin(3.0 * x)) + 1.0 / (1.0 + x * x)
    }

    proptest::proptest! {
        #[test]
        fn linearity(c in proptest::sample::select(vec![-1.0, 2.0, 10.0]), a in -3.0f64..0.0, b in 0.1f64..5.0) {
            let base = integrate_finite(wiggly, a, b, &spec()).unwrap();
            let scaled = integrate_finite(|x| c * wiggly(x), a, b, &spec()).unwrap();
            let tol = scaled.error_estimate + c.abs() * base.error_estimate + 1e-14;
            proptest::prop_assert!((scaled.value - c * base.value).abs() <= tol);
        }

        #[test]
        fn domain_split(a in -3.0f64..0.0, m in 0.0f64..2.0, w in 0.1f64..3.0) {
            let c = m + w;
            let left = integrate_finite(wiggly, a, m, &spec()).unwrap();
            let right = integrate_finite(wiggly, m, c, &spec()).unwrap();
            let whole = integrate_finite(wiggly, a, c, &spec()).unwrap();
            let tol = left.error_estimate + right.error_estimate + whole.error_estimate + 1e-14;
            proptest::prop_assert!((left.value + right.value - whole.value).abs() <= tol);
        }

        #[test]
        fn deterministic(a in -3.0f64..0.0, b in 0.1f64..5.0) {
            let x = integrate_finite(wiggly, a, b, &spec()).unwrap();
            let y = integrate_finite(wiggly, a, b, &spec()).unwrap();
            proptest::prop_assert_eq!(x.value.to_bits(), y.value.to_bits());
            proptest::prop_assert_eq!(x.error_estimate.to_bits(), y.error_estimate.to_bits());
        }
    }
}
