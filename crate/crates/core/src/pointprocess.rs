//! Sampling of the spatial model inside a disk window: planar PPPs, the
//! Poisson line process of roads, Cox processes of vehicles on the roads,
//! and Palm conditioning on a typical node at the origin.
//!
//! A road is stored by its representation-space point `(r, θ)`: the foot of
//! the perpendicular from the origin is `r (cos θ, sin θ)` and a node at
//! signed offset `t` sits at `r (cos θ, sin θ) + t (-sin θ, cos θ)`.

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{check, Error, Result};
use crate::math::{cos, sin, sqrt, PI};
use crate::model::NetworkParams;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Distance to the origin.
    pub fn norm(&self) -> f64 {
        libm::hypot(self.x, self.y)
    }

    pub fn distance(&self, other: &Point2) -> f64 {
        libm::hypot(self.x - other.x, self.y - other.y)
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LineRoad {
    /// Perpendicular distance from the origin, m.
    pub r: f64,
    /// Direction of the perpendicular, radians in `[0, 2π)`.
    pub theta: f64,
    /// Signed offsets of transmitters along the road, m.
    pub nodes_b: Vec<f64>,
    pub nodes_u: Vec<f64>,
    pub nodes_e: Vec<f64>,
}

impl LineRoad {
    pub fn new(r: f64, theta: f64) -> Self {
        Self {
            r,
            theta,
            nodes_b: Vec::new(),
            nodes_u: Vec::new(),
            nodes_e: Vec::new(),
        }
    }

    /// Planar position of the node at offset `t`.
    pub fn position(&self, t: f64) -> Point2 {
        let (s, c) = (sin(self.theta), cos(self.theta));
        Point2::new(self.r * c - t * s, self.r * s + t * c)
    }

    /// Distance from the origin to the node at offset `t`, `√(r² + t²)`.
    pub fn distance_to_origin(&self, t: f64) -> f64 {
        libm::hypot(self.r, t)
    }

    /// Half-length of the chord cut by a disk of radius `radius`.
    pub fn half_chord(&self, radius: f64) -> f64 {
        if self.r >= radius {
            0.0
        } else {
            sqrt(radius * radius - self.r * self.r)
        }
    }
}

/// The typical node placed at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum TypicalKind {
    PlanarNode,
    VehicularNode,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NetworkRealization {
    pub window_radius: f64,
    pub roads: Vec<LineRoad>,
    pub planar_tx: Vec<Point2>,
    pub planar_rx: Vec<Point2>,
    pub planar_eve: Vec<Point2>,
    /// Set once the realization has been Palm-conditioned.
    pub typical_kind: Option<TypicalKind>,
    /// Index into `roads` of the road through the origin, for a vehicular
    /// typical node.
    pub typical_road_index: Option<usize>,
}

impl NetworkRealization {
    /// Iterates over every transmitter position, planar first.
    pub fn transmitters(&self) -> impl Iterator<Item = Point2> + '_ {
        self.planar_tx.iter().copied().chain(
            self.roads
                .iter()
                .flat_map(|road| road.nodes_b.iter().map(move |&t| road.position(t))),
        )
    }

    pub fn eavesdroppers(&self) -> impl Iterator<Item = Point2> + '_ {
        self.planar_eve.iter().copied().chain(
            self.roads
                .iter()
                .flat_map(|road| road.nodes_e.iter().map(move |&t| road.position(t))),
        )
    }

    pub fn transmitter_count(&self) -> usize {
        self.planar_tx.len() + self.roads.iter().map(|r| r.nodes_b.len()).sum::<usize>()
    }

    pub fn eavesdropper_count(&self) -> usize {
        self.planar_eve.len() + self.roads.iter().map(|r| r.nodes_e.len()).sum::<usize>()
    }
}

/// Draws a Poisson count; a zero mean gives zero without consuming randomness.
pub fn sample_poisson<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    match Poisson::new(mean) {
        Ok(p) => {
            let n: f64 = p.sample(rng);
            n as usize
        }
        Err(_) => 0,
    }
}

/// Uniform point in a disk of radius `radius` centred at the origin.
pub fn sample_uniform_disk<R: Rng + ?Sized>(radius: f64, rng: &mut R) -> Point2 {
    let rho = radius * sqrt(rng.random::<f64>());
    let phi = 2.0 * PI * rng.random::<f64>();
    Point2::new(rho * cos(phi), rho * sin(phi))
}

/// Homogeneous PPP of the given intensity (per m²) on a disk.
pub fn sample_ppp_disk<R: Rng + ?Sized>(intensity: f64, radius: f64, rng: &mut R) -> Vec<Point2> {
    let n = sample_poisson(intensity * PI * radius * radius, rng);
    (0..n).map(|_| sample_uniform_disk(radius, rng)).collect()
}

/// Roads of a motion-invariant Poisson line process with line intensity
/// `line_intensity` (per m) that hit the disk: `(r, θ)` is a PPP with density
/// `λ_l/π` on `[0, radius] × [0, 2π)`, so the mean count is `2 λ_l radius`.
pub fn sample_plp<R: Rng + ?Sized>(line_intensity: f64, radius: f64, rng: &mut R) -> Vec<LineRoad> {
    let n = sample_poisson(2.0 * line_intensity * radius, rng);
    (0..n)
        .map(|_| {
            let r = radius * rng.random::<f64>();
            let theta = 2.0 * PI * rng.random::<f64>();
            LineRoad::new(r, theta)
        })
        .collect()
}

/// 1D PPP of offsets on the chord of `road` inside the disk.
pub fn populate_road<R: Rng + ?Sized>(
    road: &LineRoad,
    intensity: f64,
    radius: f64,
    rng: &mut R,
) -> Vec<f64> {
    let half = road.half_chord(radius);
    let n = sample_poisson(2.0 * half * intensity, rng);
    (0..n)
        .map(|_| half * (2.0 * rng.random::<f64>() - 1.0))
        .collect()
}

/// Samples an unconditioned realization of every population in the window.
pub fn sample_realization<R: Rng + ?Sized>(
    params: &NetworkParams,
    radius: f64,
    rng: &mut R,
) -> Result<NetworkRealization> {
    params.validate()?;
    check_radius(radius)?;
    let mut roads = sample_plp(params.lambda_l, radius, rng);
    for road in &mut roads {
        road.nodes_b = populate_road(road, params.u_b, radius, rng);
        road.nodes_u = populate_road(road, params.u_u, radius, rng);
        road.nodes_e = populate_road(road, params.u_e, radius, rng);
    }
    Ok(NetworkRealization {
        window_radius: radius,
        roads,
        planar_tx: sample_ppp_disk(params.lambda_b, radius, rng),
        planar_rx: sample_ppp_disk(params.lambda_u, radius, rng),
        planar_eve: sample_ppp_disk(params.lambda_e, radius, rng),
        typical_kind: None,
        typical_road_index: None,
    })
}

pub(crate) fn check_radius(radius: f64) -> Result<()> {
    check(
        radius.is_finite() && radius > 0.0,
        "window_radius",
        radius,
        "window radius > 0",
    )
}

/// Places the typical node at the origin. A vehicular typical node brings its
/// own road through the origin (`r = 0`, `θ = 0` without loss of generality)
/// carrying independent transmitter, receiver and Eve populations.
pub fn palm_condition<R: Rng + ?Sized>(
    mut realization: NetworkRealization,
    typical_kind: TypicalKind,
    params: &NetworkParams,
    rng: &mut R,
) -> Result<NetworkRealization> {
    if realization.typical_kind.is_some() {
        return Err(Error::AlreadyConditioned);
    }
    if typical_kind == TypicalKind::VehicularNode {
        let radius = realization.window_radius;
        let mut road = LineRoad::new(0.0, 0.0);
        road.nodes_b = populate_road(&road, params.u_b, radius, rng);
        road.nodes_u = populate_road(&road, params.u_u, radius, rng);
        road.nodes_e = populate_road(&road, params.u_e, radius, rng);
        realization.roads.push(road);
        realization.typical_road_index = Some(realization.roads.len() - 1);
    }
    realization.typical_kind = Some(typical_kind);
    Ok(realization)
}

/// Euclidean distance between two points.
pub fn distance(p: &Point2, q: &Point2) -> f64 {
    p.distance(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn mean_var(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let m = xs.iter().sum::<f64>() / n;
        let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
        (m, v)
    }

    #[test]
    fn distances() {
        assert_eq!(Point2::new(3.0, 4.0).norm(), 5.0);
        let road = LineRoad::new(0.0, 1.3);
        assert!((road.distance_to_origin(-7.0) - 7.0).abs() < 1e-15);
        let road = LineRoad::new(30.0, 2.0);
        assert_eq!(road.distance_to_origin(40.0), 50.0);
        assert!((road.position(40.0).norm() - 50.0).abs() < 1e-12);
    }

    #[test]
    fn empty_processes() {
        let mut g = rng(1);
        assert!(sample_ppp_disk(0.0, 3000.0, &mut g).is_empty());
        assert!(sample_plp(0.0, 3000.0, &mut g).is_empty());
        let road = LineRoad::new(0.0, 0.0);
        assert!(populate_road(&road, 0.0, 3000.0, &mut g).is_empty());
        let edge = LineRoad::new(3000.0, 0.5);
        assert!(populate_road(&edge, 1.0, 3000.0, &mut g).is_empty());
    }

    #[test]
    fn ppp_count_mean_and_variance() {
        let mut g = rng(2);
        let counts: Vec<f64> = (0..100_000)
            .map(|_| sample_poisson(1e-6 * PI * 9e6, &mut g) as f64)
            .collect();
        let (m, v) = mean_var(&counts);
        assert!((m - 28.274).abs() < 0.2, "mean {m}");
        assert!((v / m - 1.0).abs() < 0.03, "variance {v}");
    }

    #[test]
    fn ppp_points_fill_disk_uniformly() {
        let mut g = rng(3);
        let pts = sample_ppp_disk(1e-1, 100.0, &mut g);
        assert!(pts.iter().all(|p| p.norm() <= 100.0));
        let inner = pts.iter().filter(|p| p.norm() <= 50.0).count() as f64;
        assert!((inner / pts.len() as f64 - 0.25).abs() < 0.03);
    }

    #[test]
    fn plp_road_count_and_angle_uniformity() {
        let mut g = rng(4);
        let mut total = 0usize;
        let mut thetas = Vec::new();
        let draws = 100_000;
        for _ in 0..draws {
            let roads = sample_plp(1e-3, 3000.0, &mut g);
            total += roads.len();
            if thetas.len() < 20_000 {
                thetas.extend(roads.iter().map(|r| r.theta));
            }
        }
        let mean = total as f64 / draws as f64;
        assert!((mean - 6.0).abs() < 0.1, "mean road count {mean}");
        thetas.sort_by(f64::total_cmp);
        let n = thetas.len() as f64;
        let d = thetas
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let cdf = t / (2.0 * PI);
                (cdf - i as f64 / n)
                    .abs()
                    .max((cdf - (i + 1) as f64 / n).abs())
            })
            .fold(0.0, f64::max);
        // Kolmogorov-Smirnov critical value at the 1% level.
        assert!(d < 1.628 / sqrt(n), "KS statistic {d}");
    }

    #[test]
    fn road_population_mean() {
        let mut g = rng(5);
        let road = LineRoad::new(0.0, 0.0);
        let draws = 100_000;
        let total: usize = (0..draws)
            .map(|_| populate_road(&road, 1e-3, 3000.0, &mut g).len())
            .sum();
        assert!((total as f64 / draws as f64 - 6.0).abs() < 0.1);
    }

    #[test]
    fn palm_conditioning() {
        let p = fixtures::fig3();
        let mut g = rng(6);
        let base = sample_realization(&p, 3000.0, &mut g).unwrap();
        let n_roads = base.roads.len();
        let planar = palm_condition(base.clone(), TypicalKind::PlanarNode, &p, &mut g).unwrap();
        assert_eq!(planar.roads.len(), n_roads);
        let veh = palm_condition(base, TypicalKind::VehicularNode, &p, &mut g).unwrap();
        assert_eq!(veh.roads.len(), n_roads + 1);
        let idx = veh.typical_road_index.unwrap();
        assert_eq!(veh.roads[idx].r, 0.0);
        assert_eq!(
            palm_condition(veh, TypicalKind::PlanarNode, &p, &mut g).unwrap_err(),
            Error::AlreadyConditioned
        );
    }

    #[test]
    fn typical_road_transmitter_mean() {
        let mut p = fixtures::fig3();
        p.u_b = 1e-3;
        p.lambda_l = 0.0;
        let mut g = rng(7);
        let draws = 20_000;
        let mut total = 0usize;
        for _ in 0..draws {
            let base = sample_realization(&p, 3000.0, &mut g).unwrap();
            let veh = palm_condition(base, TypicalKind::VehicularNode, &p, &mut g).unwrap();
            total += veh.roads[veh.typical_road_index.unwrap()].nodes_b.len();
        }
        assert!((total as f64 / draws as f64 - 6.0).abs() < 0.1);
    }

    #[test]
    fn nodes_stay_inside_window() {
        let p = fixtures::fig2(2);
        let mut g = rng(8);
        let real = sample_realization(&p, 2000.0, &mut g).unwrap();
        assert!(real
            .transmitters()
            .all(|x| x.norm() <= 2000.0 * (1.0 + 1e-12)));
        assert_eq!(real.transmitters().count(), real.transmitter_count());
    }

    #[test]
    fn sampling_is_deterministic() {
        let p = fixtures::fig3();
        let a = sample_realization(&p, 3000.0, &mut rng(9)).unwrap();
        let b = sample_realization(&p, 3000.0, &mut rng(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn disjoint_quadrant_counts_are_uncorrelated() {
        let mut g = rng(10);
        let draws = 100_000;
        let mut xs = Vec::with_capacity(draws);
        let mut ys = Vec::with_capacity(draws);
        for _ in 0..draws {
            let pts = sample_ppp_disk(1e-3, 100.0, &mut g);
            xs.push(pts.iter().filter(|p| p.x > 0.0 && p.y > 0.0).count() as f64);
            ys.push(pts.iter().filter(|p| p.x < 0.0 && p.y < 0.0).count() as f64);
        }
        let (mx, vx) = mean_var(&xs);
        let (my, vy) = mean_var(&ys);
        let cov = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| (x - mx) * (y - my))
            .sum::<f64>()
            / (draws as f64 - 1.0);
        assert!((cov / sqrt(vx * vy)).abs() < 0.02);
    }
}
