//! Analytic engine against the Monte Carlo engine on small trial budgets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use v2x_secrecy::coverage::{coverage_planar_only_closed_form, CoverageEngine};
use v2x_secrecy::laplace::omega;
use v2x_secrecy::montecarlo::*;
use v2x_secrecy::numerics::QuadratureSpec;
use v2x_secrecy::pointprocess::TypicalKind;
use v2x_secrecy::secrecy::{
    event_mass, EveKind, MinDistEvent, SecrecyEngine, TransmitterKind, VehicularForm,
};
use v2x_secrecy::NetworkParams;

fn coverage_study(n: u32) -> NetworkParams {
    NetworkParams {
        lambda_b: 1e-5,
        lambda_u: 1e-5,
        lambda_e: 0.0,
        lambda_l: 5e-4,
        u_b: 1e-3,
        u_u: 1e-3,
        u_e: 0.0,
        n_antennas: n,
        phi: 0.6,
        alpha: 2.3,
    }
}

fn secrecy_study() -> NetworkParams {
    NetworkParams {
        lambda_b: 1e-5,
        lambda_u: 1e-5,
        lambda_e: 1e-4,
        lambda_l: 1e-4,
        u_b: 1e-4,
        u_u: 1e-4,
        u_e: 1e-4,
        n_antennas: 2,
        phi: 0.6,
        alpha: 3.0,
    }
}

fn db(x: f64) -> f64 {
    10f64.powf(x / 10.0)
}

fn sim(n_trials: u64) -> SimConfig {
    SimConfig {
        n_trials,
        ..SimConfig::default()
    }
}

#[test]
fn two_antenna_coverage_agrees() {
    let p = coverage_study(2);
    let engine = CoverageEngine::new(&p, &QuadratureSpec::default()).unwrap();
    let gammas = [db(1.5), db(5.0), db(10.0)];
    let mc = simulate_coverage_curve(&p, &gammas, &sim(3_000)).unwrap();
    for (g, e) in gammas.iter().zip(&mc) {
        let analytic = engine.total(*g).unwrap().p_c_total;
        assert!(
            (analytic - e.p_hat).abs() <= 0.02 + e.half_width(),
            "γ={g}: analytic {analytic} vs {e:?}"
        );
    }
}

/// With a serving gain whose cdf is exactly `(1 - e^{-κx})^N`, the expected
/// number of transmitters above the threshold is what the planar closed form
/// computes.
#[test]
fn closed_form_counts_transmitters_under_surrogate_gain() {
    let p = NetworkParams {
        lambda_l: 0.0,
        u_b: 0.0,
        u_u: 0.0,
        ..coverage_study(4)
    };
    let kappa = (1..=p.n_antennas)
        .map(f64::from)
        .product::<f64>()
        .powf(-1.0 / f64::from(p.n_antennas));
    let cfg = SimConfig {
        typical_kind_policy: TypicalPolicy::Planar,
        ..sim(4_000)
    };
    let far = 2.0 * std::f64::consts::PI * p.lambda_b * cfg.window_radius.powf(2.0 - p.alpha)
        / (p.alpha - 2.0);
    let gamma = db(5.0);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut count = 0usize;
    let mut squares = 0usize;
    for trial in 0..cfg.n_trials {
        let net = coverage_realization(&p, &cfg, trial).unwrap();
        let gains = sample_gains(&net, &p, &mut rng).unwrap();
        let path: Vec<f64> = net
            .transmitters()
            .map(|x| x.norm().powf(-p.alpha))
            .collect();
        let total: f64 = path
            .iter()
            .zip(&gains.interference)
            .map(|(l, g)| l * g)
            .sum();
        let mut c = 0;
        for (i, l) in path.iter().enumerate() {
            let serving = (0..p.n_antennas)
                .map(|_| -(1.0 - rng.random::<f64>()).ln() / kappa)
                .fold(0.0, f64::max);
            let sir = p.phi * serving * l / (total - gains.interference[i] * l + far);
            if sir >= gamma {
                c += 1;
            }
        }
        count += c;
        squares += c * c;
    }
    let n = cfg.n_trials as f64;
    let mean = count as f64 / n;
    let se = ((squares as f64 / n - mean * mean) / n).sqrt();
    let closed = coverage_planar_only_closed_form(&p, gamma).unwrap();
    assert!(
        (mean - closed).abs() < 3.0 * se + 0.005,
        "{mean} ± {se} vs {closed}"
    );
}

#[test]
fn secrecy_lies_between_bounds() {
    let p = secrecy_study();
    let engine = SecrecyEngine::new(&p, &QuadratureSpec::default()).unwrap();
    let betas = [db(-5.0), db(0.0), db(5.0), db(10.0)];
    let mc = simulate_secrecy_curve(&p, &betas, &sim(1_500)).unwrap();
    for (b, e) in betas.iter().zip(&mc) {
        let bounds = engine.bounds(*b, VehicularForm::Fast).unwrap();
        assert!(
            e.p_hat - bounds.lower_total >= -e.half_width() * 2.0,
            "β={b}: {e:?} vs {bounds:?}"
        );
        assert!(
            e.p_hat - bounds.lower_total <= 0.05 + e.half_width(),
            "β={b}: {e:?} vs {bounds:?}"
        );
        assert!(
            bounds.upper_total >= e.p_hat - 2.0 * e.half_width(),
            "β={b}: {e:?} vs {bounds:?}"
        );
    }
}

#[test]
fn doubling_the_window_changes_little() {
    let p = coverage_study(2);
    let near = sim(3_000);
    let far = SimConfig {
        window_radius: 2.0 * near.window_radius,
        ..near
    };
    let a = simulate_coverage(&p, db(5.0), &near).unwrap();
    let b = simulate_coverage(&p, db(5.0), &far).unwrap();
    assert!(
        (a.p_hat - b.p_hat).abs() < a.ci_high - a.ci_low,
        "{a:?} vs {b:?}"
    );

    let p = secrecy_study();
    let near = sim(800);
    let far = SimConfig {
        window_radius: 2.0 * near.window_radius,
        ..near
    };
    let a = simulate_secrecy(&p, db(5.0), &near).unwrap();
    let b = simulate_secrecy(&p, db(5.0), &far).unwrap();
    assert!(
        (a.p_hat - b.p_hat).abs() < a.ci_high - a.ci_low,
        "{a:?} vs {b:?}"
    );
}

#[test]
fn nearest_eve_types_match_event_masses() {
    let p = NetworkParams {
        lambda_b: 1e-6,
        lambda_e: 1e-6,
        lambda_l: 1e-3,
        u_b: 1e-3,
        u_e: 1e-3,
        ..secrecy_study()
    };
    let quad = QuadratureSpec::default();
    for (kind, tx) in [
        (TypicalKind::PlanarNode, TransmitterKind::PlanarTx),
        (TypicalKind::VehicularNode, TransmitterKind::VehicularTx),
    ] {
        let freq = simulate_nearest_eve(&p, kind, &sim(20_000)).unwrap();
        for event in MinDistEvent::all_for(tx) {
            let mass = event_mass(event, &p, &quad).unwrap();
            let seen = match event.kind {
                EveKind::VehicularOffTypicalRoad => freq.off_typical_road,
                EveKind::VehicularOnTypicalRoad => freq.on_typical_road,
                EveKind::Planar => freq.planar,
            };
            assert!(
                (seen.p_hat - mass).abs() < 0.015,
                "{event:?}: {seen:?} vs {mass}"
            );
        }
        assert_eq!(freq.none.p_hat, 0.0);
    }
}

#[test]
fn mixture_gain_fractional_moment_matches_omega() {
    for (n, phi, alpha) in [(2, 0.3, 2.3), (3, 1.0 / 3.0, 3.0), (5, 0.9, 4.0)] {
        let p = NetworkParams {
            n_antennas: n,
            phi,
            alpha,
            ..coverage_study(n)
        };
        let draws = mixture_gain_draws(&p, 400_000, 5).unwrap();
        let delta = 2.0 / alpha;
        let empirical = draws.iter().map(|g| g.powf(delta)).sum::<f64>() / draws.len() as f64;
        let w = omega(phi, n, alpha).unwrap();
        assert!(
            (empirical / w - 1.0).abs() < 0.01,
            "{n} {phi} {alpha}: {empirical} vs {w}"
        );
    }
}

#[test]
fn optimistic_eves_dominate_worst_case() {
    let p = secrecy_study();
    let betas = [db(-5.0), db(0.0), db(5.0), db(10.0)];
    let worst = simulate_secrecy_curve(&p, &betas, &sim(500)).unwrap();
    let best = simulate_secrecy_curve(
        &p,
        &betas,
        &SimConfig {
            eve_model: EveModel::Optimistic,
            ..sim(500)
        },
    )
    .unwrap();
    for (w, b) in worst.iter().zip(&best) {
        assert!(b.p_hat >= w.p_hat, "{w:?} vs {b:?}");
    }
}
