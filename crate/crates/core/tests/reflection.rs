mod common;

use multistep_barrier::domain::{default_icicles, BarrierSpec, Direction, MarketParams, TimeGrid};
use multistep_barrier::montecarlo::{simulate_survival, McConfig};
use multistep_barrier::reflection::{pa, pa_u, Diffusion, EngineOptions};
use multistep_barrier::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn survival_matches_bridge_kernel_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for case in 0..12 {
        let n = rng.random_range(1..=4);
        let grid = TimeGrid::uniform(n, rng.random_range(0.25..1.0)).unwrap();
        let levels: Vec<Option<f64>> = (0..n)
            .map(|i| if i > 0 && rng.random_bool(0.3) { None } else { Some(rng.random_range(0.03..0.25)) })
            .collect();
        let mut limits = default_icicles(Direction::Up, &levels);
        // Sometimes tighten an icicle, including on unmonitored steps.
        let j = rng.random_range(0..n);
        if rng.random_bool(0.5) {
            limits[j] = limits[j].min(0.2) - rng.random_range(0.0..0.1);
        }
        let (mu, sigma) = (rng.random_range(-0.1..0.1), rng.random_range(0.1..0.3));
        let got = pa_u(&Diffusion::new(mu, sigma, &grid), &limits, &levels, &EngineOptions::default()).unwrap();
        let want = common::bridge_survival_extrapolated(mu, sigma, grid.step_ends(), &levels, &limits);
        assert!(
            (got.probability - want).abs() < 5e-7,
            "case {case}: reflection {} vs quadrature {want} (levels {levels:?}, limits {limits:?})",
            got.probability
        );
    }
}

#[test]
fn down_survival_matches_simulation() {
    let grid = TimeGrid::uniform(4, 1.0).unwrap();
    let market = MarketParams::new(100.0, 0.0, 0.25).with_drift(0.02);
    let barrier = BarrierSpec::new(Direction::Down, vec![Some(90.0), None, Some(85.0), Some(88.0)]);
    let log: Vec<Option<f64>> = barrier.levels.iter().map(|b| b.map(|b| (b / 100.0f64).ln())).collect();
    let limits = default_icicles(Direction::Down, &log);
    let p = pa(Direction::Down, &Diffusion::new(0.02, 0.25, &grid), &limits, &log, &EngineOptions::default()).unwrap();
    let cfg = McConfig { paths: 400_000, batches: 40, seed: 7, bridge: true };
    let mc = simulate_survival(&market, &grid, &barrier, &cfg).unwrap();
    assert!((mc.price - p.probability).abs() < 4.0 * mc.std_error, "{} vs {} (se {})", mc.price, p.probability, mc.std_error);
}

#[test]
fn partial_monitoring_between_free_steps() {
    // A single monitored middle step with free steps around it.
    let grid = TimeGrid::uniform(3, 0.75).unwrap();
    let levels = vec![None, Some(0.1), None];
    let limits = default_icicles(Direction::Up, &levels);
    assert_eq!(limits, vec![0.1, 0.1, f64::INFINITY]);
    let got = pa_u(&Diffusion::new(0.03, 0.2, &grid), &limits, &levels, &EngineOptions::default()).unwrap();
    let want = common::bridge_survival_extrapolated(0.03, 0.2, grid.step_ends(), &levels, &limits);
    assert!((got.probability - want).abs() < 5e-7, "{} vs {want}", got.probability);
    assert_eq!(got.subsets_evaluated, 2);
}

#[test]
fn hypotheses_checked_only_on_monitored_steps() {
    let grid = TimeGrid::uniform(2, 0.5).unwrap();
    let opts = EngineOptions::default();
    let process = Diffusion::new(0.0, 0.2, &grid);
    // A free step must still end below the level of the monitored step after it.
    assert!(pa_u(&process, &[0.5, 0.1], &[None, Some(0.1)], &opts).is_err());
    assert!(pa_u(&process, &[0.05, 0.1], &[None, Some(0.1)], &opts).is_ok());
    assert!(matches!(
        pa_u(&process, &[0.2, 0.1], &[Some(0.1), None], &opts),
        Err(Error::HypothesisViolated { .. })
    ));
}

#[test]
fn terms_sum_to_reported_total() {
    let grid = TimeGrid::uniform(5, 1.0).unwrap();
    let levels: Vec<Option<f64>> = [0.1, 0.15, 0.12, 0.2, 0.25].iter().map(|&m| Some(m)).collect();
    let limits = default_icicles(Direction::Up, &levels);
    let r = pa_u(&Diffusion::new(0.01, 0.2, &grid), &limits, &levels, &EngineOptions::default()).unwrap();
    assert_eq!(r.terms.len(), 32);
    let sum: f64 = r.terms.iter().map(|t| t.sign() * t.value()).sum();
    assert!((sum - r.raw_sum).abs() < 1e-15);
    assert!(r.terms.windows(2).all(|w| w[0].subset.len() <= w[1].subset.len()));
}
