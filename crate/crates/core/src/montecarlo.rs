//! Monte Carlo pricer used to validate the analytic engine.
//!
//! The log price is sampled exactly at the grid times. Between two grid
//! times the barrier is flat, so the chance that the Brownian bridge joining
//! the two samples touched it has a closed form; one uniform per monitored
//! step decides the hit. Nothing is discretised, so the estimator is unbiased.

use crate::domain::{self, BarrierSpec, Direction, MarketParams, OptionContract, OptionType, TimeGrid};
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub paths: u64,
    /// Independent batches; the standard error comes from their means.
    pub batches: u32,
    pub seed: u64,
    /// Use the bridge hit test; when off, only the grid samples are checked.
    pub bridge: bool,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig { paths: 1_000_000, batches: 100, seed: 20_240_917, bridge: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub price: f64,
    pub std_error: f64,
    pub paths: u64,
}

/// Probability that a Brownian bridge from `a` to `b` over `dt` with
/// volatility `vol` touches the level `m` from below.
pub fn bridge_hit_prob(a: f64, b: f64, m: f64, vol: f64, dt: f64) -> f64 {
    if a >= m || b >= m {
        return 1.0;
    }
    (-2.0 * (m - a) * (m - b) / (vol * vol * dt)).exp()
}

/// Knock-out, knock-in and vanilla prices of several products on one set of paths.
#[derive(Debug, Clone, PartialEq)]
pub struct BookEstimate {
    pub products: Vec<(OptionType, f64)>,
    pub prices: Vec<McEstimate>,
    /// Vanilla call or put matching each product, on the same paths.
    pub vanilla: Vec<McEstimate>,
}

struct PathSetup {
    drift_dt: Vec<f64>,
    vol_dt: Vec<f64>,
    dt: Vec<f64>,
    /// Log barrier per step in up orientation (down barriers negated).
    levels: Vec<Option<f64>>,
    icicles: Vec<f64>,
    flip: f64,
}

fn setup(market: &MarketParams, mu: f64, grid: &TimeGrid, barrier: &BarrierSpec) -> PathSetup {
    let flip = match barrier.direction {
        Direction::Up => 1.0,
        Direction::Down => -1.0,
    };
    let log = domain::to_log_space(barrier, market.spot, None);
    let n = grid.steps();
    let dt: Vec<f64> = (0..n).map(|i| grid.end(i) - grid.start(i)).collect();
    PathSetup {
        drift_dt: dt.iter().map(|d| mu * d).collect(),
        vol_dt: dt.iter().map(|d| market.vol * d.sqrt()).collect(),
        levels: log.levels.iter().map(|m| m.map(|m| flip * m)).collect(),
        icicles: log.icicles.iter().map(|x| flip * x).collect(),
        dt,
        flip,
    }
}

/// Simulate one path; returns the terminal log price and whether it was knocked.
fn path<R: Rng>(s: &PathSetup, vol: f64, bridge: bool, rng: &mut R) -> (f64, bool) {
    let mut x = 0.0;
    let mut knocked = false;
    for i in 0..s.dt.len() {
        let z: f64 = rng.sample(StandardNormal);
        let next = x + s.drift_dt[i] + s.vol_dt[i] * z;
        if let Some(m) = s.levels[i] {
            let u: f64 = rng.random();
            let (a, b) = (s.flip * x, s.flip * next);
            let hit = if bridge { u < bridge_hit_prob(a, b, m, vol, s.dt[i]) } else { a >= m || b >= m };
            knocked |= hit;
        }
        if s.flip * next > s.icicles[i] {
            knocked = true;
        }
        x = next;
    }
    (x, knocked)
}

/// Price several products sharing one barrier on the same simulated paths.
///
/// Every product's direction must match the barrier. Per path the knock-in
/// and knock-out indicators sum to one, so in + out equals the vanilla
/// estimate exactly.
pub fn simulate_book(
    market: &MarketParams,
    grid: &TimeGrid,
    barrier: &BarrierSpec,
    products: &[(OptionType, f64)],
    config: &McConfig,
) -> Result<BookEstimate> {
    match domain::validate(grid, market, barrier) {
        Ok(()) | Err(Error::ImmediateKnock { .. }) => {}
        Err(e) => return Err(e),
    }
    for &(t, k) in products {
        if t.direction() != barrier.direction {
            return Err(Error::BarrierDirectionMismatch(format!("{t} with a {} barrier", barrier.direction)));
        }
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::NonPositiveStrike(k));
        }
    }
    check_config(config)?;

    let s = setup(market, market.rate - 0.5 * market.vol * market.vol, grid, barrier);
    let disc = (-market.rate * grid.maturity()).exp();
    let spot = market.spot;
    let batches = u64::from(config.batches);
    let np = products.len();

    // Per batch: sums of discounted payoffs, products then vanillas.
    let per_batch: Vec<(u64, Vec<f64>)> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let count = config.paths / batches + u64::from(b < config.paths % batches);
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(b);
            let mut sums = vec![0.0; 2 * np];
            for _ in 0..count {
                let (x, knocked) = path(&s, market.vol, config.bridge, &mut rng);
                let st = spot * x.exp();
                for (j, &(t, k)) in products.iter().enumerate() {
                    let payoff = if t.is_call() { (st - k).max(0.0) } else { (k - st).max(0.0) };
                    if t.is_knock_in() == knocked {
                        sums[j] += payoff;
                    }
                    sums[np + j] += payoff;
                }
            }
            (count, sums.into_iter().map(|v| v * disc).collect())
        })
        .collect();

    let estimate = |j: usize| {
        let column: Vec<(u64, f64)> = per_batch.iter().map(|(c, s)| (*c, s[j])).collect();
        batch_estimate(&column, config.paths)
    };
    Ok(BookEstimate {
        products: products.to_vec(),
        prices: (0..np).map(estimate).collect(),
        vanilla: (np..2 * np).map(estimate).collect(),
    })
}

fn check_config(config: &McConfig) -> Result<()> {
    if config.paths == 0 || config.batches < 2 || u64::from(config.batches) > config.paths {
        return Err(Error::InvalidConfig(format!(
            "need at least 2 batches and one path per batch (paths {}, batches {})",
            config.paths, config.batches
        )));
    }
    Ok(())
}

fn batch_estimate(per_batch: &[(u64, f64)], paths: u64) -> McEstimate {
    let total: f64 = per_batch.iter().map(|(_, s)| s).sum();
    let means: Vec<f64> = per_batch.iter().map(|(c, s)| s / *c as f64).collect();
    let mean_of_means = means.iter().sum::<f64>() / means.len() as f64;
    let var = means.iter().map(|m| (m - mean_of_means).powi(2)).sum::<f64>() / (means.len() - 1) as f64;
    McEstimate { price: total / paths as f64, std_error: (var / means.len() as f64).sqrt(), paths }
}

/// Probability that the price never touches the barrier (nor breaks an
/// icicle), with the log price drifting at [`MarketParams::log_drift`].
pub fn simulate_survival(
    market: &MarketParams,
    grid: &TimeGrid,
    barrier: &BarrierSpec,
    config: &McConfig,
) -> Result<McEstimate> {
    match domain::validate(grid, market, barrier) {
        Ok(()) => {}
        Err(Error::ImmediateKnock { .. }) => return Ok(McEstimate { price: 0.0, std_error: 0.0, paths: config.paths }),
        Err(e) => return Err(e),
    }
    check_config(config)?;
    let s = setup(market, market.log_drift(), grid, barrier);
    let batches = u64::from(config.batches);
    let per_batch: Vec<(u64, f64)> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let count = config.paths / batches + u64::from(b < config.paths % batches);
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(b);
            let alive = (0..count).filter(|_| !path(&s, market.vol, config.bridge, &mut rng).1).count();
            (count, alive as f64)
        })
        .collect();
    Ok(batch_estimate(&per_batch, config.paths))
}

/// Monte Carlo price of one contract.
pub fn simulate_price(contract: &OptionContract, market: &MarketParams, config: &McConfig) -> Result<McEstimate> {
    let book = simulate_book(market, &contract.grid, &contract.barrier, &[(contract.option_type, contract.strike)], config)?;
    Ok(book.prices[0])
}

/// `sqrt(mean(((C_i - C~_i) / C_i)^2))` over `(reference, estimate)` pairs.
pub fn rms_relative_error(pairs: &[(f64, f64)]) -> Result<f64> {
    if let Some(i) = pairs.iter().position(|(c, _)| *c == 0.0) {
        return Err(Error::ZeroReference(i));
    }
    if pairs.is_empty() {
        return Ok(0.0);
    }
    let sum: f64 = pairs.iter().map(|(c, e)| ((c - e) / c).powi(2)).sum();
    Ok((sum / pairs.len() as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bridge_probability() {
        assert_eq!(bridge_hit_prob(0.1, 0.0, 0.1, 0.2, 0.5), 1.0);
        let (vol, dt) = (0.2, 0.25f64);
        let m = 0.3;
        let a = m - vol * dt.sqrt();
        assert!((bridge_hit_prob(a, a, m, vol, dt) - (-2.0f64).exp()).abs() < 1e-15);
        assert_eq!(bridge_hit_prob(0.0, 0.0, f64::INFINITY, vol, dt), 0.0);
    }

    #[test]
    fn survival_without_barrier_is_certain() {
        let grid = TimeGrid::uniform(2, 1.0).unwrap();
        let m = MarketParams::new(100.0, 0.03, 0.2).with_drift(0.05);
        let b = BarrierSpec::new(Direction::Up, vec![None, None]);
        let cfg = McConfig { paths: 1000, batches: 10, ..Default::default() };
        let est = simulate_survival(&m, &grid, &b, &cfg).unwrap();
        assert_eq!((est.price, est.std_error), (1.0, 0.0));
    }

    #[test]
    fn rms() {
        assert_eq!(rms_relative_error(&[(1.0, 1.0), (2.0, 2.0)]).unwrap(), 0.0);
        assert!((rms_relative_error(&[(2.0, 2.02)]).unwrap() - 0.01).abs() < 1e-12);
        assert_eq!(rms_relative_error(&[(1.0, 1.0), (0.0, 0.1)]), Err(Error::ZeroReference(1)));
    }

    #[test]
    fn deterministic_and_parity_exact() {
        let grid = TimeGrid::uniform(3, 0.5).unwrap();
        let m = MarketParams::new(100.0, 0.03, 0.2);
        let b = BarrierSpec::full(Direction::Up, &[110.0, 115.0, 120.0]);
        let cfg = McConfig { paths: 20_000, batches: 10, ..Default::default() };
        let products = [(OptionType::UpOutCall, 100.0), (OptionType::UpInCall, 100.0)];
        let a = simulate_book(&m, &grid, &b, &products, &cfg).unwrap();
        let c = simulate_book(&m, &grid, &b, &products, &cfg).unwrap();
        assert_eq!(a, c);
        let sum = a.prices[0].price + a.prices[1].price;
        assert!((sum - a.vanilla[0].price).abs() < 1e-12 * a.vanilla[0].price.max(1.0));
    }
}
