//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use multistep_barrier::domain::{BarrierSpec, Direction, MarketParams, OptionType, TimeGrid};
use rand::Rng;
use std::f64::consts::PI;

pub fn phi(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    if b <= a {
        return 0.0;
    }
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + k as f64 * h);
    }
    s * h / 3.0
}

pub fn cdf1(b: f64) -> f64 {
    0.5 * libm::erfc(-b / std::f64::consts::SQRT_2)
}

/// Bivariate normal CDF by conditioning on the first coordinate.
pub fn cdf2(a: f64, b: f64, rho: f64) -> f64 {
    let s = (1.0 - rho * rho).sqrt();
    simpson(|u| phi(u) * cdf1((b - rho * u) / s), -10.0, a.min(10.0), 1200)
}

/// Trivariate normal CDF by conditioning on the first coordinate.
pub fn cdf3(b: [f64; 3], r12: f64, r13: f64, r23: f64) -> f64 {
    let (s2, s3) = ((1.0 - r12 * r12).sqrt(), (1.0 - r13 * r13).sqrt());
    let rc = (r23 - r12 * r13) / (s2 * s3);
    simpson(|u| phi(u) * cdf2((b[1] - r12 * u) / s2, (b[2] - r13 * u) / s3, rc), -10.0, b[0].min(10.0), 600)
}

/// Probability that `mu t + sigma W(t)` never touches `levels[i]` during
/// monitored step `i` and ends every step at or below `limits[i]`.
///
/// The sub-density of the position is carried across steps on a uniform
/// node set per step, with the Gaussian kernel damped by the Brownian
/// bridge non-crossing probability. No reflection or multivariate normal
/// CDF is involved.
pub fn bridge_survival(mu: f64, sigma: f64, ends: &[f64], levels: &[Option<f64>], limits: &[f64], nodes: usize) -> f64 {
    let t_end = *ends.last().unwrap();
    let spread = 10.0 * sigma * t_end.sqrt();
    let lo = (mu * t_end).min(0.0) - spread;
    let mut prev_x: Vec<f64> = vec![0.0];
    let mut prev_w: Vec<f64> = vec![1.0];
    let mut t0 = 0.0;
    for (i, &t1) in ends.iter().enumerate() {
        let dt = t1 - t0;
        let sd = sigma * dt.sqrt();
        let mut hi = (mu * t1).max(0.0) + spread;
        hi = hi.min(limits[i]);
        if let Some(m) = levels[i] {
            hi = hi.min(m);
        }
        if hi <= lo {
            return 0.0;
        }
        let h = (hi - lo) / (nodes - 1) as f64;
        let xs: Vec<f64> = (0..nodes).map(|k| lo + k as f64 * h).collect();
        let dens: Vec<f64> = xs
            .iter()
            .map(|&y| {
                let mut acc = 0.0;
                for (&x, &w) in prev_x.iter().zip(&prev_w) {
                    let z = (y - x - mu * dt) / sd;
                    if z.abs() > 12.0 {
                        continue;
                    }
                    let keep = match levels[i] {
                        Some(m) if x < m && y < m => 1.0 - (-2.0 * (m - x) * (m - y) / (sigma * sigma * dt)).exp(),
                        Some(_) => 0.0,
                        None => 1.0,
                    };
                    acc += w * phi(z) / sd * keep;
                }
                acc
            })
            .collect();
        // Trapezoid weights turn densities into masses for the next step.
        prev_w = dens
            .iter()
            .enumerate()
            .map(|(k, d)| if k == 0 || k == nodes - 1 { 0.5 * h * d } else { h * d })
            .collect();
        prev_x = xs;
        t0 = t1;
    }
    prev_w.iter().sum()
}

/// [`bridge_survival`] with Richardson extrapolation over a halved node spacing.
pub fn bridge_survival_extrapolated(mu: f64, sigma: f64, ends: &[f64], levels: &[Option<f64>], limits: &[f64]) -> f64 {
    let coarse = bridge_survival(mu, sigma, ends, levels, limits, 1201);
    let fine = bridge_survival(mu, sigma, ends, levels, limits, 2401);
    (4.0 * fine - coarse) / 3.0
}

/// A random contract with a reachable but not breached barrier.
pub struct RandomCase {
    pub market: MarketParams,
    pub grid: TimeGrid,
    pub barrier: BarrierSpec,
    pub strike: f64,
}

pub fn random_case<R: Rng>(rng: &mut R, max_steps: usize) -> RandomCase {
    let n = rng.random_range(1..=max_steps);
    let maturity = rng.random_range(0.2..2.0);
    let mut cuts: Vec<f64> = (0..n - 1).map(|_| rng.random_range(0.05..0.95) * maturity).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < 0.02 * maturity);
    cuts.push(maturity);
    let grid = TimeGrid::from_step_ends(&cuts).unwrap();
    let spot = 100.0;
    let direction = if rng.random_bool(0.5) { Direction::Up } else { Direction::Down };
    let levels: Vec<Option<f64>> = (0..grid.steps())
        .map(|i| {
            if i > 0 && rng.random_bool(0.25) {
                return None;
            }
            let d = rng.random_range(0.02..0.35);
            Some(match direction {
                Direction::Up => spot * (1.0 + d),
                Direction::Down => spot * (1.0 - d),
            })
        })
        .collect();
    RandomCase {
        market: MarketParams::new(spot, rng.random_range(0.0..0.08), rng.random_range(0.1..0.5)),
        grid,
        barrier: BarrierSpec::new(direction, levels),
        strike: rng.random_range(70.0..130.0),
    }
}

pub fn types_for(direction: Direction) -> Vec<OptionType> {
    OptionType::ALL.into_iter().filter(|t| t.direction() == direction).collect()
}
