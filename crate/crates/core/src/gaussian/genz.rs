//! Separation-of-variables integrator for general dimension.
//!
//! The correlation matrix is Cholesky-factored with variable prioritisation
//! (at each step the variable with the smallest conditional probability goes
//! next). The resulting integral over the unit cube is estimated with a
//! randomly shifted Kronecker lattice, periodised by the tent map and
//! symmetrised antithetically. Independent random shifts give the error
//! estimate; the point count doubles until it meets the target.

use super::normal::{norm_cdf, norm_pdf, norm_ppf};
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PIVOT_TOL: f64 = 1e-12;
const NEGATIVE_PIVOT_TOL: f64 = -1e-10;
const SHIFTS: usize = 12;
const INITIAL_POINTS: usize = 256;
const MAX_POINTS: usize = 1 << 20;
const PRIMES: [f64; 16] = [
    2.0, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0, 23.0, 29.0, 31.0, 37.0, 41.0, 43.0, 47.0, 53.0,
];

/// Lower-triangular factor in the prioritised variable order.
struct Factor {
    n: usize,
    /// Number of leading variables with a non-zero conditional variance.
    free: usize,
    chol: Vec<f64>,
    limits: Vec<f64>,
}

impl Factor {
    fn l(&self, i: usize, j: usize) -> f64 {
        self.chol[i * self.n + j]
    }
}

fn factorize(limits: &[f64], corr: &[f64]) -> Result<Factor> {
    let n = limits.len();
    let mut c = corr.to_vec();
    let mut b = limits.to_vec();
    let mut l = vec![0.0f64; n * n];
    let mut y = vec![0.0f64; n];
    let mut free = n;

    for i in 0..n {
        let mut best: Option<(usize, f64)> = None;
        for j in i..n {
            let var = c[j * n + j] - (0..i).map(|k| l[j * n + k].powi(2)).sum::<f64>();
            if var < NEGATIVE_PIVOT_TOL {
                return Err(Error::NotPsd);
            }
            if var <= PIVOT_TOL {
                continue;
            }
            let mean: f64 = (0..i).map(|k| l[j * n + k] * y[k]).sum();
            let p = norm_cdf((b[j] - mean) / var.sqrt());
            if best.is_none_or(|(_, bp)| p < bp) {
                best = Some((j, p));
            }
        }
        let Some((pivot, _)) = best else {
            free = i;
            break;
        };
        if pivot != i {
            b.swap(i, pivot);
            for k in 0..n {
                c.swap(i * n + k, pivot * n + k);
            }
            for k in 0..n {
                c.swap(k * n + i, k * n + pivot);
            }
            for k in 0..i {
                l.swap(i * n + k, pivot * n + k);
            }
        }
        let diag = (c[i * n + i] - (0..i).map(|k| l[i * n + k].powi(2)).sum::<f64>()).sqrt();
        l[i * n + i] = diag;
        for j in i + 1..n {
            let dot: f64 = (0..i).map(|k| l[j * n + k] * l[i * n + k]).sum();
            l[j * n + i] = (c[j * n + i] - dot) / diag;
        }
        let mean: f64 = (0..i).map(|k| l[i * n + k] * y[k]).sum();
        let bi = (b[i] - mean) / diag;
        let p = norm_cdf(bi);
        y[i] = if p > 1e-300 { -norm_pdf(bi) / p } else { bi };
    }
    Ok(Factor { n, free, chol: l, limits: b })
}

fn integrand(w: &[f64], f: &Factor, y: &mut [f64]) -> f64 {
    let mut prod = 1.0;
    for i in 0..f.free {
        let s: f64 = (0..i).map(|k| f.l(i, k) * y[k]).sum();
        let e = norm_cdf((f.limits[i] - s) / f.l(i, i));
        prod *= e;
        if prod == 0.0 {
            return 0.0;
        }
        if i < w.len() {
            let u = (w[i] * e).clamp(1e-300, 1.0 - 1e-16);
            y[i] = norm_ppf(u);
        }
    }
    for j in f.free..f.n {
        let s: f64 = (0..f.free).map(|k| f.l(j, k) * y[k]).sum();
        if s > f.limits[j] {
            return 0.0;
        }
    }
    prod
}

/// Estimate `P(X <= limits)` for finite limits; returns (value, error, evaluations).
pub fn integrate(limits: &[f64], corr: &[f64], target: f64, seed: u64) -> Result<(f64, f64, u64)> {
    let f = factorize(limits, corr)?;
    let dims = if f.free < f.n { f.free } else { f.free.saturating_sub(1) };
    let mut y = vec![0.0; f.n];
    if dims == 0 {
        let v = integrand(&[], &f, &mut y);
        return Ok((v, 1e-16, 1));
    }

    let z: Vec<f64> = PRIMES[..dims].iter().map(|p| p.sqrt().fract()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shifts: Vec<Vec<f64>> = (0..SHIFTS).map(|_| (0..dims).map(|_| rng.random::<f64>()).collect()).collect();

    let mut sums = [0.0f64; SHIFTS];
    let mut done = 0usize;
    let mut next = INITIAL_POINTS;
    let mut w = vec![0.0; dims];
    let mut w_anti = vec![0.0; dims];
    loop {
        for (m, shift) in shifts.iter().enumerate() {
            let mut acc = 0.0;
            for j in done..next {
                let jf = (j + 1) as f64;
                for k in 0..dims {
                    let x = (jf * z[k] + shift[k]).fract();
                    let t = (2.0 * x - 1.0).abs();
                    w[k] = t;
                    w_anti[k] = 1.0 - t;
                }
                acc += 0.5 * (integrand(&w, &f, &mut y) + integrand(&w_anti, &f, &mut y));
            }
            sums[m] += acc;
        }
        done = next;
        let means: Vec<f64> = sums.iter().map(|s| s / done as f64).collect();
        let mean = means.iter().sum::<f64>() / SHIFTS as f64;
        let var = means.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (SHIFTS - 1) as f64;
        let err = 3.0 * (var / SHIFTS as f64).sqrt();
        if err <= target || done >= MAX_POINTS {
            let evals = (2 * done * SHIFTS) as u64;
            return Ok((mean.clamp(0.0, 1.0), err, evals));
        }
        next = 2 * done;
    }
}
