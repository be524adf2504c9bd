//! Orthant probabilities with Brownian correlation by sequential quadrature.
//!
//! When `X_i = s_i W(t_i) / sqrt(t_i)` for a standard Brownian motion `W`,
//! the event `{X_i <= z_i for all i}` constrains a Markov chain to a
//! half-line at each time. The sub-density of `W(t_i)` on the surviving set
//! is propagated through the Gaussian transition kernel with composite
//! Gauss–Legendre rules, and the final step is integrated in closed form.

use super::normal::{norm_cdf, norm_pdf};

/// Ten-point Gauss–Legendre nodes and weights on [-1, 1] (positive half).
const GL10_X: [f64; 5] = [
    0.148_874_338_981_631_2,
    0.433_395_394_129_247_2,
    0.679_409_568_299_024_4,
    0.865_063_366_688_984_5,
    0.973_906_528_517_171_7,
];
const GL10_W: [f64; 5] = [
    0.295_524_224_714_752_9,
    0.269_266_719_309_996_3,
    0.219_086_362_515_982,
    0.149_451_349_150_580_6,
    0.066_671_344_308_688_1,
];

/// Truncation of `W(t)` at `+-TAIL sqrt(t)`; the dropped mass is about 1.2e-15.
const TAIL: f64 = 8.0;
/// Kernel contributions beyond this many standard deviations are dropped.
const KERNEL_REACH: f64 = 8.5;

/// Quadrature settings; the default is accurate to roughly 1e-14.
#[derive(Debug, Clone, Copy)]
pub struct ChainRule {
    /// Panel width in units of the smallest relevant kernel deviation.
    pub panel: f64,
}

impl Default for ChainRule {
    fn default() -> Self {
        ChainRule { panel: 2.0 }
    }
}

/// Nominal absolute error of the default rule.
pub const CHAIN_ERROR: f64 = 1e-12;

fn panel_nodes(lo: f64, hi: f64, width: f64, xs: &mut Vec<f64>, ws: &mut Vec<f64>) {
    xs.clear();
    ws.clear();
    if hi <= lo {
        return;
    }
    let panels = ((hi - lo) / width).ceil().max(1.0) as usize;
    let h = (hi - lo) / panels as f64;
    for p in 0..panels {
        let c = lo + (p as f64 + 0.5) * h;
        let half = 0.5 * h;
        for k in (0..5).rev() {
            xs.push(c - half * GL10_X[k]);
            ws.push(half * GL10_W[k]);
        }
        for k in 0..5 {
            xs.push(c + half * GL10_X[k]);
            ws.push(half * GL10_W[k]);
        }
    }
}

/// `P(s_i W(t_i) <= z_i sqrt(t_i) for all i)` for increasing positive
/// `times`, signs `+-1` and finite normalised limits `z`.
pub fn brownian_orthant(times: &[f64], signs: &[f64], z: &[f64], rule: ChainRule) -> f64 {
    let d = times.len();
    debug_assert!(d >= 1 && signs.len() == d && z.len() == d);
    if d == 1 {
        return norm_cdf(z[0]);
    }

    // Surviving interval for W(t_i), truncated to the bulk of its law.
    let support = |i: usize| {
        let r = times[i].sqrt();
        let c = z[i] * r;
        let (mut lo, mut hi) = (-TAIL * r, TAIL * r);
        if signs[i] > 0.0 {
            hi = hi.min(c);
        } else {
            lo = lo.max(-c);
        }
        (lo, hi)
    };
    let sd: Vec<f64> = (0..d)
        .map(|i| if i == 0 { times[0].sqrt() } else { (times[i] - times[i - 1]).sqrt() })
        .collect();

    let (mut xs, mut ws) = (Vec::new(), Vec::new());
    let (lo, hi) = support(0);
    panel_nodes(lo, hi, rule.panel * sd[0].min(sd[1]), &mut xs, &mut ws);
    if xs.is_empty() {
        return 0.0;
    }
    // mass[k] = quadrature weight times sub-density at node k
    let mut mass: Vec<f64> = xs.iter().zip(&ws).map(|(&x, &w)| w * norm_pdf(x / sd[0]) / sd[0]).collect();

    let (mut ys, mut wy) = (Vec::new(), Vec::new());
    for i in 1..d - 1 {
        let (lo, hi) = support(i);
        panel_nodes(lo, hi, rule.panel * sd[i].min(sd[i + 1]), &mut ys, &mut wy);
        if ys.is_empty() {
            return 0.0;
        }
        let s = sd[i];
        let inv = 0.5 / (s * s);
        let norm = 1.0 / (s * (2.0 * std::f64::consts::PI).sqrt());
        let reach = KERNEL_REACH * s;
        let mut start = 0;
        let mut next = Vec::with_capacity(ys.len());
        for (&y, &w) in ys.iter().zip(&wy) {
            while start < xs.len() && xs[start] < y - reach {
                start += 1;
            }
            let mut acc = 0.0;
            for k in start..xs.len() {
                let dx = y - xs[k];
                if dx < -reach {
                    break;
                }
                acc += mass[k] * (-dx * dx * inv).exp();
            }
            next.push(w * norm * acc);
        }
        std::mem::swap(&mut xs, &mut ys);
        mass = next;
    }

    let s = sd[d - 1];
    let c = z[d - 1] * times[d - 1].sqrt();
    let total: f64 = if signs[d - 1] > 0.0 {
        xs.iter().zip(&mass).map(|(&x, &m)| m * norm_cdf((c - x) / s)).sum()
    } else {
        xs.iter().zip(&mass).map(|(&x, &m)| m * norm_cdf((x + c) / s)).sum()
    };
    total.clamp(0.0, 1.0)
}
