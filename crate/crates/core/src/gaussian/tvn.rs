//! Trivariate normal distribution function by one-dimensional conditioning.

use super::bvn::bvn_cdf;
use super::normal::norm_pdf;
use super::quad;

/// Lower truncation of the conditioning variable; the neglected mass is below 1e-19.
const LOWER: f64 = -9.0;

/// Correlations beyond this make the conditional integrand too steep; the
/// caller should use the general integrator instead.
pub const MAX_ABS_RHO: f64 = 0.999;

/// `P(X_i <= b_i, i = 0..3)` for finite limits and correlation entries
/// `r01, r02, r12`. Returns `None` if every choice of conditioning variable
/// leaves a near-singular conditional distribution.
pub fn tvn_cdf(b: [f64; 3], r01: f64, r02: f64, r12: f64, tol: f64) -> Option<(f64, f64, u64)> {
    let r = [[1.0, r01, r02], [r01, 1.0, r12], [r02, r12, 1.0]];
    let (c, worst) = (0..3)
        .map(|c| {
            let m = (0..3).filter(|&j| j != c).map(|j| r[c][j].abs()).fold(0.0, f64::max);
            (c, m)
        })
        .min_by(|x, y| x.1.total_cmp(&y.1))?;
    if worst > MAX_ABS_RHO {
        return None;
    }
    let others: Vec<usize> = (0..3).filter(|&j| j != c).collect();
    let (p, q) = (others[0], others[1]);
    let sp = (1.0 - r[c][p] * r[c][p]).sqrt();
    let sq = (1.0 - r[c][q] * r[c][q]).sqrt();
    let rho_cond = ((r[p][q] - r[c][p] * r[c][q]) / (sp * sq)).clamp(-1.0, 1.0);
    let upper = b[c].min(9.0);
    if upper <= LOWER {
        return Some((0.0, 1e-19, 0));
    }
    let f = |x: f64| {
        norm_pdf(x) * bvn_cdf((b[p] - r[c][p] * x) / sp, (b[q] - r[c][q] * x) / sq, rho_cond)
    };
    let out = quad::integrate(f, LOWER, upper, tol, 400);
    Some((out.value.clamp(0.0, 1.0), out.error + 2e-15, out.evaluations))
}
