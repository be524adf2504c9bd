//! Gaussian distribution functions: univariate, bivariate, trivariate and a
//! general-dimension quasi-Monte Carlo integrator behind one entry point.

mod bvn;
mod chain;
mod genz;
mod normal;
mod quad;
mod tvn;

pub use bvn::bvn_cdf;
pub use chain::{brownian_orthant, ChainRule};
pub use normal::{norm_cdf, norm_pdf, norm_ppf};

use crate::error::{Error, Result};

/// Largest dimension accepted by [`mvn_cdf`].
pub const MAX_DIM: usize = 16;

/// Default absolute error target for [`mvn_cdf`].
pub const DEFAULT_TOLERANCE: f64 = 1e-7;

/// Smallest error target honoured; tighter requests are raised to this.
pub const MIN_TOLERANCE: f64 = 1e-8;

/// Upper orthant limits and a correlation matrix for `P(X_i <= b_i for all i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MvnProblem {
    limits: Vec<f64>,
    corr: Vec<f64>,
    chain: Option<BrownianChain>,
}

/// Correlation generated by `X_i = s_i W(t_i) / sqrt(t_i)`.
#[derive(Debug, Clone, PartialEq)]
struct BrownianChain {
    times: Vec<f64>,
    signs: Vec<f64>,
}

impl MvnProblem {
    /// Build from limits and a row-major `n x n` correlation matrix.
    ///
    /// Limits may be infinite but not NaN. The matrix must be symmetric with
    /// unit diagonal and entries in [-1, 1]; positive semi-definiteness is
    /// checked during integration.
    pub fn new(limits: Vec<f64>, corr: Vec<f64>) -> Result<Self> {
        let n = limits.len();
        if corr.len() != n * n {
            return Err(Error::LengthMismatch { what: "correlation matrix", expected: n * n, actual: corr.len() });
        }
        if limits.iter().any(|b| b.is_nan()) {
            return Err(Error::InvalidConfig("NaN integration limit".into()));
        }
        for i in 0..n {
            if (corr[i * n + i] - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidCorrelation(format!("diagonal entry {i} is {}", corr[i * n + i])));
            }
            for j in 0..i {
                let (a, b) = (corr[i * n + j], corr[j * n + i]);
                if !a.is_finite() || a.abs() > 1.0 + 1e-12 {
                    return Err(Error::InvalidCorrelation(format!("entry ({i}, {j}) is {a}")));
                }
                if (a - b).abs() > 1e-12 {
                    return Err(Error::InvalidCorrelation(format!("not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(MvnProblem { limits, corr, chain: None })
    }

    /// Problem for `X_i = s_i W(t_i) / sqrt(t_i)` with `W` a standard
    /// Brownian motion, increasing positive `times` and signs `+-1`.
    ///
    /// The correlation is `s_i s_j sqrt(t_i / t_j)`; the Markov structure
    /// lets [`mvn_cdf`] use deterministic sequential quadrature.
    pub fn brownian(times: &[f64], signs: &[f64], limits: Vec<f64>) -> Result<Self> {
        let n = limits.len();
        if times.len() != n || signs.len() != n {
            return Err(Error::LengthMismatch { what: "brownian times/signs", expected: n, actual: times.len().min(signs.len()) });
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) || times.first().is_some_and(|&t| !(t > 0.0)) {
            return Err(Error::InvalidCorrelation("times must be positive and increasing".into()));
        }
        if signs.iter().any(|&s| s != 1.0 && s != -1.0) {
            return Err(Error::InvalidCorrelation("signs must be +1 or -1".into()));
        }
        let mut p = Self::from_fn(limits, |i, j| signs[i] * signs[j] * (times[i] / times[j]).sqrt())?;
        p.chain = Some(BrownianChain { times: times.to_vec(), signs: signs.to_vec() });
        Ok(p)
    }

    /// Build from limits and a correlation function of index pairs `(i, j)`, `i < j`.
    pub fn from_fn(limits: Vec<f64>, rho: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let n = limits.len();
        let mut corr = vec![0.0; n * n];
        for i in 0..n {
            corr[i * n + i] = 1.0;
            for j in i + 1..n {
                let r = rho(i, j);
                corr[i * n + j] = r;
                corr[j * n + i] = r;
            }
        }
        Self::new(limits, corr)
    }

    pub fn dim(&self) -> usize {
        self.limits.len()
    }

    pub fn limits(&self) -> &[f64] {
        &self.limits
    }

    pub fn corr(&self, i: usize, j: usize) -> f64 {
        self.corr[i * self.dim() + j]
    }
}

/// A probability with its absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdfEstimate {
    pub value: f64,
    pub error: f64,
    /// Number of integrand (or quadrature node) evaluations spent.
    pub evaluations: u64,
}

impl CdfEstimate {
    fn exact(value: f64) -> Self {
        CdfEstimate { value, error: 0.0, evaluations: 0 }
    }
}

/// `P(X <= b)` for `X ~ N(0, R)`.
///
/// Dimensions one and two are evaluated in closed form, three by adaptive
/// quadrature. Higher dimensions use sequential quadrature when the problem
/// was built with [`MvnProblem::brownian`], and randomised quasi-Monte Carlo
/// with a deterministic stream derived from `seed` otherwise. Limits at
/// `+inf` drop their variable; any `-inf` limit gives exactly zero.
pub fn mvn_cdf(problem: &MvnProblem, target_error: f64, seed: u64) -> Result<CdfEstimate> {
    evaluate(problem, target_error, seed, true)
}

/// As [`mvn_cdf`] but always integrating dimensions above three with the
/// general quasi-Monte Carlo rule, ignoring any Brownian structure.
pub fn mvn_cdf_qmc(problem: &MvnProblem, target_error: f64, seed: u64) -> Result<CdfEstimate> {
    evaluate(problem, target_error, seed, false)
}

fn evaluate(problem: &MvnProblem, target_error: f64, seed: u64, use_structure: bool) -> Result<CdfEstimate> {
    let n = problem.dim();
    if n > MAX_DIM {
        return Err(Error::DimensionTooLarge(n));
    }
    if problem.limits.iter().any(|&b| b == f64::NEG_INFINITY) {
        return Ok(CdfEstimate::exact(0.0));
    }
    let keep: Vec<usize> = (0..n).filter(|&i| problem.limits[i] < f64::INFINITY).collect();
    let b: Vec<f64> = keep.iter().map(|&i| problem.limits[i]).collect();
    let r = |i: usize, j: usize| problem.corr(keep[i], keep[j]);
    let target = target_error.max(MIN_TOLERANCE);

    match keep.len() {
        0 => Ok(CdfEstimate::exact(1.0)),
        1 => Ok(CdfEstimate { value: norm_cdf(b[0]), error: 1e-16, evaluations: 1 }),
        2 => Ok(CdfEstimate { value: bvn_cdf(b[0], b[1], r(0, 1)), error: 1e-15, evaluations: 40 }),
        m => {
            if m == 3 {
                let quad_tol = (target * 1e-4).max(1e-15);
                if let Some((value, error, evaluations)) =
                    tvn::tvn_cdf([b[0], b[1], b[2]], r(0, 1), r(0, 2), r(1, 2), quad_tol)
                {
                    return Ok(CdfEstimate { value, error, evaluations });
                }
            }
            if let (Some(chain), true) = (&problem.chain, use_structure) {
                let times: Vec<f64> = keep.iter().map(|&i| chain.times[i]).collect();
                let signs: Vec<f64> = keep.iter().map(|&i| chain.signs[i]).collect();
                let value = brownian_orthant(&times, &signs, &b, ChainRule::default());
                return Ok(CdfEstimate { value, error: chain::CHAIN_ERROR, evaluations: 0 });
            }
            let mut corr = vec![0.0; m * m];
            for i in 0..m {
                for j in 0..m {
                    corr[i * m + j] = r(i, j);
                }
            }
            let (value, error, evaluations) = genz::integrate(&b, &corr, target, seed)?;
            Ok(CdfEstimate { value, error, evaluations })
        }
    }
}
