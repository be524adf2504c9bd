//! Multi-step reflection and the inclusion–exclusion sum over barrier subsets.
//!
//! For a drifted Brownian motion `X(t) = mu t + sigma W(t)` observed on a
//! grid, the probability of staying below an up barrier `m_i` on each
//! monitored step while ending each step below `x_i` is a signed sum over
//! subsets `J` of the monitored steps. Each term is a Gaussian orthant
//! probability of a path reflected once per element of `J`.

use crate::domain::{default_icicles, Direction, TimeGrid};
use crate::error::{Error, Result};
use crate::gaussian::{self, CdfEstimate, MvnProblem};
use itertools::Itertools;
use rayon::prelude::*;
use std::fmt;

/// Tolerance on the ordering hypotheses `x <= m`, in log units.
const HYPOTHESIS_SLACK: f64 = 1e-12;

/// A set of zero-based step indices, stored as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subset(pub u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_indices(indices: &[usize]) -> Self {
        Subset(indices.iter().fold(0, |acc, &i| acc | (1 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & other.0 == self.0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.contains(i))
    }
}

impl fmt::Display for Subset {
    /// One-based set notation, e.g. `{1,3}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.indices().map(|i| i + 1).join(","))
    }
}

/// Folded levels and orientation signs of the path reflected on `subset`.
///
/// `folded[0] = 0` and, stepping forward, `folded[i+1]` is `m_i - folded[i]`
/// on reflected steps and `folded[i]` otherwise. `signs[i]` is `+1` when an
/// even number of later steps are reflected.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionSequence {
    pub subset: Subset,
    pub folded: Vec<f64>,
    pub signs: Vec<f64>,
}

impl ReflectionSequence {
    /// Folded level after the last step.
    pub fn terminal(&self) -> f64 {
        self.folded[self.folded.len() - 1]
    }
}

/// Compute the reflection recursion for `subset` over `levels` (one per step).
pub fn reflection_sequence(subset: Subset, levels: &[Option<f64>]) -> Result<ReflectionSequence> {
    let n = levels.len();
    if let Some(bad) = subset.indices().find(|&i| i >= n || levels[i].is_none()) {
        return Err(Error::InvalidConfig(format!("step {} is not monitored", bad + 1)));
    }
    let mut folded = vec![0.0; n + 1];
    for i in 0..n {
        folded[i + 1] = match levels[i] {
            Some(m) if subset.contains(i) => m - folded[i],
            _ => folded[i],
        };
    }
    let mut signs = vec![1.0; n];
    let mut later = 0;
    for i in (0..n).rev() {
        signs[i] = if later % 2 == 0 { 1.0 } else { -1.0 };
        if subset.contains(i) {
            later += 1;
        }
    }
    Ok(ReflectionSequence { subset, folded, signs })
}

/// Numerical settings for the probability engine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineOptions {
    /// Absolute error target for each Gaussian orthant probability.
    pub mvn_tol: f64,
    /// Skip supersets of any subset whose term falls below this; 0 disables.
    pub prune_eps: f64,
    pub seed: u64,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions { mvn_tol: gaussian::DEFAULT_TOLERANCE, prune_eps: 0.0, seed: 0x5eed_0f_ba_77 }
    }
}

/// Drifted Brownian motion `mu t + sigma W(t)` observed on a grid.
#[derive(Debug, Clone, Copy)]
pub struct Diffusion<'a> {
    pub drift: f64,
    pub vol: f64,
    pub grid: &'a TimeGrid,
}

impl<'a> Diffusion<'a> {
    pub fn new(drift: f64, vol: f64, grid: &'a TimeGrid) -> Self {
        Diffusion { drift, vol, grid }
    }
}

/// One summand of the inclusion–exclusion sum, before its sign.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub subset: Subset,
    /// `exp(2 mu / sigma^2 * folded_n)`.
    pub weight: f64,
    /// The orthant probability multiplying the weight.
    pub orthant: CdfEstimate,
}

impl Term {
    /// `weight * orthant`, itself a probability.
    pub fn value(&self) -> f64 {
        // A far reflection can overflow the weight while the orthant underflows.
        if self.orthant.value == 0.0 {
            return 0.0;
        }
        self.weight * self.orthant.value
    }

    pub fn error(&self) -> f64 {
        if self.orthant.error == 0.0 {
            return 0.0;
        }
        self.weight * self.orthant.error
    }

    pub fn sign(&self) -> f64 {
        if self.subset.len() % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

fn check_hypotheses(limits: &[f64], levels: &[Option<f64>], subset_label: impl Fn() -> String) -> Result<()> {
    for (i, m) in levels.iter().enumerate() {
        let Some(m) = *m else { continue };
        if i == 0 && m < -HYPOTHESIS_SLACK {
            return Err(Error::HypothesisViolated {
                subset: subset_label(),
                detail: format!("first-step level {m} is below the starting point"),
            });
        }
        for j in [i.wrapping_sub(1), i] {
            if j < limits.len() && !(limits[j] <= m + HYPOTHESIS_SLACK) {
                return Err(Error::HypothesisViolated {
                    subset: subset_label(),
                    detail: format!("limit at end of step {} ({}) exceeds level of step {} ({m})", j + 1, limits[j], i + 1),
                });
            }
        }
    }
    Ok(())
}

fn check_shapes(limits: &[f64], levels: &[Option<f64>], grid: &TimeGrid) -> Result<()> {
    let n = grid.steps();
    if limits.len() != n {
        return Err(Error::LengthMismatch { what: "limits", expected: n, actual: limits.len() });
    }
    if levels.len() != n {
        return Err(Error::LengthMismatch { what: "levels", expected: n, actual: levels.len() });
    }
    if n > gaussian::MAX_DIM {
        return Err(Error::DimensionTooLarge(n));
    }
    if limits.iter().chain(levels.iter().flatten()).any(|v| v.is_nan()) {
        return Err(Error::InvalidConfig("NaN in limits or levels".into()));
    }
    Ok(())
}

fn term_unchecked(
    process: &Diffusion<'_>,
    limits: &[f64],
    levels: &[Option<f64>],
    subset: Subset,
    opts: &EngineOptions,
) -> Result<Term> {
    let seq = reflection_sequence(subset, levels)?;
    let (mu, sigma) = (process.drift, process.vol);
    let ends = process.grid.step_ends();
    let z: Vec<f64> = (0..ends.len())
        .map(|i| {
            let t = ends[i];
            (limits[i] - 2.0 * seq.folded[i + 1] - seq.signs[i] * mu * t) / (sigma * t.sqrt())
        })
        .collect();
    let problem = MvnProblem::brownian(ends, &seq.signs, z)?;
    let weight = if subset.is_empty() { 1.0 } else { (2.0 * mu / (sigma * sigma) * seq.terminal()).exp() };
    let seed = opts.seed ^ u64::from(subset.0).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    let orthant = if weight == 0.0 {
        CdfEstimate { value: 0.0, error: 0.0, evaluations: 0 }
    } else {
        gaussian::mvn_cdf(&problem, opts.mvn_tol, seed)?
    };
    Ok(Term { subset, weight, orthant })
}

/// The unsigned term for reflection subset `subset`:
/// `exp(2 mu m[n] / sigma^2) * P(s_i X(t_i) + 2 m[i] <= x_i for all i)`.
///
/// `limits` holds `x_i` per step (`+inf` for no constraint); `levels` holds
/// the up barrier `m_i` on monitored steps.
pub fn reflected_upper_prob(
    process: &Diffusion<'_>,
    limits: &[f64],
    levels: &[Option<f64>],
    subset: Subset,
    opts: &EngineOptions,
) -> Result<Term> {
    check_shapes(limits, levels, process.grid)?;
    let within: Vec<Option<f64>> =
        levels.iter().enumerate().map(|(i, m)| m.filter(|_| subset.contains(i))).collect();
    check_hypotheses(limits, &within, || subset.to_string())?;
    term_unchecked(process, limits, levels, subset, opts)
}

/// Inclusion–exclusion result with diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct PaResult {
    /// The sum clamped to `[0, 1]`.
    pub probability: f64,
    /// The signed sum as computed.
    pub raw_sum: f64,
    /// Summed per-term error bounds plus the pruned-mass bound.
    pub error_bound: f64,
    pub subsets_evaluated: usize,
    pub subsets_pruned: usize,
    /// Evaluated terms in enumeration order.
    pub terms: Vec<Term>,
}

/// Probability that an up-drifting path stays strictly below the barrier on
/// every monitored step and ends each step `i` at or below `limits[i]`.
///
/// Subsets are enumerated by size, lexicographically within a size; terms
/// of one size are evaluated in parallel and summed in enumeration order.
pub fn pa_u(
    process: &Diffusion<'_>,
    limits: &[f64],
    levels: &[Option<f64>],
    opts: &EngineOptions,
) -> Result<PaResult> {
    check_shapes(limits, levels, process.grid)?;
    let active: Vec<usize> = levels.iter().enumerate().filter_map(|(i, m)| m.map(|_| i)).collect();
    check_hypotheses(limits, levels, || Subset::from_indices(&active).to_string())?;

    let mut raw_sum = 0.0;
    let mut error = 0.0;
    let mut pruned_roots: Vec<Subset> = Vec::new();
    let mut skipped = 0usize;
    let mut terms = Vec::new();

    for size in 0..=active.len() {
        let (candidates, blocked): (Vec<Subset>, Vec<Subset>) = active
            .iter()
            .copied()
            .combinations(size)
            .map(|c| Subset::from_indices(&c))
            .partition(|s| !pruned_roots.iter().any(|p| p.is_subset_of(*s)));
        skipped += blocked.len();
        if candidates.is_empty() {
            continue;
        }
        let level: Vec<Term> = candidates
            .par_iter()
            .map(|&s| term_unchecked(process, limits, levels, s, opts))
            .collect::<Result<_>>()?;
        for t in level {
            raw_sum += t.sign() * t.value();
            error += t.error();
            if opts.prune_eps > 0.0 && t.value() < opts.prune_eps {
                pruned_roots.push(t.subset);
            }
            terms.push(t);
        }
    }
    error += opts.prune_eps * skipped as f64;
    Ok(PaResult {
        probability: raw_sum.clamp(0.0, 1.0),
        raw_sum,
        error_bound: error,
        subsets_evaluated: terms.len(),
        subsets_pruned: skipped,
        terms,
    })
}

/// Down-barrier counterpart of [`pa_u`]: the path stays strictly above the
/// barrier and ends each step at or above `limits[i]` (`-inf` for none).
/// Evaluated by mirroring drift, limits and levels.
pub fn pa_d(
    process: &Diffusion<'_>,
    limits: &[f64],
    levels: &[Option<f64>],
    opts: &EngineOptions,
) -> Result<PaResult> {
    let mirrored = Diffusion { drift: -process.drift, ..*process };
    let limits: Vec<f64> = limits.iter().map(|x| -x).collect();
    let levels: Vec<Option<f64>> = levels.iter().map(|m| m.map(|m| -m)).collect();
    pa_u(&mirrored, &limits, &levels, opts)
}

/// Dispatch to [`pa_u`] or [`pa_d`].
pub fn pa(
    direction: Direction,
    process: &Diffusion<'_>,
    limits: &[f64],
    levels: &[Option<f64>],
    opts: &EngineOptions,
) -> Result<PaResult> {
    match direction {
        Direction::Up => pa_u(process, limits, levels, opts),
        Direction::Down => pa_d(process, limits, levels, opts),
    }
}

/// Probability of never touching an up barrier monitored on every step,
/// with the icicles implied by the barrier itself.
pub fn survival_prob_no_icicles(process: &Diffusion<'_>, levels: &[f64], opts: &EngineOptions) -> Result<PaResult> {
    let levels: Vec<Option<f64>> = levels.iter().map(|&m| Some(m)).collect();
    let limits = default_icicles(Direction::Up, &levels);
    pa_u(process, &limits, &levels, opts)
}
