//! Risk-neutral prices of the eight multi-step barrier options.
//!
//! Every price is a combination of two survival probabilities, one under the
//! drift `r - sigma^2/2` (weighted by the discounted strike) and one under
//! `r + sigma^2/2` (weighted by spot). Knock-in prices are assembled from
//! their own probability legs rather than by subtracting the knock-out from
//! the vanilla, so in/out parity stays an independent check.

use crate::domain::{to_log_space, Direction, MarketParams, OptionContract, OptionType, TimeGrid};
use crate::domain::{BarrierSpec, LogBarrier};
use crate::error::{Error, Result};
use crate::gaussian::norm_cdf;
use crate::reflection::{pa, Diffusion, EngineOptions};
use std::cell::RefCell;
use std::collections::HashMap;

/// Esscher tilt taking the physical drift to the two pricing drifts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EsscherParams {
    /// Tilt `h*` with `mu + h* sigma^2 = r - sigma^2/2`.
    pub h_star: f64,
    /// `r - sigma^2/2`, the risk-neutral log drift.
    pub drift_minus: f64,
    /// `r + sigma^2/2`, the log drift under the share measure.
    pub drift_plus: f64,
}

impl EsscherParams {
    pub fn new(market: &MarketParams) -> Self {
        let (drift_minus, drift_plus) = esscher_drifts(market.rate, market.vol);
        let h_star = (drift_minus - market.log_drift()) / (market.vol * market.vol);
        EsscherParams { h_star, drift_minus, drift_plus }
    }
}

/// `(r - sigma^2/2, r + sigma^2/2)`.
pub fn esscher_drifts(rate: f64, vol: f64) -> (f64, f64) {
    let half = 0.5 * vol * vol;
    (rate - half, rate + half)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VanillaKind {
    Call,
    Put,
}

/// Black–Scholes price of a European call or put.
pub fn vanilla_bs(kind: VanillaKind, spot: f64, strike: f64, rate: f64, vol: f64, maturity: f64) -> f64 {
    let k = (strike / spot).ln();
    let (dm, dp) = esscher_drifts(rate, vol);
    let s = vol * maturity.sqrt();
    let disc = strike * (-rate * maturity).exp();
    match kind {
        VanillaKind::Call => spot * norm_cdf(-(k - dp * maturity) / s) - disc * norm_cdf(-(k - dm * maturity) / s),
        VanillaKind::Put => disc * norm_cdf((k - dm * maturity) / s) - spot * norm_cdf((k - dp * maturity) / s),
    }
}

/// Closed-form continuously monitored down-and-out call with a single
/// barrier `barrier < spot` over `[0, maturity]`.
pub fn ordinary_doc(spot: f64, strike: f64, barrier: f64, rate: f64, vol: f64, maturity: f64) -> f64 {
    let k = (strike / spot).ln();
    let m = (barrier / spot).ln();
    let (dm, dp) = esscher_drifts(rate, vol);
    let s = vol * maturity.sqrt();
    let disc = strike * (-rate * maturity).exp();
    let y = (-k).min(-m);
    let a = 2.0 * rate / (vol * vol);
    spot * norm_cdf((y + dp * maturity) / s) - spot * ((a + 1.0) * m).exp() * norm_cdf((y + 2.0 * m + dp * maturity) / s)
        - disc * norm_cdf((y + dm * maturity) / s)
        + disc * ((a - 1.0) * m).exp() * norm_cdf((y + 2.0 * m + dm * maturity) / s)
}

/// One survival probability entering a price.
#[derive(Debug, Clone, PartialEq)]
pub struct Leg {
    pub drift: f64,
    /// Log-space end-of-step limits used for this leg.
    pub limits: Vec<f64>,
    pub probability: f64,
    pub error_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PriceResult {
    pub option_type: OptionType,
    pub strike: f64,
    pub price: f64,
    /// Matching vanilla price (call or put).
    pub vanilla: f64,
    pub legs: Vec<Leg>,
    /// Probability errors scaled by their currency weights.
    pub error_bound: f64,
    pub subsets_evaluated: usize,
    pub subsets_pruned: usize,
    /// The first-step barrier was already breached at inception.
    pub knocked_at_inception: bool,
}

#[derive(Debug, Clone, Copy)]
struct CachedPa {
    probability: f64,
    error_bound: f64,
    evaluated: usize,
    pruned: usize,
}

/// Prices options sharing one market, grid and barrier.
///
/// Survival probabilities are cached, so pricing all eight types and
/// several strikes on the same barrier costs far fewer probability
/// evaluations than pricing them one by one.
pub struct Pricer {
    market: MarketParams,
    grid: TimeGrid,
    barrier: BarrierSpec,
    log: LogBarrier,
    knocked: bool,
    opts: EngineOptions,
    cache: RefCell<HashMap<(u64, Vec<u64>), CachedPa>>,
}

impl Pricer {
    pub fn new(market: MarketParams, grid: TimeGrid, barrier: BarrierSpec, opts: EngineOptions) -> Result<Self> {
        let knocked = match crate::domain::validate(&grid, &market, &barrier) {
            Ok(()) => false,
            Err(Error::ImmediateKnock { .. }) => true,
            Err(e) => return Err(e),
        };
        let log = to_log_space(&barrier, market.spot, None);
        Ok(Pricer { market, grid, barrier, log, knocked, opts, cache: RefCell::new(HashMap::new()) })
    }

    pub fn market(&self) -> &MarketParams {
        &self.market
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn barrier(&self) -> &BarrierSpec {
        &self.barrier
    }

    fn survival(&self, drift: f64, limits: Vec<f64>) -> Result<(Leg, CachedPa)> {
        let key = (drift.to_bits(), limits.iter().map(|x| x.to_bits()).collect::<Vec<_>>());
        if let Some(c) = self.cache.borrow().get(&key) {
            let leg = Leg { drift, limits, probability: c.probability, error_bound: c.error_bound };
            return Ok((leg, CachedPa { evaluated: 0, pruned: 0, ..*c }));
        }
        let process = Diffusion::new(drift, self.market.vol, &self.grid);
        let r = pa(self.log.direction, &process, &limits, &self.log.levels, &self.opts)?;
        let c = CachedPa {
            probability: r.probability,
            error_bound: r.error_bound,
            evaluated: r.subsets_evaluated,
            pruned: r.subsets_pruned,
        };
        self.cache.borrow_mut().insert(key, c);
        Ok((Leg { drift, limits, probability: c.probability, error_bound: c.error_bound }, c))
    }

    /// Price one option on this pricer's barrier.
    pub fn price(&self, option_type: OptionType, strike: f64) -> Result<PriceResult> {
        if !(strike > 0.0) || !strike.is_finite() {
            return Err(Error::NonPositiveStrike(strike));
        }
        if option_type.direction() != self.log.direction {
            return Err(Error::BarrierDirectionMismatch(format!("{option_type} with a {} barrier", self.log.direction)));
        }
        let MarketParams { spot, rate, vol, .. } = self.market;
        let t = self.grid.maturity();
        let kind = if option_type.is_call() { VanillaKind::Call } else { VanillaKind::Put };
        let vanilla = vanilla_bs(kind, spot, strike, rate, vol, t);
        let mut out = PriceResult {
            option_type,
            strike,
            price: 0.0,
            vanilla,
            legs: Vec::new(),
            error_bound: 0.0,
            subsets_evaluated: 0,
            subsets_pruned: 0,
            knocked_at_inception: self.knocked,
        };
        if self.knocked {
            out.price = if option_type.is_knock_in() { vanilla } else { 0.0 };
            return Ok(out);
        }

        let k = (strike / spot).ln();
        let (dm, dp) = esscher_drifts(rate, vol);
        let s = vol * t.sqrt();
        let disc = strike * (-rate * t).exp();
        let x = self.log.icicles.clone();
        let n = x.len();
        let last = x[n - 1];
        let with_last = |v: f64| {
            let mut y = x.clone();
            y[n - 1] = v;
            y
        };
        // Legs are requested as (drift, limits, currency weight) and combined below.
        let mut legs: Vec<(f64, Vec<f64>, f64)> = Vec::new();
        let mut constant = 0.0;

        use OptionType::*;
        match option_type {
            UpOutPut | UpInPut => {
                let lim = with_last(last.min(k));
                legs.push((dm, lim.clone(), disc));
                legs.push((dp, lim, -spot));
                if option_type == UpInPut {
                    constant = disc * norm_cdf((k - dm * t) / s) - spot * norm_cdf((k - dp * t) / s);
                }
            }
            UpOutCall | UpInCall => {
                if k < last {
                    let lim = with_last(k);
                    legs.push((dp, x.clone(), spot));
                    legs.push((dp, lim.clone(), -spot));
                    legs.push((dm, x.clone(), -disc));
                    legs.push((dm, lim, disc));
                    if option_type == UpInCall {
                        constant = spot * norm_cdf(-(k - dp * t) / s) - disc * norm_cdf(-(k - dm * t) / s);
                    }
                } else if option_type == UpInCall {
                    out.price = vanilla;
                    return Ok(out);
                }
            }
            DownOutCall | DownInCall => {
                let lim = with_last(last.max(k));
                legs.push((dp, lim.clone(), spot));
                legs.push((dm, lim, -disc));
                if option_type == DownInCall {
                    constant = spot * norm_cdf((-k + dp * t) / s) - disc * norm_cdf((-k + dm * t) / s);
                }
            }
            DownOutPut | DownInPut => {
                if k > last {
                    let lim = with_last(k);
                    legs.push((dm, x.clone(), disc));
                    legs.push((dm, lim.clone(), -disc));
                    legs.push((dp, x.clone(), -spot));
                    legs.push((dp, lim, spot));
                    if option_type == DownInPut {
                        constant = disc * norm_cdf((k - dm * t) / s) - spot * norm_cdf((k - dp * t) / s);
                    }
                } else if option_type == DownInPut {
                    out.price = vanilla;
                    return Ok(out);
                }
            }
        }

        let sign = if option_type.is_knock_in() { -1.0 } else { 1.0 };
        let mut price = constant;
        for (drift, limits, weight) in legs {
            let (leg, stats) = self.survival(drift, limits)?;
            price += sign * weight * leg.probability;
            out.error_bound += weight.abs() * leg.error_bound;
            out.subsets_evaluated += stats.evaluated;
            out.subsets_pruned += stats.pruned;
            out.legs.push(leg);
        }
        out.price = price;
        Ok(out)
    }
}

/// Price a single contract.
pub fn price(contract: &OptionContract, market: &MarketParams, opts: &EngineOptions) -> Result<PriceResult> {
    if !(contract.strike > 0.0) || !contract.strike.is_finite() {
        return Err(Error::NonPositiveStrike(contract.strike));
    }
    if contract.option_type.direction() != contract.barrier.direction {
        return Err(Error::BarrierDirectionMismatch(format!(
            "{} with a {} barrier",
            contract.option_type, contract.barrier.direction
        )));
    }
    let pricer = Pricer::new(*market, contract.grid.clone(), contract.barrier.clone(), *opts)?;
    pricer.price(contract.option_type, contract.strike)
}

/// Barrier that can never be reached from spot in the given direction.
pub fn unreachable_barrier(direction: Direction, steps: usize) -> BarrierSpec {
    let level = match direction {
        Direction::Up => 1e300,
        Direction::Down => 1e-300,
    };
    BarrierSpec::flat(direction, level, steps)
}
