//! Curved barriers approximated by multi-step barriers.

use crate::domain::{default_icicles, BarrierSpec, Direction, MarketParams, OptionType, TimeGrid};
use crate::error::{Error, Result};
use crate::gaussian::norm_ppf;
use crate::pricing::{PriceResult, Pricer};
use crate::reflection::{pa, Diffusion, EngineOptions, PaResult};
use std::fmt;
use std::str::FromStr;

/// A continuously monitored barrier of time.
#[derive(Debug, Clone, PartialEq)]
pub enum CurvedBarrier {
    /// Log-space curve `g(t) = mu t + z sigma sqrt(t)`: the `z`-quantile of
    /// the log price at each time, with `mu` and `sigma` taken from the market.
    Quantile { z: f64 },
    /// Price curve `c0 + c1 t`.
    LinearPrice { c0: f64, c1: f64 },
    /// Price curve `a exp(delta t)`.
    Exponential { a: f64, delta: f64 },
    /// Price curve through `(time, level)` points, linear in between.
    Tabulated(Vec<(f64, f64)>),
}

impl CurvedBarrier {
    /// Quantile curve for a confidence level such as 0.95.
    pub fn quantile(confidence: f64) -> Result<Self> {
        if !(confidence > 0.0 && confidence < 1.0) {
            return Err(Error::InvalidConfig(format!("confidence must lie in (0, 1), got {confidence}")));
        }
        Ok(CurvedBarrier::Quantile { z: norm_ppf(confidence) })
    }

    /// Parse a two-column `time level` table; `#` starts a comment and
    /// commas are accepted as separators.
    pub fn parse_table(text: &str) -> Result<Self> {
        let mut points = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let fields: Vec<&str> = body.split(|c: char| c == ',' || c.is_whitespace()).filter(|f| !f.is_empty()).collect();
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|_| Error::InvalidConfig(format!("line {}: cannot parse `{s}`", lineno + 1)))
            };
            match fields.as_slice() {
                [t, v] => points.push((parse(t)?, parse(v)?)),
                _ => return Err(Error::InvalidConfig(format!("line {}: expected two columns", lineno + 1))),
            }
        }
        Self::tabulated(points)
    }

    pub fn tabulated(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidConfig("a tabulated curve needs at least two points".into()));
        }
        if points.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::InvalidConfig("tabulated times must be strictly increasing".into()));
        }
        Ok(CurvedBarrier::Tabulated(points))
    }

    fn price_curve(&self, t: f64) -> Result<f64> {
        match self {
            CurvedBarrier::LinearPrice { c0, c1 } => Ok(c0 + c1 * t),
            CurvedBarrier::Exponential { a, delta } => Ok(a * (delta * t).exp()),
            CurvedBarrier::Tabulated(p) => {
                let (first, last) = (p[0], p[p.len() - 1]);
                if t < first.0 - 1e-12 || t > last.0 + 1e-12 {
                    return Err(Error::InvalidConfig(format!(
                        "time {t} outside the tabulated range [{}, {}]",
                        first.0, last.0
                    )));
                }
                let j = p.partition_point(|q| q.0 <= t).clamp(1, p.len() - 1);
                let ((t0, v0), (t1, v1)) = (p[j - 1], p[j]);
                Ok(v0 + (v1 - v0) * (t - t0) / (t1 - t0))
            }
            CurvedBarrier::Quantile { .. } => unreachable!("quantile curves live in log space"),
        }
    }

    /// Log level `ln(c(t) / S0)` (or `g(t)` for quantile curves).
    pub fn log_level(&self, t: f64, market: &MarketParams) -> Result<f64> {
        match self {
            CurvedBarrier::Quantile { z } => Ok(market.log_drift() * t + z * market.vol * t.sqrt()),
            _ => {
                let c = self.price_curve(t)?;
                if !(c > 0.0) || !c.is_finite() {
                    return Err(Error::NonPositiveCurve { time: t, value: c });
                }
                Ok((c / market.spot).ln())
            }
        }
    }

    /// Barrier in price units at time `t`.
    pub fn price_level(&self, t: f64, market: &MarketParams) -> Result<f64> {
        Ok(market.spot * self.log_level(t, market)?.exp())
    }
}

/// How a step's flat level is read off the curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscretizationRule {
    LeftEndpoint,
    RightEndpoint,
    /// Average of the log levels at the step's ends.
    MidpointLog,
    /// Average of the price levels at the step's ends.
    MidpointPrice,
}

impl DiscretizationRule {
    pub fn name(self) -> &'static str {
        match self {
            DiscretizationRule::LeftEndpoint => "left",
            DiscretizationRule::RightEndpoint => "right",
            DiscretizationRule::MidpointLog => "midlog",
            DiscretizationRule::MidpointPrice => "midprice",
        }
    }
}

impl fmt::Display for DiscretizationRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DiscretizationRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "left" => Ok(DiscretizationRule::LeftEndpoint),
            "right" => Ok(DiscretizationRule::RightEndpoint),
            "midlog" => Ok(DiscretizationRule::MidpointLog),
            "midprice" => Ok(DiscretizationRule::MidpointPrice),
            other => Err(Error::InvalidConfig(format!("unknown rule `{other}` (left|right|midlog|midprice)"))),
        }
    }
}

/// Flat log level per grid step.
pub fn discretize(curve: &CurvedBarrier, grid: &TimeGrid, rule: DiscretizationRule, market: &MarketParams) -> Result<Vec<f64>> {
    let ends: Vec<f64> = grid.times().iter().map(|&t| curve.log_level(t, market)).collect::<Result<_>>()?;
    Ok((0..grid.steps())
        .map(|i| {
            let (a, b) = (ends[i], ends[i + 1]);
            match rule {
                DiscretizationRule::LeftEndpoint => a,
                DiscretizationRule::RightEndpoint => b,
                DiscretizationRule::MidpointLog => 0.5 * (a + b),
                DiscretizationRule::MidpointPrice => (0.5 * (a.exp() + b.exp())).ln(),
            }
        })
        .collect())
}

/// Probability that the log price stays on the safe side of the
/// discretised curve over the whole grid, under the market's log drift.
pub fn survival_prob(
    curve: &CurvedBarrier,
    grid: &TimeGrid,
    rule: DiscretizationRule,
    market: &MarketParams,
    direction: Direction,
    opts: &EngineOptions,
) -> Result<PaResult> {
    market.validate()?;
    let levels: Vec<Option<f64>> = discretize(curve, grid, rule, market)?.into_iter().map(Some).collect();
    let limits = default_icicles(direction, &levels);
    let process = Diffusion::new(market.log_drift(), market.vol, grid);
    pa(direction, &process, &limits, &levels, opts)
}

/// Multi-step barrier in price units from a curve.
pub fn to_barrier(
    curve: &CurvedBarrier,
    grid: &TimeGrid,
    rule: DiscretizationRule,
    market: &MarketParams,
    direction: Direction,
) -> Result<BarrierSpec> {
    let levels: Vec<f64> = discretize(curve, grid, rule, market)?.iter().map(|m| market.spot * m.exp()).collect();
    Ok(BarrierSpec::full(direction, &levels))
}

/// Price an option on the multi-step approximation of a curve.
pub fn price_curved(
    option_type: OptionType,
    strike: f64,
    curve: &CurvedBarrier,
    grid: &TimeGrid,
    rule: DiscretizationRule,
    market: &MarketParams,
    opts: &EngineOptions,
) -> Result<PriceResult> {
    let barrier = to_barrier(curve, grid, rule, market, option_type.direction())?;
    Pricer::new(*market, grid.clone(), barrier, *opts)?.price(option_type, strike)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_curve_every_rule() {
        let grid = TimeGrid::uniform(4, 1.0).unwrap();
        let m = MarketParams::new(100.0, 0.03, 0.2);
        let c = CurvedBarrier::Exponential { a: 110.0, delta: 0.0 };
        for rule in ["left", "right", "midlog", "midprice"] {
            let levels = discretize(&c, &grid, rule.parse().unwrap(), &m).unwrap();
            assert!(levels.iter().all(|l| (l - 1.1f64.ln()).abs() < 1e-15));
        }
    }

    #[test]
    fn midpoint_variants() {
        let grid = TimeGrid::new(vec![0.0, 0.5]).unwrap();
        let m = MarketParams::new(100.0, 0.03, 0.2);
        let c = CurvedBarrier::LinearPrice { c0: 100.0, c1: 40.0 };
        let log = discretize(&c, &grid, DiscretizationRule::MidpointLog, &m).unwrap()[0];
        let price = discretize(&c, &grid, DiscretizationRule::MidpointPrice, &m).unwrap()[0];
        assert!((log - 0.5 * 1.2f64.ln()).abs() < 1e-15);
        assert!((price - 1.1f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn non_positive_curve_rejected() {
        let grid = TimeGrid::uniform(2, 1.0).unwrap();
        let m = MarketParams::new(100.0, 0.03, 0.2);
        let c = CurvedBarrier::LinearPrice { c0: 50.0, c1: -80.0 };
        assert!(matches!(discretize(&c, &grid, DiscretizationRule::RightEndpoint, &m), Err(Error::NonPositiveCurve { .. })));
    }

    #[test]
    fn table_parsing_and_interpolation() {
        let c = CurvedBarrier::parse_table("# t level\n0 100\n0.5, 110 # mid\n\n1.0 130\n").unwrap();
        let m = MarketParams::new(100.0, 0.0, 0.2);
        assert!((c.price_level(0.25, &m).unwrap() - 105.0).abs() < 1e-12);
        assert!((c.price_level(0.75, &m).unwrap() - 120.0).abs() < 1e-12);
        assert!(c.price_level(1.5, &m).is_err());
        assert!(CurvedBarrier::parse_table("0 1 2\n").is_err());
        assert!(CurvedBarrier::parse_table("0 100\n0 101\n").is_err());
    }
}
