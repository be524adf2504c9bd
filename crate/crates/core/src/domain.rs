//! Contract and market description shared by every engine.
//!
//! Indices are zero-based in the API: step `i` covers `[t_i, t_{i+1}]` of the
//! grid and ends at `t_{i+1}`. Human-facing formats (scenario files, subset
//! labels) use one-based steps.

use crate::error::{Error, Result};
use std::fmt;
use std::str::FromStr;

/// Smallest admissible gap between consecutive grid times, in years.
pub const MIN_GAP: f64 = 1e-9;

/// Monitoring grid `0 = t_0 < t_1 < ... < t_n = T`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    times: Vec<f64>,
}

impl TimeGrid {
    /// Build from the full list of times, starting at zero.
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if times.len() < 2 {
            return Err(Error::InvalidGrid("need t_0 = 0 and at least one step".into()));
        }
        if times[0] != 0.0 {
            return Err(Error::InvalidGrid(format!("grid must start at 0, got {}", times[0])));
        }
        for i in 1..times.len() {
            let (prev, cur) = (times[i - 1], times[i]);
            if !cur.is_finite() || cur <= prev {
                return Err(Error::NonIncreasingGrid { index: i, previous: prev, value: cur });
            }
            if cur - prev < MIN_GAP {
                return Err(Error::InvalidGrid(format!(
                    "gap between t[{}] and t[{i}] is below {MIN_GAP} years",
                    i - 1
                )));
            }
        }
        Ok(TimeGrid { times })
    }

    /// Build from the step end times `t_1..t_n`; `t_0 = 0` is implied.
    pub fn from_step_ends(ends: &[f64]) -> Result<Self> {
        let mut times = Vec::with_capacity(ends.len() + 1);
        times.push(0.0);
        times.extend_from_slice(ends);
        Self::new(times)
    }

    /// `n` equal steps up to `maturity`.
    pub fn uniform(steps: usize, maturity: f64) -> Result<Self> {
        if steps == 0 {
            return Err(Error::InvalidGrid("need at least one step".into()));
        }
        if !(maturity > 0.0) || !maturity.is_finite() {
            return Err(Error::InvalidGrid(format!("maturity must be positive, got {maturity}")));
        }
        let times = (0..=steps).map(|k| maturity * k as f64 / steps as f64).collect();
        Self::new(times)
    }

    /// Number of steps `n`.
    pub fn steps(&self) -> usize {
        self.times.len() - 1
    }

    pub fn maturity(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    /// All times including `t_0 = 0`.
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// End time of step `i` (that is, `t_{i+1}`).
    pub fn end(&self, i: usize) -> f64 {
        self.times[i + 1]
    }

    /// Start time of step `i`.
    pub fn start(&self, i: usize) -> f64 {
        self.times[i]
    }

    /// Step end times `t_1..t_n`.
    pub fn step_ends(&self) -> &[f64] {
        &self.times[1..]
    }
}

/// Black–Scholes market.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketParams {
    pub spot: f64,
    pub rate: f64,
    pub vol: f64,
    /// Physical log-price drift, used only by raw probability queries.
    pub drift: Option<f64>,
}

impl MarketParams {
    pub fn new(spot: f64, rate: f64, vol: f64) -> Self {
        MarketParams { spot, rate, vol, drift: None }
    }

    pub fn with_drift(mut self, drift: f64) -> Self {
        self.drift = Some(drift);
        self
    }

    /// Drift of `ln S(t)`: the configured physical drift, else the risk-neutral `r - vol^2/2`.
    pub fn log_drift(&self) -> f64 {
        self.drift.unwrap_or(self.rate - 0.5 * self.vol * self.vol)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.spot > 0.0) || !self.spot.is_finite() {
            return Err(Error::NonPositiveSpot(self.spot));
        }
        if !(self.vol > 0.0) || !self.vol.is_finite() {
            return Err(Error::NonPositiveVol(self.vol));
        }
        if !self.rate.is_finite() {
            return Err(Error::InvalidConfig(format!("rate must be finite, got {}", self.rate)));
        }
        if let Some(d) = self.drift {
            if !d.is_finite() {
                return Err(Error::InvalidConfig(format!("drift must be finite, got {d}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    /// The value meaning "no constraint" for this direction in log space.
    pub fn open_limit(self) -> f64 {
        match self {
            Direction::Up => f64::INFINITY,
            Direction::Down => f64::NEG_INFINITY,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Up => "up",
            Direction::Down => "down",
        })
    }
}

impl FromStr for Direction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "up" => Ok(Direction::Up),
            "down" => Ok(Direction::Down),
            other => Err(Error::InvalidConfig(format!("unknown barrier direction `{other}`"))),
        }
    }
}

/// Piecewise-constant barrier with optional icicles at step ends.
///
/// `levels[i]` is the barrier on step `i` (absent when the step is
/// unmonitored); `icicles[i]` is the constraint on the price at the end of
/// step `i`. Absent icicles follow [`default_icicles`].
#[derive(Debug, Clone, PartialEq)]
pub struct BarrierSpec {
    pub direction: Direction,
    pub levels: Vec<Option<f64>>,
    pub icicles: Vec<Option<f64>>,
}

impl BarrierSpec {
    pub fn new(direction: Direction, levels: Vec<Option<f64>>) -> Self {
        let n = levels.len();
        BarrierSpec { direction, levels, icicles: vec![None; n] }
    }

    /// A barrier active on every step.
    pub fn full(direction: Direction, levels: &[f64]) -> Self {
        Self::new(direction, levels.iter().map(|&b| Some(b)).collect())
    }

    /// Same level on all `steps` steps.
    pub fn flat(direction: Direction, level: f64, steps: usize) -> Self {
        Self::new(direction, vec![Some(level); steps])
    }

    pub fn with_icicles(mut self, icicles: Vec<Option<f64>>) -> Self {
        self.icicles = icicles;
        self
    }

    pub fn with_icicle(mut self, step: usize, level: f64) -> Self {
        if step < self.icicles.len() {
            self.icicles[step] = Some(level);
        }
        self
    }

    pub fn steps(&self) -> usize {
        self.levels.len()
    }

    /// Zero-based indices of monitored steps.
    pub fn active(&self) -> Vec<usize> {
        self.levels.iter().enumerate().filter_map(|(i, b)| b.map(|_| i)).collect()
    }
}

/// Check that grid, market and barrier fit together.
///
/// A first-step barrier already on the wrong side of spot is reported as
/// [`Error::ImmediateKnock`]; the pricer catches this and settles the
/// contract as knocked at inception.
pub fn validate(grid: &TimeGrid, market: &MarketParams, barrier: &BarrierSpec) -> Result<()> {
    market.validate()?;
    let n = grid.steps();
    if barrier.levels.len() != n {
        return Err(Error::LengthMismatch { what: "barrier levels", expected: n, actual: barrier.levels.len() });
    }
    if barrier.icicles.len() != n {
        return Err(Error::LengthMismatch { what: "icicle levels", expected: n, actual: barrier.icicles.len() });
    }
    for (i, v) in barrier.levels.iter().chain(&barrier.icicles).enumerate() {
        if let Some(v) = *v {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::NonPositiveLevel { step: i % n + 1, value: v });
            }
        }
    }
    if let Some(b1) = barrier.levels[0] {
        let breached = match barrier.direction {
            Direction::Up => b1 < market.spot,
            Direction::Down => b1 > market.spot,
        };
        if breached {
            return Err(Error::ImmediateKnock { level: b1, spot: market.spot });
        }
    }
    Ok(())
}

/// Barrier in log-price coordinates relative to spot.
#[derive(Debug, Clone, PartialEq)]
pub struct LogBarrier {
    pub direction: Direction,
    /// `ln(B_i / S0)` on monitored steps.
    pub levels: Vec<Option<f64>>,
    /// `ln(L_i / S0)`, with the direction's open limit where unconstrained.
    pub icicles: Vec<f64>,
    /// `ln(K / S0)` when a strike is attached.
    pub strike: Option<f64>,
}

/// Map a barrier (and optional strike) to log space, filling absent
/// icicles with [`default_icicles`].
pub fn to_log_space(barrier: &BarrierSpec, spot: f64, strike: Option<f64>) -> LogBarrier {
    let levels: Vec<Option<f64>> = barrier.levels.iter().map(|b| b.map(|b| (b / spot).ln())).collect();
    let defaults = default_icicles(barrier.direction, &levels);
    let icicles = barrier
        .icicles
        .iter()
        .zip(defaults)
        .map(|(l, d)| l.map_or(d, |l| (l / spot).ln()))
        .collect();
    LogBarrier { direction: barrier.direction, levels, icicles, strike: strike.map(|k| (k / spot).ln()) }
}

/// Icicles implied by the barrier alone: at the end of step `i` the price
/// must lie inside both adjacent barriers. For an up barrier that is
/// `min(m_i, m_{i+1})` (`m_n` on the last step), with unmonitored steps
/// treated as `+inf`; down barriers use `max` and `-inf`.
pub fn default_icicles(direction: Direction, levels: &[Option<f64>]) -> Vec<f64> {
    let open = direction.open_limit();
    let at = |i: usize| levels.get(i).copied().flatten().unwrap_or(open);
    (0..levels.len())
        .map(|i| match direction {
            Direction::Up => at(i).min(at(i + 1)),
            Direction::Down => at(i).max(at(i + 1)),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OptionType {
    UpOutPut,
    UpInPut,
    UpOutCall,
    UpInCall,
    DownOutPut,
    DownInPut,
    DownOutCall,
    DownInCall,
}

impl OptionType {
    pub const ALL: [OptionType; 8] = [
        OptionType::UpOutCall,
        OptionType::UpInCall,
        OptionType::UpOutPut,
        OptionType::UpInPut,
        OptionType::DownOutCall,
        OptionType::DownInCall,
        OptionType::DownOutPut,
        OptionType::DownInPut,
    ];

    pub fn direction(self) -> Direction {
        use OptionType::*;
        match self {
            UpOutPut | UpInPut | UpOutCall | UpInCall => Direction::Up,
            _ => Direction::Down,
        }
    }

    pub fn is_call(self) -> bool {
        use OptionType::*;
        matches!(self, UpOutCall | UpInCall | DownOutCall | DownInCall)
    }

    pub fn is_knock_in(self) -> bool {
        use OptionType::*;
        matches!(self, UpInPut | UpInCall | DownInPut | DownInCall)
    }

    /// Three-letter market code, e.g. `UOC`.
    pub fn code(self) -> &'static str {
        use OptionType::*;
        match self {
            UpOutPut => "UOP",
            UpInPut => "UIP",
            UpOutCall => "UOC",
            UpInCall => "UIC",
            DownOutPut => "DOP",
            DownInPut => "DIP",
            DownOutCall => "DOC",
            DownInCall => "DIC",
        }
    }
}

impl fmt::Display for OptionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for OptionType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let up = s.to_ascii_uppercase();
        OptionType::ALL
            .into_iter()
            .find(|t| t.code() == up)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown option type `{s}`")))
    }
}

/// A European barrier option on the grid's maturity.
#[derive(Debug, Clone, PartialEq)]
pub struct OptionContract {
    pub option_type: OptionType,
    pub strike: f64,
    pub grid: TimeGrid,
    pub barrier: BarrierSpec,
}

impl OptionContract {
    pub fn new(option_type: OptionType, strike: f64, grid: TimeGrid, barrier: BarrierSpec) -> Self {
        OptionContract { option_type, strike, grid, barrier }
    }

    pub fn maturity(&self) -> f64 {
        self.grid.maturity()
    }

    /// Contract-level checks followed by [`validate`].
    pub fn validate(&self, market: &MarketParams) -> Result<()> {
        if !(self.strike > 0.0) || !self.strike.is_finite() {
            return Err(Error::NonPositiveStrike(self.strike));
        }
        if self.option_type.direction() != self.barrier.direction {
            return Err(Error::BarrierDirectionMismatch(format!(
                "{} with a {} barrier",
                self.option_type, self.barrier.direction
            )));
        }
        validate(&self.grid, market, &self.barrier)
    }
}
