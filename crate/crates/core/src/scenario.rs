//! TOML scenario files for batch runs.
//!
//! ```toml
//! [market]
//! spot = 100.0
//! rate = 0.03
//! vol = 0.2
//! # drift = 0.01          # physical log drift for `prob`/`curve` queries
//!
//! [grid]
//! steps = 6               # either steps + maturity ...
//! maturity = 0.5
//! # times = [0.25, 0.5]   # ... or the step end times
//!
//! [barrier]
//! direction = "up"
//! levels = [105, 108, 110, 113, 115, 118]
//! # active = [1, 3]       # 1-based monitored steps; others are free
//! # icicles = [[2, 109.0]]
//!
//! [[contracts]]
//! type = "UOC"
//! strike = 100
//! ```
//!
//! A `[curve]` section may replace (or accompany) `[barrier]`; see
//! [`CurveSection`]. Optional `[engine]` and `[mc]` sections override the
//! numerical defaults. Unknown keys are rejected.

use crate::curved::{self, CurvedBarrier, DiscretizationRule};
use crate::domain::{self, BarrierSpec, Direction, MarketParams, OptionType, TimeGrid};
use crate::error::{Error, Result};
use crate::montecarlo::McConfig;
use crate::reflection::EngineOptions;
use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    market: RawMarket,
    grid: RawGrid,
    barrier: Option<RawBarrier>,
    curve: Option<CurveSection>,
    #[serde(default)]
    contracts: Vec<RawContract>,
    #[serde(default)]
    engine: RawEngine,
    #[serde(default)]
    mc: RawMc,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMarket {
    spot: f64,
    rate: f64,
    vol: f64,
    drift: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    times: Option<Vec<f64>>,
    steps: Option<usize>,
    maturity: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBarrier {
    direction: String,
    levels: Vec<f64>,
    active: Option<Vec<usize>>,
    #[serde(default)]
    icicles: Vec<(usize, f64)>,
}

/// `[curve]` section.
///
/// `family` selects the shape and its parameters:
/// `quantile` (`confidence` or `z`), `linear` (`c0`, `c1`),
/// `exponential` (`a`, `delta`) or `table` (`points = [[t, level], ...]`
/// or `file`, a two-column text file relative to the scenario).
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSection {
    pub family: String,
    pub direction: String,
    #[serde(default = "default_rule")]
    pub rule: String,
    pub confidence: Option<f64>,
    pub z: Option<f64>,
    pub c0: Option<f64>,
    pub c1: Option<f64>,
    pub a: Option<f64>,
    pub delta: Option<f64>,
    pub points: Option<Vec<(f64, f64)>>,
    pub file: Option<PathBuf>,
}

fn default_rule() -> String {
    "midlog".into()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawContract {
    #[serde(rename = "type")]
    option_type: String,
    strike: f64,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEngine {
    mvn_tol: Option<f64>,
    prune_eps: Option<f64>,
    seed: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMc {
    paths: Option<u64>,
    batches: Option<u32>,
    seed: Option<u64>,
    bridge: Option<bool>,
}

/// A curved barrier together with how it is discretised.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSpec {
    pub curve: CurvedBarrier,
    pub direction: Direction,
    pub rule: DiscretizationRule,
}

/// A validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub market: MarketParams,
    pub grid: TimeGrid,
    pub barrier: Option<BarrierSpec>,
    pub curve: Option<CurveSpec>,
    pub contracts: Vec<(OptionType, f64)>,
    pub engine: EngineOptions,
    pub mc: McConfig,
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text, path.parent())
    }

    /// Parse scenario text; relative curve files resolve against `base`.
    pub fn parse(text: &str, base: Option<&Path>) -> Result<Self> {
        let raw: RawScenario = toml::from_str(text).map_err(|e| Error::Scenario(e.message().to_string()))?;

        let mut market = MarketParams::new(raw.market.spot, raw.market.rate, raw.market.vol);
        if let Some(d) = raw.market.drift {
            market = market.with_drift(d);
        }
        market.validate()?;

        let grid = match (raw.grid.times, raw.grid.steps, raw.grid.maturity) {
            (Some(times), None, None) => TimeGrid::from_step_ends(&times)?,
            (None, Some(steps), Some(maturity)) => TimeGrid::uniform(steps, maturity)?,
            _ => return Err(Error::Scenario("[grid] needs either `times` or both `steps` and `maturity`".into())),
        };

        let barrier = raw.barrier.map(|b| barrier_from(b, &grid, &market)).transpose()?;
        let curve = raw.curve.map(|c| curve_from(c, base)).transpose()?;

        let mut contracts = Vec::with_capacity(raw.contracts.len());
        for c in raw.contracts {
            let t: OptionType = c.option_type.parse()?;
            if !(c.strike > 0.0) || !c.strike.is_finite() {
                return Err(Error::NonPositiveStrike(c.strike));
            }
            let direction = barrier.as_ref().map(|b| b.direction).or(curve.as_ref().map(|c| c.direction));
            if let Some(d) = direction {
                if d != t.direction() {
                    return Err(Error::BarrierDirectionMismatch(format!("{t} with a {d} barrier")));
                }
            }
            contracts.push((t, c.strike));
        }

        let defaults = EngineOptions::default();
        let engine = EngineOptions {
            mvn_tol: raw.engine.mvn_tol.unwrap_or(defaults.mvn_tol),
            prune_eps: raw.engine.prune_eps.unwrap_or(defaults.prune_eps),
            seed: raw.engine.seed.unwrap_or(defaults.seed),
        };
        check_engine(&engine)?;
        let d = McConfig::default();
        let mc = McConfig {
            paths: raw.mc.paths.unwrap_or(d.paths),
            batches: raw.mc.batches.unwrap_or(d.batches),
            seed: raw.mc.seed.unwrap_or(d.seed),
            bridge: raw.mc.bridge.unwrap_or(d.bridge),
        };

        Ok(Scenario { market, grid, barrier, curve, contracts, engine, mc })
    }

    /// Barrier used for pricing: the explicit barrier, else the
    /// discretised curve.
    pub fn pricing_barrier(&self) -> Result<BarrierSpec> {
        if let Some(b) = &self.barrier {
            return Ok(b.clone());
        }
        match &self.curve {
            Some(c) => curved::to_barrier(&c.curve, &self.grid, c.rule, &self.market, c.direction),
            None => Err(Error::Scenario("scenario has neither [barrier] nor [curve]".into())),
        }
    }
}

/// Reject engine settings outside the supported range.
pub fn check_engine(engine: &EngineOptions) -> Result<()> {
    if !(engine.mvn_tol >= crate::gaussian::MIN_TOLERANCE) || !engine.mvn_tol.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "mvn_tol must be at least {:e}, got {}",
            crate::gaussian::MIN_TOLERANCE,
            engine.mvn_tol
        )));
    }
    if !(engine.prune_eps >= 0.0) || !engine.prune_eps.is_finite() {
        return Err(Error::InvalidConfig(format!("prune_eps must be non-negative, got {}", engine.prune_eps)));
    }
    Ok(())
}

fn barrier_from(raw: RawBarrier, grid: &TimeGrid, market: &MarketParams) -> Result<BarrierSpec> {
    let direction: Direction = raw.direction.parse()?;
    let n = grid.steps();
    let levels: Vec<Option<f64>> = match raw.active {
        None => {
            if raw.levels.len() != n {
                return Err(Error::LengthMismatch { what: "barrier levels", expected: n, actual: raw.levels.len() });
            }
            raw.levels.into_iter().map(Some).collect()
        }
        Some(active) => {
            let mut out = vec![None; n];
            for (j, &step) in active.iter().enumerate() {
                if step == 0 || step > n {
                    return Err(Error::Scenario(format!("active step {step} outside 1..={n}")));
                }
                let level = if raw.levels.len() == n {
                    raw.levels[step - 1]
                } else if raw.levels.len() == active.len() {
                    raw.levels[j]
                } else {
                    return Err(Error::Scenario(format!(
                        "`levels` must list one level per step ({n}) or per active step ({})",
                        active.len()
                    )));
                };
                out[step - 1] = Some(level);
            }
            out
        }
    };
    let mut barrier = BarrierSpec::new(direction, levels);
    for (step, level) in raw.icicles {
        if step == 0 || step > n {
            return Err(Error::Scenario(format!("icicle step {step} outside 1..={n}")));
        }
        barrier = barrier.with_icicle(step - 1, level);
    }
    match domain::validate(grid, market, &barrier) {
        Ok(()) | Err(Error::ImmediateKnock { .. }) => Ok(barrier),
        Err(e) => Err(e),
    }
}

fn curve_from(raw: CurveSection, base: Option<&Path>) -> Result<CurveSpec> {
    let direction: Direction = raw.direction.parse()?;
    let rule: DiscretizationRule = raw.rule.parse()?;
    let used: &[&str] = match raw.family.as_str() {
        "quantile" => &["confidence", "z"],
        "linear" => &["c0", "c1"],
        "exponential" => &["a", "delta"],
        "table" => &["points", "file"],
        other => {
            return Err(Error::Scenario(format!("unknown curve family `{other}` (quantile|linear|exponential|table)")))
        }
    };
    let present = [
        ("confidence", raw.confidence.is_some()),
        ("z", raw.z.is_some()),
        ("c0", raw.c0.is_some()),
        ("c1", raw.c1.is_some()),
        ("a", raw.a.is_some()),
        ("delta", raw.delta.is_some()),
        ("points", raw.points.is_some()),
        ("file", raw.file.is_some()),
    ];
    if let Some((key, _)) = present.iter().find(|(k, set)| *set && !used.contains(k)) {
        return Err(Error::Scenario(format!("`{key}` does not apply to a {} curve", raw.family)));
    }
    let need = |v: Option<f64>, key: &str| {
        v.ok_or_else(|| Error::Scenario(format!("{} curve needs `{key}`", raw.family)))
    };
    let curve = match raw.family.as_str() {
        "quantile" => match (raw.confidence, raw.z) {
            (Some(c), None) => CurvedBarrier::quantile(c)?,
            (None, Some(z)) => CurvedBarrier::Quantile { z },
            _ => return Err(Error::Scenario("quantile curve needs exactly one of `confidence` or `z`".into())),
        },
        "linear" => CurvedBarrier::LinearPrice { c0: need(raw.c0, "c0")?, c1: need(raw.c1, "c1")? },
        "exponential" => CurvedBarrier::Exponential { a: need(raw.a, "a")?, delta: need(raw.delta, "delta")? },
        _ => match (raw.points, raw.file) {
            (Some(points), None) => CurvedBarrier::tabulated(points)?,
            (None, Some(file)) => {
                let path = match base {
                    Some(b) if file.is_relative() => b.join(&file),
                    _ => file,
                };
                let text =
                    std::fs::read_to_string(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                CurvedBarrier::parse_table(&text)?
            }
            _ => return Err(Error::Scenario("table curve needs exactly one of `points` or `file`".into())),
        },
    };
    Ok(CurveSpec { curve, direction, rule })
}
