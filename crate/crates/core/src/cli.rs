//! Command-line front end.
//!
//! Every flag can also be set through an environment variable with the
//! `MSB_` prefix (`MSB_SCENARIO`, `MSB_TABLE`, `MSB_OUT`, `MSB_SEED`,
//! `MSB_PATHS`, `MSB_MVN_TOL`, `MSB_PRUNE_EPS`, `MSB_RULE`); flags win.

use crate::curved::{self, DiscretizationRule};
use crate::domain::{self, Direction};
use crate::error::{Error, Result};
use crate::montecarlo::{self, McConfig};
use crate::pricing::Pricer;
use crate::reflection::{pa, Diffusion, EngineOptions};
use crate::report::{emit_csv, CsvTable, Field};
use crate::scenario::{check_engine, Scenario};
use crate::tables::{self, ReproduceOptions, TableId};
use clap::{Parser, Subcommand};
use std::ffi::OsString;
use std::path::PathBuf;

/// Exit status when a reproduced table misses its tolerance.
pub const EXIT_MISMATCH: i32 = 1;
/// Exit status for invalid input or a failed computation.
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "msbarrier", version, about = "Multi-step barrier option pricing")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Scenario file (TOML).
    #[arg(long, global = true, env = "MSB_SCENARIO")]
    pub scenario: Option<PathBuf>,

    /// Table to reproduce.
    #[arg(long, global = true, env = "MSB_TABLE")]
    pub table: Option<String>,

    /// Write CSV here instead of standard output.
    #[arg(long, global = true, env = "MSB_OUT")]
    pub out: Option<PathBuf>,

    /// Seed for both the integrator and the Monte Carlo engine.
    #[arg(long, global = true, env = "MSB_SEED")]
    pub seed: Option<u64>,

    /// Monte Carlo paths; 0 skips simulation in `reproduce`.
    #[arg(long, global = true, env = "MSB_PATHS")]
    pub paths: Option<u64>,

    /// Absolute error target per Gaussian orthant probability.
    #[arg(long, global = true, env = "MSB_MVN_TOL")]
    pub mvn_tol: Option<f64>,

    /// Drop supersets of reflection terms smaller than this.
    #[arg(long, global = true, env = "MSB_PRUNE_EPS")]
    pub prune_eps: Option<f64>,

    /// Curve discretisation rule: left, right, midlog or midprice.
    #[arg(long, global = true, env = "MSB_RULE")]
    pub rule: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analytic prices of the scenario's contracts.
    Price,
    /// Survival probability of the scenario's barrier under the market drift.
    Prob,
    /// Monte Carlo prices next to the analytic ones.
    Mc,
    /// Discretised levels of the scenario's curve, its survival probability and prices.
    Curve,
    /// Regenerate a bundled table: 4b, 5b, 6a, 6b, 7-long-maturity, ex4, ex5, 8a, 8b.
    Reproduce {
        /// Table id (alternative to --table).
        id: Option<String>,
    },
}

impl Cli {
    fn engine(&self, base: EngineOptions) -> Result<EngineOptions> {
        let engine = EngineOptions {
            mvn_tol: self.mvn_tol.unwrap_or(base.mvn_tol),
            prune_eps: self.prune_eps.unwrap_or(base.prune_eps),
            seed: self.seed.unwrap_or(base.seed),
        };
        check_engine(&engine)?;
        Ok(engine)
    }

    fn mc(&self, base: McConfig) -> McConfig {
        McConfig { paths: self.paths.unwrap_or(base.paths), seed: self.seed.unwrap_or(base.seed), ..base }
    }

    fn rule(&self) -> Result<Option<DiscretizationRule>> {
        self.rule.as_deref().map(str::parse).transpose()
    }

    fn load(&self) -> Result<Scenario> {
        let path = self.scenario.as_ref().ok_or_else(|| Error::InvalidConfig("--scenario is required".into()))?;
        let mut s = Scenario::load(path)?;
        s.engine = self.engine(s.engine)?;
        s.mc = self.mc(s.mc);
        if let (Some(rule), Some(curve)) = (self.rule()?, s.curve.as_mut()) {
            curve.rule = rule;
        }
        Ok(s)
    }
}

/// Parse arguments and run; returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return 0;
            }
            print_error("usage", &e.to_string());
            return EXIT_ERROR;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            print_error(e.kind(), &e.to_string());
            EXIT_ERROR
        }
    }
}

fn print_error(kind: &str, message: &str) {
    let record = serde_json::json!({ "error": { "kind": kind, "message": message.trim() } });
    eprintln!("{record}");
}

pub fn execute(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Price => price(cli),
        Command::Prob => prob(cli),
        Command::Mc => mc(cli),
        Command::Curve => curve(cli),
        Command::Reproduce { id } => reproduce(cli, id.as_deref()),
    }
}

fn contracts(s: &Scenario) -> Result<&[(domain::OptionType, f64)]> {
    if s.contracts.is_empty() {
        return Err(Error::Scenario("no [[contracts]] to price".into()));
    }
    Ok(&s.contracts)
}

fn price(cli: &Cli) -> Result<i32> {
    let s = cli.load()?;
    let pricer = Pricer::new(s.market, s.grid.clone(), s.pricing_barrier()?, s.engine)?;
    let mut table = CsvTable::new([
        "option",
        "strike",
        "price",
        "price_4dp",
        "error_bound",
        "vanilla",
        "subsets_evaluated",
        "subsets_pruned",
        "knocked_at_inception",
        "price_full",
    ]);
    for &(t, k) in contracts(&s)? {
        let p = pricer.price(t, k)?;
        table.push(vec![
            Field::text(t.code()),
            Field::Num(k),
            Field::Num(p.price),
            Field::Fixed(p.price, 4),
            Field::Num(p.error_bound),
            Field::Num(p.vanilla),
            Field::text(p.subsets_evaluated.to_string()),
            Field::text(p.subsets_pruned.to_string()),
            Field::Flag(p.knocked_at_inception),
            Field::Full(p.price),
        ])?;
    }
    emit_csv(&table, cli.out.as_deref())?;
    Ok(0)
}

fn prob(cli: &Cli) -> Result<i32> {
    let s = cli.load()?;
    let barrier = s.pricing_barrier()?;
    let mut table = CsvTable::new([
        "direction",
        "drift",
        "vol",
        "monitored_steps",
        "probability",
        "error_bound",
        "subsets_evaluated",
        "subsets_pruned",
        "probability_full",
    ]);
    let monitored = barrier.active().len();
    let result = match domain::validate(&s.grid, &s.market, &barrier) {
        Err(Error::ImmediateKnock { .. }) => None,
        Err(e) => return Err(e),
        Ok(()) => {
            let log = domain::to_log_space(&barrier, s.market.spot, None);
            let process = Diffusion::new(s.market.log_drift(), s.market.vol, &s.grid);
            Some(pa(barrier.direction, &process, &log.icicles, &log.levels, &s.engine)?)
        }
    };
    let (p, err, evaluated, pruned) = match &result {
        Some(r) => (r.probability, r.error_bound, r.subsets_evaluated, r.subsets_pruned),
        None => (0.0, 0.0, 0, 0),
    };
    table.push(vec![
        Field::text(barrier.direction.to_string()),
        Field::Num(s.market.log_drift()),
        Field::Num(s.market.vol),
        Field::text(monitored.to_string()),
        Field::Num(p),
        Field::Num(err),
        Field::text(evaluated.to_string()),
        Field::text(pruned.to_string()),
        Field::Full(p),
    ])?;
    emit_csv(&table, cli.out.as_deref())?;
    Ok(0)
}

fn mc(cli: &Cli) -> Result<i32> {
    let s = cli.load()?;
    let barrier = s.pricing_barrier()?;
    let products = contracts(&s)?;
    let pricer = Pricer::new(s.market, s.grid.clone(), barrier.clone(), s.engine)?;
    let book = montecarlo::simulate_book(&s.market, &s.grid, &barrier, products, &s.mc)?;
    let mut table = CsvTable::new([
        "option",
        "strike",
        "analytic",
        "mc",
        "se",
        "abs_err",
        "within_3se",
        "paths",
        "analytic_full",
    ]);
    let mut pairs = Vec::new();
    for (&(t, k), est) in products.iter().zip(&book.prices) {
        let analytic = pricer.price(t, k)?.price;
        let gap = (est.price - analytic).abs();
        if analytic != 0.0 {
            pairs.push((analytic, est.price));
        }
        table.push(vec![
            Field::text(t.code()),
            Field::Num(k),
            Field::Num(analytic),
            Field::Num(est.price),
            Field::Num(est.std_error),
            Field::Num(gap),
            Field::Flag(gap <= 3.0 * est.std_error),
            Field::text(est.paths.to_string()),
            Field::Full(analytic),
        ])?;
    }
    emit_csv(&table, cli.out.as_deref())?;
    if !pairs.is_empty() {
        eprintln!("RMS relative MC error = {:.4}", montecarlo::rms_relative_error(&pairs)?);
    }
    Ok(0)
}

fn curve(cli: &Cli) -> Result<i32> {
    let s = cli.load()?;
    let c = s.curve.as_ref().ok_or_else(|| Error::Scenario("`curve` needs a [curve] section".into()))?;
    let log_levels = curved::discretize(&c.curve, &s.grid, c.rule, &s.market)?;
    let mut table =
        CsvTable::new(["item", "step", "t_start", "t_end", "level", "log_level", "value", "error_bound", "value_full"]);
    for (i, m) in log_levels.iter().enumerate() {
        table.push(vec![
            Field::text("level"),
            Field::text((i + 1).to_string()),
            Field::Num(s.grid.start(i)),
            Field::Num(s.grid.end(i)),
            Field::Num(s.market.spot * m.exp()),
            Field::Num(*m),
            Field::Empty,
            Field::Empty,
            Field::Empty,
        ])?;
    }
    let survival = curved::survival_prob(&c.curve, &s.grid, c.rule, &s.market, c.direction, &s.engine);
    let survival_row = |value: f64, err: f64| {
        vec![
            Field::text("survival"),
            Field::Empty,
            Field::Empty,
            Field::Empty,
            Field::Empty,
            Field::Empty,
            Field::Num(value),
            Field::Num(err),
            Field::Full(value),
        ]
    };
    match survival {
        Ok(r) => table.push(survival_row(r.probability, r.error_bound))?,
        // Spot already beyond the first level: no path survives.
        Err(Error::HypothesisViolated { .. }) if first_level_breached(&log_levels, c.direction) => {
            table.push(survival_row(0.0, 0.0))?
        }
        Err(e) => return Err(e),
    }
    if !s.contracts.is_empty() {
        let barrier = curved::to_barrier(&c.curve, &s.grid, c.rule, &s.market, c.direction)?;
        let pricer = Pricer::new(s.market, s.grid.clone(), barrier, s.engine)?;
        for &(t, k) in &s.contracts {
            let p = pricer.price(t, k)?;
            table.push(vec![
                Field::text(format!("{} K={}", t.code(), k)),
                Field::Empty,
                Field::Empty,
                Field::Empty,
                Field::Empty,
                Field::Empty,
                Field::Num(p.price),
                Field::Num(p.error_bound),
                Field::Full(p.price),
            ])?;
        }
    }
    emit_csv(&table, cli.out.as_deref())?;
    Ok(0)
}

fn first_level_breached(log_levels: &[f64], direction: Direction) -> bool {
    match (log_levels.first(), direction) {
        (Some(&m), Direction::Up) => m < 0.0,
        (Some(&m), Direction::Down) => m > 0.0,
        (None, _) => false,
    }
}

fn reproduce(cli: &Cli, positional: Option<&str>) -> Result<i32> {
    let name = match (positional, cli.table.as_deref()) {
        (Some(a), Some(b)) if !a.eq_ignore_ascii_case(b) => {
            return Err(Error::InvalidConfig(format!("table given twice: `{a}` and `{b}`")))
        }
        (Some(a), _) => a,
        (None, Some(b)) => b,
        (None, None) => return Err(Error::InvalidConfig("reproduce needs a table id".into())),
    };
    let id: TableId = name.parse()?;
    let mc = cli.mc(McConfig::default());
    let opts = ReproduceOptions {
        engine: cli.engine(EngineOptions::default())?,
        mc: (mc.paths > 0).then_some(mc),
        rule: cli.rule()?,
    };
    let report = tables::reproduce(id, &opts)?;
    emit_csv(&report.to_csv(), cli.out.as_deref())?;
    eprintln!("{}", report.summary());
    Ok(if report.failures() == 0 { 0 } else { EXIT_MISMATCH })
}
