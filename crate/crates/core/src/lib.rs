//! Analytic pricing of multi-step barrier options under Black–Scholes.
//!
//! A multi-step barrier is piecewise constant in time and may be switched
//! off on some steps. Survival probabilities of the log price are written
//! as signed sums of Gaussian orthant probabilities, one per subset of
//! monitored steps, and every knock-in or knock-out price is a combination
//! of such probabilities under two drifts. A Brownian-bridge Monte Carlo
//! engine prices the same contracts independently.
//!
//! ```
//! use multistep_barrier::domain::{BarrierSpec, Direction, MarketParams, OptionType, TimeGrid};
//! use multistep_barrier::pricing::Pricer;
//! use multistep_barrier::reflection::EngineOptions;
//!
//! let market = MarketParams::new(100.0, 0.03, 0.2);
//! let grid = TimeGrid::uniform(6, 0.5).unwrap();
//! let barrier = BarrierSpec::full(Direction::Up, &[105.0, 108.0, 110.0, 113.0, 115.0, 118.0]);
//! let pricer = Pricer::new(market, grid, barrier, EngineOptions::default()).unwrap();
//! let uoc = pricer.price(OptionType::UpOutCall, 100.0).unwrap();
//! assert!((uoc.price - 0.6654).abs() < 5e-4);
//! ```

pub mod cli;
pub mod curved;
pub mod domain;
pub mod error;
pub mod gaussian;
pub mod montecarlo;
pub mod pricing;
pub mod reflection;
pub mod report;
pub mod scenario;
pub mod tables;

pub use error::{Error, Result};
