//! Regenerates a bundled reference table and reports how closely it matches.
//!
//! ```text
//! cargo run --release --example reproduce_table -- 5b
//! ```

use multistep_barrier::reflection::EngineOptions;
use multistep_barrier::tables::{reproduce, ReproduceOptions, TableId};

fn main() -> multistep_barrier::Result<()> {
    let id: TableId = std::env::args().nth(1).as_deref().unwrap_or("4b").parse()?;
    let opts = ReproduceOptions { engine: EngineOptions::default(), mc: None, rule: None };
    let report = reproduce(id, &opts)?;
    for cell in report.cells.iter().take(8) {
        println!("{:<40} {:>10.4} expected {:>10.4}", cell.inputs.join(" "), cell.analytic, cell.expected);
    }
    println!("...");
    println!("{}", report.summary());
    Ok(())
}
