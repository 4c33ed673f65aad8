//! Sweeps lambda across and beyond the guaranteed interval and prints the
//! sweep CSV.
//!
//! cargo run --release --example lambda_sweep

use conebvp::cli::{sweep, sweep_csv, LambdaGrid};
use conebvp::BvpProblem;

fn main() -> conebvp::Result<()> {
    let mut problem = BvpProblem::new(1.0, 0.5, "1/5", "u*(1-1/(1+u^2))")?;
    problem.solve.n = 100;
    let grid = LambdaGrid::parse("5:40:8").expect("valid grid");
    let (rows, warnings) = sweep(&problem, &grid);
    for w in warnings {
        eprintln!("warning: {w}");
    }
    print!("{}", sweep_csv(&rows));
    Ok(())
}
