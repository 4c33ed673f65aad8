//! Searches for a positive solution at one lambda, verifies it independently
//! and prints a few solution values.
//!
//! cargo run --release --example solve_positive -- 0.8

use conebvp::BvpProblem;

fn main() -> conebvp::Result<()> {
    let lambda: f64 = std::env::args()
        .nth(1)
        .map(|a| a.parse().expect("lambda"))
        .unwrap_or(0.8);
    let problem = BvpProblem::new(2.0, 1.0 / 3.0, "1", "5*u*exp(2*u)/(8+exp(u)+exp(2*u))")?;
    let iv = problem.interval()?;
    println!(
        "lambda = {lambda}, inside guaranteed interval: {}",
        iv.contains(lambda)
    );

    let out = problem.solve(lambda)?;
    println!(
        "status {:?} via {:?} after {} operator applications",
        out.status, out.strategy, out.iterations
    );
    for attempt in &out.attempts {
        println!(
            "  attempt {:?} from scale {:?}: {:?} ({} iterations)",
            attempt.strategy, attempt.scale, attempt.status, attempt.iterations
        );
    }
    if let (Some(u), Some(v)) = (&out.solution, &out.verification) {
        println!("sup norm {:.6}", u.sup_norm());
        println!(
            "ODE residual {:.2e}, u'(0) {:.2e}, integral condition {:.2e}, cone margin {:.4}",
            v.ode_residual_sup, v.bc_neumann, v.bc_integral, v.cone_margin
        );
        for k in 0..=4 {
            let t = k as f64 / 4.0;
            println!("  u({t:.2}) = {:.6}", u.interpolate(t));
        }
    }
    Ok(())
}
