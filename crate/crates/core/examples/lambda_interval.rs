//! Computes Lambda1, Lambda2 and the guaranteed lambda interval for the
//! bundled problems, using estimated limits f0 and finf.
//!
//! cargo run --example lambda_interval

use conebvp::BvpProblem;

fn main() -> conebvp::Result<()> {
    let problems = [
        (2.0, 0.25, "t", "u^2"),
        (2.0, 0.25, "t", "sqrt(u)"),
        (2.0, 1.0 / 3.0, "1", "5*u*exp(2*u)/(8+exp(u)+exp(2*u))"),
        (2.0, 1.0 / 3.0, "1", "5*u*exp(2*u)/(-2+exp(u)+exp(2*u))"),
        (1.0, 0.5, "1/5", "u*(1-1/(1+u^2))"),
    ];
    for (alpha, eta, a, f) in problems {
        let problem = BvpProblem::new(alpha, eta, a, f)?;
        let c = problem.constants()?;
        let (f0, finf) = problem.limits()?;
        let iv = problem.interval()?;
        println!("alpha = {alpha}, eta = {eta:.4}, a = {a}, f = {f}");
        println!("  Lambda1 = {}, Lambda2 = {}", c.lambda1, c.lambda2);
        println!("  f0 = {:?}, finf = {:?}", f0.value, finf.value);
        println!("  interval: {}", serde_json::to_string(&iv).unwrap());
    }
    Ok(())
}
