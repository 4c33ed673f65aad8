//! Samples the Green's function for one parameter pair and reports the
//! kernel inequalities `0 <= G <= g` and `G >= gamma g` on `[0, eta]`.
//!
//! cargo run --example kernel_bounds -- 2 0.25

use conebvp::cli::kernel_check;
use conebvp::kernel::{g_envelope, gamma, green, validate_params};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .map(|a| a.parse())
        .collect::<Result<_, _>>()?;
    let (alpha, eta) = match args.as_slice() {
        [a, e] => (*a, *e),
        _ => (2.0, 0.25),
    };
    let p = validate_params(alpha, eta)?;
    println!("alpha = {alpha}, eta = {eta}, gamma = {}", gamma(&p));

    println!(
        "{:>6} {:>10} {:>10} {:>10}",
        "s", "G(0,s)", "G(1,s)", "g(s)"
    );
    for k in 0..=8 {
        let s = k as f64 / 8.0;
        println!(
            "{s:>6.3} {:>10.6} {:>10.6} {:>10.6}",
            green(&p, 0.0, s),
            green(&p, 1.0, s),
            g_envelope(&p, s)
        );
    }

    let report = kernel_check(&p, 200);
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
