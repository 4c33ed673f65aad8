//! Estimates f0 = lim f(u)/u as u -> 0+ and finf as u -> inf, printing the
//! samples behind each estimate.
//!
//! cargo run --example asymptotic_limits -- "u*(2+sin(u))"

use conebvp::asymptotics::{estimate, Limit};
use conebvp::exprlang::parse;

fn main() {
    let sources: Vec<String> = match std::env::args().nth(1) {
        Some(src) => vec![src],
        None => [
            "u^2",
            "sqrt(u)",
            "3*u",
            "5*u*exp(2*u)/(8+exp(u)+exp(2*u))",
            "u*(1-1/(1+u^2))",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect(),
    };
    for src in sources {
        let f = parse(&src, "u").expect("valid expression in u");
        println!("f(u) = {src}");
        for limit in [Limit::Zero, Limit::Infinity] {
            match estimate(&f, limit) {
                Ok(est) => {
                    println!(
                        "  {limit:?}: {:?} (confident: {})",
                        est.value, est.confident
                    );
                    for (u, r) in est.samples.iter().rev().take(3).rev() {
                        println!("    f(u)/u at u = {u:e}: {r:e}");
                    }
                    for note in &est.notes {
                        println!("    note: {note}");
                    }
                }
                Err(e) => println!("  {limit:?}: error: {e}"),
            }
        }
    }
}
