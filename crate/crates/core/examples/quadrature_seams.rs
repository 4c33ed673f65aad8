//! Integrates a kinked integrand with and without seams at the kinks and
//! compares the evaluation counts and errors.
//!
//! cargo run --example quadrature_seams

use conebvp::kernel::{green, validate_params};
use conebvp::quadrature::{integrate, integrate_split};
use conebvp::QuadratureSettings;

fn main() {
    let q = QuadratureSettings::default();
    let p = validate_params(1.0, 0.5).unwrap();
    let t = 0.3;

    // int_0^1 G(t, s) ds = 23/24 - t^2/2 for alpha = 1, eta = 1/2
    let exact = 23.0 / 24.0 - t * t / 2.0;
    let mut plain_calls = 0;
    let plain = integrate(
        |s| {
            plain_calls += 1;
            green(&p, t, s)
        },
        0.0,
        1.0,
        &q,
    )
    .unwrap();
    let mut split_calls = 0;
    let split = integrate_split(
        |s| {
            split_calls += 1;
            green(&p, t, s)
        },
        0.0,
        1.0,
        &[t, p.eta()],
        &q,
    )
    .unwrap();
    println!("int_0^1 G({t}, s) ds, exact {exact}");
    println!(
        "  no seams:   {plain:.16}  error {:.1e}  {plain_calls} evaluations",
        (plain - exact).abs()
    );
    println!(
        "  with seams: {split:.16}  error {:.1e}  {split_calls} evaluations",
        (split - exact).abs()
    );

    for tol in [1e-4, 1e-8, 1e-12] {
        let q = QuadratureSettings::new(tol, 40).unwrap();
        let v = integrate(|s| (5.0 * s).sin() / (1.0 + s * s), 0.0, 2.0, &q).unwrap();
        println!("int_0^2 sin(5s)/(1+s^2) ds at abs_tol {tol:e}: {v:.15}");
    }
}
