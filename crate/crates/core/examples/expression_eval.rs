//! Parses expressions, prints their fully parenthesized form and evaluates
//! them, including the evaluation errors.
//!
//! cargo run --example expression_eval -- "5*u*exp(2*u)/(8+exp(u)+exp(2*u))" 1

use conebvp::exprlang::parse;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if let [src, x] = args.as_slice() {
        let x: f64 = x.parse().expect("second argument must be a number");
        match parse(src, "u") {
            Ok(e) => println!("{e} at u = {x}: {:?}", e.eval(x)),
            Err(err) => println!("parse error: {err}"),
        }
        return;
    }

    for (src, x) in [
        ("2+3*4", 0.0),
        ("2^3^2", 0.0),
        ("-u^2", 3.0),
        ("u*(1-1/(1+u^2))", 1.0),
        ("5*u*exp(2*u)/(8+exp(u)+exp(2*u))", 1.0),
        ("sqrt(u)", -1.0),
        ("log(u)", 0.0),
        ("u^-1", 0.0),
    ] {
        let e = parse(src, "u").unwrap();
        match e.eval(x) {
            Ok(v) => println!("{src:<36} -> {e}  =  {v}  (u = {x})"),
            Err(err) => println!("{src:<36} -> error: {err}"),
        }
    }
    for bad in ["u+", "2*(u", "v+1", "tan(u)"] {
        println!("{bad:<36} -> {}", parse(bad, "u").unwrap_err());
    }
}
