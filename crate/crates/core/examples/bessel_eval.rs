//! K_beta(r) on a small table, plain and exponentially scaled, with the
//! closed form for half-integer order alongside.

use std::f64::consts::PI;

use cardinal::specfun::{bessel_k, bessel_k_scaled, BesselEvalConfig};

fn main() {
    let cfg = BesselEvalConfig::default();
    println!("{:>6} {:>8} {:>24} {:>24}", "order", "r", "K", "e^r K");
    for &order in &[0.0, 0.5, 1.0, 2.5, 7.5] {
        for &r in &[0.01, 1.0, 10.0, 100.0] {
            let k = bessel_k(order, r, &cfg).unwrap();
            let ks = bessel_k_scaled(order, r, &cfg).unwrap();
            println!("{order:>6} {r:>8} {k:>24.16e} {ks:>24.16e}");
        }
    }
    // K itself underflows here; the scaled form does not.
    println!("e^r K_0(1e4) = {:.16e}", bessel_k_scaled(0.0, 1.0e4, &cfg).unwrap());
    let r: f64 = 2.0;
    let closed = (PI / (2.0 * r)).sqrt() * (-r).exp();
    println!("K_1/2(2) = {:.16e}, closed form {closed:.16e}", bessel_k(0.5, r, &cfg).unwrap());
}
