//! Fractional relaxation: the decay law e_alpha(t), its two asymptotic
//! approximants, and a residual check of the governing equation.
//!
//! The curve interpolates between a stretched exponential at short times
//! and a power-law tail at long times. The example tabulates the exact
//! curve against both approximants, locates where each approximant is
//! within 1% of the truth, and then verifies pointwise that the fractional
//! derivative of the curve equals its negative (the defining equation),
//! using an independent quadrature-based Caputo derivative.
//!
//! Run with: cargo run --example relaxation_curves

use mlq::relaxation::{caputo_derivative, e_alpha, e_approx_long, e_approx_short, RelaxOrder};
use mlq::Tolerance;

fn main() -> mlq::Result<()> {
    let order = RelaxOrder::new(0.5)?;

    println!("Relaxation of order 1/2: exact curve vs approximants");
    println!(
        "{:>8}  {:>12}  {:>12}  {:>12}",
        "t", "exact", "short_time", "long_time"
    );
    for &t in &[0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 20.0, 100.0] {
        let exact = e_alpha(order, t)?.value;
        let short = e_approx_short(order, t)?;
        let long = e_approx_long(order, t)?;
        println!("{t:>8}  {exact:>12.6}  {short:>12.6}  {long:>12.6}");
    }

    println!("\nRelative error of each approximant (percent)");
    println!("{:>8}  {:>12}  {:>12}", "t", "short_time", "long_time");
    for &t in &[0.01, 0.1, 1.0, 10.0, 1000.0] {
        let exact = e_alpha(order, t)?.value;
        let short = 100.0 * (e_approx_short(order, t)? / exact - 1.0).abs();
        let long = 100.0 * (e_approx_long(order, t)? / exact - 1.0).abs();
        println!("{t:>8}  {short:>11.4}%  {long:>11.4}%");
    }

    println!("\nResidual of the relaxation equation D^alpha e + e = 0");
    println!("(Caputo derivative computed by independent quadrature)");
    let tol = Tolerance::new(1e-11, 1e-9, 2000)?;
    for &alpha in &[0.4, 0.7, 0.9] {
        let ord = RelaxOrder::new(alpha)?;
        let f = move |u: f64| e_alpha(ord, u).map(|r| r.value).unwrap_or(f64::NAN);
        let mut worst = 0.0f64;
        for &t in &[0.5, 1.0, 3.0] {
            let deriv = caputo_derivative(f, alpha, t, &tol)?;
            let residual = (deriv + e_alpha(ord, t)?.value).abs();
            worst = worst.max(residual);
        }
        println!("  alpha = {alpha}: max |D^alpha e + e| = {worst:.3e}");
    }
    Ok(())
}
