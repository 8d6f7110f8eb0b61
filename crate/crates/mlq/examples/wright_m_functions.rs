//! The Wright function family and its M-function specialization.
//!
//! M_nu is the probability density that drives time-fractional diffusion.
//! At three special orders it collapses to elementary or Airy closed
//! forms, which gives an independent check of the series evaluator. The
//! example also verifies the companion identity F_nu(z) = nu z M_nu(z)
//! and the known integer moments of M_nu.
//!
//! Run with: cargo run --example wright_m_functions

use mlq::wright::{airy, f_wright, m_wright, m_wright_special, wright, WrightParams};
use mlq::Tolerance;

fn main() -> mlq::Result<()> {
    let tol = Tolerance::default();

    println!("M_nu(x) from the series vs closed forms");
    println!(
        "{:>6}  {:>20}  {:>20}  {:>9}",
        "x", "series (nu=1/2)", "gaussian form", "diff"
    );
    for &x in &[0.0, 0.5, 1.0, 2.0, 3.5] {
        let series = m_wright(0.5, x)?;
        let closed = m_wright_special(0.5, x)?;
        println!(
            "{x:>6}  {series:>20.15}  {closed:>20.15}  {:>9.1e}",
            (series - closed).abs()
        );
    }

    println!("\nAt nu = 1/3 the closed form runs through the Airy function");
    for &x in &[0.3, 1.0, 2.0] {
        let series = m_wright(1.0 / 3.0, x)?;
        let closed = m_wright_special(1.0 / 3.0, x)?;
        let (ai, _) = airy(x / 3f64.powf(1.0 / 3.0))?;
        println!(
            "  x = {x}: series {series:.15}, Airy form {closed:.15}, Ai({:.4}) = {ai:.15}",
            x / 3f64.powf(1.0 / 3.0)
        );
    }

    println!("\nCompanion identity F_nu(z) = nu z M_nu(z) at nu = 0.4");
    for &z in &[0.25, 1.0, 2.5] {
        let f = f_wright(0.4, z)?;
        let rhs = 0.4 * z * m_wright(0.4, z)?;
        println!("  z = {z}: F = {f:.15}, nu z M = {rhs:.15}, diff = {:.1e}", (f - rhs).abs());
    }

    println!("\nGeneral Wright function W_(lambda,mu)(z) with positive lambda");
    let bessel_like = WrightParams::new(1.0, 1.0)?;
    for &z in &[-4.0, -1.0, 0.5, 2.0] {
        let r = wright(&bessel_like, z, &tol)?;
        println!("  W_(1,1)({z}) = {:.15}  (est error {:.1e})", r.value, r.est_error);
    }

    println!("\nMoments of M_nu: integral of x^n M_nu(x) dx = n! / Gamma(1 + nu n)");
    println!("checked by midpoint quadrature at nu = 0.5");
    let h = 1e-3f64;
    for n in 0..4u32 {
        let mut acc = 0.0f64;
        let mut x = 0.5 * h;
        while x < 40.0 {
            acc += x.powi(n as i32) * m_wright(0.5, x)?;
            x += h;
        }
        acc *= h;
        let fact: f64 = (1..=n).map(|k| k as f64).product();
        let expected = fact / statgamma(1.0 + 0.5 * n as f64);
        println!("  n = {n}: quadrature {acc:.8}, exact {expected:.8}");
    }
    Ok(())
}

/// Gamma through the crate's reciprocal-gamma kernel.
fn statgamma(x: f64) -> f64 {
    1.0 / mlq::gamma::rgamma(x)
}
