//! Thinning and rescaling waiting-time laws: the route to universality.
//!
//! Keep every renewal event with probability tau, then speed time back up
//! by the matching factor. In Laplace variables the map is exact, and as
//! tau shrinks every law with tail index beta flows to the same limit
//! 1 / (1 + s^beta), the Mittag-Leffler law. That law itself, and the
//! exponential at beta = 1, sit exactly on the fixed point. The example
//! measures the gap decade by decade for a Pareto-type law and confirms
//! both fixed points at machine precision.
//!
//! Run with: cargo run --example ctrw_universality

use mlq::ctrw::{tail_coefficient, thin_laplace, universality_gap, LaplaceWaitingDensity};
use mlq::renewal::WaitingTimeLaw;

fn main() -> mlq::Result<()> {
    let pareto = WaitingTimeLaw::power_law(0.5, 0.3)?;
    let (index, lambda) = tail_coefficient(&pareto)?;
    println!("Pareto-type law: tail index beta = {index}, tail coefficient = {lambda:.6}");

    println!("\nGap to the scaling limit after thinning by tau (s = 1)");
    println!("{:>8}  {:>14}", "tau", "gap");
    for &tau in &[1e-1, 1e-2, 1e-3, 1e-4, 1e-5] {
        println!("{tau:>8.0e}  {:>14.6e}", universality_gap(&pareto, tau, 1.0)?);
    }

    println!("\nThe same sweep at several Laplace abscissas");
    println!("{:>8}  {:>12}  {:>12}  {:>12}", "tau", "s=0.5", "s=1", "s=2");
    for &tau in &[1e-1, 1e-3, 1e-5] {
        println!(
            "{tau:>8.0e}  {:>12.3e}  {:>12.3e}  {:>12.3e}",
            universality_gap(&pareto, tau, 0.5)?,
            universality_gap(&pareto, tau, 1.0)?,
            universality_gap(&pareto, tau, 2.0)?
        );
    }

    println!("\nFixed points: the gap never exceeds machine noise");
    let ml_law = WaitingTimeLaw::mittag_leffler(0.5)?;
    let exp_law = WaitingTimeLaw::exponential(2.0)?;
    for (name, law) in [("Mittag-Leffler beta=0.5", &ml_law), ("exponential rate=2", &exp_law)] {
        let worst = [1e-1, 1e-2, 1e-3]
            .iter()
            .flat_map(|&tau| [0.5, 1.0, 2.0].map(|s| (tau, s)))
            .map(|(tau, s)| universality_gap(law, tau, s).unwrap())
            .fold(0.0f64, f64::max);
        println!("  {name}: max gap = {worst:.2e}");
    }

    println!("\nOne thinning step in the transform domain (q = 0.2, ML law)");
    let phi = LaplaceWaitingDensity::new(ml_law)?;
    println!("{:>6}  {:>14}  {:>14}", "s", "original", "thinned");
    for &s in &[0.5, 1.0, 2.0] {
        println!(
            "{s:>6}  {:>14.8}  {:>14.8}",
            phi.eval(s)?,
            thin_laplace(&phi, 0.2, s)?
        );
    }
    println!("  (thinning an ML law only moves its time scale, never its shape)");
    Ok(())
}
