//! A continuous-time random walk on the integer lattice, three ways.
//!
//! A walker takes symmetric unit steps at Mittag-Leffler renewal epochs of
//! order beta. Its displacement law at a fixed time comes out of three
//! independent routes: the analytic renewal series, the characteristic
//! function E_beta((cos kappa - 1) t^beta) checked against the Fourier sum
//! of that series, and a seeded parallel simulation. The example also
//! tracks the mean-square displacement, which grows like t^beta instead
//! of linearly.
//!
//! Run with: cargo run --example ctrw_simulation

use mlq::ctrw::{ctrw_characteristic, ctrw_pdf_series, simulate_ctrw_checkpoints, JumpLaw};
use mlq::renewal::WaitingTimeLaw;

fn main() -> mlq::Result<()> {
    let beta = 0.5;
    let t = 4.0;
    let jump = JumpLaw::symmetric_unit();
    let waiting = WaitingTimeLaw::mittag_leffler(beta)?;

    let dist = ctrw_pdf_series(&jump, beta, t, 400)?;
    println!("Analytic site masses at t = {t} (beta = {beta})");
    println!("  total mass captured by the series: {:.12}", dist.total_mass());

    let n_paths = 30_000usize;
    let positions = simulate_ctrw_checkpoints(&jump, &waiting, &[t], n_paths, 99)?.remove(0);
    println!("\n{:>5}  {:>12}  {:>12}", "site", "analytic", "simulated");
    for site in -4i64..=4 {
        let mass = dist.mass_at_cell(site);
        let emp = positions
            .iter()
            .filter(|&&p| (p - site as f64).abs() < 0.5)
            .count() as f64
            / n_paths as f64;
        println!("{site:>5}  {mass:>12.6}  {emp:>12.6}");
    }

    println!("\nCharacteristic function vs Fourier sum of the series");
    println!("{:>6}  {:>16}  {:>16}  {:>9}", "kappa", "closed form", "series sum", "diff");
    for &kappa in &[0.3, 0.7, 1.5, 2.5] {
        let closed = ctrw_characteristic(&jump, beta, kappa, t)?;
        let (re, _im) = dist.fourier_sum(kappa);
        println!(
            "{kappa:>6}  {closed:>16.10}  {re:>16.10}  {:>9.1e}",
            (closed - re).abs()
        );
    }

    println!("\nMean-square displacement growth (20000 paths, seed 7)");
    let checkpoints = [1.0, 2.0, 4.0, 8.0, 16.0];
    let ensembles = simulate_ctrw_checkpoints(&jump, &waiting, &checkpoints, 20_000, 7)?;
    println!("{:>6}  {:>10}  {:>16}", "t", "msd", "msd / t^beta");
    for (tk, snapshot) in checkpoints.iter().zip(&ensembles) {
        let msd = snapshot.iter().map(|p| p * p).sum::<f64>() / snapshot.len() as f64;
        println!("{tk:>6}  {msd:>10.4}  {:>16.4}", msd / tk.powf(beta));
    }
    println!("  (the last column is flat: subdiffusion with exponent beta)");
    Ok(())
}
