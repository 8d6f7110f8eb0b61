//! Continuous-time random walks built on renewal processes: waiting-time
//! laws in the Laplace domain, thinning and rescale-respeed operators with
//! their shared algebraic core, the universality experiment that drives
//! every admissible law to the Mittag-Leffler transform, memory kernels,
//! the lattice renewal series for the walker density, its characteristic
//! function, and Monte-Carlo path simulation.

use crate::error::{MlqError, Result};
use crate::gamma::{rgamma, sin_pi};
use crate::ml::{ml, MLParams};
use crate::numerics::{integrate_semi_infinite, Tolerance};
use crate::renewal::{frac_poisson_pmf, WaitingTimeLaw, WaitingTimeSampler};
use crate::rng::RngStream;

/// Waiting-time law viewed through its Laplace transform s -> phi(s),
/// together with an optional time rescaling so that the composed map
/// s -> phi(time_scale * s) stays inside the type. The transform of a
/// probability density satisfies phi(0+) = 1 and 0 < phi(s) < 1 for s > 0.
#[derive(Debug, Clone)]
pub struct LaplaceWaitingDensity {
    law: WaitingTimeLaw,
    time_scale: f64,
    /// Integral of e^{-u} u^{-order-1} over [1, inf), precomputed for the
    /// power law so repeated evaluations need no quadrature.
    power_tail_upper: f64,
}

impl LaplaceWaitingDensity {
    pub fn new(law: WaitingTimeLaw) -> Result<Self> {
        let power_tail_upper = match law {
            WaitingTimeLaw::PowerLaw { order, .. } => upper_gamma_tail_from(order, 1.0)?,
            _ => 0.0,
        };
        Ok(LaplaceWaitingDensity {
            law,
            time_scale: 1.0,
            power_tail_upper,
        })
    }

    pub fn law(&self) -> &WaitingTimeLaw {
        &self.law
    }

    /// The density of tau-times-faster clocks: s -> phi(tau * s) composed
    /// with any rescaling already present.
    pub fn scaled(&self, tau: f64) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(MlqError::Domain(format!(
                "time rescale factor must be positive, got {tau}"
            )));
        }
        Ok(LaplaceWaitingDensity {
            law: self.law,
            time_scale: self.time_scale * tau,
            power_tail_upper: self.power_tail_upper,
        })
    }

    /// phi(time_scale * s) for s > 0.
    pub fn eval(&self, s: f64) -> Result<f64> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(MlqError::Domain(format!(
                "laplace variable must be positive, got {s}"
            )));
        }
        let z = self.time_scale * s;
        match self.law {
            WaitingTimeLaw::Exponential { rate } => Ok(rate / (rate + z)),
            WaitingTimeLaw::MittagLeffler { order } => Ok(1.0 / (1.0 + z.powf(order))),
            WaitingTimeLaw::PowerLaw { order, scale } => {
                let t_min = (scale / order).powf(1.0 / order);
                let a = z * t_min;
                let tail = if a <= 1.0 {
                    lower_gamma_series(order, a) + self.power_tail_upper
                } else {
                    upper_gamma_tail_from(order, a)?
                };
                Ok(scale * z.powf(order) * tail)
            }
        }
    }
}

/// Integral of e^{-u} u^{-order-1} over [a, 1] plus nothing else, by the
/// exponential series: sum_k (-1)^k / k! * (1 - a^{k-order}) / (k - order).
/// The k = 0 term carries the a^{-order} blowup exactly, so the result
/// stays accurate down to arbitrarily small a.
fn lower_gamma_series(order: f64, a: f64) -> f64 {
    let mut sum = 0.0f64;
    let mut inv_kfact = 1.0f64;
    for k in 0..80 {
        let kf = k as f64;
        if k > 0 {
            inv_kfact /= kf;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let term = sign * inv_kfact * (1.0 - a.powf(kf - order)) / (kf - order);
        sum += term;
        if k > 3 && term.abs() < 1e-18 * sum.abs().max(1.0) {
            break;
        }
    }
    sum
}

/// Integral of e^{-u} u^{-order-1} over [a, inf) by shifted quadrature,
/// valid for any a > 0 and used both for the cached [1, inf) piece and for
/// arguments past 1.
fn upper_gamma_tail_from(order: f64, a: f64) -> Result<f64> {
    let tol = Tolerance::new(1e-14, 1e-11, 2000)?;
    let q = integrate_semi_infinite(|v| (-v).exp() * (a + v).powf(-order - 1.0), &tol)?;
    Ok((-a).exp() * q.value)
}

/// The algebraic heart shared by thinning and rescale-respeed, so the two
/// operators agree bit for bit whenever they receive the same transform
/// value: phi -> q phi / (1 - (1 - q) phi).
fn thin_core(phi_value: f64, q: f64) -> f64 {
    q * phi_value / (1.0 - (1.0 - q) * phi_value)
}

/// Random deletion of renewal events: each event survives independently
/// with probability q, and the waiting time to the next survivor has
/// transform q phi(s) / (1 - (1-q) phi(s)).
pub fn thin_laplace(phi: &LaplaceWaitingDensity, q: f64, s: f64) -> Result<f64> {
    if !q.is_finite() || !(q > 0.0 && q <= 1.0) {
        return Err(MlqError::Domain(format!(
            "survival probability must lie in (0, 1], got {q}"
        )));
    }
    Ok(thin_core(phi.eval(s)?, q))
}

/// Combined rescaling of time by tau and respeeding by the factor a:
/// a phi(tau s) / (1 - (1-a) phi(tau s)).
pub fn rescale_respeed_laplace(
    phi: &LaplaceWaitingDensity,
    tau: f64,
    respeed_factor: f64,
    s: f64,
) -> Result<f64> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(MlqError::Domain(format!(
            "rescale factor must be positive, got {tau}"
        )));
    }
    if !(respeed_factor > 0.0) || !respeed_factor.is_finite() {
        return Err(MlqError::Domain(format!(
            "respeed factor must be positive, got {respeed_factor}"
        )));
    }
    Ok(thin_core(phi.eval(tau * s)?, respeed_factor))
}

/// Tail exponent and tail coefficient of a waiting-time law: finite-mean
/// laws report exponent 1 with the mean as coefficient; the power law with
/// survival (c/beta) t^{-beta} reports lambda = c pi / (Gamma(1+beta)
/// sin(pi beta)); the Mittag-Leffler law is normalized to coefficient 1.
pub fn tail_coefficient(law: &WaitingTimeLaw) -> Result<(f64, f64)> {
    match *law {
        WaitingTimeLaw::Exponential { rate } => Ok((1.0, 1.0 / rate)),
        WaitingTimeLaw::MittagLeffler { order } => Ok((order, 1.0)),
        WaitingTimeLaw::PowerLaw { order, scale } => {
            let lambda = scale * std::f64::consts::PI * rgamma(1.0 + order) / sin_pi(order);
            Ok((order, lambda))
        }
    }
}

/// Distance between the rescaled-respeeded transform of a law (respeed
/// factor lambda tau^beta chosen from its tail) and the Mittag-Leffler
/// transform 1/(1+s^beta) it converges to as tau -> 0. The Mittag-Leffler
/// law itself sits at gap zero for every tau.
pub fn universality_gap(law: &WaitingTimeLaw, tau: f64, s: f64) -> Result<f64> {
    let (beta, lambda) = tail_coefficient(law)?;
    let phi = LaplaceWaitingDensity::new(*law)?;
    let respeed = lambda * tau.powf(beta);
    let mapped = rescale_respeed_laplace(&phi, tau, respeed, s)?;
    let limit = 1.0 / (1.0 + s.powf(beta));
    Ok((mapped - limit).abs())
}

/// Time-nonlocal kernel of the counting dynamics: an instantaneous atom in
/// the classical case, or the power kernel t^{-beta}/Gamma(1-beta) whose
/// Laplace transform is s^{beta-1}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MemoryFunction {
    Delta,
    PowerKernel { beta: f64 },
}

impl MemoryFunction {
    pub fn power_kernel(beta: f64) -> Result<Self> {
        if !beta.is_finite() || !(beta > 0.0 && beta < 1.0) {
            return Err(MlqError::Domain(format!(
                "power kernel exponent must lie in (0, 1), got {beta}"
            )));
        }
        Ok(MemoryFunction::PowerKernel { beta })
    }

    /// Transform of the kernel: 1 for the atom, s^{beta-1} otherwise.
    pub fn laplace(&self, s: f64) -> Result<f64> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(MlqError::Domain(format!(
                "laplace variable must be positive, got {s}"
            )));
        }
        match *self {
            MemoryFunction::Delta => Ok(1.0),
            MemoryFunction::PowerKernel { beta } => Ok(s.powf(beta - 1.0)),
        }
    }

    /// Transform of the reciprocal kernel, the inverse of `laplace`.
    pub fn reciprocal_laplace(&self, s: f64) -> Result<f64> {
        Ok(1.0 / self.laplace(s)?)
    }
}

/// Pointwise kernel value t^{-beta}/Gamma(1-beta). The atom has no
/// pointwise value and is rejected with an explicit signal.
pub fn memory_kernel(mem: &MemoryFunction, t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(MlqError::Domain(format!(
            "kernel evaluation needs t > 0, got {t}"
        )));
    }
    match *mem {
        MemoryFunction::Delta => Err(MlqError::Domain(
            "the instantaneous kernel is a point mass at t = 0 (an atom) and has \
             no pointwise value; use the tagged variant directly"
                .into(),
        )),
        MemoryFunction::PowerKernel { beta } => Ok(t.powf(-beta) * rgamma(1.0 - beta)),
    }
}

/// Displacement law of a single jump. Variants live on step-aligned cells
/// so that convolution powers stay exact integer bookkeeping: a unit step
/// to the right, probabilities on integer sites, or a continuous density
/// sampled on cells of width `step` centered at (min_cell + j) * step.
#[derive(Debug, Clone, PartialEq)]
pub enum JumpLaw {
    DiracUnit,
    Lattice { min_site: i64, probs: Vec<f64> },
    Continuous { min_cell: i64, step: f64, densities: Vec<f64> },
}

impl JumpLaw {
    pub fn lattice(min_site: i64, probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(MlqError::Domain("lattice law needs at least one site".into()));
        }
        if probs.iter().any(|&p| !(0.0..=1.0).contains(&p) || !p.is_finite()) {
            return Err(MlqError::Domain(
                "lattice probabilities must lie in [0, 1]".into(),
            ));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(MlqError::Domain(format!(
                "lattice probabilities sum to {total}, want 1 within 1e-12"
            )));
        }
        Ok(JumpLaw::Lattice { min_site, probs })
    }

    /// Unit steps left or right with equal weight.
    pub fn symmetric_unit() -> Self {
        JumpLaw::Lattice {
            min_site: -1,
            probs: vec![0.5, 0.0, 0.5],
        }
    }

    pub fn continuous(min_cell: i64, step: f64, densities: Vec<f64>) -> Result<Self> {
        if densities.is_empty() || !(step > 0.0) || !step.is_finite() {
            return Err(MlqError::Domain(
                "continuous law needs a positive cell width and at least one cell".into(),
            ));
        }
        if densities.iter().any(|&d| d < 0.0 || !d.is_finite()) {
            return Err(MlqError::Domain(
                "continuous densities must be nonnegative".into(),
            ));
        }
        let total: f64 = densities.iter().sum::<f64>() * step;
        if (total - 1.0).abs() > 1e-12 {
            return Err(MlqError::Domain(format!(
                "continuous density integrates to {total}, want 1 within 1e-12"
            )));
        }
        Ok(JumpLaw::Continuous {
            min_cell,
            step,
            densities,
        })
    }

    /// Cell representation (first cell index, cell width, probability mass
    /// per cell) shared by the convolution series and the samplers.
    pub fn cell_masses(&self) -> (i64, f64, Vec<f64>) {
        match self {
            JumpLaw::DiracUnit => (1, 1.0, vec![1.0]),
            JumpLaw::Lattice { min_site, probs } => (*min_site, 1.0, probs.clone()),
            JumpLaw::Continuous {
                min_cell,
                step,
                densities,
            } => (*min_cell, *step, densities.iter().map(|d| d * step).collect()),
        }
    }

    /// Real characteristic value sum_x w(x) cos(kappa x). Laws whose
    /// transform has an imaginary part (asymmetric laws) are rejected,
    /// except at kappa values where the imaginary part vanishes.
    pub fn characteristic(&self, kappa: f64) -> Result<f64> {
        if !kappa.is_finite() {
            return Err(MlqError::Domain(format!(
                "wave number must be finite, got {kappa}"
            )));
        }
        let (min_cell, step, masses) = self.cell_masses();
        let mut re = 0.0f64;
        let mut im = 0.0f64;
        for (j, &m) in masses.iter().enumerate() {
            let x = (min_cell + j as i64) as f64 * step;
            re += m * (kappa * x).cos();
            im += m * (kappa * x).sin();
        }
        if im.abs() > 1e-12 {
            return Err(MlqError::Domain(format!(
                "jump law is not symmetric: characteristic at kappa={kappa} has \
                 imaginary part {im:.3e}; only real transforms are supported"
            )));
        }
        Ok(re.clamp(-1.0, 1.0))
    }

    /// Draw one jump. Continuous cells are sampled uniformly within the
    /// chosen cell.
    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        match self {
            JumpLaw::DiracUnit => 1.0,
            JumpLaw::Lattice { min_site, probs } => {
                let u = rng.next_uniform();
                let mut cum = 0.0;
                for (j, &p) in probs.iter().enumerate() {
                    cum += p;
                    if u <= cum {
                        return (*min_site + j as i64) as f64;
                    }
                }
                (*min_site + probs.len() as i64 - 1) as f64
            }
            JumpLaw::Continuous {
                min_cell,
                step,
                densities,
            } => {
                let u = rng.next_uniform();
                let mut cum = 0.0;
                let mut cell = densities.len() - 1;
                for (j, &d) in densities.iter().enumerate() {
                    cum += d * step;
                    if u <= cum {
                        cell = j;
                        break;
                    }
                }
                let center = (*min_cell + cell as i64) as f64 * step;
                center + (rng.next_uniform() - 0.5) * step
            }
        }
    }
}

/// Walker distribution at a fixed time: cell masses on a step-aligned grid
/// plus the explicit not-yet-moved atom at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct CtrwDistribution {
    pub min_cell: i64,
    pub step: f64,
    pub masses: Vec<f64>,
    pub atom: f64,
}

impl CtrwDistribution {
    pub fn position(&self, j: usize) -> f64 {
        (self.min_cell + j as i64) as f64 * self.step
    }

    pub fn total_mass(&self) -> f64 {
        self.atom + self.masses.iter().sum::<f64>()
    }

    /// Mass at one cell, including the atom when the cell sits at 0.
    pub fn mass_at_cell(&self, cell: i64) -> f64 {
        let mut m = 0.0;
        if cell >= self.min_cell {
            if let Some(&v) = self.masses.get((cell - self.min_cell) as usize) {
                m += v;
            }
        }
        if cell == 0 {
            m += self.atom;
        }
        m
    }

    /// Discrete Fourier sum (real, imaginary) over all mass including the
    /// atom.
    pub fn fourier_sum(&self, kappa: f64) -> (f64, f64) {
        let mut re = self.atom;
        let mut im = 0.0;
        for (j, &m) in self.masses.iter().enumerate() {
            let x = self.position(j);
            re += m * (kappa * x).cos();
            im += m * (kappa * x).sin();
        }
        (re, im)
    }
}

fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0f64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Walker density by the renewal series: the counting weight at k multiplies
/// the k-fold jump convolution, summed until the counting tail drops below
/// 1e-8. The zero-jump weight stays a separate atom at the origin.
pub fn ctrw_pdf_series(
    jump: &JumpLaw,
    beta: f64,
    t: f64,
    k_max: usize,
) -> Result<CtrwDistribution> {
    if !beta.is_finite() || !(beta > 0.0 && beta <= 1.0) {
        return Err(MlqError::Domain(format!(
            "counting order must lie in (0, 1], got {beta}"
        )));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(MlqError::Domain(format!(
            "time must be positive, got {t}"
        )));
    }
    if k_max == 0 {
        return Err(MlqError::Domain("k_max must be at least 1".into()));
    }
    let (w_min, step, w_masses) = jump.cell_masses();
    let w_max = w_min + w_masses.len() as i64 - 1;
    let out_min = 0.min(w_min * k_max as i64).min(w_min);
    let out_max = 0.max(w_max * k_max as i64).max(w_max);
    let mut masses = vec![0.0f64; (out_max - out_min + 1) as usize];

    let atom = frac_poisson_pmf(beta, t, 0)?;
    let mut captured = atom;
    let mut conv = vec![1.0f64];
    let mut conv_min = 0i64;
    let mut done = captured > 1.0 - 1e-8;
    for k in 1..=k_max {
        if done {
            break;
        }
        conv = convolve(&conv, &w_masses);
        conv_min += w_min;
        let pk = frac_poisson_pmf(beta, t, k as u64)?;
        for (i, &c) in conv.iter().enumerate() {
            masses[(conv_min - out_min) as usize + i] += pk * c;
        }
        captured += pk;
        if captured > 1.0 - 1e-8 {
            done = true;
        }
    }
    if !done {
        return Err(MlqError::TruncationBudget(format!(
            "counting tail still carries {:.3e} after {k_max} jump orders at \
             beta={beta}, t={t}; raise k_max",
            1.0 - captured
        )));
    }
    // Trim dead cells while keeping the origin cell inside the window.
    let first_live = masses
        .iter()
        .position(|&m| m > 0.0)
        .unwrap_or((0 - out_min) as usize)
        .min((0 - out_min) as usize);
    let last_live = masses
        .iter()
        .rposition(|&m| m > 0.0)
        .unwrap_or((0 - out_min) as usize)
        .max((0 - out_min) as usize);
    let trimmed = masses[first_live..=last_live].to_vec();
    Ok(CtrwDistribution {
        min_cell: out_min + first_live as i64,
        step,
        masses: trimmed,
        atom,
    })
}

/// Characteristic function of the walker position,
/// E_beta((w_hat(kappa) - 1) t^beta), the closed solution of the
/// Laplace-Fourier counting identity for symmetric jump laws.
pub fn ctrw_characteristic(jump: &JumpLaw, beta: f64, kappa: f64, t: f64) -> Result<f64> {
    if !beta.is_finite() || !(beta > 0.0 && beta <= 1.0) {
        return Err(MlqError::Domain(format!(
            "counting order must lie in (0, 1], got {beta}"
        )));
    }
    if t < 0.0 || !t.is_finite() {
        return Err(MlqError::Domain(format!(
            "time must be finite and >= 0, got {t}"
        )));
    }
    let w_hat = jump.characteristic(kappa)?;
    if t == 0.0 {
        return Ok(1.0);
    }
    let z = (w_hat - 1.0) * t.powf(beta);
    let params = MLParams::one_param(beta)?;
    Ok(ml(&params, z)?.value)
}

/// One walker path: accumulate waiting times to the horizon, adding one
/// jump per completed renewal, and report the final position.
pub fn simulate_ctrw(
    jump: &JumpLaw,
    waiting: &WaitingTimeLaw,
    horizon: f64,
    rng: &mut RngStream,
) -> Result<f64> {
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(MlqError::Domain(format!(
            "horizon must be positive, got {horizon}"
        )));
    }
    let sampler = WaitingTimeSampler::new(waiting)?;
    let mut t = 0.0f64;
    let mut pos = 0.0f64;
    loop {
        t += sampler.sample(rng)?;
        if t > horizon {
            break;
        }
        pos += jump.sample(rng);
    }
    Ok(pos)
}

/// Walker positions recorded at a strictly increasing list of checkpoint
/// times, over an ensemble of paths with one RNG stream per path id. The
/// outer vector is indexed by checkpoint, the inner by path id, so results
/// do not depend on thread scheduling.
pub fn simulate_ctrw_checkpoints(
    jump: &JumpLaw,
    waiting: &WaitingTimeLaw,
    checkpoints: &[f64],
    n_paths: usize,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    use rayon::prelude::*;
    if checkpoints.is_empty() {
        return Err(MlqError::Domain("need at least one checkpoint".into()));
    }
    for w in checkpoints.windows(2) {
        if !(w[0] < w[1]) {
            return Err(MlqError::Domain(format!(
                "checkpoints must increase strictly, got {} then {}",
                w[0], w[1]
            )));
        }
    }
    if !(checkpoints[0] > 0.0) || !checkpoints[checkpoints.len() - 1].is_finite() {
        return Err(MlqError::Domain(
            "checkpoints must be positive and finite".into(),
        ));
    }
    let sampler = WaitingTimeSampler::new(waiting)?;
    let per_path: Vec<Vec<f64>> = (0..n_paths)
        .into_par_iter()
        .map(|path| -> Result<Vec<f64>> {
            let mut rng = RngStream::new(seed, path as u64);
            let mut positions = vec![0.0f64; checkpoints.len()];
            let mut idx = 0usize;
            let mut t = 0.0f64;
            let mut pos = 0.0f64;
            while idx < checkpoints.len() {
                t += sampler.sample(&mut rng)?;
                while idx < checkpoints.len() && checkpoints[idx] < t {
                    positions[idx] = pos;
                    idx += 1;
                }
                if idx >= checkpoints.len() {
                    break;
                }
                pos += jump.sample(&mut rng);
            }
            Ok(positions)
        })
        .collect::<Result<_>>()?;
    let mut by_checkpoint = vec![vec![0.0f64; n_paths]; checkpoints.len()];
    for (p, path_positions) in per_path.iter().enumerate() {
        for (c, &x) in path_positions.iter().enumerate() {
            by_checkpoint[c][p] = x;
        }
    }
    Ok(by_checkpoint)
}
