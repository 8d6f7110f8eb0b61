//! Fractional relaxation: the decay function e_alpha(t), its rate
//! phi_alpha(t), the non-negative spectral density behind its complete
//! monotonicity, asymptotic approximants, and numerical Caputo and
//! Riemann-Liouville derivatives used as residual checks.

use crate::error::{MlqError, Result};
use crate::gamma::{cos_pi, ln_abs_gamma, rgamma, sin_pi};
use crate::ml::{ml, EvalResult, MLParams, Method};
use crate::numerics::{
    integrate_finite, integrate_semi_infinite_singular, laplace_transform_numeric_singular,
    QuadResult, Tolerance,
};

/// Relaxation order alpha in (0, 1]. alpha = 1 is the exponential edge
/// where the spectrum collapses to a Dirac mass; the spectral operations
/// reject it explicitly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxOrder {
    alpha: f64,
}

impl RelaxOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || !(alpha > 0.0 && alpha <= 1.0) {
            return Err(MlqError::Domain(format!(
                "relaxation order must lie in (0, 1], got {alpha}"
            )));
        }
        Ok(RelaxOrder { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// e_alpha(t) = E_alpha(−t^alpha): value 1 at t = 0, strictly decreasing,
/// completely monotone. alpha = 1 gives exp(−t) exactly.
pub fn e_alpha(order: RelaxOrder, t: f64) -> Result<EvalResult> {
    if !t.is_finite() || t < 0.0 {
        return Err(MlqError::Domain(format!(
            "relaxation time must be finite and >= 0, got {t}"
        )));
    }
    let a = order.alpha();
    if a == 1.0 {
        let value = (-t).exp();
        return Ok(EvalResult {
            value,
            est_error: 2.0 * f64::EPSILON * value,
            method: Method::Series,
        });
    }
    let params = MLParams::one_param(a)?;
    ml(&params, -t.powf(a))
}

/// phi_alpha(t) = −d/dt e_alpha(t) = t^{alpha−1} E_{alpha,alpha}(−t^alpha),
/// the non-negative rate (and waiting-time density of the renewal picture).
/// Diverges like t^{alpha−1} at t = 0 for alpha < 1.
pub fn phi_alpha(order: RelaxOrder, t: f64) -> Result<f64> {
    if !t.is_finite() || t < 0.0 {
        return Err(MlqError::Domain(format!(
            "relaxation time must be finite and >= 0, got {t}"
        )));
    }
    let a = order.alpha();
    if a == 1.0 {
        return Ok((-t).exp());
    }
    if t == 0.0 {
        return Err(MlqError::Divergence(format!(
            "the rate behaves like t^(alpha-1) near zero for alpha = {a} < 1"
        )));
    }
    let params = MLParams::two_param(a, a)?;
    let e = ml(&params, -t.powf(a))?;
    Ok(t.powf(a - 1.0) * e.value)
}

/// The spectral density
///   K_alpha(x) = (1/pi) x^{alpha−1} sin(pi alpha)
///                / (x^{2 alpha} + 2 x^alpha cos(pi alpha) + 1),
/// non-negative for 0 < alpha < 1. The same formula serves the frequency
/// and the relaxation-time variable. alpha = 1 has no density (Dirac mass
/// at x = 1) and is rejected.
pub fn spectral_density(order: RelaxOrder, x: f64) -> Result<f64> {
    let a = order.alpha();
    if a == 1.0 {
        return Err(MlqError::Domain(
            "at order 1 the spectrum is a Dirac mass at x = 1; no density exists".into(),
        ));
    }
    if !x.is_finite() || x <= 0.0 {
        return Err(MlqError::Domain(format!(
            "spectral variable must be positive, got {x}"
        )));
    }
    let xa = x.powf(a);
    let denom = xa * xa + 2.0 * xa * cos_pi(a) + 1.0;
    Ok(x.powf(a - 1.0) * sin_pi(a) / (std::f64::consts::PI * denom))
}

/// Independent evaluation of e_alpha as the Laplace-type superposition
/// of pure exponentials weighted by the spectral density:
///   e_alpha(t) = Int_0^inf exp(−r t) K_alpha(r) dr.
/// Quadrature runs in the spectral variable directly (the dispatcher's
/// branch-cut route uses a different substitution), so this is a genuine
/// cross-check path. t = 0 integrates the bare density (normalization 1).
pub fn e_alpha_spectral(order: RelaxOrder, t: f64, tol: &Tolerance) -> Result<QuadResult> {
    let a = order.alpha();
    if a == 1.0 {
        return Err(MlqError::Domain(
            "at order 1 the spectrum is a Dirac mass; integrate exp(−t) directly".into(),
        ));
    }
    if !t.is_finite() || t < 0.0 {
        return Err(MlqError::Domain(format!(
            "relaxation time must be finite and >= 0, got {t}"
        )));
    }
    let density = move |r: f64| -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        let ra = r.powf(a);
        let denom = ra * ra + 2.0 * ra * cos_pi(a) + 1.0;
        r.powf(a - 1.0) * sin_pi(a) / (std::f64::consts::PI * denom)
    };
    let p = 1.0 - a;
    if t == 0.0 {
        integrate_semi_infinite_singular(density, p, tol)
    } else {
        laplace_transform_numeric_singular(density, t, p, tol)
    }
}

/// Short-time approximant exp(−t^alpha / Gamma(1 + alpha)), the stretched
/// exponential matching e_alpha to first order at t = 0.
pub fn e_approx_short(order: RelaxOrder, t: f64) -> Result<f64> {
    if !t.is_finite() || t < 0.0 {
        return Err(MlqError::Domain(format!(
            "relaxation time must be finite and >= 0, got {t}"
        )));
    }
    let a = order.alpha();
    Ok((-t.powf(a) * rgamma(1.0 + a)).exp())
}

/// Long-time approximant t^{−alpha} / Gamma(1 − alpha), the leading power
/// tail. Undefined at alpha = 1 where Gamma(0) blows up.
pub fn e_approx_long(order: RelaxOrder, t: f64) -> Result<f64> {
    let a = order.alpha();
    if a == 1.0 {
        return Err(MlqError::Domain(
            "the power tail coefficient 1/Gamma(1 - alpha) vanishes at alpha = 1; \
             the exponential has no power tail"
                .into(),
        ));
    }
    if !t.is_finite() || t <= 0.0 {
        return Err(MlqError::Domain(format!(
            "relaxation time must be positive, got {t}"
        )));
    }
    Ok(t.powf(-a) * rgamma(1.0 - a))
}

/// Truncated large-time expansion
///   sum_{n=1}^{N} (−1)^{n−1} t^{−alpha n} / Gamma(1 − alpha n).
///
/// The series is divergent; it is only usable up to its smallest term.
/// Requesting terms past that point returns a `TruncationBudget` error
/// naming the last safe index. Terms whose gamma argument sits on or next
/// to a pole contribute (numerically) zero and do not participate in the
/// smallest-term bookkeeping.
pub fn e_alpha_asymptotic_series(order: RelaxOrder, t: f64, n_terms: usize) -> Result<f64> {
    let a = order.alpha();
    if n_terms == 0 {
        return Err(MlqError::Domain("at least one term is required".into()));
    }
    if !t.is_finite() || !(t.powf(a) > 1.0) {
        return Err(MlqError::Domain(format!(
            "the expansion needs t^alpha > 1, got t = {t} at alpha = {a}"
        )));
    }
    let ln_t = t.ln();
    let mut sum = 0.0f64;
    let mut prev_mag = f64::INFINITY;
    for n in 1..=n_terms {
        let arg = 1.0 - a * n as f64;
        if arg < 0.5 && (arg - arg.round()).abs() < 1e-8 {
            continue;
        }
        let (ln_g, g_sign) = ln_abs_gamma(arg);
        let mag = (-a * n as f64 * ln_t - ln_g).exp();
        if mag > prev_mag {
            return Err(MlqError::TruncationBudget(format!(
                "term {n} grows past the smallest term; the expansion at t = {t}, \
                 alpha = {a} is divergent beyond term {}",
                n - 1
            )));
        }
        let sign = if n % 2 == 1 { g_sign } else { -g_sign };
        sum += sign * mag;
        prev_mag = mag;
    }
    Ok(sum)
}

/// Caputo derivative of order mu in (0, 1):
///   (1/Gamma(1−mu)) Int_0^t f'(tau) (t−tau)^{−mu} dtau.
///
/// f' comes from a central stencil on f. The weakly singular right endpoint
/// is cut at tau = t(1 − 1e−6) and finished analytically with f' frozen on
/// the sliver; the left sliver [0, t·1e−6] uses the exact increment
/// f(delta) − f(0), which stays correct even when f' blows up at 0 like a
/// power.
pub fn caputo_derivative(
    f: impl Fn(f64) -> f64,
    mu: f64,
    t: f64,
    tol: &Tolerance,
) -> Result<f64> {
    if !mu.is_finite() || !(mu > 0.0 && mu < 1.0) {
        return Err(MlqError::Domain(format!(
            "derivative order must lie in (0, 1), got {mu}"
        )));
    }
    if !t.is_finite() || t <= 0.0 {
        return Err(MlqError::Domain(format!(
            "evaluation time must be positive, got {t}"
        )));
    }
    let eps_cut = t * 1e-6;
    let delta = t * 1e-6;
    let f0 = f(0.0);

    let left = (f(delta) - f0) * (t - 0.5 * delta).powf(-mu);

    let fd_step = t * 3e-6;
    let deriv = |tau: f64| -> f64 {
        let h = fd_step.min(0.5 * tau).min(0.45 * (t - tau));
        (f(tau + h) - f(tau - h)) / (2.0 * h)
    };
    let integrand = |tau: f64| deriv(tau) * (t - tau).powf(-mu);
    let central = integrate_finite(integrand, delta, t - eps_cut, tol)?;

    let right = deriv(t - eps_cut) * eps_cut.powf(1.0 - mu) / (1.0 - mu);

    Ok((left + central.value + right) * rgamma(1.0 - mu))
}

/// Riemann-Liouville derivative of order mu in (0, 1), through its exact
/// relation to the Caputo form:
///   D^mu f(t) = Caputo^mu f(t) + f(0+) t^{−mu} / Gamma(1 − mu).
pub fn rl_derivative(
    f: impl Fn(f64) -> f64,
    f0: f64,
    mu: f64,
    t: f64,
    tol: &Tolerance,
) -> Result<f64> {
    if !f0.is_finite() {
        return Err(MlqError::Domain(format!(
            "initial value must be finite, got {f0}"
        )));
    }
    let caputo = caputo_derivative(f, mu, t, tol)?;
    Ok(caputo + f0 * t.powf(-mu) * rgamma(1.0 - mu))
}
