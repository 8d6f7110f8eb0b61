//! Gamma-function helpers used throughout the crate.
//!
//! Everything here reduces to a Lanczos approximation of ln Γ on x ≥ 0.5
//! plus the reflection formula Γ(x)Γ(1−x) = π / sin(πx) for the rest of the
//! real axis. The series code in the rest of the crate almost always wants
//! the *reciprocal* 1/Γ(x), which is an entire function: it is exactly zero
//! at the poles x = 0, −1, −2, …, and [`rgamma`] returns that zero instead
//! of forcing callers to special-case pole hits term by term.

/// Lanczos coefficients for g = 7, n = 9.
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const SQRT_TWO_PI: f64 = 2.506_628_274_631_000_5;

/// ln Γ(x) for x > 0 via Lanczos; caller guarantees positivity.
fn ln_gamma_positive(x: f64) -> f64 {
    if x < 0.5 {
        // Reflect into x ≥ 0.5; sin(πx) > 0 on (0, 1) so no sign to track.
        return std::f64::consts::PI.ln() - sin_pi(x).ln() - ln_gamma_positive(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + 7.5;
    (SQRT_TWO_PI * acc).ln() + (x + 0.5) * t.ln() - t
}

/// sin(πx) with exact range reduction, so x near an integer does not lose
/// precision to the π multiplication.
pub fn sin_pi(x: f64) -> f64 {
    // Reduce to r ∈ [−0.5, 0.5] around the nearest integer n; the
    // subtraction x − n is exact in f64 and sin(π(n + r)) = ±sin(πr).
    let n = x.round();
    let r = x - n;
    let s = (std::f64::consts::PI * r).sin();
    // n odd flips the sign. n.rem_euclid(2.0) is 0.0 or 1.0 for any
    // representable n; for |n| ≥ 2^53 every f64 is an even integer.
    if n.rem_euclid(2.0) == 1.0 {
        -s
    } else {
        s
    }
}

/// cos(πx) with exact range reduction, so half-integer arguments map to
/// exactly 0 and integers to exactly ±1.
pub fn cos_pi(x: f64) -> f64 {
    let n = x.round();
    let r = x - n;
    let c = if r.abs() == 0.5 {
        0.0
    } else {
        (std::f64::consts::PI * r).cos()
    };
    if n.rem_euclid(2.0) == 1.0 {
        -c
    } else {
        c
    }
}

/// True when x sits exactly on a pole of Γ (a non-positive integer).
pub fn is_gamma_pole(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// (ln |Γ(x)|, sign of Γ(x)). At a pole the sign is 0 and the log is +∞.
pub fn ln_abs_gamma(x: f64) -> (f64, f64) {
    if is_gamma_pole(x) {
        return (f64::INFINITY, 0.0);
    }
    if x > 0.0 {
        return (ln_gamma_positive(x), 1.0);
    }
    // Reflection: |Γ(x)| = π / (|sin(πx)| Γ(1−x)), sign follows sin(πx).
    let s = sin_pi(x);
    let ln = std::f64::consts::PI.ln() - s.abs().ln() - ln_gamma_positive(1.0 - x);
    (ln, s.signum())
}

/// Γ(x); ±∞ at the poles, following the sign of the approach through the
/// reflection formula's sine.
pub fn gamma(x: f64) -> f64 {
    let (ln, sign) = ln_abs_gamma(x);
    if sign == 0.0 {
        return f64::INFINITY;
    }
    sign * ln.exp()
}

/// 1/Γ(x), entire in x: exactly 0 at x = 0, −1, −2, …
pub fn rgamma(x: f64) -> f64 {
    let (ln, sign) = ln_abs_gamma(x);
    if sign == 0.0 {
        return 0.0;
    }
    sign * (-ln).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT_PI: f64 = 1.772_453_850_905_516;

    #[test]
    fn gamma_at_small_integers_and_halves() {
        assert!((gamma(1.0) - 1.0).abs() < 1e-14);
        assert!((gamma(2.0) - 1.0).abs() < 1e-14);
        assert!((gamma(5.0) - 24.0).abs() < 24.0 * 1e-14);
        assert!((gamma(0.5) - SQRT_PI).abs() < 1e-14);
        // Γ(1.5) = √π/2
        assert!((gamma(1.5) - SQRT_PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn gamma_reflects_to_negative_arguments() {
        // Γ(−0.5) = −2√π
        assert!((gamma(-0.5) + 2.0 * SQRT_PI).abs() < 1e-13);
        // Γ(−1.5) = 4√π/3
        assert!((gamma(-1.5) - 4.0 * SQRT_PI / 3.0).abs() < 1e-13);
    }

    #[test]
    fn reciprocal_is_zero_at_poles() {
        for k in 0..12 {
            assert_eq!(rgamma(-(k as f64)), 0.0);
        }
        assert!((rgamma(3.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn ln_abs_gamma_tracks_signs_between_poles() {
        // Γ alternates sign on (−1,0), (−2,−1), …: negative, positive, …
        assert_eq!(ln_abs_gamma(-0.3).1, -1.0);
        assert_eq!(ln_abs_gamma(-1.3).1, 1.0);
        assert_eq!(ln_abs_gamma(-2.3).1, -1.0);
    }

    #[test]
    fn large_argument_matches_stirling() {
        // ln Γ(100) from Stirling with the first correction term is good to
        // ~1e-9 relative; Lanczos should sit well inside that.
        let x: f64 = 100.0;
        let stirling =
            (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * x);
        assert!((ln_gamma_positive(x) - stirling).abs() < 1e-9 * stirling.abs());
    }

    #[test]
    fn sin_pi_is_exact_near_integers() {
        assert_eq!(sin_pi(1.0), 0.0_f64.sin());
        assert!((sin_pi(0.5) - 1.0).abs() < 1e-15);
        assert!((sin_pi(1.5) + 1.0).abs() < 1e-15);
        // At x = 21.000000001 the reduced argument is ~1e-9; direct
        // sin(πx) would lose ~8 digits. The subtraction x − 21 is exact in
        // f64, so the reduced reference below carries no cancellation error.
        let x = 21.000000001_f64;
        let expected = -(std::f64::consts::PI * (x - 21.0)).sin();
        assert!((sin_pi(x) - expected).abs() < 1e-24);
        let naive = (std::f64::consts::PI * x).sin();
        assert!((naive - expected).abs() > 1e-17, "naive path unexpectedly accurate");
    }
}
