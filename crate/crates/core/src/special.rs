//! Scalar special functions for the error-probability pipeline.

/// Where the asymptotic continuation takes over from direct `erfc`;
/// `erfc` itself underflows to subnormals near x ≈ 26.5.
const LN_ERFC_CUTOVER: f64 = 25.0;

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// ln(erfc(x)), finite far beyond the underflow point of [`erfc`].
///
/// For x < 25 this is `ln(erfc(x))` directly; above, the standard asymptotic
/// expansion erfc(x) = exp(-x²)/(x√π)·[1 + Σₖ (-1)^k (2k-1)!!/(2x²)^k] is
/// summed to its smallest term, which bounds the relative error (< 1e-16 for
/// x ≥ 25).
pub fn erfc_ln(x: f64) -> f64 {
    if x < LN_ERFC_CUTOVER {
        return erfc(x).ln();
    }
    let inv2x2 = 0.5 / (x * x);
    let mut sum = 1.0_f64;
    let mut term = 1.0_f64;
    let mut sign = -1.0_f64;
    for k in 1..=40u32 {
        let next = term * (2.0 * f64::from(k) - 1.0) * inv2x2;
        if next >= term {
            break; // series turned divergent; truncate at the smallest term
        }
        term = next;
        sum += sign * term;
        sign = -sign;
    }
    -x * x - x.ln() - 0.5 * core::f64::consts::PI.ln() + sum.ln()
}

/// log10 of erfc(x), via [`erfc_ln`].
pub fn erfc_log10(x: f64) -> f64 {
    erfc_ln(x) / core::f64::consts::LN_10
}
