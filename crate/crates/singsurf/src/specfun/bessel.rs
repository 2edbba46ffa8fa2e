//! Modified Bessel function of the first kind, order one.
//!
//! The convolution kernel of the exact shock solution needs I1 at arguments
//! from 0 up to chi*t, paired with a decaying exponential. To keep that
//! product overflow-safe for arbitrary parameters, the scaled form
//! e^{-x} I1(x) is the primitive here; the power series covers x <= 15 and
//! the large-argument asymptotic series the rest.

/// e^{-x} * I1(x) for x >= 0.
pub fn bessel_i1_scaled(x: f64) -> f64 {
    debug_assert!(x >= 0.0 && x.is_finite());
    if x <= 15.0 {
        bessel_i1_series(x) * (-x).exp()
    } else {
        // I1(x) ~ e^x / sqrt(2 pi x) * sum_k t_k, t_0 = 1,
        // t_k = t_{k-1} * ((2k-1)^2 - 4) / (8 x k).
        let mut sum = 1.0;
        let mut term = 1.0;
        for k in 1..=30u32 {
            let kf = f64::from(k);
            let num = (2.0 * kf - 1.0).powi(2) - 4.0;
            let next = term * num / (8.0 * x * kf);
            if next.abs() >= term.abs() {
                break; // asymptotic tail started growing
            }
            term = next;
            sum += term;
            if term.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        sum / (2.0 * std::f64::consts::PI * x).sqrt()
    }
}

/// I1(x) for x >= 0. Relative error <= 1e-10 over [0, 500].
pub fn bessel_i1(x: f64) -> f64 {
    debug_assert!(x >= 0.0 && x.is_finite());
    if x <= 15.0 {
        bessel_i1_series(x)
    } else {
        bessel_i1_scaled(x) * x.exp()
    }
}

/// Power series I1(x) = (x/2) sum_m (x^2/4)^m / (m! (m+1)!); all terms are
/// positive, so there is no cancellation.
fn bessel_i1_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for m in 1..=60u32 {
        let mf = f64::from(m);
        term *= q / (mf * (mf + 1.0));
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    0.5 * x * sum
}
