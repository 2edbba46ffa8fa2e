//! Real branches of the Lambert W function.
//!
//! W solves w * exp(w) = x. The principal branch W0 is defined for
//! x >= -1/e and returns w >= -1; the lower branch W_{-1} is defined for
//! x in [-1/e, 0) and returns w <= -1. Both are evaluated by Halley
//! iteration from a branch-specific initial guess, which stays robust at the
//! branch point x = -1/e where the two branches meet at w = -1.

use crate::error::{Error, Result};

/// Branch selector for [`lambert_w`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RealBranch {
    /// W0, defined for x >= -1/e, with W0(x) >= -1.
    Principal,
    /// W_{-1}, defined for -1/e <= x < 0, with W_{-1}(x) <= -1.
    NegativeOne,
}

const MAX_ITER: usize = 50;

/// Series about the branch point: w = -1 + p - p^2/3 + 11 p^3/72 - 43 p^4/540,
/// where p = +-sqrt(2 (1 + e x)) (sign chooses the branch).
fn branch_point_series(p: f64) -> f64 {
    -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0))))
}

fn halley(x: f64, mut w: f64) -> Result<f64> {
    for _ in 0..MAX_ITER {
        let ew = w.exp();
        let f = w * ew - x;
        // Halley step: f' = e^w (1 + w), f'' = e^w (2 + w).
        let fp = ew * (1.0 + w);
        let step = f / (fp - f * (2.0 + w) / (2.0 * (1.0 + w)));
        let w_next = w - step;
        if !w_next.is_finite() {
            return Err(Error::numerical("lambert_w: iteration diverged"));
        }
        let converged = (w_next - w).abs() <= 1e-16 * (1.0 + w_next.abs());
        w = w_next;
        if converged {
            return Ok(w);
        }
    }
    // One more residual check before giving up: the iteration can cycle in the
    // last ulp without meeting the step criterion.
    let resid = (w * w.exp() - x).abs();
    if resid <= 1e-13 * x.abs().max(1.0) {
        Ok(w)
    } else {
        Err(Error::Numerical {
            reason: format!("lambert_w: no convergence after {MAX_ITER} iterations"),
            achieved: Some(w),
        })
    }
}

/// Lambert W on a real branch. See [`RealBranch`] for domains.
pub fn lambert_w(branch: RealBranch, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("lambert_w: non-finite argument {x}")));
    }
    // 1 + e*x measured with a small slack so that arguments rounded to just
    // below -1/e still map to the branch point.
    let t = 1.0 + std::f64::consts::E * x;
    if t < -1e-12 {
        return Err(Error::Domain(format!(
            "lambert_w: argument {x} below branch point -1/e"
        )));
    }
    let t = t.max(0.0);

    match branch {
        RealBranch::Principal => {
            if x == 0.0 {
                return Ok(0.0);
            }
            let p = (2.0 * t).sqrt();
            if p < 1e-6 {
                // Within the series' own accuracy; Halley would divide by
                // f' ~ p/e here.
                return Ok(branch_point_series(p));
            }
            let w0 = if x < -0.30 {
                branch_point_series(p)
            } else if x < 0.3 {
                // Leading Maclaurin terms are enough to enter Halley's basin.
                x * (1.0 - x)
            } else if x < 3.0 {
                // ln(1+x) tracks W0 well on this range (exact at x = 0).
                x.ln_1p()
            } else {
                let l1 = x.ln();
                let l2 = l1.ln();
                l1 - l2 + l2 / l1
            };
            halley(x, w0)
        }
        RealBranch::NegativeOne => {
            if x >= 0.0 {
                return Err(Error::Domain(format!(
                    "lambert_w: branch -1 requires x in [-1/e, 0), got {x}"
                )));
            }
            let p = -(2.0 * t).sqrt();
            if p > -1e-6 {
                return Ok(branch_point_series(p));
            }
            let w0 = if x < -0.27 {
                branch_point_series(p)
            } else {
                // x -> 0^-: w ~ ln(-x) - ln(-ln(-x)).
                let l1 = (-x).ln();
                let l2 = (-l1).ln();
                l1 - l2 + l2 / l1
            };
            halley(x, w0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity_residual(branch: RealBranch, x: f64) -> f64 {
        let w = lambert_w(branch, x).unwrap();
        (w * w.exp() - x).abs() / x.abs().max(1.0)
    }

    #[test]
    fn principal_at_zero() {
        assert_eq!(lambert_w(RealBranch::Principal, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn negative_branch_at_branch_point() {
        let x = -1.0 / std::f64::consts::E;
        let w = lambert_w(RealBranch::NegativeOne, x).unwrap();
        assert!((w + 1.0).abs() <= 1e-7, "w = {w}");
        let w0 = lambert_w(RealBranch::Principal, x).unwrap();
        assert!((w0 + 1.0).abs() <= 1e-7, "w0 = {w0}");
    }

    #[test]
    fn omega_constant() {
        // Bisection oracle on w e^w = 1 froze this digit string.
        let w = lambert_w(RealBranch::Principal, 1.0).unwrap();
        assert!((w - 0.567_143_290_409_783_8).abs() <= 1e-12);
    }

    #[test]
    fn bisection_oracle_agreement() {
        // Independent route: bisect w e^w = x on a bracketing interval.
        let bisect = |x: f64, mut lo: f64, mut hi: f64| -> f64 {
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid * mid.exp() > x {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        };
        for &x in &[0.25, 1.0, 3.0, 10.0, 1e3] {
            let w = lambert_w(RealBranch::Principal, x).unwrap();
            let wb = bisect(x, 0.0, x.max(2.0));
            assert!((w - wb).abs() <= 1e-11 * (1.0 + wb.abs()), "x={x}: {w} vs {wb}");
        }
    }

    #[test]
    fn branch_ranges() {
        for i in 1..100 {
            let x = -1.0 / std::f64::consts::E + (i as f64 / 100.0) * (1.0 / std::f64::consts::E);
            // x in (-1/e, 0)
            let w0 = lambert_w(RealBranch::Principal, x).unwrap();
            let wm = lambert_w(RealBranch::NegativeOne, x).unwrap();
            assert!(w0 >= -1.0 - 1e-12);
            assert!(wm <= -1.0 + 1e-12);
        }
    }

    #[test]
    fn defining_identity_over_random_points() {
        // LCG so the test is hermetic.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..1000 {
            let u = next();
            // Principal: span [-1/e, ~e^10]
            let x = -1.0 / std::f64::consts::E + u * (1e4 + 1.0 / std::f64::consts::E);
            assert!(identity_residual(RealBranch::Principal, x) <= 1e-13);
            // Lower branch: (-1/e, 0)
            let xm = (-1.0 / std::f64::consts::E) * (1.0 - next()).max(1e-12);
            assert!(identity_residual(RealBranch::NegativeOne, xm) <= 1e-13);
        }
    }

    #[test]
    fn domain_errors() {
        assert!(lambert_w(RealBranch::Principal, -0.4).is_err());
        assert!(lambert_w(RealBranch::NegativeOne, 0.1).is_err());
        assert!(lambert_w(RealBranch::NegativeOne, 0.0).is_err());
    }
}
