//! Special functions and transforms shared by every solver and analysis
//! module: real-branch Lambert W, the modified Bessel function I1, Lanczos
//! sigma factors, and an orthonormal discrete sine transform pair.

mod bessel;
mod dst;
mod lambert;

pub use bessel::{bessel_i1, bessel_i1_scaled};
pub use dst::{DstPlan, SineSpectrum};
pub use lambert::{lambert_w, RealBranch};

use crate::error::{Error, Result};

/// Lanczos sigma factors raised to a power: sigma_k^p with
/// sigma_k = sinc(k/(N+1)) = sin(pi k/(N+1)) / (pi k/(N+1)), k = 1..=N.
///
/// The mode count matches the interior sine grid, so sigma_N is the
/// attenuation of the highest resolvable mode. p = 0 gives all ones.
pub fn sigma_factors(n_modes: usize, power: f64) -> Result<Vec<f64>> {
    if n_modes == 0 {
        return Err(Error::Usage("sigma_factors: n_modes must be >= 1".into()));
    }
    if !power.is_finite() || power < 0.0 {
        return Err(Error::Usage(format!(
            "sigma_factors: power must be finite and nonnegative, got {power}"
        )));
    }
    if power == 0.0 {
        return Ok(vec![1.0; n_modes]);
    }
    let denom = (n_modes + 1) as f64;
    Ok((1..=n_modes)
        .map(|k| {
            let y = std::f64::consts::PI * k as f64 / denom;
            (y.sin() / y).powf(power)
        })
        .collect())
}
