//! Exact and asymptotic reference solutions of the Rayleigh-damped signaling
//! problem
//!
//!   w_tt - c0^2 w_zz + gamma g w_z + mu w_t = 0,   w(0,t) = W0 H(t) cos(omega t),
//!
//! on the half-line with quiescent initial data. The Laplace-domain image is
//! elementary; its inverse is a decaying cosine carried by the front plus a
//! convolution against a modified-Bessel kernel, which is what the numerical
//! solver is validated against. Small-time and large-time expansions complete
//! the picture near the front and in the long-run signaling regime.
//!
//! Everything here assumes the decaying regime mu > mu_c = c0/H, which makes
//! chi = sqrt(mu^2 - mu_c^2)/2 real.

use crate::error::{Error, Result};
use crate::quad;
use crate::specfun::bessel_i1_scaled;
use crate::surface::IsothermalShockParams;

/// Laplace image  w_bar(z, s) = W0 s/(s^2 + omega^2) * e^{z/(2H)} *
/// exp[-(z/c0) sqrt((s + mu/2)^2 - chi^2)].
pub fn laplace_image(p: &IsothermalShockParams, z: f64, s: f64) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::Usage(format!("laplace_image: need s > 0, got {s}")));
    }
    if !(z >= 0.0) {
        return Err(Error::Usage(format!("laplace_image: need z >= 0, got {z}")));
    }
    let chi = p.chi()?;
    let h = p.scale_height();
    let shifted = s + 0.5 * p.mu_hat;
    let root = (shifted * shifted - chi * chi).sqrt();
    Ok(p.w0 * s / (s * s + p.omega * p.omega) * (z / (2.0 * h) - z / p.c0 * root).exp())
}

/// Exact time-domain solution by the convolution formula. `quad_tol` is the
/// absolute tolerance (on the scale W0 = 1) requested from the adaptive
/// quadrature; it must lie in (0, 1e-3].
///
/// The convolution variable is substituted as varsigma = (z/c0) cosh(theta),
/// which absorbs the square-root factor: the integrand becomes
/// exp(chi tau0 sinh - mu tau0 cosh / 2) cos(omega (t - tau0 cosh)) *
/// i1_scaled(chi tau0 sinh), smooth on the whole range. The front point
/// belongs to the behind region (H(0) = 1), so w(c0 t, t) equals the jump
/// amplitude.
pub fn exact_solution(p: &IsothermalShockParams, z: f64, t: f64, quad_tol: f64) -> Result<f64> {
    if !(quad_tol > 0.0 && quad_tol <= 1e-3) {
        return Err(Error::Usage(format!(
            "exact_solution: quad_tol must lie in (0, 1e-3], got {quad_tol}"
        )));
    }
    if !(z >= 0.0 && t >= 0.0) {
        return Err(Error::Usage(format!(
            "exact_solution: need z >= 0 and t >= 0, got z = {z}, t = {t}"
        )));
    }
    let chi = p.chi()?;
    let mu_c = p.mu_c();
    let tau0 = z / p.c0;
    if t < tau0 {
        return Ok(0.0); // ahead of the front
    }
    let carried = (-(p.mu_hat - mu_c) * tau0 / 2.0).exp() * (p.omega * (t - tau0)).cos();
    if tau0 == 0.0 || t == tau0 {
        return Ok(p.w0 * carried);
    }

    let theta_max = (t / tau0).acosh();
    let integrand = |theta: f64| {
        let (sh, ch) = (theta.sinh(), theta.cosh());
        let arg = chi * tau0 * sh;
        // chi < mu/2, so the exponent is <= 0 and nothing overflows.
        (arg - 0.5 * p.mu_hat * tau0 * ch).exp()
            * (p.omega * (t - tau0 * ch)).cos()
            * bessel_i1_scaled(arg)
    };
    let scale = (chi * tau0).max(1.0);
    let integral = quad::integrate(integrand, 0.0, theta_max, quad_tol / scale, 20_000)?;
    Ok(p.w0 * (carried + chi * tau0 * integral))
}

/// Two-correction-term expansion behind the front; exact 0 ahead of it.
/// At t = z/c0 it reduces to the jump amplitude, and the signal frequency
/// enters only at second order in (t - z/c0).
pub fn small_time_approx(p: &IsothermalShockParams, z: f64, t: f64) -> f64 {
    let mu_c = p.mu_c();
    let tau0 = z / p.c0;
    if t < tau0 {
        return 0.0;
    }
    let delta = t - tau0;
    let a = (p.mu_hat * p.mu_hat - mu_c * mu_c) / 8.0;
    let bracket = 1.0
        + a * tau0 * delta
        + 0.5 * (0.5 * a * a * tau0 * tau0 - 0.5 * p.mu_hat * a * tau0 - p.omega * p.omega)
            * delta
            * delta;
    p.w0 * (-(p.mu_hat - mu_c) * tau0 / 2.0).exp() * bracket
}

/// Attenuation and phase constants of the large-time signaling waveform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LargeTimeParams {
    /// Spatial attenuation rate sigma, in (mu_c, mu_hat) for all omega > 0.
    pub sigma: f64,
    /// Phase constant varkappa; the waveform is cos(omega t - varkappa z/(2 c0)).
    pub varkappa: f64,
}

/// sigma, varkappa from the nested radicals
///   sigma^2 = (a + r)/2,  varkappa^2 = (-a + r)/2,
/// with a = mu_c^2 - 4 omega^2 and r = sqrt(a^2 + 16 (mu omega)^2).
/// For a < 0 the sigma branch is evaluated via the conjugate form
/// b/(2 (r - a)) to dodge the cancellation (b = 16 (mu omega)^2), and
/// symmetrically for varkappa when a > 0.
pub fn large_time_params(p: &IsothermalShockParams) -> Result<LargeTimeParams> {
    let mu_c = p.mu_c();
    if p.mu_hat <= mu_c {
        return Err(Error::Domain(
            "large_time_params: requires mu_hat > mu_c".into(),
        ));
    }
    let a = mu_c * mu_c - 4.0 * p.omega * p.omega;
    let b = 16.0 * (p.mu_hat * p.omega) * (p.mu_hat * p.omega);
    let r = (a * a + b).sqrt();
    let sigma2 = if a < 0.0 { b / (2.0 * (r - a)) } else { 0.5 * (a + r) };
    let varkappa2 = if a > 0.0 { b / (2.0 * (r + a)) } else { 0.5 * (r - a) };
    Ok(LargeTimeParams {
        sigma: sigma2.sqrt(),
        varkappa: varkappa2.sqrt(),
    })
}

/// The lowest-order large-time waveform
/// W0 exp(-(sigma - mu_c) z / (2 c0)) cos(omega t - varkappa z/(2 c0)).
pub fn large_time_approx(p: &IsothermalShockParams, z: f64, t: f64) -> Result<f64> {
    let lt = large_time_params(p)?;
    let mu_c = p.mu_c();
    Ok(p.w0
        * (-(lt.sigma - mu_c) * z / (2.0 * p.c0)).exp()
        * (p.omega * t - lt.varkappa * z / (2.0 * p.c0)).cos())
}

/// High-frequency phase velocity c0 [1 - (mu^2 - mu_c^2)/(8 omega^2)]; tends
/// to c0 from below, i.e. dispersion-free in the limit.
pub fn phase_velocity_hf(p: &IsothermalShockParams, omega: f64) -> f64 {
    let mu_c = p.mu_c();
    p.c0 * (1.0 - (p.mu_hat * p.mu_hat - mu_c * mu_c) / (8.0 * omega * omega))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::shock_amplitude;

    fn params() -> IsothermalShockParams {
        IsothermalShockParams::standard_atmosphere()
    }

    #[test]
    fn laplace_image_boundary_trace() {
        let p = params();
        for &s in &[0.3, 1.0, 4.0] {
            let img = laplace_image(&p, 0.0, s).unwrap();
            assert!((img - p.w0 * s / (s * s + p.omega * p.omega)).abs() <= 1e-15);
        }
    }

    #[test]
    fn laplace_image_rejects_subcritical_damping() {
        let p = params();
        let sub = IsothermalShockParams::new(p.c0, p.gamma, p.g, 0.9 * p.mu_c(), p.omega, 1.0)
            .unwrap();
        assert!(laplace_image(&sub, 1.0, 1.0).is_err());
    }

    #[test]
    fn laplace_image_large_s_leading_term() {
        let p = params();
        // Leading term of the large-s expansion: W0 s^{-1} e^{-s z/c0}
        // e^{-(mu - mu_c) z/(2 c0)}. Keep s z/c0 representable.
        let s = 1e6;
        let z = 5e-4 * p.c0;
        let img = laplace_image(&p, z, s).unwrap();
        let lead =
            p.w0 / s * (-s * z / p.c0).exp() * (-(p.mu_hat - p.mu_c()) * z / (2.0 * p.c0)).exp();
        assert!(((img / lead) - 1.0).abs() <= 1e-6, "ratio {}", img / lead);
    }

    #[test]
    fn laplace_image_matches_independent_form() {
        // Second algebraic route: assemble the same image from separate
        // exponential factors.
        let p = params();
        let z = p.c0;
        let s = 1.0;
        let img = laplace_image(&p, z, s).unwrap();
        let chi = p.chi().unwrap();
        let direct = p.w0 * s / (s * s + p.omega * p.omega)
            * (z / (2.0 * p.scale_height())).exp()
            * ((-z / p.c0) * ((s + p.mu_hat / 2.0).powi(2) - chi * chi).sqrt()).exp();
        assert!((img - direct).abs() <= 1e-14 * direct.abs());
    }

    #[test]
    fn causality_zero_ahead() {
        let p = params();
        let mut seed = 0x1234u64;
        let mut next = move || {
            seed = seed
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..50 {
            let t = next() * 10.0;
            let z = p.c0 * t * (1.01 + next());
            assert_eq!(exact_solution(&p, z, t, 1e-8).unwrap(), 0.0);
        }
    }

    #[test]
    fn boundary_trace_is_cosine() {
        let p = params();
        for &t in &[0.0, 0.3, 2.7] {
            let w = exact_solution(&p, 0.0, t, 1e-8).unwrap();
            assert!((w - p.w0 * (p.omega * t).cos()).abs() <= 1e-14);
        }
    }

    #[test]
    fn front_limit_equals_jump_amplitude() {
        let p = params();
        for &t in &[0.5, 5.0, 10.0] {
            let tol = 1e-8;
            let z = p.c0 * t * (1.0 - 1e-10);
            let behind = exact_solution(&p, z, t, tol).unwrap();
            let ahead = exact_solution(&p, p.c0 * t * (1.0 + 1e-10), t, tol).unwrap();
            let amp = shock_amplitude(&p, t);
            assert!(
                (behind - ahead - amp).abs() <= 10.0 * tol * amp.max(1.0),
                "t={t}: jump {} vs {amp}",
                behind - ahead
            );
        }
    }

    #[test]
    fn small_time_front_value_and_omega_first_order() {
        let p = params();
        let z = 2.0 * p.c0;
        let t = z / p.c0;
        let amp = shock_amplitude(&p, t);
        assert!((small_time_approx(&p, z, t) - amp).abs() <= 1e-14 * amp);
        // omega enters only at second order in (t - z/c0): the difference of
        // two omega values is exactly the delta^2 omega^2 term.
        let delta = 1e-4;
        let w1 = small_time_approx(&p, z, t + delta);
        let mut p2 = p;
        p2.omega *= 1.5;
        let w2 = small_time_approx(&p2, z, t + delta);
        let expect = 0.5 * (p2.omega * p2.omega - p.omega * p.omega)
            * delta
            * delta
            * (-(p.mu_hat - p.mu_c()) * (z / p.c0) / 2.0).exp();
        assert!(((w1 - w2) - expect).abs() <= 1e-12, "{} vs {expect}", w1 - w2);
    }

    #[test]
    fn small_time_error_is_third_order() {
        let p = params();
        let z = p.c0; // tau0 = 1
        let mut logs: Vec<(f64, f64)> = Vec::new();
        for &delta in &[1e-1, 1e-2, 1e-3] {
            let t = z / p.c0 + delta;
            let exact = exact_solution(&p, z, t, 1e-12).unwrap();
            let approx = small_time_approx(&p, z, t);
            let err = (exact - approx).abs();
            assert!(err > 0.0);
            logs.push((delta.ln(), err.ln()));
        }
        // Least-squares slope of ln err against ln delta.
        let n = logs.len() as f64;
        let sx: f64 = logs.iter().map(|v| v.0).sum();
        let sy: f64 = logs.iter().map(|v| v.1).sum();
        let sxx: f64 = logs.iter().map(|v| v.0 * v.0).sum();
        let sxy: f64 = logs.iter().map(|v| v.0 * v.1).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        assert!((2.7..=3.3).contains(&slope), "slope {slope}");
    }

    #[test]
    fn sigma_bracket_and_defining_identities() {
        let p = params();
        let mu_c = p.mu_c();
        // Sweep omega over several decades: the bracket plus the two exact
        // identities sigma * varkappa = 2 mu omega and
        // varkappa^2 - sigma^2 = 4 omega^2 - mu_c^2.
        for i in 0..1000 {
            let omega = 10f64.powf(-1.0 + 4.0 * i as f64 / 999.0);
            let mut pw = p;
            pw.omega = omega;
            let lt = large_time_params(&pw).unwrap();
            assert!(
                lt.sigma > mu_c && lt.sigma < p.mu_hat,
                "omega={omega}: sigma={}",
                lt.sigma
            );
            let id1 = lt.sigma * lt.varkappa - 2.0 * p.mu_hat * omega;
            assert!(id1.abs() <= 1e-12 * (2.0 * p.mu_hat * omega), "omega={omega}");
            let id2 = (lt.varkappa * lt.varkappa - lt.sigma * lt.sigma)
                - (4.0 * omega * omega - mu_c * mu_c);
            assert!(
                id2.abs() <= 1e-11 * (4.0 * omega * omega).max(1.0),
                "omega={omega}"
            );
        }
    }

    #[test]
    fn sigma_collapses_at_critical_damping() {
        // mu -> mu_c^+: sigma -> mu_c (boundary of the bracket).
        let p = params();
        let mu_c = p.mu_c();
        let pc = IsothermalShockParams::new(p.c0, p.gamma, p.g, mu_c * (1.0 + 1e-9), p.omega, 1.0)
            .unwrap();
        let lt = large_time_params(&pc).unwrap();
        assert!((lt.sigma - mu_c).abs() <= 1e-6 * mu_c);
    }

    #[test]
    fn high_frequency_limits() {
        let p = params();
        // sigma -> mu with an O(omega^-2) defect; varkappa/(2 omega) -> 1.
        for &omega in &[50.0, 500.0] {
            let mut pw = p;
            pw.omega = omega;
            let lt = large_time_params(&pw).unwrap();
            let defect = (p.mu_hat - lt.sigma).abs();
            assert!(
                defect <= 10.0 / (omega * omega),
                "omega={omega}: defect {defect}"
            );
            assert!((lt.varkappa / (2.0 * omega) - 1.0).abs() <= 1e-3);
        }
        // Phase velocity: below c0, tending to c0.
        let v1 = phase_velocity_hf(&p, 10.0);
        let v2 = phase_velocity_hf(&p, 1e4);
        assert!(v1 < p.c0 && v2 < p.c0 && v2 > v1);
        assert!((v2 - p.c0).abs() <= 1e-9 * p.c0);
        // mu = mu_c has zero correction at every omega.
        let pc = IsothermalShockParams::new(p.c0, p.gamma, p.g, p.mu_c(), p.omega, 1.0).unwrap();
        assert_eq!(phase_velocity_hf(&pc, 3.0), p.c0);
        // Closed-form value at omega = 2 pi.
        let pi = std::f64::consts::PI;
        let expect = p.c0 * (1.0 - 3.0 * p.mu_c() * p.mu_c() / (32.0 * pi * pi));
        assert!((phase_velocity_hf(&p, p.omega) - expect).abs() <= 1e-12 * p.c0);
    }
}
