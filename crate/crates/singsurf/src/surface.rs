//! Closed-form singular-surface results for both model problems.
//!
//! For the isothermal-atmosphere shock the field itself jumps across the
//! front z = c0*t, with amplitude W0 exp(-(mu - mu_c) t / 2). For the
//! dimensionless Lighthill–Westervelt problem the field stays continuous but
//! its first derivatives jump across X = ram(T); the amplitudes obey a
//! Bernoulli-type evolution whose closed forms blow up at a finite time
//! T_inf, and the inhomogeneity exponent alpha has a critical value
//! alpha_bullet (a Lambert-W expression) at which blow-up happens exactly
//! when the front first reaches the far boundary.
//!
//! Also here: the generic jump-calculus identities (Hadamard lemma, Maxwell
//! compatibility, jump product rule) as checkable residuals.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::specfun::{lambert_w, RealBranch};

/// Tolerance used to decide that epsilon sits exactly at its critical value.
const EPS_BULLET_TOL: f64 = 1e-10;
/// Below this |alpha| the dedicated homogeneous-limit formulas take over.
const ALPHA_LIMIT: f64 = 1e-7;

// ---------------------------------------------------------------------------
// Isothermal-atmosphere shock
// ---------------------------------------------------------------------------

/// Physical parameters of the Rayleigh-damped signaling problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsothermalShockParams {
    /// Ambient sound speed (m/s).
    pub c0: f64,
    /// Adiabatic index, in (1, 5/3].
    pub gamma: f64,
    /// Gravitational acceleration (m/s^2).
    pub g: f64,
    /// Rayleigh resistance coefficient (1/s).
    pub mu_hat: f64,
    /// Boundary signal angular frequency (rad/s).
    pub omega: f64,
    /// Boundary signal amplitude (m/s).
    pub w0: f64,
}

impl IsothermalShockParams {
    pub fn new(c0: f64, gamma: f64, g: f64, mu_hat: f64, omega: f64, w0: f64) -> Result<Self> {
        let p = IsothermalShockParams {
            c0,
            gamma,
            g,
            mu_hat,
            omega,
            w0,
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let all = [self.c0, self.gamma, self.g, self.mu_hat, self.omega, self.w0];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("shock params: non-finite parameter".into()));
        }
        if self.c0 <= 0.0 || self.g <= 0.0 || self.omega <= 0.0 || self.w0 <= 0.0 {
            return Err(Error::Config(
                "shock params: c0, g, omega, W0 must all be positive".into(),
            ));
        }
        if !(self.gamma > 1.0 && self.gamma <= 5.0 / 3.0) {
            return Err(Error::Config(format!(
                "shock params: gamma must lie in (1, 5/3], got {}",
                self.gamma
            )));
        }
        if self.mu_hat <= 0.0 {
            return Err(Error::Config("shock params: mu_hat must be positive".into()));
        }
        Ok(())
    }

    /// The standard test atmosphere: c0 = 347.26 m/s, gamma = 1.40,
    /// g = 9.81 m/s^2, omega = 2 pi, mu_hat = 2 mu_c, W0 = 1.
    pub fn standard_atmosphere() -> Self {
        let c0 = 347.26;
        let gamma = 1.40;
        let g = 9.81;
        let mu_c = gamma * g / c0;
        IsothermalShockParams {
            c0,
            gamma,
            g,
            mu_hat: 2.0 * mu_c,
            omega: 2.0 * PI,
            w0: 1.0,
        }
    }

    /// Critical resistance mu_c = gamma g / c0 = c0 / H.
    pub fn mu_c(&self) -> f64 {
        self.gamma * self.g / self.c0
    }

    /// Scale height H = c0^2 / (gamma g); mu_c * H = c0 holds exactly.
    pub fn scale_height(&self) -> f64 {
        self.c0 * self.c0 / (self.gamma * self.g)
    }

    /// chi = sqrt(mu^2 - mu_c^2)/2, real only in the decaying regime
    /// mu_hat > mu_c.
    pub fn chi(&self) -> Result<f64> {
        let mu_c = self.mu_c();
        if self.mu_hat <= mu_c {
            return Err(Error::Domain(format!(
                "chi requires mu_hat > mu_c; got mu_hat = {} <= mu_c = {mu_c}",
                self.mu_hat
            )));
        }
        Ok(0.5 * (self.mu_hat * self.mu_hat - mu_c * mu_c).sqrt())
    }
}

/// Jump amplitude of w across the shock: W0 exp(-(mu - mu_c) t / 2).
/// Independent of omega; decays iff mu_hat > mu_c.
pub fn shock_amplitude(p: &IsothermalShockParams, t: f64) -> f64 {
    debug_assert!(t >= 0.0);
    p.w0 * (-(p.mu_hat - p.mu_c()) * t / 2.0).exp()
}

/// Shock front position Sigma(t) = c0 t; its velocity is c0.
pub fn shock_front(p: &IsothermalShockParams, t: f64) -> f64 {
    debug_assert!(t >= 0.0);
    p.c0 * t
}

// ---------------------------------------------------------------------------
// Lighthill–Westervelt acceleration waves
// ---------------------------------------------------------------------------

/// Dimensionless parameters of the inhomogeneous LWE signaling problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LweParams {
    /// Adiabatic index, in (1, 5/3].
    pub gamma: f64,
    /// Peak-pressure ratio p_pk / p0, in (0, 1).
    pub epsilon: f64,
    /// Inhomogeneity exponent of the ambient density, nonzero.
    pub alpha: f64,
}

impl LweParams {
    pub fn new(gamma: f64, epsilon: f64, alpha: f64) -> Result<Self> {
        if !(gamma > 1.0 && gamma <= 5.0 / 3.0) {
            return Err(Error::Config(format!(
                "lwe params: gamma must lie in (1, 5/3], got {gamma}"
            )));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::Config(format!(
                "lwe params: epsilon must lie in (0, 1), got {epsilon}"
            )));
        }
        if alpha == 0.0 || !alpha.is_finite() {
            return Err(Error::Config(format!(
                "lwe params: alpha must be finite and nonzero, got {alpha}"
            )));
        }
        Ok(LweParams {
            gamma,
            epsilon,
            alpha,
        })
    }

    /// With alpha = alpha_bullet(gamma, epsilon).
    pub fn with_critical_alpha(gamma: f64, epsilon: f64) -> Result<Self> {
        let crit = lwe_critical(gamma, epsilon)?;
        LweParams::new(gamma, epsilon, crit.alpha_bullet)
    }

    /// beta_hat = (1 + 1/gamma)/2, in [4/5, 1) for perfect gases.
    pub fn beta_hat(&self) -> f64 {
        0.5 * (1.0 + 1.0 / self.gamma)
    }
}

/// Critical epsilon and the Lambert-W critical alpha.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LweCritical {
    /// epsilon_bullet = 1/(pi beta_hat); the sign of alpha_bullet flips here.
    pub epsilon_bullet: f64,
    /// The alpha at which T1 = T_inf: blow-up exactly at first boundary
    /// arrival. Positive for epsilon < epsilon_bullet, negative above.
    pub alpha_bullet: f64,
}

/// alpha_bullet = -(4/3) [ e b pi + W_b(-e b pi exp(-e b pi)) ], with the
/// lower branch below epsilon_bullet and the principal branch above.
pub fn lwe_critical(gamma: f64, epsilon: f64) -> Result<LweCritical> {
    if !(gamma > 1.0 && gamma <= 5.0 / 3.0) {
        return Err(Error::Config(format!(
            "lwe_critical: gamma must lie in (1, 5/3], got {gamma}"
        )));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Config(format!(
            "lwe_critical: epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    let beta_hat = 0.5 * (1.0 + 1.0 / gamma);
    let epsilon_bullet = 1.0 / (PI * beta_hat);
    let q = epsilon * beta_hat * PI;
    if (epsilon - epsilon_bullet).abs() <= EPS_BULLET_TOL {
        return Err(Error::Domain(format!(
            "lwe_critical: epsilon = {epsilon} is at the critical value {epsilon_bullet}; \
             alpha_bullet would be zero"
        )));
    }
    let branch = if epsilon < epsilon_bullet {
        RealBranch::NegativeOne
    } else {
        RealBranch::Principal
    };
    let w = lambert_w(branch, -q * (-q).exp())?;
    let alpha_bullet = -(4.0 / 3.0) * (q + w);
    Ok(LweCritical {
        epsilon_bullet,
        alpha_bullet,
    })
}

/// The characteristic times of one LWE configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LweTimes {
    /// First arrival of the wave-front at X = 1: T1 = 2(e^{alpha/2} - 1)/alpha.
    pub t1: f64,
    /// Common blow-up time of the jump amplitudes; `None` when it is complex
    /// (alpha < alpha_crt).
    pub t_infty: Option<f64>,
    /// Final simulation time selected by the piecewise rule in (epsilon, alpha).
    pub t_f: f64,
    /// Front-kinematics breakdown time 2/|alpha|, meaningful only for alpha < 0.
    pub t_bd: Option<f64>,
    /// alpha_crt = -4 pi epsilon beta_hat / 3; T_inf is real iff alpha > alpha_crt.
    pub alpha_crt: f64,
}

/// T1, T_inf, T_f, T_BD and alpha_crt for one parameter set.
pub fn lwe_times(p: &LweParams) -> Result<LweTimes> {
    if p.alpha == 0.0 {
        return Err(Error::Domain(
            "lwe_times: alpha = 0 is the homogeneous case; use lwe_limit_alpha0".into(),
        ));
    }
    let alpha = p.alpha;
    let beta_hat = p.beta_hat();
    let c = PI * p.epsilon * beta_hat;
    let alpha_crt = -4.0 * c / 3.0;

    // exp_m1 keeps both times stable straight through alpha -> 0; see also
    // lwe_limit_alpha0 for the closed-form limits themselves.
    let t1 = 2.0 * (alpha / 2.0).exp_m1() / alpha;

    let t_infty = t_infty_raw(alpha, c);

    let t_bd = (alpha < 0.0).then(|| 2.0 / alpha.abs());

    let epsilon_bullet = 1.0 / (PI * beta_hat);
    let use_t1 = if (p.epsilon - epsilon_bullet).abs() <= EPS_BULLET_TOL {
        alpha < 0.0
    } else if p.epsilon < epsilon_bullet {
        let ab = lwe_critical(p.gamma, p.epsilon)?.alpha_bullet;
        alpha < 0.0 || alpha <= ab
    } else {
        let ab = lwe_critical(p.gamma, p.epsilon)?.alpha_bullet;
        alpha < ab
    };
    let t_f = if use_t1 {
        t1
    } else {
        t_infty.ok_or_else(|| {
            Error::Domain(format!(
                "lwe_times: rule selects T_inf but it is complex (alpha = {alpha} <= alpha_crt = {alpha_crt})"
            ))
        })?
    };

    Ok(LweTimes {
        t1,
        t_infty,
        t_f,
        t_bd,
        alpha_crt,
    })
}

/// T_inf = -(2/alpha)[1 - (1 + 3 alpha/(4 c))^{2/3}] with c = pi epsilon
/// beta_hat, written through exp_m1/ln_1p; None when complex.
fn t_infty_raw(alpha: f64, c: f64) -> Option<f64> {
    let x = 3.0 * alpha / (4.0 * c);
    if 1.0 + x > 0.0 {
        Some(2.0 / alpha * ((2.0 / 3.0) * x.ln_1p()).exp_m1())
    } else if 1.0 + x == 0.0 {
        Some(2.0 / alpha.abs())
    } else {
        None
    }
}

/// Homogeneous-gas limits (alpha -> 0): T1 -> 1 and T_inf -> 1/(pi epsilon beta_hat).
pub fn lwe_limit_alpha0(gamma: f64, epsilon: f64) -> Result<(f64, f64)> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Config(format!(
            "lwe_limit_alpha0: epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    let beta_hat = 0.5 * (1.0 + 1.0 / gamma);
    Ok((1.0, 1.0 / (PI * epsilon * beta_hat)))
}

/// Wave-front position and velocity at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontState {
    pub position: f64,
    pub velocity: f64,
}

/// ram(T) = (2/alpha) ln(1 + alpha T/2) and its derivative 1/(1 + alpha T/2).
pub fn lwe_front(p: &LweParams, t: f64) -> Result<FrontState> {
    let m = 1.0 + 0.5 * p.alpha * t;
    if m <= 0.0 {
        return Err(Error::Domain(format!(
            "lwe_front: T = {t} is at or past the breakdown time 2/|alpha|"
        )));
    }
    let position = if p.alpha.abs() < ALPHA_LIMIT {
        // ram -> T - alpha T^2/4 + ...
        t * (1.0 - 0.25 * p.alpha * t)
    } else {
        2.0 / p.alpha * (0.5 * p.alpha * t).ln_1p()
    };
    Ok(FrontState {
        position,
        velocity: 1.0 / m,
    })
}

/// Inverse of ram: the time at which the front reaches `position`.
pub fn lwe_front_time(p: &LweParams, position: f64) -> f64 {
    if p.alpha.abs() < ALPHA_LIMIT {
        position * (1.0 + 0.25 * p.alpha * position)
    } else {
        2.0 / p.alpha * (0.5 * p.alpha * position).exp_m1()
    }
}

/// Acceleration-wave amplitudes at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpAmplitudes {
    /// [[P_T]]; +infinity once blown up.
    pub jump_pt: f64,
    /// [[P_X]]; -infinity once blown up.
    pub jump_px: f64,
    /// True when T is at or past the blow-up time.
    pub blown_up: bool,
}

/// [[P_T]](T) = 3 alpha pi sqrt(1 + alpha T/2) / [(3 alpha + 4 pi e b) -
/// 4 pi e b (1 + alpha T/2)^{3/2}] and the matching [[P_X]]; past blow-up the
/// amplitudes are reported as signed infinities with a flag so callers can
/// truncate plots instead of unwinding.
pub fn lwe_jumps(p: &LweParams, t: f64) -> Result<JumpAmplitudes> {
    let beta_hat = p.beta_hat();
    let c = PI * p.epsilon * beta_hat; // pi epsilon beta_hat
    let m = 1.0 + 0.5 * p.alpha * t;
    if m <= 0.0 {
        return Err(Error::Domain(format!(
            "lwe_jumps: T = {t} is outside the front's domain (1 + alpha T/2 <= 0)"
        )));
    }

    let blown = if p.alpha.abs() < ALPHA_LIMIT {
        t >= 1.0 / c
    } else {
        t_infty_raw(p.alpha, c).is_some_and(|ti| t >= ti)
    };
    if blown {
        return Ok(JumpAmplitudes {
            jump_pt: f64::INFINITY,
            jump_px: f64::NEG_INFINITY,
            blown_up: true,
        });
    }

    if p.alpha.abs() < ALPHA_LIMIT {
        // Homogeneous limit: [[P_T]] -> pi / (1 - epsilon beta_hat pi T).
        let denom = 1.0 - c * t;
        if denom <= 0.0 {
            return Ok(JumpAmplitudes {
                jump_pt: f64::INFINITY,
                jump_px: f64::NEG_INFINITY,
                blown_up: true,
            });
        }
        let pt = PI / denom;
        return Ok(JumpAmplitudes {
            jump_pt: pt,
            jump_px: -pt,
            blown_up: false,
        });
    }

    // denom = 3 alpha - 4 pi e b (m^{3/2} - 1), kept cancellation-free.
    let m32m1 = (1.5 * (0.5 * p.alpha * t).ln_1p()).exp_m1();
    let denom = 3.0 * p.alpha - 4.0 * c * m32m1;
    if denom == 0.0 {
        return Ok(JumpAmplitudes {
            jump_pt: f64::INFINITY,
            jump_px: f64::NEG_INFINITY,
            blown_up: true,
        });
    }
    let sqrt_m = m.sqrt();
    let jump_pt = 3.0 * p.alpha * PI * sqrt_m / denom;
    let jump_px = -3.0 * p.alpha * PI * sqrt_m * m / denom;
    Ok(JumpAmplitudes {
        jump_pt,
        jump_px,
        blown_up: false,
    })
}

// ---------------------------------------------------------------------------
// Jump-calculus identities (singular-surface toolbox)
// ---------------------------------------------------------------------------

/// One-sided data for two fields F, G at a single front instant. The `minus`
/// side is behind the front, `plus` ahead; jumps are behind-minus-ahead.
#[derive(Debug, Clone, Copy)]
pub struct FrontData {
    pub f_behind: f64,
    pub f_ahead: f64,
    pub g_behind: f64,
    pub g_ahead: f64,
    pub ft_behind: f64,
    pub ft_ahead: f64,
    pub fxi_behind: f64,
    pub fxi_ahead: f64,
    /// Front velocity V(t).
    pub velocity: f64,
    /// Observer derivative d[[F]]/dt along the front, if the caller has it
    /// (e.g. from differencing the jump time series).
    pub djump_f_dt: Option<f64>,
}

/// Residuals of the three identities; `None` where the identity does not
/// apply to the supplied data.
#[derive(Debug, Clone, Copy)]
pub struct IdentityReport {
    /// |d[[F]]/dt - ([[F_t]] + V [[F_xi]])| (Hadamard); needs `djump_f_dt`.
    pub hadamard: Option<f64>,
    /// |[[F_t]] + V [[F_xi]]| (Maxwell); only when [[F]] = 0.
    pub maxwell: Option<f64>,
    /// |[[FG]] - F^+ [[G]] - G^+ [[F]] - [[F]][[G]]| (product rule).
    pub product: f64,
}

/// Evaluate the jump identities on caller-supplied one-sided data.
pub fn jump_identities(d: &FrontData) -> Result<IdentityReport> {
    let required = [
        d.f_behind, d.f_ahead, d.g_behind, d.g_ahead, d.ft_behind, d.ft_ahead, d.fxi_behind,
        d.fxi_ahead, d.velocity,
    ];
    if required.iter().any(|v| !v.is_finite()) {
        return Err(Error::Usage(
            "jump_identities: one-sided data incomplete (non-finite entry)".into(),
        ));
    }

    let jump_f = d.f_behind - d.f_ahead;
    let jump_g = d.g_behind - d.g_ahead;
    let jump_ft = d.ft_behind - d.ft_ahead;
    let jump_fxi = d.fxi_behind - d.fxi_ahead;
    let transport = jump_ft + d.velocity * jump_fxi;

    let scale = d
        .f_behind
        .abs()
        .max(d.f_ahead.abs())
        .max(d.ft_behind.abs())
        .max(d.fxi_behind.abs())
        .max(1.0);

    let hadamard = d.djump_f_dt.map(|rate| (rate - transport).abs());
    let maxwell = (jump_f.abs() <= 1e-12 * scale).then(|| transport.abs());

    let jump_fg = d.f_behind * d.g_behind - d.f_ahead * d.g_ahead;
    let product = (jump_fg - d.f_ahead * jump_g - d.g_ahead * jump_f - jump_f * jump_g).abs();

    Ok(IdentityReport {
        hadamard,
        maxwell,
        product,
    })
}

// ---------------------------------------------------------------------------
// Jump report (time series for the CLI / CSV layer)
// ---------------------------------------------------------------------------

/// Time series of front kinematics and jump amplitudes, plus the scalar
/// critical quantities, for one LWE configuration.
#[derive(Debug, Clone)]
pub struct JumpReport {
    pub times: Vec<f64>,
    pub front_position: Vec<f64>,
    pub front_velocity: Vec<f64>,
    pub jump_pt: Vec<f64>,
    pub jump_px: Vec<f64>,
    pub t1: f64,
    pub t_infty: Option<f64>,
    pub t_f: f64,
    pub t_bd: Option<f64>,
    pub alpha_crt: f64,
}

impl JumpReport {
    /// Sample the closed forms at `n` times spanning [0, 0.995 T_f].
    pub fn compute(p: &LweParams, n: usize) -> Result<JumpReport> {
        if n < 2 {
            return Err(Error::Usage("JumpReport: need at least 2 samples".into()));
        }
        let times_info = lwe_times(p)?;
        let t_max = 0.995 * times_info.t_f;
        let times: Vec<f64> = (0..n)
            .map(|j| t_max * j as f64 / (n - 1) as f64)
            .collect();
        let mut front_position = Vec::with_capacity(n);
        let mut front_velocity = Vec::with_capacity(n);
        let mut jump_pt = Vec::with_capacity(n);
        let mut jump_px = Vec::with_capacity(n);
        for &t in &times {
            let fs = lwe_front(p, t)?;
            let j = lwe_jumps(p, t)?;
            front_position.push(fs.position);
            front_velocity.push(fs.velocity);
            jump_pt.push(j.jump_pt);
            jump_px.push(j.jump_px);
        }
        Ok(JumpReport {
            times,
            front_position,
            front_velocity,
            jump_pt,
            jump_px,
            t1: times_info.t1,
            t_infty: times_info.t_infty,
            t_f: times_info.t_f,
            t_bd: times_info.t_bd,
            alpha_crt: times_info.alpha_crt,
        })
    }

    /// CSV rows `T,front_position,front_velocity,jump_pt,jump_px`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("T,front_position,front_velocity,jump_pt,jump_px\n");
        for i in 0..self.times.len() {
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                self.times[i],
                self.front_position[i],
                self.front_velocity[i],
                self.jump_pt[i],
                self.jump_px[i]
            ));
        }
        out
    }
}
