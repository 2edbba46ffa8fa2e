//! C2 quartic boundary lift.
//!
//! Inhomogeneous Dirichlet data at the left end is absorbed into a lift
//!
//!   F(z,t) = f0(t) + f1(t) z + f2(t) z^2 + f3(t) z^3 + f4(t) z^4  on [0, lt],
//!   F = 0 beyond lt,
//!
//! where f0 carries the boundary signal and f2 is chosen by the solver so
//! that its induced source vanishes at z = 0. The remaining coefficients
//! come from the junction conditions F(lt) = F_z(lt) = F_zz(lt) = 0, which
//! make F a C^2 function on the whole domain and (because they hold
//! identically in t) also kill the induced source at and beyond lt. The
//! coefficients are trigonometric polynomials in t, so all time derivatives
//! are available in closed form.

use crate::error::{Error, Result};

/// Sum of a_j cos(w_j t) + b_j sin(w_j t) over a fixed frequency list.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    /// (frequency, cos coefficient, sin coefficient)
    terms: Vec<(f64, f64, f64)>,
}

impl TrigPoly {
    pub fn new(terms: Vec<(f64, f64, f64)>) -> Self {
        TrigPoly { terms }
    }

    pub fn zero_like(&self) -> Self {
        TrigPoly {
            terms: self.terms.iter().map(|&(w, _, _)| (w, 0.0, 0.0)).collect(),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(w, a, b)| {
                let (s, c) = (w * t).sin_cos();
                a * c + b * s
            })
            .sum()
    }

    /// d/dt maps (a, b) at frequency w to (w b, -w a).
    pub fn deriv(&self) -> TrigPoly {
        TrigPoly {
            terms: self
                .terms
                .iter()
                .map(|&(w, a, b)| (w, w * b, -w * a))
                .collect(),
        }
    }

    fn terms(&self) -> &[(f64, f64, f64)] {
        &self.terms
    }
}

/// Lift coefficient values and first two time derivatives at one instant.
#[derive(Debug, Clone, Copy)]
struct CoeffFrame {
    c: [f64; 5],
    dc: [f64; 5],
    ddc: [f64; 5],
}

/// Lift samples on a grid at one time level.
#[derive(Debug, Clone)]
pub struct LiftGridEval {
    pub f: Vec<f64>,
    pub ft: Vec<f64>,
    pub ftt: Vec<f64>,
    pub fzz: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct QuarticLift {
    ell_tilde: f64,
    coeffs: [TrigPoly; 5],
    d1: [TrigPoly; 5],
    d2: [TrigPoly; 5],
}

impl QuarticLift {
    /// Build the lift from the boundary signal f0 and the solver-supplied f2
    /// (both over the same frequency basis). f1, f3, f4 solve the junction
    /// system
    ///
    ///   [ lt   lt^3   lt^4 ] [f1]   [ -f0 - f2 lt^2 ]
    ///   [ 1   3 lt^2 4 lt^3] [f3] = [ -2 f2 lt      ]
    ///   [ 0   6 lt  12 lt^2] [f4]   [ -2 f2         ]
    ///
    /// per frequency component; the matrix has determinant 6 lt^5 > 0.
    pub fn new(ell_tilde: f64, f0: TrigPoly, f2: TrigPoly) -> Result<Self> {
        if !(ell_tilde > 0.0) || !ell_tilde.is_finite() {
            return Err(Error::Config(format!(
                "QuarticLift: cutoff must be positive and finite, got {ell_tilde}"
            )));
        }
        if f0.terms().len() != f2.terms().len()
            || f0
                .terms()
                .iter()
                .zip(f2.terms())
                .any(|(x, y)| x.0 != y.0)
        {
            return Err(Error::Usage(
                "QuarticLift: f0 and f2 must share the same frequency basis".into(),
            ));
        }

        let lt = ell_tilde;
        // Inverse of the junction matrix, defined row-wise (Cramer).
        let det = 6.0 * lt.powi(5);
        debug_assert!(det > 0.0);
        let solve = |r: [f64; 3]| -> [f64; 3] {
            // A^{-1} computed once symbolically:
            // A = [[lt, lt^3, lt^4], [1, 3lt^2, 4lt^3], [0, 6lt, 12lt^2]]
            let inv = [
                [
                    (3.0 * lt * lt * 12.0 * lt * lt - 4.0 * lt.powi(3) * 6.0 * lt) / det,
                    -(lt.powi(3) * 12.0 * lt * lt - lt.powi(4) * 6.0 * lt) / det,
                    (lt.powi(3) * 4.0 * lt.powi(3) - lt.powi(4) * 3.0 * lt * lt) / det,
                ],
                [
                    -(12.0 * lt * lt - 0.0) / det,
                    (lt * 12.0 * lt * lt - 0.0) / det,
                    -(lt * 4.0 * lt.powi(3) - lt.powi(4)) / det,
                ],
                [
                    (6.0 * lt - 0.0) / det,
                    -(lt * 6.0 * lt - 0.0) / det,
                    (lt * 3.0 * lt * lt - lt.powi(3)) / det,
                ],
            ];
            [
                inv[0][0] * r[0] + inv[0][1] * r[1] + inv[0][2] * r[2],
                inv[1][0] * r[0] + inv[1][1] * r[1] + inv[1][2] * r[2],
                inv[2][0] * r[0] + inv[2][1] * r[1] + inv[2][2] * r[2],
            ]
        };

        let mut f1 = f0.zero_like();
        let mut f3 = f0.zero_like();
        let mut f4 = f0.zero_like();
        for (j, (&(w, a0c, b0c), &(_, a2c, b2c))) in
            f0.terms().iter().zip(f2.terms()).enumerate()
        {
            for (pick, a0v, a2v) in [(0usize, a0c, a2c), (1usize, b0c, b2c)] {
                let r = [-a0v - a2v * lt * lt, -2.0 * a2v * lt, -2.0 * a2v];
                let sol = solve(r);
                let slot = |p: &mut TrigPoly, v: f64| {
                    let term = &mut p.terms[j];
                    debug_assert_eq!(term.0, w);
                    if pick == 0 {
                        term.1 = v;
                    } else {
                        term.2 = v;
                    }
                };
                slot(&mut f1, sol[0]);
                slot(&mut f3, sol[1]);
                slot(&mut f4, sol[2]);
            }
        }

        let coeffs = [f0, f1, f2, f3, f4];
        let d1 = [
            coeffs[0].deriv(),
            coeffs[1].deriv(),
            coeffs[2].deriv(),
            coeffs[3].deriv(),
            coeffs[4].deriv(),
        ];
        let d2 = [
            d1[0].deriv(),
            d1[1].deriv(),
            d1[2].deriv(),
            d1[3].deriv(),
            d1[4].deriv(),
        ];
        Ok(QuarticLift {
            ell_tilde,
            coeffs,
            d1,
            d2,
        })
    }

    pub fn cutoff(&self) -> f64 {
        self.ell_tilde
    }

    fn frame(&self, t: f64) -> CoeffFrame {
        let mut fr = CoeffFrame {
            c: [0.0; 5],
            dc: [0.0; 5],
            ddc: [0.0; 5],
        };
        for i in 0..5 {
            fr.c[i] = self.coeffs[i].eval(t);
            fr.dc[i] = self.d1[i].eval(t);
            fr.ddc[i] = self.d2[i].eval(t);
        }
        fr
    }

    fn horner(c: &[f64; 5], z: f64) -> f64 {
        c[0] + z * (c[1] + z * (c[2] + z * (c[3] + z * c[4])))
    }

    pub fn value_at(&self, z: f64, t: f64) -> f64 {
        if z > self.ell_tilde {
            return 0.0;
        }
        Self::horner(&self.frame(t).c, z)
    }

    pub fn dt_at(&self, z: f64, t: f64) -> f64 {
        if z > self.ell_tilde {
            return 0.0;
        }
        Self::horner(&self.frame(t).dc, z)
    }

    pub fn dtt_at(&self, z: f64, t: f64) -> f64 {
        if z > self.ell_tilde {
            return 0.0;
        }
        Self::horner(&self.frame(t).ddc, z)
    }

    pub fn dz_at(&self, z: f64, t: f64) -> f64 {
        if z > self.ell_tilde {
            return 0.0;
        }
        let c = self.frame(t).c;
        c[1] + z * (2.0 * c[2] + z * (3.0 * c[3] + z * 4.0 * c[4]))
    }

    pub fn dzz_at(&self, z: f64, t: f64) -> f64 {
        if z > self.ell_tilde {
            return 0.0;
        }
        let c = self.frame(t).c;
        2.0 * c[2] + z * (6.0 * c[3] + z * 12.0 * c[4])
    }

    /// F, F_t, F_tt, F_zz at every grid point, sharing one coefficient frame.
    pub fn eval_grid(&self, points: &[f64], t: f64) -> LiftGridEval {
        let fr = self.frame(t);
        let n = points.len();
        let mut out = LiftGridEval {
            f: vec![0.0; n],
            ft: vec![0.0; n],
            ftt: vec![0.0; n],
            fzz: vec![0.0; n],
        };
        for (i, &z) in points.iter().enumerate() {
            if z > self.ell_tilde {
                continue; // compact support
            }
            out.f[i] = Self::horner(&fr.c, z);
            out.ft[i] = Self::horner(&fr.dc, z);
            out.ftt[i] = Self::horner(&fr.ddc, z);
            out.fzz[i] = 2.0 * fr.c[2] + z * (6.0 * fr.c[3] + z * 12.0 * fr.c[4]);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shock_like_lift() -> QuarticLift {
        // f0 = cos(w t), f2 = p cos(w t) + q sin(w t), arbitrary p, q.
        let w = 2.0 * std::f64::consts::PI;
        let f0 = TrigPoly::new(vec![(w, 1.0, 0.0)]);
        let f2 = TrigPoly::new(vec![(w, -0.135, 0.07)]);
        QuarticLift::new(3.5, f0, f2).unwrap()
    }

    #[test]
    fn boundary_value_is_f0() {
        let lift = shock_like_lift();
        let w = 2.0 * std::f64::consts::PI;
        for &t in &[0.0, 0.21, 1.7] {
            assert!((lift.value_at(0.0, t) - (w * t).cos()).abs() <= 1e-14);
        }
    }

    #[test]
    fn junction_conditions_hold_identically() {
        let lift = shock_like_lift();
        let lt = lift.cutoff();
        for i in 0..25 {
            let t = i as f64 * 0.173;
            let vmax = lift.value_at(0.0, t).abs().max(1.0);
            assert!(lift.value_at(lt, t).abs() <= 1e-12 * vmax, "F({lt},{t})");
            assert!(lift.dz_at(lt, t).abs() <= 1e-12 * vmax);
            assert!(lift.dzz_at(lt, t).abs() <= 1e-12 * vmax);
            // Zero extension beyond the cutoff.
            assert_eq!(lift.value_at(lt * 1.0001, t), 0.0);
        }
    }

    #[test]
    fn time_derivatives_match_differencing() {
        let lift = shock_like_lift();
        let (z, t, h) = (1.3, 0.4, 1e-6);
        let d_num = (lift.value_at(z, t + h) - lift.value_at(z, t - h)) / (2.0 * h);
        assert!((lift.dt_at(z, t) - d_num).abs() <= 1e-7);
        let dd_num =
            (lift.value_at(z, t + h) - 2.0 * lift.value_at(z, t) + lift.value_at(z, t - h))
                / (h * h);
        assert!((lift.dtt_at(z, t) - dd_num).abs() <= 1e-3);
    }

    #[test]
    fn space_derivatives_match_differencing() {
        let lift = shock_like_lift();
        let (z, t, h) = (2.0, 0.9, 1e-6);
        let d_num = (lift.value_at(z + h, t) - lift.value_at(z - h, t)) / (2.0 * h);
        assert!((lift.dz_at(z, t) - d_num).abs() <= 1e-6);
        let dd_num =
            (lift.value_at(z + h, t) - 2.0 * lift.value_at(z, t) + lift.value_at(z - h, t))
                / (h * h);
        assert!((lift.dzz_at(z, t) - dd_num).abs() <= 1e-3);
    }

    #[test]
    fn grid_eval_matches_scalar_paths() {
        let lift = shock_like_lift();
        let pts: Vec<f64> = (0..40).map(|i| i as f64 * 0.11).collect();
        let t = 0.63;
        let g = lift.eval_grid(&pts, t);
        for (i, &z) in pts.iter().enumerate() {
            assert_eq!(g.f[i], lift.value_at(z, t));
            assert_eq!(g.ft[i], lift.dt_at(z, t));
            assert_eq!(g.ftt[i], lift.dtt_at(z, t));
            assert_eq!(g.fzz[i], lift.dzz_at(z, t));
        }
    }

    #[test]
    fn mismatched_bases_rejected() {
        let f0 = TrigPoly::new(vec![(1.0, 1.0, 0.0)]);
        let f2 = TrigPoly::new(vec![(2.0, 1.0, 0.0)]);
        assert!(QuarticLift::new(1.0, f0, f2).is_err());
        let f0 = TrigPoly::new(vec![(1.0, 1.0, 0.0)]);
        let f2 = TrigPoly::new(vec![(1.0, 1.0, 0.0)]);
        assert!(QuarticLift::new(0.0, f0, f2).is_err());
    }
}
