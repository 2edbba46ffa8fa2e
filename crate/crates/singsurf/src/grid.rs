//! Uniform interior grids and paired wave state.

use crate::error::{Error, Result};

/// Uniform mesh of `n` interior points on (0, length); spacing
/// dx = length/(n+1), points x_i = i*dx for i = 1..=n. Endpoints carry
/// Dirichlet data and are not stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    n: usize,
    length: f64,
}

impl Grid1D {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Config(format!("Grid1D: need n >= 2 interior points, got {n}")));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::Config(format!("Grid1D: need finite length > 0, got {length}")));
        }
        Ok(Grid1D { n, length })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.length / (self.n + 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        debug_assert!(i < self.n);
        (i + 1) as f64 * self.dx()
    }

    /// Interior points x_1..x_n.
    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.point(i)).collect()
    }
}

/// Field samples and their time derivative at one time level, on the
/// interior grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveState {
    pub u: Vec<f64>,
    pub ut: Vec<f64>,
}

impl WaveState {
    pub fn new(u: Vec<f64>, ut: Vec<f64>) -> Result<Self> {
        if u.len() != ut.len() {
            return Err(Error::Usage(format!(
                "WaveState: component lengths differ ({} vs {})",
                u.len(),
                ut.len()
            )));
        }
        Ok(WaveState { u, ut })
    }

    pub fn zeros(n: usize) -> Self {
        WaveState {
            u: vec![0.0; n],
            ut: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.u.iter().chain(&self.ut).all(|v| v.is_finite())
    }
}
