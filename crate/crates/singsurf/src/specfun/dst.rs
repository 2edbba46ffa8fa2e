//! Orthonormal discrete sine transform (DST-I).
//!
//! Coefficient k of a length-N sequence sampled on the interior grid
//! x_i = i/(N+1) pairs with the mode sin(pi k x), k = 1..=N:
//!
//!   s_k = sqrt(2/(N+1)) * sum_i v_i sin(pi k i / (N+1)).
//!
//! With this normalization the transform matrix is symmetric and orthogonal,
//! so forward and inverse are the same map and Parseval holds with constant
//! one. The evaluation embeds the sequence in an odd extension of length
//! 2(N+1) and runs one complex FFT.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Sine-series coefficients of a real sequence; index 0 holds mode k = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SineSpectrum {
    coeffs: Vec<f64>,
}

impl SineSpectrum {
    pub fn from_coefficients(coeffs: Vec<f64>) -> Self {
        SineSpectrum { coeffs }
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coefficients_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn into_coefficients(self) -> Vec<f64> {
        self.coeffs
    }
}

/// Reusable transform plan for one grid size. Immutable after construction
/// and safe to share across threads; scratch space is per invocation.
pub struct DstPlan {
    n: usize,
    fft: Arc<dyn Fft<f64>>,
    norm: f64,
    transforms: AtomicU64,
}

impl std::fmt::Debug for DstPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DstPlan").field("n", &self.n).finish()
    }
}

impl DstPlan {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Usage(format!("DstPlan: need N >= 2, got {n}")));
        }
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(2 * (n + 1));
        let norm = (2.0 / (n + 1) as f64).sqrt();
        Ok(DstPlan {
            n,
            fft,
            norm,
            transforms: AtomicU64::new(0),
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Transforms run so far (forward plus inverse); used by the cost-contract
    /// instrumentation.
    pub fn transform_count(&self) -> u64 {
        self.transforms.load(Ordering::Relaxed)
    }

    /// The orthonormal DST-I; self-inverse.
    pub fn transform(&self, values: &[f64]) -> Result<Vec<f64>> {
        if values.len() != self.n {
            return Err(Error::Usage(format!(
                "DST length mismatch: plan is for N = {}, got {}",
                self.n,
                values.len()
            )));
        }
        self.transforms.fetch_add(1, Ordering::Relaxed);

        let m = 2 * (self.n + 1);
        let mut buf = vec![Complex::new(0.0, 0.0); m];
        for (i, &v) in values.iter().enumerate() {
            buf[i + 1].re = v;
            buf[m - 1 - i].re = -v;
        }
        let mut scratch = vec![Complex::new(0.0, 0.0); self.fft.get_inplace_scratch_len()];
        self.fft.process_with_scratch(&mut buf, &mut scratch);

        // Y_k = -2i * sum v_i sin(pi k i/(N+1)), so the sine sum is -Im(Y_k)/2.
        Ok((1..=self.n)
            .map(|k| -0.5 * self.norm * buf[k].im)
            .collect())
    }

    pub fn forward(&self, values: &[f64]) -> Result<SineSpectrum> {
        Ok(SineSpectrum {
            coeffs: self.transform(values)?,
        })
    }

    pub fn inverse(&self, spectrum: &SineSpectrum) -> Result<Vec<f64>> {
        self.transform(&spectrum.coeffs)
    }
}
