//! Covariance kernels and their hyperparameters.
//!
//! Two families are supported: a squared exponential with automatic
//! relevance determination, parameterized as
//! `k(a, b) = sigma^2 exp(-sum_j (a_j - b_j)^2 / (2 l_j))`
//! (each `l_j` divides the squared separation directly), and the arcsine
//! "neural network" kernel on scalar inputs,
//! `k(x, x') = (2/pi) asin( 2(s0^2 + s^2 x x') /
//!   sqrt((1 + 2(s0^2 + s^2 x^2))(1 + 2(s0^2 + s^2 x'^2))) )`.

use alloc::format;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Floor added to the noise variance before taking logs so that a zero
/// noise level survives the unconstrained round trip.
pub const NOISE_LOG_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelFamily {
    SquaredExponentialArd,
    NeuralNetwork,
}

/// Kernel family plus input dimensionality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelSpec {
    pub family: KernelFamily,
    pub input_dim: usize,
}

impl KernelSpec {
    pub fn se_ard(input_dim: usize) -> Self {
        KernelSpec {
            family: KernelFamily::SquaredExponentialArd,
            input_dim,
        }
    }

    pub fn neural_network() -> Self {
        KernelSpec {
            family: KernelFamily::NeuralNetwork,
            input_dim: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.input_dim == 0 {
            return Err(Error::input("kernel input_dim must be at least 1"));
        }
        if self.family == KernelFamily::NeuralNetwork && self.input_dim != 1 {
            return Err(Error::Capability(format!(
                "neural network kernel is defined for scalar inputs, got dim {}",
                self.input_dim
            )));
        }
        Ok(())
    }

    /// Number of kernel hyperparameters (excluding noise and PDE coefficients).
    pub fn n_kernel_params(&self) -> usize {
        match self.family {
            KernelFamily::SquaredExponentialArd => 1 + self.input_dim,
            KernelFamily::NeuralNetwork => 2,
        }
    }
}

/// Family-specific kernel hyperparameters.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelParams {
    SeArd {
        amplitude: f64,
        lengthscales: Vec<f64>,
    },
    NeuralNetwork {
        sigma0: f64,
        sigma: f64,
    },
}

/// Full parameter set of a model: kernel hyperparameters, the observation
/// noise variance, and any PDE coefficients being estimated jointly.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperParams {
    pub kernel: KernelParams,
    pub noise_var: f64,
    /// PDE coefficients appended to the optimization vector; empty when the
    /// coefficients are fully known.
    pub pde_coeffs: Vec<f64>,
}

impl HyperParams {
    pub fn se_ard(amplitude: f64, lengthscales: Vec<f64>) -> Self {
        HyperParams {
            kernel: KernelParams::SeArd {
                amplitude,
                lengthscales,
            },
            noise_var: 0.0,
            pde_coeffs: Vec::new(),
        }
    }

    pub fn neural_network(sigma0: f64, sigma: f64) -> Self {
        HyperParams {
            kernel: KernelParams::NeuralNetwork { sigma0, sigma },
            noise_var: 0.0,
            pde_coeffs: Vec::new(),
        }
    }

    pub fn with_noise(mut self, noise_var: f64) -> Self {
        self.noise_var = noise_var;
        self
    }

    pub fn validate(&self, spec: &KernelSpec) -> Result<()> {
        spec.validate()?;
        match (&self.kernel, spec.family) {
            (
                KernelParams::SeArd {
                    amplitude,
                    lengthscales,
                },
                KernelFamily::SquaredExponentialArd,
            ) => {
                if lengthscales.len() != spec.input_dim {
                    return Err(Error::input(format!(
                        "expected {} lengthscales, got {}",
                        spec.input_dim,
                        lengthscales.len()
                    )));
                }
                if !(amplitude.is_finite() && *amplitude > 0.0) {
                    return Err(Error::domain("amplitude must be finite and positive"));
                }
                if lengthscales.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
                    return Err(Error::domain("lengthscales must be finite and positive"));
                }
            }
            (KernelParams::NeuralNetwork { sigma0, sigma }, KernelFamily::NeuralNetwork) => {
                if !(sigma0.is_finite() && sigma.is_finite()) {
                    return Err(Error::domain("nn kernel parameters must be finite"));
                }
                if *sigma0 < 0.0 || *sigma <= 0.0 {
                    return Err(Error::domain("nn kernel scales must be positive"));
                }
            }
            _ => {
                return Err(Error::input(
                    "hyperparameter family does not match kernel spec",
                ))
            }
        }
        if !(self.noise_var.is_finite() && self.noise_var >= 0.0) {
            return Err(Error::domain("noise variance must be finite and >= 0"));
        }
        if self.pde_coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::domain("pde coefficients must be finite"));
        }
        Ok(())
    }
}

/// Evaluate the kernel at a pair of points.
pub fn kernel_eval(spec: &KernelSpec, hp: &HyperParams, a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != spec.input_dim || b.len() != spec.input_dim {
        return Err(Error::input(format!(
            "kernel input dimension mismatch: expected {}, got {}/{}",
            spec.input_dim,
            a.len(),
            b.len()
        )));
    }
    hp.validate(spec)?;
    Ok(kernel_eval_unchecked(hp, a, b))
}

/// Kernel evaluation without argument validation; hot path for Gram builds.
#[inline]
pub(crate) fn kernel_eval_unchecked(hp: &HyperParams, a: &[f64], b: &[f64]) -> f64 {
    match &hp.kernel {
        KernelParams::SeArd {
            amplitude,
            lengthscales,
        } => {
            let mut q = 0.0;
            for j in 0..lengthscales.len() {
                let d = a[j] - b[j];
                q += d * d / lengthscales[j];
            }
            amplitude * amplitude * (-0.5 * q).exp()
        }
        KernelParams::NeuralNetwork { sigma0, sigma } => {
            let (x, y) = (a[0], b[0]);
            let s0 = sigma0 * sigma0;
            let s2 = sigma * sigma;
            let num = 2.0 * (s0 + s2 * x * y);
            let den = ((1.0 + 2.0 * (s0 + s2 * x * x)) * (1.0 + 2.0 * (s0 + s2 * y * y))).sqrt();
            let z = (num / den).clamp(-1.0, 1.0);
            core::f64::consts::FRAC_2_PI * z.asin()
        }
    }
}

/// Which parameters enter the unconstrained optimization vector.
///
/// Kernel scales are optimized as logarithms; the noise variance as
/// `ln(noise + floor)` when estimated; PDE coefficients on their raw scale
/// (they may sit near zero or go negative).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParamLayout {
    pub spec: KernelSpec,
    pub estimate_noise: bool,
    pub n_coeffs: usize,
}

impl ParamLayout {
    pub fn new(spec: KernelSpec, estimate_noise: bool, n_coeffs: usize) -> Self {
        ParamLayout {
            spec,
            estimate_noise,
            n_coeffs,
        }
    }

    pub fn dim(&self) -> usize {
        self.spec.n_kernel_params() + usize::from(self.estimate_noise) + self.n_coeffs
    }

    /// Map hyperparameters to the unconstrained vector.
    pub fn pack(&self, hp: &HyperParams) -> Result<Vec<f64>> {
        hp.validate(&self.spec)?;
        let mut v = Vec::with_capacity(self.dim());
        match &hp.kernel {
            KernelParams::SeArd {
                amplitude,
                lengthscales,
            } => {
                v.push(amplitude.ln());
                v.extend(lengthscales.iter().map(|l| l.ln()));
            }
            KernelParams::NeuralNetwork { sigma0, sigma } => {
                v.push(sigma0.max(NOISE_LOG_FLOOR).ln());
                v.push(sigma.ln());
            }
        }
        if self.estimate_noise {
            v.push((hp.noise_var + NOISE_LOG_FLOOR).ln());
        }
        if hp.pde_coeffs.len() != self.n_coeffs {
            return Err(Error::input(format!(
                "expected {} pde coefficients, got {}",
                self.n_coeffs,
                hp.pde_coeffs.len()
            )));
        }
        v.extend_from_slice(&hp.pde_coeffs);
        Ok(v)
    }

    /// Map an unconstrained vector back to hyperparameters.
    ///
    /// `fixed_noise` supplies the noise variance when it is not estimated.
    pub fn unpack(&self, v: &[f64], fixed_noise: f64) -> Result<HyperParams> {
        if v.len() != self.dim() {
            return Err(Error::input(format!(
                "parameter vector length {} does not match layout dim {}",
                v.len(),
                self.dim()
            )));
        }
        let nk = self.spec.n_kernel_params();
        let kernel = match self.spec.family {
            KernelFamily::SquaredExponentialArd => KernelParams::SeArd {
                amplitude: v[0].exp(),
                lengthscales: v[1..nk].iter().map(|u| u.exp()).collect(),
            },
            KernelFamily::NeuralNetwork => KernelParams::NeuralNetwork {
                sigma0: v[0].exp(),
                sigma: v[1].exp(),
            },
        };
        let mut idx = nk;
        let noise_var = if self.estimate_noise {
            let n = v[idx].exp() - NOISE_LOG_FLOOR;
            idx += 1;
            n.max(0.0)
        } else {
            fixed_noise
        };
        let pde_coeffs = v[idx..].to_vec();
        Ok(HyperParams {
            kernel,
            noise_var,
            pde_coeffs,
        })
    }
}
