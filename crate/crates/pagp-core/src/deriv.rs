//! Analytic derivatives of the GP posterior mean with respect to input
//! coordinates, assembled from closed-form kernel derivatives:
//! `d mu / dx_j = sum_l (d k(x*, x_l) / dx*_j) alpha_l` and the analogous
//! second-order sum.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::gp::TrainedGp;
use crate::kernel::{HyperParams, KernelParams, KernelSpec};

/// A first- or second-order coordinate derivative request.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivRequest {
    First(usize),
    Second(usize, usize),
}

fn check_index(spec: &KernelSpec, j: usize) -> Result<()> {
    if j >= spec.input_dim {
        return Err(Error::input(format!(
            "coordinate index {j} out of range for dim {}",
            spec.input_dim
        )));
    }
    Ok(())
}

/// `d k(a, b) / d a_j`, evaluated analytically.
pub fn kernel_dx(
    spec: &KernelSpec,
    hp: &HyperParams,
    a: &[f64],
    b: &[f64],
    j: usize,
) -> Result<f64> {
    if a.len() != spec.input_dim || b.len() != spec.input_dim {
        return Err(Error::input("kernel derivative input dimension mismatch"));
    }
    check_index(spec, j)?;
    hp.validate(spec)?;
    match &hp.kernel {
        KernelParams::SeArd { .. } => Ok(se_ard_dx(hp, a, b, j)),
        KernelParams::NeuralNetwork { .. } => {
            let (_, dx, _) = nn_jet(hp, a[0], b[0]);
            Ok(dx)
        }
    }
}

/// `d^2 k(a, b) / d a_i d a_j`, evaluated analytically.
pub fn kernel_dxdx(
    spec: &KernelSpec,
    hp: &HyperParams,
    a: &[f64],
    b: &[f64],
    i: usize,
    j: usize,
) -> Result<f64> {
    if a.len() != spec.input_dim || b.len() != spec.input_dim {
        return Err(Error::input("kernel derivative input dimension mismatch"));
    }
    check_index(spec, i)?;
    check_index(spec, j)?;
    hp.validate(spec)?;
    match &hp.kernel {
        KernelParams::SeArd { .. } => Ok(se_ard_dxdx(hp, a, b, i, j)),
        KernelParams::NeuralNetwork { .. } => {
            let (_, _, dxx) = nn_jet(hp, a[0], b[0]);
            Ok(dxx)
        }
    }
}

#[inline]
fn se_ard_dx(hp: &HyperParams, a: &[f64], b: &[f64], j: usize) -> f64 {
    let KernelParams::SeArd { lengthscales, .. } = &hp.kernel else {
        unreachable!()
    };
    let k = crate::kernel::kernel_eval_unchecked(hp, a, b);
    -k * (a[j] - b[j]) / lengthscales[j]
}

#[inline]
fn se_ard_dxdx(hp: &HyperParams, a: &[f64], b: &[f64], i: usize, j: usize) -> f64 {
    let KernelParams::SeArd { lengthscales, .. } = &hp.kernel else {
        unreachable!()
    };
    let k = crate::kernel::kernel_eval_unchecked(hp, a, b);
    let di = (a[i] - b[i]) / lengthscales[i];
    let dj = (a[j] - b[j]) / lengthscales[j];
    let kron = if i == j { 1.0 / lengthscales[j] } else { 0.0 };
    k * (di * dj - kron)
}

/// Value, first, and second derivative of the neural-network kernel with
/// respect to its first (scalar) argument.
#[inline]
fn nn_jet(hp: &HyperParams, x: f64, y: f64) -> (f64, f64, f64) {
    let KernelParams::NeuralNetwork { sigma0, sigma } = &hp.kernel else {
        unreachable!()
    };
    let s0 = sigma0 * sigma0;
    let s2 = sigma * sigma;
    let n = 2.0 * (s0 + s2 * x * y);
    let p = 1.0 + 2.0 * (s0 + s2 * x * x);
    let q = 1.0 + 2.0 * (s0 + s2 * y * y);
    let d = (p * q).sqrt();
    let z = n / d;

    // z_x = (2 s2 / d) w with w = y - x n / p;  d_x/d = 2 s2 x / p
    let w = y - x * n / p;
    let zx = 2.0 * s2 * w / d;
    let wx = -(n / p + 2.0 * s2 * x * y / p - 4.0 * s2 * x * x * n / (p * p));
    let zxx = (2.0 * s2 / d) * (wx - w * 2.0 * s2 * x / p);

    let one_minus = (1.0 - z * z).max(f64::EPSILON);
    let root = one_minus.sqrt();
    let c = core::f64::consts::FRAC_2_PI;
    let k = c * z.clamp(-1.0, 1.0).asin();
    let kx = c * zx / root;
    let kxx = c * (zxx / root + z * zx * zx / (one_minus * root));
    (k, kx, kxx)
}

/// `d mu / d x*_j` at a query point.
pub fn posterior_mean_grad(gp: &TrainedGp, xs: &[f64], j: usize) -> Result<f64> {
    let spec = *gp.spec();
    if xs.len() != spec.input_dim {
        return Err(Error::input("query dimension mismatch"));
    }
    check_index(&spec, j)?;
    let hp = gp.hyperparams();
    let alpha = gp.alpha();
    let mut s = 0.0;
    match &hp.kernel {
        KernelParams::SeArd { .. } => {
            for (l, &al) in alpha.iter().enumerate() {
                s += se_ard_dx(hp, xs, gp.input_row(l), j) * al;
            }
        }
        KernelParams::NeuralNetwork { .. } => {
            for (l, &al) in alpha.iter().enumerate() {
                let (_, dx, _) = nn_jet(hp, xs[0], gp.input_row(l)[0]);
                s += dx * al;
            }
        }
    }
    Ok(s)
}

/// `d^2 mu / d x*_i d x*_j` at a query point.
pub fn posterior_mean_hess(gp: &TrainedGp, xs: &[f64], i: usize, j: usize) -> Result<f64> {
    let spec = *gp.spec();
    if xs.len() != spec.input_dim {
        return Err(Error::input("query dimension mismatch"));
    }
    check_index(&spec, i)?;
    check_index(&spec, j)?;
    let hp = gp.hyperparams();
    let alpha = gp.alpha();
    let mut s = 0.0;
    match &hp.kernel {
        KernelParams::SeArd { .. } => {
            for (l, &al) in alpha.iter().enumerate() {
                s += se_ard_dxdx(hp, xs, gp.input_row(l), i, j) * al;
            }
        }
        KernelParams::NeuralNetwork { .. } => {
            for (l, &al) in alpha.iter().enumerate() {
                let (_, _, dxx) = nn_jet(hp, xs[0], gp.input_row(l)[0]);
                s += dxx * al;
            }
        }
    }
    Ok(s)
}

/// Posterior mean derivative for a [`DerivRequest`].
pub fn posterior_mean_deriv(gp: &TrainedGp, xs: &[f64], req: DerivRequest) -> Result<f64> {
    match req {
        DerivRequest::First(j) => posterior_mean_grad(gp, xs, j),
        DerivRequest::Second(i, j) => posterior_mean_hess(gp, xs, i, j),
    }
}

/// Posterior mean together with its gradient and Hessian diagonal,
/// computed in one pass over the training points (one kernel evaluation
/// per pair). This is the hot path for PDE residual terms.
#[derive(Debug, Clone)]
pub struct PosteriorJet {
    pub value: f64,
    pub grad: Vec<f64>,
    pub hess_diag: Vec<f64>,
}

pub fn posterior_jet(gp: &TrainedGp, xs: &[f64], need_hess: bool) -> Result<PosteriorJet> {
    let spec = *gp.spec();
    if xs.len() != spec.input_dim {
        return Err(Error::input("query dimension mismatch"));
    }
    let d = spec.input_dim;
    let hp = gp.hyperparams();
    let alpha = gp.alpha();
    let mut value = 0.0;
    let mut grad = vec![0.0; d];
    let mut hess = vec![0.0; if need_hess { d } else { 0 }];
    match &hp.kernel {
        KernelParams::SeArd {
            amplitude,
            lengthscales,
        } => {
            let a2 = amplitude * amplitude;
            for (l, &al) in alpha.iter().enumerate() {
                let xl = gp.input_row(l);
                let mut qsum = 0.0;
                for m in 0..d {
                    let dm = xs[m] - xl[m];
                    qsum += dm * dm / lengthscales[m];
                }
                let k = a2 * (-0.5 * qsum).exp();
                let w = k * al;
                value += w;
                for m in 0..d {
                    let r = (xs[m] - xl[m]) / lengthscales[m];
                    grad[m] -= w * r;
                    if need_hess {
                        hess[m] += w * (r * r - 1.0 / lengthscales[m]);
                    }
                }
            }
        }
        KernelParams::NeuralNetwork { .. } => {
            for (l, &al) in alpha.iter().enumerate() {
                let (k, kx, kxx) = nn_jet(hp, xs[0], gp.input_row(l)[0]);
                value += k * al;
                grad[0] += kx * al;
                if need_hess {
                    hess[0] += kxx * al;
                }
            }
        }
    }
    Ok(PosteriorJet {
        value,
        grad,
        hess_diag: hess,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::kernel_eval;
    use alloc::vec;
    use rand::Rng;

    #[test]
    fn se_ard_dx_at_coincident_points_is_zero() {
        let spec = KernelSpec::se_ard(2);
        let hp = HyperParams::se_ard(1.5, vec![0.7, 2.0]);
        for j in 0..2 {
            let v = kernel_dx(&spec, &hp, &[0.3, -0.4], &[0.3, -0.4], j).unwrap();
            assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn se_ard_dx_scalar_oracle() {
        // symbolic differentiation of sigma^2 exp(-(a-b)^2 / (2 l)):
        // d/da = -sigma^2 exp(.) (a-b)/l; at a=0, b=1, l=1 -> exp(-0.5)
        let spec = KernelSpec::se_ard(1);
        let hp = HyperParams::se_ard(1.0, vec![1.0]);
        let v = kernel_dx(&spec, &hp, &[0.0], &[1.0], 0).unwrap();
        assert!((v - (-0.5f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn se_ard_dxdx_diagonal_and_cross_at_zero_offset() {
        let spec = KernelSpec::se_ard(2);
        let hp = HyperParams::se_ard(1.3, vec![0.6, 1.7]);
        let a = [0.2, 0.9];
        for j in 0..2 {
            let v = kernel_dxdx(&spec, &hp, &a, &a, j, j).unwrap();
            let KernelParams::SeArd {
                amplitude,
                ref lengthscales,
            } = hp.kernel
            else {
                unreachable!()
            };
            let oracle = -amplitude * amplitude / lengthscales[j];
            assert!((v - oracle).abs() < 1e-14);
        }
        let cross = kernel_dxdx(&spec, &hp, &a, &a, 0, 1).unwrap();
        assert_eq!(cross, 0.0);
    }

    fn central_dx(
        spec: &KernelSpec,
        hp: &HyperParams,
        a: &[f64],
        b: &[f64],
        j: usize,
        h: f64,
    ) -> f64 {
        let mut ap = a.to_vec();
        let mut am = a.to_vec();
        ap[j] += h;
        am[j] -= h;
        (kernel_eval(spec, hp, &ap, b).unwrap() - kernel_eval(spec, hp, &am, b).unwrap())
            / (2.0 * h)
    }

    fn central_dxdx(
        spec: &KernelSpec,
        hp: &HyperParams,
        a: &[f64],
        b: &[f64],
        i: usize,
        j: usize,
        h: f64,
    ) -> f64 {
        if i == j {
            let mut ap = a.to_vec();
            let mut am = a.to_vec();
            ap[j] += h;
            am[j] -= h;
            (kernel_eval(spec, hp, &ap, b).unwrap() - 2.0 * kernel_eval(spec, hp, a, b).unwrap()
                + kernel_eval(spec, hp, &am, b).unwrap())
                / (h * h)
        } else {
            let mut app = a.to_vec();
            let mut apm = a.to_vec();
            let mut amp = a.to_vec();
            let mut amm = a.to_vec();
            app[i] += h;
            app[j] += h;
            apm[i] += h;
            apm[j] -= h;
            amp[i] -= h;
            amp[j] += h;
            amm[i] -= h;
            amm[j] -= h;
            (kernel_eval(spec, hp, &app, b).unwrap() - kernel_eval(spec, hp, &apm, b).unwrap()
                - kernel_eval(spec, hp, &amp, b).unwrap()
                + kernel_eval(spec, hp, &amm, b).unwrap())
                / (4.0 * h * h)
        }
    }

    #[test]
    fn kernel_derivatives_match_finite_differences() {
        let mut rng = crate::rng::seeded_rng(17);
        for _ in 0..100 {
            let d = rng.gen_range(1..=3usize);
            let spec = KernelSpec::se_ard(d);
            let hp = HyperParams::se_ard(
                rng.gen_range(0.1..10.0),
                (0..d).map(|_| rng.gen_range(0.1..10.0)).collect(),
            );
            let a: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.5..1.5)).collect();
            let b: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.5..1.5)).collect();
            let j = rng.gen_range(0..d);
            let i = rng.gen_range(0..d);

            let h1 = 1e-5 * a[j].abs().max(1.0);
            let exact = kernel_dx(&spec, &hp, &a, &b, j).unwrap();
            let approx = central_dx(&spec, &hp, &a, &b, j, h1);
            let scale = exact.abs().max(1e-3);
            assert!(
                (exact - approx).abs() / scale < 1e-6,
                "first derivative mismatch: {exact} vs {approx}"
            );

            let h2 = 1e-4 * a[i].abs().max(1.0);
            let exact2 = kernel_dxdx(&spec, &hp, &a, &b, i, j).unwrap();
            let approx2 = central_dxdx(&spec, &hp, &a, &b, i, j, h2);
            let scale2 = exact2.abs().max(1e-2);
            assert!(
                (exact2 - approx2).abs() / scale2 < 1e-4,
                "second derivative mismatch: {exact2} vs {approx2}"
            );
        }
    }

    #[test]
    fn nn_kernel_derivatives_match_finite_differences() {
        let mut rng = crate::rng::seeded_rng(23);
        let spec = KernelSpec::neural_network();
        for _ in 0..100 {
            let hp = HyperParams::neural_network(rng.gen_range(0.1..3.0), rng.gen_range(0.1..3.0));
            let a = [rng.gen_range(-1.0..1.0)];
            let b = [rng.gen_range(-1.0..1.0)];
            let exact = kernel_dx(&spec, &hp, &a, &b, 0).unwrap();
            let approx = central_dx(&spec, &hp, &a, &b, 0, 1e-5);
            assert!(
                (exact - approx).abs() / exact.abs().max(1e-3) < 1e-5,
                "nn dx mismatch: {exact} vs {approx}"
            );
            let exact2 = kernel_dxdx(&spec, &hp, &a, &b, 0, 0).unwrap();
            let approx2 = central_dxdx(&spec, &hp, &a, &b, 0, 0, 1e-4);
            assert!(
                (exact2 - approx2).abs() / exact2.abs().max(1e-2) < 1e-4,
                "nn dxx mismatch: {exact2} vs {approx2}"
            );
        }
    }

    fn fit_line_gp() -> TrainedGp {
        let n = 20;
        let x: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        let y = x.clone();
        TrainedGp::fit(
            KernelSpec::se_ard(1),
            HyperParams::se_ard(1.0, vec![1.0]),
            x,
            y,
            1e-12,
        )
        .unwrap()
    }

    #[test]
    fn posterior_grad_zero_targets() {
        let gp = TrainedGp::fit(
            KernelSpec::se_ard(1),
            HyperParams::se_ard(1.0, vec![1.0]),
            vec![0.0, 0.5, 1.0],
            vec![0.0; 3],
            0.0,
        )
        .unwrap();
        assert_eq!(posterior_mean_grad(&gp, &[0.3], 0).unwrap(), 0.0);
        assert_eq!(posterior_mean_hess(&gp, &[0.3], 0, 0).unwrap(), 0.0);
    }

    #[test]
    fn posterior_grad_recovers_linear_slope() {
        let gp = fit_line_gp();
        for xs in [0.3, 0.5, 0.7] {
            let g = posterior_mean_grad(&gp, &[xs], 0).unwrap();
            assert!((g - 1.0).abs() < 1e-2, "slope {g} at {xs}");
        }
    }

    #[test]
    fn posterior_hess_recovers_quadratic_curvature() {
        let n = 30;
        let x: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| v * v).collect();
        let gp = TrainedGp::fit(
            KernelSpec::se_ard(1),
            HyperParams::se_ard(1.0, vec![1.0]),
            x,
            y,
            1e-12,
        )
        .unwrap();
        for xs in [0.35, 0.5, 0.65] {
            let h = posterior_mean_hess(&gp, &[xs], 0, 0).unwrap();
            assert!((h - 2.0).abs() < 5e-2, "curvature {h} at {xs}");
        }
    }

    #[test]
    fn posterior_grad_matches_finite_difference_of_mean() {
        let gp = fit_line_gp();
        let xs = [0.42];
        let h = 1e-5;
        let fd = (gp.posterior_mean(&[xs[0] + h]).unwrap()
            - gp.posterior_mean(&[xs[0] - h]).unwrap())
            / (2.0 * h);
        let g = posterior_mean_grad(&gp, &xs, 0).unwrap();
        assert!((g - fd).abs() / fd.abs().max(1e-6) < 1e-5);

        let fd2 = (gp.posterior_mean(&[xs[0] + 1e-4]).unwrap()
            - 2.0 * gp.posterior_mean(&xs).unwrap()
            + gp.posterior_mean(&[xs[0] - 1e-4]).unwrap())
            / 1e-8;
        let hess = posterior_mean_hess(&gp, &xs, 0, 0).unwrap();
        assert!((hess - fd2).abs() / fd2.abs().max(1e-2) < 1e-3);
    }

    #[test]
    fn gradient_is_linear_in_targets() {
        let x = vec![0.0, 0.3, 0.8, 1.0];
        let y = vec![0.1, -0.4, 0.9, 0.2];
        let c = 3.5;
        let yc: Vec<f64> = y.iter().map(|v| c * v).collect();
        let spec = KernelSpec::se_ard(1);
        let hp = HyperParams::se_ard(1.0, vec![0.5]);
        let g1 = TrainedGp::fit(spec, hp.clone(), x.clone(), y, 0.0).unwrap();
        let g2 = TrainedGp::fit(spec, hp, x, yc, 0.0).unwrap();
        let a = posterior_mean_grad(&g1, &[0.55], 0).unwrap();
        let b = posterior_mean_grad(&g2, &[0.55], 0).unwrap();
        assert!((b - c * a).abs() < 1e-10);
    }

    #[test]
    fn hessian_is_symmetric_in_indices() {
        let mut rng = crate::rng::seeded_rng(31);
        let d = 2;
        let mut x = Vec::new();
        let mut y = Vec::new();
        for _ in 0..12 {
            x.push(rng.gen_range(-1.0..1.0));
            x.push(rng.gen_range(-1.0..1.0));
            y.push(rng.gen_range(-1.0..1.0));
        }
        let gp = TrainedGp::fit(
            KernelSpec::se_ard(d),
            HyperParams::se_ard(1.0, vec![0.8, 1.3]),
            x,
            y,
            1e-10,
        )
        .unwrap();
        let p = [0.2, -0.3];
        let a = posterior_mean_hess(&gp, &p, 0, 1).unwrap();
        let b = posterior_mean_hess(&gp, &p, 1, 0).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn jet_agrees_with_individual_sums() {
        let mut rng = crate::rng::seeded_rng(37);
        let d = 2;
        let mut x = Vec::new();
        let mut y = Vec::new();
        for _ in 0..15 {
            x.push(rng.gen_range(-1.0..1.0));
            x.push(rng.gen_range(-1.0..1.0));
            y.push(rng.gen_range(-1.0..1.0));
        }
        let gp = TrainedGp::fit(
            KernelSpec::se_ard(d),
            HyperParams::se_ard(1.1, vec![0.9, 1.4]),
            x,
            y,
            1e-10,
        )
        .unwrap();
        let p = [0.1, 0.4];
        let jet = posterior_jet(&gp, &p, true).unwrap();
        assert!((jet.value - gp.posterior_mean(&p).unwrap()).abs() < 1e-13);
        for j in 0..d {
            assert!((jet.grad[j] - posterior_mean_grad(&gp, &p, j).unwrap()).abs() < 1e-13);
            assert!(
                (jet.hess_diag[j] - posterior_mean_hess(&gp, &p, j, j).unwrap()).abs() < 1e-13
            );
        }
    }
}
