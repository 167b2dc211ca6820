//! Closed-form reference solutions for the builtin problems, with full
//! first/second derivative jets.
//!
//! The Burgers solution is the Cole-Hopf transform of the heat equation
//! with initial profile `-sin(pi x)`. For moderate viscosity it is summed
//! as a Fourier-Bessel series (term-wise differentiable, accurate to
//! round-off); for small viscosity the series cancels catastrophically and
//! a Gauss-Hermite quadrature of the heat-kernel integral is used instead.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

/// Value and derivatives of a reference solution at one space-time point.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionJet {
    pub value: f64,
    pub dt: f64,
    pub grad: Vec<f64>,
    pub hess_diag: Vec<f64>,
}

/// Viscosity threshold between the series and quadrature branches,
/// expressed through the Cole-Hopf argument `z = 1 / (2 pi nu)`.
const SERIES_Z_MAX: f64 = 4.0;
const HERMITE_NODES: usize = 200;

#[derive(Debug, Clone)]
pub enum AnalyticSolution {
    /// `u = exp(-d lambda t) prod_j sin(x_j)`; solves `u_t = lambda laplace u`.
    HeatProduct { lambda: f64, dim: usize },
    /// `u = amp sin(pi (x - speed t))`; solves `u_t + speed u_x = 0`.
    TravelingSine { amp: f64, speed: f64 },
    /// Cole-Hopf solution of `u_t + u u_x = nu u_xx` with `u(x,0) = -sin(pi x)`.
    BurgersColeHopf(BurgersSolution),
}

impl AnalyticSolution {
    pub fn burgers(nu: f64) -> Self {
        AnalyticSolution::BurgersColeHopf(BurgersSolution::new(nu))
    }

    pub fn value(&self, x: &[f64], t: f64) -> f64 {
        match self {
            AnalyticSolution::HeatProduct { lambda, dim } => {
                let mut p = (-(*dim as f64) * lambda * t).exp();
                for &xi in x {
                    p *= xi.sin();
                }
                p
            }
            AnalyticSolution::TravelingSine { amp, speed } => {
                amp * (PI * (x[0] - speed * t)).sin()
            }
            AnalyticSolution::BurgersColeHopf(b) => b.jet(x[0], t).value,
        }
    }

    pub fn jet(&self, x: &[f64], t: f64) -> SolutionJet {
        match self {
            AnalyticSolution::HeatProduct { lambda, dim } => {
                let d = *dim;
                let decay = (-(d as f64) * lambda * t).exp();
                let sins: Vec<f64> = x.iter().map(|v| v.sin()).collect();
                let coss: Vec<f64> = x.iter().map(|v| v.cos()).collect();
                let prod: f64 = sins.iter().product();
                let value = decay * prod;
                let mut grad = vec![0.0; d];
                let mut hess = vec![0.0; d];
                for j in 0..d {
                    let mut others = decay;
                    for m in 0..d {
                        if m != j {
                            others *= sins[m];
                        }
                    }
                    grad[j] = others * coss[j];
                    hess[j] = -value;
                }
                SolutionJet {
                    value,
                    dt: -(d as f64) * lambda * value,
                    grad,
                    hess_diag: hess,
                }
            }
            AnalyticSolution::TravelingSine { amp, speed } => {
                let phase = PI * (x[0] - speed * t);
                let s = phase.sin();
                let c = phase.cos();
                SolutionJet {
                    value: amp * s,
                    dt: -amp * speed * PI * c,
                    grad: vec![amp * PI * c],
                    hess_diag: vec![-amp * PI * PI * s],
                }
            }
            AnalyticSolution::BurgersColeHopf(b) => b.jet(x[0], t),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BurgersSolution {
    nu: f64,
    branch: Branch,
}

#[derive(Debug, Clone)]
enum Branch {
    /// Fourier-Bessel series with precomputed `I_n(z) / I_0(z)`.
    Series { z: f64, ratios: Vec<f64> },
    /// Gauss-Hermite quadrature of the heat-kernel integral.
    Hermite {
        z: f64,
        nodes: Vec<f64>,
        weights: Vec<f64>,
    },
}

impl BurgersSolution {
    pub fn new(nu: f64) -> Self {
        assert!(nu > 0.0, "burgers viscosity must be positive");
        let z = 1.0 / (2.0 * PI * nu);
        let branch = if z <= SERIES_Z_MAX {
            let nmax = 40 + (6.0 * z) as usize;
            Branch::Series {
                z,
                ratios: bessel_i_ratios(z, nmax),
            }
        } else {
            let (nodes, weights) = gauss_hermite(HERMITE_NODES);
            Branch::Hermite { z, nodes, weights }
        };
        BurgersSolution { nu, branch }
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn jet(&self, x: f64, t: f64) -> SolutionJet {
        match &self.branch {
            Branch::Series { ratios, .. } => self.series_jet(ratios, x, t),
            Branch::Hermite { z, nodes, weights } => self.hermite_jet(*z, nodes, weights, x, t),
        }
    }

    /// Quotient of Fourier series: `u = N / D` with
    /// `D = 1 + 2 sum (-1)^n r_n E_n cos(n pi x)` and
    /// `N = 4 nu pi sum (-1)^n n r_n E_n sin(n pi x)`, `E_n = exp(-n^2 pi^2 nu t)`.
    fn series_jet(&self, ratios: &[f64], x: f64, t: f64) -> SolutionJet {
        let nu = self.nu;
        let mut den = 1.0;
        let mut den_x = 0.0;
        let mut den_xx = 0.0;
        let mut num = 0.0;
        let mut num_x = 0.0;
        let mut num_xx = 0.0;
        for (n, &r) in ratios.iter().enumerate().skip(1) {
            let nf = n as f64;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let damp = (-nf * nf * PI * PI * nu * t).exp();
            let c = (nf * PI * x).cos();
            let s = (nf * PI * x).sin();
            let a = sign * r * damp;
            den += 2.0 * a * c;
            den_x -= 2.0 * PI * nf * a * s;
            den_xx -= 2.0 * PI * PI * nf * nf * a * c;
            num += 4.0 * nu * PI * nf * a * s;
            num_x += 4.0 * nu * PI * PI * nf * nf * a * c;
            num_xx -= 4.0 * nu * PI * PI * PI * nf * nf * nf * a * s;
        }
        // the generating function solves the heat equation, so time
        // derivatives of both series are nu times their second x-derivatives
        let den_t = nu * den_xx;
        let num_t = nu * num_xx;
        let u = num / den;
        let ux = (num_x - u * den_x) / den;
        let uxx = (num_xx - 2.0 * ux * den_x - u * den_xx) / den;
        let ut = (num_t - u * den_t) / den;
        SolutionJet {
            value: u,
            dt: ut,
            grad: vec![ux],
            hess_diag: vec![uxx],
        }
    }

    fn hermite_jet(
        &self,
        z: f64,
        nodes: &[f64],
        weights: &[f64],
        x: f64,
        t: f64,
    ) -> SolutionJet {
        let nu = self.nu;
        let a = 2.0 * (nu * t.max(0.0)).sqrt();
        // log-integrand maximum subtracted to keep the positive sums scaled
        let mut m = f64::NEG_INFINITY;
        for &s in nodes {
            let y = x - a * s;
            let e = -z * (PI * y).cos();
            if e > m {
                m = e;
            }
        }
        let (mut f0, mut f1, mut f2, mut f3) = (0.0, 0.0, 0.0, 0.0);
        for (&s, &w) in nodes.iter().zip(weights) {
            let y = x - a * s;
            let sp = (PI * y).sin();
            let cp = (PI * y).cos();
            let p = z * PI * sp;
            let p1 = z * PI * PI * cp;
            let p2 = -z * PI * PI * PI * sp;
            let f = w * (-z * cp - m).exp();
            f0 += f;
            f1 += p * f;
            f2 += (p1 + p * p) * f;
            f3 += (p2 + 3.0 * p * p1 + p * p * p) * f;
        }
        let r1 = f1 / f0;
        let r2 = f2 / f0;
        let r3 = f3 / f0;
        let u = -2.0 * nu * r1;
        let ux = -2.0 * nu * (r2 - r1 * r1);
        let uxx = -2.0 * nu * (r3 - 3.0 * r1 * r2 + 2.0 * r1 * r1 * r1);
        // time derivative from the equation itself
        let ut = nu * uxx - u * ux;
        SolutionJet {
            value: u,
            dt: ut,
            grad: vec![ux],
            hess_diag: vec![uxx],
        }
    }
}

/// `I_n(z) / I_0(z)` for `n = 0..=nmax` by Miller's backward recurrence
/// `I_{n-1} = I_{n+1} + (2n/z) I_n`, started well above `nmax` with an
/// arbitrary scale that cancels in the ratios.
fn bessel_i_ratios(z: f64, nmax: usize) -> Vec<f64> {
    let start = nmax + 20 + (2.0 * z) as usize;
    let mut f = vec![0.0f64; start + 2];
    f[start] = 1e-30;
    for n in (1..=start).rev() {
        f[n - 1] = f[n + 1] + (2.0 * n as f64 / z) * f[n];
        if f[n - 1] > 1e260 {
            for v in f.iter_mut() {
                *v *= 1e-260;
            }
        }
    }
    let f0 = f[0];
    (0..=nmax).map(|n| f[n] / f0).collect()
}

/// Gauss-Hermite nodes and weights for `integral exp(-s^2) f(s) ds`.
///
/// Newton iteration on the orthonormal Hermite recurrence; standard
/// construction, stable for a few hundred nodes.
fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let pim4 = 0.751_125_544_464_942_9_f64; // pi^{-1/4}
    let m = (n + 1) / 2;
    let mut zval = 0.0f64;
    for i in 0..m {
        zval = match i {
            0 => (2.0 * n as f64 + 1.0).sqrt()
                - 1.85575 * (2.0 * n as f64 + 1.0).powf(-1.0 / 6.0),
            1 => zval - 1.14 * (n as f64).powf(0.426) / zval,
            2 => 1.86 * zval - 0.86 * x[0],
            3 => 1.91 * zval - 0.91 * x[1],
            _ => 2.0 * zval - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                p1 = zval * (2.0 / j as f64).sqrt() * p2
                    - ((j as f64 - 1.0) / j as f64).sqrt() * p3;
            }
            pp = (2.0 * n as f64).sqrt() * p2;
            let z1 = zval;
            zval = z1 - p1 / pp;
            if (zval - z1).abs() <= 1e-14 {
                break;
            }
        }
        x[i] = zval;
        x[n - 1 - i] = -zval;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}
