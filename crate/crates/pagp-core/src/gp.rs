//! Gram matrix construction, GP posteriors, marginal likelihood, and
//! leave-one-out quantities.

use alloc::format;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::kernel::{kernel_eval_unchecked, HyperParams, KernelSpec};
use crate::linalg::{self, Matrix};

/// Relative jitter ladder: multiples of the mean Gram diagonal tried in
/// order when a factorization fails.
const JITTER_LADDER: [f64; 7] = [1e-10, 1e-9, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4];

/// Negative-variance tolerance: posterior variances in `[-1e-10, 0)` are
/// clamped to zero, anything lower is reported as a conditioning failure.
pub const VAR_CLAMP_TOL: f64 = 1e-10;

/// Cholesky factorization of `K + noise I + jitter I`.
#[derive(Debug, Clone)]
pub struct GramFactorization {
    n: usize,
    lower: Matrix,
    log_det: f64,
    /// Jitter actually added to the diagonal (input jitter or a ladder rung).
    jitter_used: f64,
}

impl GramFactorization {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lower(&self) -> &Matrix {
        &self.lower
    }

    pub fn log_det(&self) -> f64 {
        self.log_det
    }

    pub fn jitter_used(&self) -> f64 {
        self.jitter_used
    }

    /// Solve `(K + noise I + jitter I) x = b`.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.n {
            return Err(Error::input(format!(
                "rhs length {} does not match system size {}",
                b.len(),
                self.n
            )));
        }
        Ok(linalg::cholesky_solve(&self.lower, b))
    }
}

fn build_gram_matrix(spec: &KernelSpec, hp: &HyperParams, x: &[f64], n: usize) -> Matrix {
    let d = spec.input_dim;
    let mut k = Matrix::zeros(n, n);
    for i in 0..n {
        let xi = &x[i * d..(i + 1) * d];
        for j in 0..=i {
            let xj = &x[j * d..(j + 1) * d];
            let v = kernel_eval_unchecked(hp, xi, xj);
            k.set(i, j, v);
            k.set(j, i, v);
        }
    }
    k
}

/// Factorize `K + noise I + jitter I` for the points `x` (flat row-major,
/// `n` rows of `spec.input_dim` coordinates).
///
/// If the factorization fails at the requested jitter, escalates through a
/// relative ladder from `1e-10` to `1e-4` times the mean Gram diagonal and
/// records the rung that succeeded.
pub fn build_gram(
    spec: &KernelSpec,
    hp: &HyperParams,
    x: &[f64],
    jitter: f64,
) -> Result<GramFactorization> {
    hp.validate(spec)?;
    let d = spec.input_dim;
    if x.is_empty() || x.len() % d != 0 {
        return Err(Error::input("point buffer empty or not a multiple of dim"));
    }
    if jitter < 0.0 || !jitter.is_finite() {
        return Err(Error::domain("jitter must be finite and >= 0"));
    }
    let n = x.len() / d;
    let mut k = build_gram_matrix(spec, hp, x, n);
    let mean_diag = (0..n).map(|i| k.get(i, i)).sum::<f64>() / n as f64;
    for i in 0..n {
        k.set(i, i, k.get(i, i) + hp.noise_var + jitter);
    }

    let mut tried = Vec::new();
    let mut extra_prev = 0.0;
    let attempt = |k: &Matrix| -> Option<(Matrix, f64)> {
        linalg::cholesky(k).map(|l| {
            let log_det = linalg::log_det_from_cholesky(&l);
            (l, log_det)
        })
    };

    if let Some((lower, log_det)) = attempt(&k) {
        return Ok(GramFactorization {
            n,
            lower,
            log_det,
            jitter_used: jitter,
        });
    }
    tried.push(jitter);

    for rel in JITTER_LADDER {
        let extra = rel * mean_diag;
        if extra <= jitter {
            continue;
        }
        for i in 0..n {
            k.set(i, i, k.get(i, i) - extra_prev + extra);
        }
        extra_prev = extra;
        tried.push(jitter + extra);
        if let Some((lower, log_det)) = attempt(&k) {
            return Ok(GramFactorization {
                n,
                lower,
                log_det,
                jitter_used: jitter + extra,
            });
        }
    }

    Err(Error::Conditioning {
        message: format!("gram factorization failed for n = {n}"),
        jitter_ladder: tried,
    })
}

/// A trained GP: immutable after construction and cheap to query.
#[derive(Debug, Clone)]
pub struct TrainedGp {
    spec: KernelSpec,
    hp: HyperParams,
    /// Training inputs, flat row-major.
    x: Vec<f64>,
    y: Vec<f64>,
    gram: GramFactorization,
    /// Precomputed weight vector `(K + noise I + jitter I)^{-1} y`.
    alpha: Vec<f64>,
}

impl TrainedGp {
    /// Fit the weight vector for fixed hyperparameters.
    pub fn fit(
        spec: KernelSpec,
        hp: HyperParams,
        x: Vec<f64>,
        y: Vec<f64>,
        jitter: f64,
    ) -> Result<Self> {
        let d = spec.input_dim;
        if x.len() != y.len() * d {
            return Err(Error::input(format!(
                "{} inputs of dim {d} vs {} targets",
                x.len() / d.max(1),
                y.len()
            )));
        }
        let gram = build_gram(&spec, &hp, &x, jitter)?;
        let alpha = gram.solve(&y)?;
        Ok(TrainedGp {
            spec,
            hp,
            x,
            y,
            gram,
            alpha,
        })
    }

    pub fn spec(&self) -> &KernelSpec {
        self.spec_ref()
    }

    #[inline]
    fn spec_ref(&self) -> &KernelSpec {
        &self.spec
    }

    pub fn hyperparams(&self) -> &HyperParams {
        &self.hp
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn input_dim(&self) -> usize {
        self.spec.input_dim
    }

    pub fn targets(&self) -> &[f64] {
        &self.y
    }

    pub fn inputs(&self) -> &[f64] {
        &self.x
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn gram(&self) -> &GramFactorization {
        &self.gram
    }

    #[inline]
    pub(crate) fn input_row(&self, i: usize) -> &[f64] {
        let d = self.spec.input_dim;
        &self.x[i * d..(i + 1) * d]
    }

    fn check_query(&self, xs: &[f64]) -> Result<()> {
        if xs.len() != self.spec.input_dim {
            return Err(Error::input(format!(
                "query dimension {} does not match model dimension {}",
                xs.len(),
                self.spec.input_dim
            )));
        }
        Ok(())
    }

    /// Posterior mean at a query point: `k_*n (K^-1 y)`.
    pub fn posterior_mean(&self, xs: &[f64]) -> Result<f64> {
        self.check_query(xs)?;
        let mut m = 0.0;
        for i in 0..self.n() {
            m += kernel_eval_unchecked(&self.hp, xs, self.input_row(i)) * self.alpha[i];
        }
        Ok(m)
    }

    /// Posterior variance at a query point: `k_** - k_*n K^-1 k_*n^T`.
    ///
    /// Small negative values from round-off (above `-1e-10`) are clamped to
    /// zero; anything below is a conditioning error.
    pub fn posterior_var(&self, xs: &[f64]) -> Result<f64> {
        self.check_query(xs)?;
        let n = self.n();
        let mut kstar = Vec::with_capacity(n);
        for i in 0..n {
            kstar.push(kernel_eval_unchecked(&self.hp, xs, self.input_row(i)));
        }
        let v = linalg::solve_lower(self.gram.lower(), &kstar);
        let kss = kernel_eval_unchecked(&self.hp, xs, xs);
        let var = kss - linalg::dot(&v, &v);
        if var < -VAR_CLAMP_TOL {
            return Err(Error::Conditioning {
                message: format!("posterior variance {var:.3e} below tolerance"),
                jitter_ladder: alloc::vec![self.gram.jitter_used()],
            });
        }
        Ok(var.max(0.0))
    }
}

/// Negative log marginal likelihood (the quantity to minimize):
/// `1/2 log|K| + 1/2 y^T K^-1 y + n/2 log 2pi`.
pub fn nlml(spec: &KernelSpec, hp: &HyperParams, x: &[f64], y: &[f64]) -> Result<f64> {
    let d = spec.input_dim;
    if x.len() != y.len() * d || y.is_empty() {
        return Err(Error::input("nlml needs n >= 1 matching inputs/targets"));
    }
    let gram = build_gram(spec, hp, x, 0.0)?;
    let alpha = gram.solve(y)?;
    Ok(nlml_from_parts(&gram, y, &alpha))
}

/// NLML from an existing factorization and weight vector.
pub fn nlml_from_parts(gram: &GramFactorization, y: &[f64], alpha: &[f64]) -> f64 {
    let n = y.len() as f64;
    0.5 * gram.log_det()
        + 0.5 * linalg::dot(y, alpha)
        + 0.5 * n * (2.0 * core::f64::consts::PI).ln()
}

/// Per-point leave-one-out posterior mean and variance, computed from one
/// full factorization via the rank-one identities
/// `mu_i = y_i - alpha_i / C_ii` and `var_i = 1 / C_ii - (noise + jitter)`
/// with `C = (K + noise I + jitter I)^{-1}`. The noise/jitter subtraction
/// makes `var_i` the latent predictive variance, matching a refit on the
/// reduced training set.
pub fn loo_quantities(
    spec: &KernelSpec,
    hp: &HyperParams,
    x: &[f64],
    y: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let d = spec.input_dim;
    if y.len() < 2 || x.len() != y.len() * d {
        return Err(Error::input("leave-one-out needs n >= 2 matching points"));
    }
    let gram = build_gram(spec, hp, x, 0.0)?;
    let alpha = gram.solve(y)?;
    Ok(loo_from_parts(&gram, hp, y, &alpha))
}

/// LOO quantities from an existing factorization.
pub fn loo_from_parts(
    gram: &GramFactorization,
    hp: &HyperParams,
    y: &[f64],
    alpha: &[f64],
) -> Vec<(f64, f64)> {
    let cdiag = linalg::inverse_diagonal(gram.lower());
    let shift = hp.noise_var + gram.jitter_used();
    y.iter()
        .zip(alpha)
        .zip(&cdiag)
        .map(|((&yi, &ai), &cii)| (yi - ai / cii, 1.0 / cii - shift))
        .collect()
}
