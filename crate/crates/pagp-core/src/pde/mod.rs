//! PDE problem definitions, point sampling, and noise injection.
//!
//! A problem couples an operator template `T_x^lambda` (the right-hand side
//! of `u_t = T_x^lambda u`), an axis-aligned spatial box, a time horizon,
//! Dirichlet boundary data, an initial profile, and where available a
//! closed-form reference solution used to label test and observation points.

pub mod analytic;

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::rng::seeded_rng;
pub use analytic::{AnalyticSolution, SolutionJet};

/// Axis-aligned box in `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Domain {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        assert_eq!(lo.len(), hi.len());
        Domain { lo, hi }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(v, (lo, hi))| *v >= *lo && *v <= *hi)
    }

    pub fn strictly_interior(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(v, (lo, hi))| *v > *lo && *v < *hi)
    }

    pub fn on_boundary(&self, x: &[f64]) -> bool {
        self.contains(x)
            && x.iter()
                .zip(self.lo.iter().zip(&self.hi))
                .any(|(v, (lo, hi))| *v == *lo || *v == *hi)
    }
}

/// The operator families used by the experiments; coefficients are
/// interpreted per family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorTemplate {
    /// `T u = lambda * laplace u` (coefficient: diffusivity).
    Diffusion,
    /// `T u = -c * u_x`, one spatial dimension (coefficient: advection speed).
    Advection,
    /// `T u = -u u_x + nu u_xx`, one spatial dimension (coefficient: viscosity).
    Burgers,
}

impl OperatorTemplate {
    pub fn n_coeffs(&self) -> usize {
        1
    }

    /// Whether the residual needs second spatial derivatives.
    pub fn needs_hessian(&self) -> bool {
        !matches!(self, OperatorTemplate::Advection)
    }

    /// Whether the residual needs the solution value itself (nonlinear terms).
    pub fn needs_value(&self) -> bool {
        matches!(self, OperatorTemplate::Burgers)
    }

    /// Evaluate `T_x^lambda u` from pointwise solution data.
    pub fn apply(&self, u: f64, grad: &[f64], hess_diag: &[f64], coeffs: &[f64]) -> f64 {
        match self {
            OperatorTemplate::Diffusion => coeffs[0] * hess_diag.iter().sum::<f64>(),
            OperatorTemplate::Advection => -coeffs[0] * grad[0],
            OperatorTemplate::Burgers => -u * grad[0] + coeffs[0] * hess_diag[0],
        }
    }
}

/// Role of a point collection in training or evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointRole {
    Boundary,
    Initial,
    Collocation,
    Test,
    Observation,
}

/// Tagged collection of space-time sites with optional targets.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    pub role: PointRole,
    dim: usize,
    /// Spatial coordinates, flat row-major (`n * dim`).
    pub xs: Vec<f64>,
    pub ts: Vec<f64>,
    pub targets: Option<Vec<f64>>,
}

impl PointSet {
    pub fn new(
        role: PointRole,
        dim: usize,
        xs: Vec<f64>,
        ts: Vec<f64>,
        targets: Option<Vec<f64>>,
    ) -> Result<Self> {
        if dim == 0 || xs.len() != ts.len() * dim {
            return Err(Error::input("point set shape mismatch"));
        }
        match (role, &targets) {
            (PointRole::Collocation, Some(_)) => {
                return Err(Error::input("collocation points carry no targets"))
            }
            (PointRole::Collocation, None) => {}
            (_, None) => return Err(Error::input("non-collocation points need targets")),
            (_, Some(t)) if t.len() != ts.len() => {
                return Err(Error::input("target count mismatch"))
            }
            _ => {}
        }
        Ok(PointSet {
            role,
            dim,
            xs,
            ts,
            targets,
        })
    }

    pub fn n(&self) -> usize {
        self.ts.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn site_x(&self, i: usize) -> &[f64] {
        &self.xs[i * self.dim..(i + 1) * self.dim]
    }

    pub fn site_t(&self, i: usize) -> f64 {
        self.ts[i]
    }

    /// Inputs for the continuous model: each row is `(x_1..x_d, t)`.
    pub fn spacetime_inputs(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n() * (self.dim + 1));
        for i in 0..self.n() {
            out.extend_from_slice(self.site_x(i));
            out.push(self.ts[i]);
        }
        out
    }

    /// Inputs for the discrete model: spatial coordinates only.
    pub fn spatial_inputs(&self) -> Vec<f64> {
        self.xs.clone()
    }
}

/// Problem descriptor for `u_t - T_x^lambda u = 0` on a box with Dirichlet
/// boundary data `g`, initial profile `h`, and horizon `T`.
#[derive(Debug, Clone)]
pub struct PdeProblem {
    pub name: String,
    pub template: OperatorTemplate,
    pub domain: Domain,
    pub horizon: f64,
    /// Current coefficient values (true values for data generation).
    pub coeffs: Vec<f64>,
    /// Per-coefficient unknown flags for inverse problems.
    pub unknown_mask: Vec<bool>,
    /// Amplitude of the initial profile (used by the advection family).
    amp: f64,
    analytic: Option<AnalyticSolution>,
}

/// The five experiment problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinProblem {
    Heat1D,
    Burgers1D,
    Heat2D,
    Advection1D,
    AdvectionScaled,
}

impl BuiltinProblem {
    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "heat1d" => BuiltinProblem::Heat1D,
            "burgers1d" => BuiltinProblem::Burgers1D,
            "heat2d" => BuiltinProblem::Heat2D,
            "advection1d" => BuiltinProblem::Advection1D,
            "advection_scaled" => BuiltinProblem::AdvectionScaled,
            other => {
                return Err(Error::input(format!("unknown problem name: {other}")))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            BuiltinProblem::Heat1D => "heat1d",
            BuiltinProblem::Burgers1D => "burgers1d",
            BuiltinProblem::Heat2D => "heat2d",
            BuiltinProblem::Advection1D => "advection1d",
            BuiltinProblem::AdvectionScaled => "advection_scaled",
        }
    }
}

/// Construct one of the five experiment problems with its reference solution.
pub fn builtin_problem(which: BuiltinProblem) -> PdeProblem {
    match which {
        BuiltinProblem::Heat1D => PdeProblem::assemble(
            which.name(),
            OperatorTemplate::Diffusion,
            Domain::new(vec![-PI / 2.0], vec![PI / 2.0]),
            1.0,
            vec![1.0],
            1.0,
        ),
        BuiltinProblem::Burgers1D => PdeProblem::assemble(
            which.name(),
            OperatorTemplate::Burgers,
            Domain::new(vec![-1.0], vec![1.0]),
            0.5,
            vec![0.3],
            1.0,
        ),
        BuiltinProblem::Heat2D => PdeProblem::assemble(
            which.name(),
            OperatorTemplate::Diffusion,
            Domain::new(vec![0.0, 0.0], vec![PI, PI]),
            0.5,
            vec![1.0],
            1.0,
        ),
        BuiltinProblem::Advection1D => PdeProblem::assemble(
            which.name(),
            OperatorTemplate::Advection,
            Domain::new(vec![0.0], vec![1.0]),
            0.5,
            vec![1.0],
            2.0,
        ),
        BuiltinProblem::AdvectionScaled => PdeProblem::assemble(
            which.name(),
            OperatorTemplate::Advection,
            Domain::new(vec![0.0], vec![1.0]),
            0.5,
            vec![1.0],
            2000.0,
        ),
    }
}

impl PdeProblem {
    fn assemble(
        name: &str,
        template: OperatorTemplate,
        domain: Domain,
        horizon: f64,
        coeffs: Vec<f64>,
        amp: f64,
    ) -> Self {
        let analytic = Self::analytic_for(template, &domain, &coeffs, amp);
        PdeProblem {
            name: String::from(name),
            template,
            domain,
            horizon,
            unknown_mask: vec![false; coeffs.len()],
            coeffs,
            amp,
            analytic,
        }
    }

    fn analytic_for(
        template: OperatorTemplate,
        domain: &Domain,
        coeffs: &[f64],
        amp: f64,
    ) -> Option<AnalyticSolution> {
        match template {
            OperatorTemplate::Diffusion => Some(AnalyticSolution::HeatProduct {
                lambda: coeffs[0],
                dim: domain.dim(),
            }),
            OperatorTemplate::Advection => Some(AnalyticSolution::TravelingSine {
                amp,
                speed: coeffs[0],
            }),
            OperatorTemplate::Burgers => {
                (coeffs[0] > 0.0).then(|| AnalyticSolution::burgers(coeffs[0]))
            }
        }
    }

    /// Same problem with new coefficient values; the reference solution is
    /// rebuilt to stay consistent with the new operator.
    pub fn with_coeffs(mut self, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != self.template.n_coeffs() {
            return Err(Error::input("coefficient count does not match template"));
        }
        self.analytic = Self::analytic_for(self.template, &self.domain, &coeffs, self.amp);
        self.coeffs = coeffs;
        Ok(self)
    }

    /// Flag coefficients as unknown for inverse runs.
    pub fn with_unknown_mask(mut self, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != self.coeffs.len() {
            return Err(Error::input("mask length does not match coefficients"));
        }
        self.unknown_mask = mask;
        Ok(self)
    }

    pub fn spatial_dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn n_unknown(&self) -> usize {
        self.unknown_mask.iter().filter(|&&u| u).count()
    }

    pub fn analytic(&self) -> Option<&AnalyticSolution> {
        self.analytic.as_ref()
    }

    /// Signed PDE residual `u_t - T_x^lambda u` from pointwise values.
    pub fn residual(
        &self,
        u: f64,
        u_t: f64,
        grad: &[f64],
        hess_diag: &[f64],
        coeffs: &[f64],
    ) -> Result<f64> {
        if coeffs.len() != self.template.n_coeffs() {
            return Err(Error::input("coefficient count does not match template"));
        }
        Ok(u_t - self.template.apply(u, grad, hess_diag, coeffs))
    }

    /// Residual of the reference solution at an interior point (diagnostic).
    pub fn residual_of_analytic(&self, x: &[f64], t: f64) -> Result<f64> {
        let sol = self
            .analytic
            .as_ref()
            .ok_or_else(|| Error::input("problem has no reference solution"))?;
        let jet = sol.jet(x, t);
        self.residual(jet.value, jet.dt, &jet.grad, &jet.hess_diag, &self.coeffs)
    }

    /// Dirichlet boundary value `g(x, t)`.
    pub fn boundary_value(&self, x: &[f64], t: f64) -> Result<f64> {
        if !self.domain.on_boundary(x) {
            return Err(Error::input("boundary value requested off the boundary"));
        }
        Ok(match self.template {
            // the Burgers experiments pin the ends at zero exactly
            OperatorTemplate::Burgers => 0.0,
            _ => self
                .analytic
                .as_ref()
                .map(|s| s.value(x, t))
                .ok_or_else(|| Error::input("problem has no boundary data source"))?,
        })
    }

    /// Initial profile `h(x)` in the closed form the experiments state.
    pub fn initial_value(&self, x: &[f64]) -> Result<f64> {
        Ok(match self.template {
            OperatorTemplate::Burgers => -(PI * x[0]).sin(),
            OperatorTemplate::Advection => self.amp * (PI * x[0]).sin(),
            OperatorTemplate::Diffusion => x.iter().map(|v| v.sin()).product(),
        })
    }

    /// Reference solution value; input for test/observation targets.
    pub fn analytic_value(&self, x: &[f64], t: f64) -> Result<f64> {
        self.analytic
            .as_ref()
            .map(|s| s.value(x, t))
            .ok_or_else(|| Error::input("problem has no reference solution"))
    }
}

/// How sites are placed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleStrategy {
    UniformRandom(u64),
    EvenGrid,
}

fn linspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![0.5 * (a + b)],
        _ => (0..count)
            .map(|i| a + (b - a) * i as f64 / (count - 1) as f64)
            .collect(),
    }
}

/// Strictly interior evenly spaced grid, `side` points per axis.
pub fn interior_grid(domain: &Domain, side: usize) -> Vec<f64> {
    let d = domain.dim();
    let mut out = Vec::with_capacity(side.pow(d as u32) * d);
    let mut idx = vec![0usize; d];
    loop {
        for j in 0..d {
            let frac = (idx[j] + 1) as f64 / (side + 1) as f64;
            out.push(domain.lo[j] + frac * (domain.hi[j] - domain.lo[j]));
        }
        let mut carry = d;
        for j in (0..d).rev() {
            idx[j] += 1;
            if idx[j] < side {
                carry = j;
                break;
            }
            idx[j] = 0;
        }
        if carry == d {
            break;
        }
    }
    out
}

/// Evenly distributed boundary sites (spatial coordinates only).
pub fn even_boundary_points(domain: &Domain, n: usize) -> Vec<f64> {
    let d = domain.dim();
    let mut out = Vec::with_capacity(n * d);
    if d == 1 {
        for i in 0..n {
            out.push(if i % 2 == 0 { domain.lo[0] } else { domain.hi[0] });
        }
        return out;
    }
    // 2d faces, even split; points evenly spaced along each face diagonal
    let faces = 2 * d;
    let per_face = n.div_ceil(faces);
    let mut count = 0;
    'outer: for face in 0..faces {
        let axis = face / 2;
        let fixed = if face % 2 == 0 {
            domain.lo[axis]
        } else {
            domain.hi[axis]
        };
        let fracs = linspace(0.0, 1.0, per_face);
        for f in fracs {
            if count == n {
                break 'outer;
            }
            for j in 0..d {
                if j == axis {
                    out.push(fixed);
                } else {
                    out.push(domain.lo[j] + f * (domain.hi[j] - domain.lo[j]));
                }
            }
            count += 1;
        }
    }
    out
}

fn grid_side(n: usize, axes: usize) -> Result<usize> {
    let side = (n as f64).powf(1.0 / axes as f64).round() as usize;
    for s in [side.saturating_sub(1), side, side + 1] {
        if s >= 1 && s.pow(axes as u32) == n {
            return Ok(s);
        }
    }
    Err(Error::input(format!(
        "{n} points do not form an even grid over {axes} axes"
    )))
}

/// Sample a point set for a role.
///
/// Targets are filled from the boundary data (`Boundary`), the initial
/// profile (`Initial`), or the reference solution (`Test`/`Observation`);
/// collocation sites carry none. Sampling is deterministic in the seed.
pub fn sample_points(
    problem: &PdeProblem,
    role: PointRole,
    n: usize,
    strategy: SampleStrategy,
    time_slice: Option<f64>,
) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::input("cannot sample an empty point set"));
    }
    if let Some(t0) = time_slice {
        if !(0.0..=problem.horizon).contains(&t0) {
            return Err(Error::input("time slice outside the horizon"));
        }
    }
    let d = problem.spatial_dim();
    let t_end = problem.horizon;
    let dom = &problem.domain;
    let mut xs: Vec<f64> = Vec::with_capacity(n * d);
    let mut ts: Vec<f64> = Vec::with_capacity(n);

    match (role, strategy) {
        (PointRole::Initial, SampleStrategy::UniformRandom(seed)) => {
            let mut rng = seeded_rng(seed);
            for _ in 0..n {
                for j in 0..d {
                    xs.push(rng.gen_range(dom.lo[j]..dom.hi[j]));
                }
                ts.push(0.0);
            }
        }
        (PointRole::Initial, SampleStrategy::EvenGrid) => {
            let side = grid_side(n, d)?;
            let axes: Vec<Vec<f64>> = (0..d)
                .map(|j| linspace(dom.lo[j], dom.hi[j], side))
                .collect();
            push_product(&axes, &mut xs);
            ts.extend(core::iter::repeat(0.0).take(n));
        }
        (PointRole::Boundary, SampleStrategy::UniformRandom(seed)) => {
            let mut rng = seeded_rng(seed);
            for _ in 0..n {
                let face = rng.gen_range(0..2 * d);
                let axis = face / 2;
                for j in 0..d {
                    if j == axis {
                        xs.push(if face % 2 == 0 { dom.lo[j] } else { dom.hi[j] });
                    } else {
                        xs.push(rng.gen_range(dom.lo[j]..dom.hi[j]));
                    }
                }
                ts.push(match time_slice {
                    Some(t0) => t0,
                    None => rng.gen_range(0.0..=t_end),
                });
            }
        }
        (PointRole::Boundary, SampleStrategy::EvenGrid) => {
            if d != 1 || n % 2 != 0 {
                return Err(Error::input(
                    "even boundary grids need one spatial dimension and an even count",
                ));
            }
            let times = linspace(0.0, t_end, n / 2);
            for t in &times {
                xs.push(dom.lo[0]);
                ts.push(*t);
                xs.push(dom.hi[0]);
                ts.push(*t);
            }
        }
        (PointRole::Collocation, SampleStrategy::UniformRandom(seed)) => {
            let mut rng = seeded_rng(seed);
            for _ in 0..n {
                for j in 0..d {
                    let mut v = rng.gen_range(dom.lo[j]..dom.hi[j]);
                    while v <= dom.lo[j] {
                        v = rng.gen_range(dom.lo[j]..dom.hi[j]);
                    }
                    xs.push(v);
                }
                ts.push(match time_slice {
                    Some(t0) => t0,
                    None => t_end - rng.gen_range(0.0..t_end),
                });
            }
        }
        (PointRole::Collocation, SampleStrategy::EvenGrid) => {
            match time_slice {
                Some(t0) => {
                    let side = grid_side(n, d)?;
                    let grid = interior_grid(dom, side);
                    xs.extend_from_slice(&grid);
                    ts.extend(core::iter::repeat(t0).take(n));
                }
                None => {
                    let side = grid_side(n, d + 1)?;
                    let grid = interior_grid(dom, side);
                    let times: Vec<f64> =
                        (1..=side).map(|i| t_end * i as f64 / side as f64).collect();
                    for t in &times {
                        xs.extend_from_slice(&grid);
                        ts.extend(core::iter::repeat(*t).take(side.pow(d as u32)));
                    }
                }
            };
        }
        (PointRole::Test | PointRole::Observation, SampleStrategy::UniformRandom(seed)) => {
            let mut rng = seeded_rng(seed);
            for _ in 0..n {
                for j in 0..d {
                    xs.push(rng.gen_range(dom.lo[j]..dom.hi[j]));
                }
                ts.push(match time_slice {
                    Some(t0) => t0,
                    None => rng.gen_range(0.0..=t_end),
                });
            }
        }
        (PointRole::Test | PointRole::Observation, SampleStrategy::EvenGrid) => {
            match time_slice {
                Some(t0) => {
                    let side = grid_side(n, d)?;
                    let axes: Vec<Vec<f64>> = (0..d)
                        .map(|j| linspace(dom.lo[j], dom.hi[j], side))
                        .collect();
                    push_product(&axes, &mut xs);
                    ts.extend(core::iter::repeat(t0).take(n));
                }
                None => {
                    let side = grid_side(n, d + 1)?;
                    let axes: Vec<Vec<f64>> = (0..d)
                        .map(|j| linspace(dom.lo[j], dom.hi[j], side))
                        .collect();
                    let times = linspace(0.0, t_end, side);
                    let mut spatial = Vec::new();
                    push_product(&axes, &mut spatial);
                    for t in &times {
                        xs.extend_from_slice(&spatial);
                        ts.extend(core::iter::repeat(*t).take(side.pow(d as u32)));
                    }
                }
            };
        }
    }

    let targets = match role {
        PointRole::Collocation => None,
        PointRole::Boundary => {
            let mut v = Vec::with_capacity(n);
            for i in 0..ts.len() {
                v.push(problem.boundary_value(&xs[i * d..(i + 1) * d], ts[i])?);
            }
            Some(v)
        }
        PointRole::Initial => {
            let mut v = Vec::with_capacity(n);
            for i in 0..ts.len() {
                v.push(problem.initial_value(&xs[i * d..(i + 1) * d])?);
            }
            Some(v)
        }
        PointRole::Test | PointRole::Observation => {
            let mut v = Vec::with_capacity(n);
            for i in 0..ts.len() {
                v.push(problem.analytic_value(&xs[i * d..(i + 1) * d], ts[i])?);
            }
            Some(v)
        }
    };

    PointSet::new(role, d, xs, ts, targets)
}

fn push_product(axes: &[Vec<f64>], out: &mut Vec<f64>) {
    let d = axes.len();
    let mut idx = vec![0usize; d];
    loop {
        for j in 0..d {
            out.push(axes[j][idx[j]]);
        }
        let mut carry = d;
        for j in (0..d).rev() {
            idx[j] += 1;
            if idx[j] < axes[j].len() {
                carry = j;
                break;
            }
            idx[j] = 0;
        }
        if carry == d {
            break;
        }
    }
}

/// Multiplicative Gaussian noise: `target += level * |target| * eps` with
/// standard normal `eps`, deterministic in the seed.
pub fn add_noise(ps: &PointSet, level: f64, seed: u64) -> Result<PointSet> {
    if ps.role == PointRole::Collocation {
        return Err(Error::input("collocation points carry no targets to perturb"));
    }
    if level < 0.0 || !level.is_finite() {
        return Err(Error::input("noise level must be finite and >= 0"));
    }
    let targets = ps
        .targets
        .as_ref()
        .ok_or_else(|| Error::input("point set has no targets"))?;
    let mut rng = seeded_rng(seed);
    let noisy: Vec<f64> = targets
        .iter()
        .map(|t| {
            let eps: f64 = StandardNormal.sample(&mut rng);
            t + level * t.abs() * eps
        })
        .collect();
    let mut out = ps.clone();
    out.targets = Some(noisy);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_builtins() -> Vec<PdeProblem> {
        [
            BuiltinProblem::Heat1D,
            BuiltinProblem::Burgers1D,
            BuiltinProblem::Heat2D,
            BuiltinProblem::Advection1D,
            BuiltinProblem::AdvectionScaled,
        ]
        .into_iter()
        .map(builtin_problem)
        .collect()
    }

    #[test]
    fn heat1d_residual_of_given_values_is_zero() {
        let p = builtin_problem(BuiltinProblem::Heat1D);
        // u = e^{-t} sin(x): u_t = hess = -e^{-t} sin(x)
        let (x, t) = (0.4, 0.3);
        let v = (-t as f64).exp() * x.sin();
        let r = p.residual(v, -v, &[0.0], &[-v], &[1.0]).unwrap();
        assert!(r.abs() < 1e-15);
    }

    #[test]
    fn burgers_residual_plug_in() {
        let p = builtin_problem(BuiltinProblem::Burgers1D);
        for mu in [0.01, 0.3, 2.0] {
            let u_t = 0.7;
            let r = p.residual(1.0, u_t, &[1.0], &[0.0], &[mu]).unwrap();
            assert!((r - (u_t + 1.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn advection_residual_of_analytic_is_tiny() {
        let p = builtin_problem(BuiltinProblem::Advection1D);
        let r = p.residual_of_analytic(&[0.37], 0.22).unwrap();
        assert!(r.abs() < 1e-12);
    }

    #[test]
    fn builtin_analytic_values_match_paper_forms() {
        let heat = builtin_problem(BuiltinProblem::Heat1D);
        let v = heat.analytic_value(&[0.5], 0.2).unwrap();
        assert!((v - (-0.2f64).exp() * 0.5f64.sin()).abs() < 1e-15);

        let heat2 = builtin_problem(BuiltinProblem::Heat2D);
        let at0 = heat2.analytic_value(&[0.8, 2.1], 0.0).unwrap();
        assert!((at0 - heat2.initial_value(&[0.8, 2.1]).unwrap()).abs() < 1e-15);

        let scaled = builtin_problem(BuiltinProblem::AdvectionScaled);
        let v = scaled.analytic_value(&[0.5], 0.0).unwrap();
        assert!((v - 2000.0).abs() < 1e-9);
    }

    #[test]
    fn residual_of_analytic_small_on_random_interior_points() {
        use rand::Rng;
        for p in all_builtins() {
            let mut rng = seeded_rng(41);
            let d = p.spatial_dim();
            for _ in 0..100 {
                let x: Vec<f64> = (0..d)
                    .map(|j| {
                        let (lo, hi) = (p.domain.lo[j], p.domain.hi[j]);
                        lo + (hi - lo) * rng.gen_range(0.01..0.99)
                    })
                    .collect();
                let t = rng.gen_range(0.001..p.horizon);
                let r = p.residual_of_analytic(&x, t).unwrap();
                assert!(
                    r.abs() <= 1e-10,
                    "{}: residual {r:.3e} at {x:?}, t={t}",
                    p.name
                );
            }
        }
    }

    #[test]
    fn boundary_and_initial_data_agree_at_corners() {
        for p in all_builtins() {
            let d = p.spatial_dim();
            // corners of the box are boundary points at t = 0
            let n_corners = 1usize << d;
            for c in 0..n_corners {
                let x: Vec<f64> = (0..d)
                    .map(|j| {
                        if (c >> j) & 1 == 0 {
                            p.domain.lo[j]
                        } else {
                            p.domain.hi[j]
                        }
                    })
                    .collect();
                let g = p.boundary_value(&x, 0.0).unwrap();
                let h = p.initial_value(&x).unwrap();
                assert!(
                    (g - h).abs() <= 1e-8,
                    "{}: |g - h| = {} at corner {x:?}",
                    p.name,
                    (g - h).abs()
                );
            }
        }
    }

    #[test]
    fn initial_grid_on_heat1d_matches_expected_sites() {
        let p = builtin_problem(BuiltinProblem::Heat1D);
        let ps = sample_points(&p, PointRole::Initial, 3, SampleStrategy::EvenGrid, None)
            .unwrap();
        let want = [-PI / 2.0, 0.0, PI / 2.0];
        for (i, w) in want.iter().enumerate() {
            assert!((ps.site_x(i)[0] - w).abs() < 1e-15);
            assert_eq!(ps.site_t(i), 0.0);
            let target = ps.targets.as_ref().unwrap()[i];
            assert!((target - w.sin()).abs() < 1e-15);
        }
    }

    #[test]
    fn boundary_targets_match_boundary_data_exactly() {
        let p = builtin_problem(BuiltinProblem::Heat1D);
        let ps = sample_points(
            &p,
            PointRole::Boundary,
            40,
            SampleStrategy::UniformRandom(7),
            None,
        )
        .unwrap();
        let targets = ps.targets.as_ref().unwrap();
        for i in 0..ps.n() {
            let x = ps.site_x(i)[0];
            let t = ps.site_t(i);
            assert!(p.domain.on_boundary(&[x]));
            let expect = (-t).exp() * if x > 0.0 { 1.0 } else { -1.0 };
            assert_eq!(targets[i], p.boundary_value(&[x], t).unwrap());
            assert!((targets[i] - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn collocation_points_are_strictly_interior() {
        for p in all_builtins() {
            let ps = sample_points(
                &p,
                PointRole::Collocation,
                64,
                SampleStrategy::UniformRandom(9),
                None,
            )
            .unwrap();
            assert!(ps.targets.is_none());
            for i in 0..ps.n() {
                assert!(p.domain.strictly_interior(ps.site_x(i)));
                assert!(ps.site_t(i) > 0.0 && ps.site_t(i) <= p.horizon);
            }
        }
    }

    #[test]
    fn sampling_is_deterministic_in_the_seed() {
        let p = builtin_problem(BuiltinProblem::Advection1D);
        let a = sample_points(
            &p,
            PointRole::Observation,
            25,
            SampleStrategy::UniformRandom(1234),
            None,
        )
        .unwrap();
        let b = sample_points(
            &p,
            PointRole::Observation,
            25,
            SampleStrategy::UniformRandom(1234),
            None,
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn even_grid_needs_matching_count() {
        let p = builtin_problem(BuiltinProblem::Heat2D);
        assert!(sample_points(&p, PointRole::Initial, 10, SampleStrategy::EvenGrid, None)
            .is_err());
        assert!(sample_points(&p, PointRole::Initial, 9, SampleStrategy::EvenGrid, None).is_ok());
    }

    #[test]
    fn noise_level_zero_is_identity_and_seeded_noise_repeats() {
        let p = builtin_problem(BuiltinProblem::Heat1D);
        let ps = sample_points(
            &p,
            PointRole::Observation,
            30,
            SampleStrategy::UniformRandom(3),
            None,
        )
        .unwrap();
        let clean = add_noise(&ps, 0.0, 99).unwrap();
        assert_eq!(clean.targets, ps.targets);
        let n1 = add_noise(&ps, 0.01, 99).unwrap();
        let n2 = add_noise(&ps, 0.01, 99).unwrap();
        assert_eq!(n1, n2);
        assert_ne!(n1.targets, ps.targets);
    }

    #[test]
    fn noise_magnitude_matches_the_level_statistically() {
        let p = builtin_problem(BuiltinProblem::Heat1D);
        let ps = sample_points(
            &p,
            PointRole::Observation,
            10_000,
            SampleStrategy::UniformRandom(5),
            None,
        )
        .unwrap();
        let noisy = add_noise(&ps, 0.01, 17).unwrap();
        let clean = ps.targets.as_ref().unwrap();
        let pert = noisy.targets.as_ref().unwrap();
        let mut sq = 0.0;
        let mut count = 0usize;
        for (c, n) in clean.iter().zip(pert) {
            if c.abs() > 1e-9 {
                let rel = (n - c) / c.abs();
                sq += rel * rel;
                count += 1;
            }
        }
        let std = (sq / count as f64).sqrt();
        assert!(
            (std - 0.01).abs() / 0.01 < 0.05,
            "empirical std {std} vs level 0.01"
        );
    }

    #[test]
    fn noise_on_collocation_is_rejected() {
        let p = builtin_problem(BuiltinProblem::Heat1D);
        let ps = sample_points(
            &p,
            PointRole::Collocation,
            8,
            SampleStrategy::UniformRandom(2),
            None,
        )
        .unwrap();
        assert!(matches!(add_noise(&ps, 0.01, 1), Err(Error::Input(_))));
    }

    #[test]
    fn with_coeffs_rebuilds_reference_solution() {
        let p = builtin_problem(BuiltinProblem::Heat1D)
            .with_coeffs(vec![2.5])
            .unwrap();
        let v = p.analytic_value(&[0.3], 0.4).unwrap();
        assert!((v - (-2.5f64 * 0.4).exp() * 0.3f64.sin()).abs() < 1e-15);
        let r = p.residual_of_analytic(&[0.3], 0.4).unwrap();
        assert!(r.abs() < 1e-12);
    }

    #[test]
    fn even_boundary_points_lie_on_the_boundary() {
        for p in all_builtins() {
            let pts = even_boundary_points(&p.domain, 12);
            let d = p.spatial_dim();
            for i in 0..12 {
                assert!(p.domain.on_boundary(&pts[i * d..(i + 1) * d]));
            }
        }
    }
}
