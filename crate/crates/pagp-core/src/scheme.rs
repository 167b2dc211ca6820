//! Time discretization schemes for the discrete-time model.

use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeKind {
    ForwardEuler,
    AdamsBashforth2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeSpec {
    pub kind: SchemeKind,
    pub dt: f64,
}

impl SchemeSpec {
    pub fn new(kind: SchemeKind, dt: f64) -> Self {
        SchemeSpec { kind, dt }
    }

    /// Number of marching steps covering `[0, horizon]`; the horizon must sit
    /// within half a step of the time grid.
    pub fn n_steps(&self, horizon: f64) -> Result<usize> {
        if !(self.dt > 0.0) || self.dt > horizon + 1e-12 {
            return Err(Error::input("step size must satisfy 0 < dt <= horizon"));
        }
        let ratio = horizon / self.dt;
        let steps = ratio.round();
        if (ratio - steps).abs() > 0.5 {
            return Err(Error::input("horizon is not aligned with the time grid"));
        }
        Ok(steps as usize)
    }
}

/// Advance one time layer: given values `u_prev` and residual-operator
/// evaluations `f_prev = T_x u` at the same sites (plus `f_prev2` from the
/// layer before, required by the two-step scheme), produce the next layer's
/// values.
///
/// Forward Euler: `u_next = u_prev + dt f_prev`.
/// Adams-Bashforth 2: `u_next = u_prev + dt (3/2 f_prev - 1/2 f_prev2)`.
pub fn scheme_step(
    kind: SchemeKind,
    dt: f64,
    u_prev: &[f64],
    f_prev: &[f64],
    f_prev2: Option<&[f64]>,
) -> Result<Vec<f64>> {
    if u_prev.len() != f_prev.len() {
        return Err(Error::input("value/operator site counts differ"));
    }
    match kind {
        SchemeKind::ForwardEuler => Ok(u_prev
            .iter()
            .zip(f_prev)
            .map(|(u, f)| u + dt * f)
            .collect()),
        SchemeKind::AdamsBashforth2 => {
            let f2 = f_prev2.ok_or_else(|| {
                Error::input("Adams-Bashforth 2 requires one history layer")
            })?;
            if f2.len() != u_prev.len() {
                return Err(Error::input("history layer site count differs"));
            }
            Ok(u_prev
                .iter()
                .zip(f_prev)
                .zip(f2)
                .map(|((u, f1), f0)| u + dt * (1.5 * f1 - 0.5 * f0))
                .collect())
        }
    }
}
