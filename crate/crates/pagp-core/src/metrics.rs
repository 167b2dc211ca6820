//! Shared evaluation metrics.

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Relative L2 error: `||pred - truth||_2 / ||truth||_2`.
pub fn relative_l2(pred: &[f64], truth: &[f64]) -> Result<f64> {
    if pred.len() != truth.len() || pred.is_empty() {
        return Err(Error::Metric(alloc::format!(
            "length mismatch: {} vs {}",
            pred.len(),
            truth.len()
        )));
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for (p, t) in pred.iter().zip(truth) {
        let d = p - t;
        num += d * d;
        den += t * t;
    }
    if den == 0.0 {
        return Err(Error::Metric("zero-norm reference".into()));
    }
    Ok((num / den).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn exact_prediction_gives_zero() {
        let t = vec![1.0, -2.0, 3.0];
        assert_eq!(relative_l2(&t, &t).unwrap(), 0.0);
    }

    #[test]
    fn doubled_prediction_gives_one() {
        let t = vec![1.0, -2.0, 3.0];
        let p: Vec<f64> = t.iter().map(|v| 2.0 * v).collect();
        assert!((relative_l2(&p, &t).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unit_basis_perturbation_closed_form() {
        // uniform truth c, perturbation e_1 * ||truth|| / sqrt(n):
        // relative error = ||truth||/sqrt(n) / ||truth|| = 1/sqrt(n)
        let n = 16;
        let c = 2.5;
        let truth = vec![c; n];
        let norm = (n as f64).sqrt() * c;
        let mut pred = truth.clone();
        pred[0] += norm / (n as f64).sqrt();
        let val = relative_l2(&pred, &truth).unwrap();

        // direct-summation oracle
        let mut num = 0.0;
        let mut den = 0.0;
        for (p, t) in pred.iter().zip(&truth) {
            num += (p - t) * (p - t);
            den += t * t;
        }
        let oracle = (num / den).sqrt();
        assert!((val - oracle).abs() < 1e-15);
        assert!((val - 1.0 / (n as f64).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn zero_norm_truth_is_an_error() {
        assert!(matches!(
            relative_l2(&[1.0], &[0.0]),
            Err(Error::Metric(_))
        ));
    }
}
