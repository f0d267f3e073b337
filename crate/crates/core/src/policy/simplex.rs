use std::ops::Deref;

use crate::policy::PolicyError;
use crate::scalar::{Real, Scalar};

/// A probability vector over an infostate's legal actions.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplexVector<T>(Vec<T>);

impl<T: Scalar> SimplexVector<T> {
    /// Validates non-negativity and a unit sum within 1e-9.
    pub fn new(probs: Vec<T>) -> Result<Self, PolicyError> {
        if probs.is_empty() {
            return Err(PolicyError::NotOnSimplex("empty vector".into()));
        }
        if probs.iter().any(|p| p.is_nan_value() || *p < T::zero()) {
            return Err(PolicyError::NotOnSimplex(format!("{probs:?}")));
        }
        let total: T = probs.iter().copied().sum();
        let gap = (total - T::one()).abs_value().to_f64().unwrap_or(f64::INFINITY);
        if gap > 1e-9 {
            return Err(PolicyError::NotOnSimplex(format!("sum {total}")));
        }
        Ok(SimplexVector(probs))
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0);
        SimplexVector(vec![T::one() / T::from_count(n); n])
    }

    /// Probability one on `action`.
    pub fn pure(n: usize, action: usize) -> Self {
        let mut v = vec![T::zero(); n];
        v[action] = T::one();
        SimplexVector(v)
    }

    pub(crate) fn from_unchecked(probs: Vec<T>) -> Self {
        SimplexVector(probs)
    }

    pub fn into_inner(self) -> Vec<T> {
        self.0
    }
}

impl<T> Deref for SimplexVector<T> {
    type Target = [T];

    fn deref(&self) -> &[T] {
        &self.0
    }
}

/// Euclidean projection onto the probability simplex.
///
/// Sort-based thresholding: with `u` sorted descending, the support size is
/// the largest `k` with `u_k - (sum_{j<=k} u_j - 1) / k > 0` and the output is
/// `max(v - tau, 0)`. Vectors already on the simplex (within
/// [`Scalar::simplex_slack`]) are returned unchanged, which makes the
/// projection exactly idempotent.
pub fn project_l2_simplex<T: Scalar>(v: &[T]) -> Result<SimplexVector<T>, PolicyError> {
    if v.is_empty() {
        return Err(PolicyError::NotOnSimplex("empty vector".into()));
    }
    if v.iter().any(|x| !x.is_finite_value()) {
        return Err(PolicyError::NonFinite);
    }
    let n = v.len();
    if v.iter().all(|x| *x == v[0]) {
        return Ok(SimplexVector::uniform(n));
    }
    let total: T = v.iter().copied().sum();
    if v.iter().all(|x| *x >= T::zero()) && (total - T::one()).abs_value() <= T::simplex_slack(n)
    {
        return Ok(SimplexVector(v.to_vec()));
    }

    let mut u = v.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).expect("finite values are ordered"));
    let mut prefix = T::zero();
    let mut tau = T::zero();
    for (k, &uk) in u.iter().enumerate() {
        prefix = prefix + uk;
        let candidate = (prefix - T::one()) / T::from_count(k + 1);
        if uk - candidate > T::zero() {
            tau = candidate;
        } else {
            break;
        }
    }
    Ok(SimplexVector(
        v.iter().map(|&x| (x - tau).max_of(T::zero())).collect(),
    ))
}

/// Numerically stable softmax (max-subtracted).
pub fn softmax<T: Real>(logits: &[T]) -> SimplexVector<T> {
    assert!(!logits.is_empty(), "softmax of an empty vector");
    let max = logits.iter().copied().fold(T::neg_infinity(), T::max);
    let exps: Vec<T> = logits.iter().map(|&x| (x - max).exp()).collect();
    let z: T = exps.iter().copied().sum();
    SimplexVector(exps.into_iter().map(|e| e / z).collect())
}

/// `<d softmax(theta) / d theta, q>` expressed through the policy:
/// component `a` is `pi(a) * (q(a) - pi . q)`, the regret scaled by the
/// policy.
pub fn pg_update_direction<T: Scalar>(pi: &[T], q: &[T]) -> Vec<T> {
    assert_eq!(pi.len(), q.len(), "policy and value lengths differ");
    let baseline: T = pi.iter().zip(q).map(|(&p, &v)| p * v).sum();
    pi.iter().zip(q).map(|(&p, &v)| p * (v - baseline)).collect()
}
