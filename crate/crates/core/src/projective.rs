//! Counting functions and exhaustive enumeration over projective geometries:
//! theta(k), q-binomial coefficients, superspace enumeration, and the
//! independent-extension counting oracles.
//!
//! All counts are arbitrary-precision integers; nothing here overflows or
//! rounds.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::collections::BTreeSet;
use thiserror::Error;

use crate::gf::{all_vectors, FieldContext, GfError, Subspace};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProjectiveError {
    #[error("arguments out of range: {0}")]
    OutOfRange(String),
    #[error(transparent)]
    Gf(#[from] GfError),
}

/// theta(k) = (q^k - 1)/(q - 1): the number of 1-dim subspaces of F_q^k.
pub fn theta(k: u32, q: u64) -> BigUint {
    if k == 0 {
        return BigUint::zero();
    }
    let q = BigUint::from(q);
    (q.pow(k) - BigUint::one()) / (q - BigUint::one())
}

/// The q-binomial coefficient [k choose m]_q: the number of m-dim subspaces
/// of a k-dim space over F_q.
pub fn gaussian_binomial(k: u32, m: u32, q: u64) -> Result<BigUint, ProjectiveError> {
    if m > k {
        return Err(ProjectiveError::OutOfRange(format!("m = {m} > k = {k}")));
    }
    let q = BigUint::from(q);
    let one = BigUint::one();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..m {
        num *= q.pow(k - i) - &one;
        den *= q.pow(i + 1) - &one;
    }
    debug_assert!((&num % &den).is_zero());
    Ok(num / den)
}

/// All d-dim subspaces of F_q^k containing `w`, in canonical order.
///
/// Works by greedy extension: repeatedly adjoin a vector outside the current
/// subspace and deduplicate on the canonical basis. The output length equals
/// [k - dim W choose d - dim W]_q.
pub fn enumerate_superspaces(
    field: &FieldContext,
    w: &Subspace,
    d: usize,
) -> Result<Vec<Subspace>, ProjectiveError> {
    let k = w.ambient_dim();
    if d < w.dim() || d > k {
        return Err(ProjectiveError::OutOfRange(format!(
            "target dim {d} outside [{}, {k}]",
            w.dim()
        )));
    }
    let vectors = all_vectors(field, k);
    let mut current: BTreeSet<Subspace> = BTreeSet::new();
    current.insert(w.clone());
    for _ in w.dim()..d {
        let mut next = BTreeSet::new();
        for space in &current {
            for v in &vectors {
                if !space.contains(field, v)? {
                    next.insert(space.extend(field, v)?);
                }
            }
        }
        current = next;
    }
    Ok(current.into_iter().collect())
}

/// All d-dim subspaces of F_q^k, in canonical order.
pub fn enumerate_subspaces(
    field: &FieldContext,
    k: usize,
    d: usize,
) -> Result<Vec<Subspace>, ProjectiveError> {
    enumerate_superspaces(field, &Subspace::zero(k), d)
}

/// Number of unordered b-sized sets {T_1..T_b} of 1-dim subspaces such that
/// A + T_1 + ... + T_b is a direct sum of dimension a + b, for a fixed a-dim
/// subspace A of F_q^k. Equals prod_{i=0}^{b-1} (theta(k) - theta(a+i)) / b!.
///
/// a = 0 models the zero subspace A.
pub fn count_extension_sets(a: u32, b: u32, k: u32, q: u64) -> Result<BigUint, ProjectiveError> {
    if b < 1 || a + b > k {
        return Err(ProjectiveError::OutOfRange(format!(
            "need 1 <= a + b <= k, got a = {a}, b = {b}, k = {k}"
        )));
    }
    let tk = theta(k, q);
    let mut num = BigUint::one();
    for i in 0..b {
        num *= &tk - theta(a + i, q);
    }
    let mut fact = BigUint::one();
    for i in 1..=b as u64 {
        fact *= i;
    }
    debug_assert!((&num % &fact).is_zero());
    Ok(num / fact)
}

/// Number of 1-dim subspaces T with A' + T = A, where A' is a hyperplane of
/// the a-dim subspace A. Equals q^(a-1).
pub fn count_line_completions(a: u32, q: u64) -> BigUint {
    assert!(a >= 1, "A must have positive dimension");
    BigUint::from(q).pow(a - 1)
}
