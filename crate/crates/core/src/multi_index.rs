//! Multi-indices α ∈ ℕ₀ⁿ and the graded enumeration {α : |α| ≤ N}.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Result};

/// Largest supported dimension.
pub const MAX_DIM: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(components: Vec<u32>) -> Self {
        Self(components)
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    pub fn components(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// |α| = Σ α_j.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    /// ln(α!) = Σ ln(α_j!).
    pub fn ln_factorial(&self) -> f64 {
        self.0.iter().map(|&a| ln_factorial(a)).sum()
    }

    /// α! as an f64; overflows to infinity for large components.
    pub fn factorial(&self) -> f64 {
        self.ln_factorial().exp()
    }

    /// Copy with component `axis` shifted by `delta`, or `None` if it would go negative.
    pub fn shifted(&self, axis: usize, delta: i32) -> Option<Self> {
        let v = self.0[axis] as i64 + delta as i64;
        if v < 0 {
            return None;
        }
        let mut c = self.0.clone();
        c[axis] = v as u32;
        Some(Self(c))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

pub fn ln_factorial(k: u32) -> f64 {
    (2..=k).map(|j| (j as f64).ln()).sum()
}

/// The truncated index set {α ∈ ℕ₀ⁿ : |α| ≤ N} in graded order.
///
/// Within one order, indices are listed with the first component descending,
/// then the second, and so on: for n = 2 the order-2 block is (2,0), (1,1), (0,2).
#[derive(Debug, Clone, PartialEq)]
pub struct GradedBasis {
    dim: usize,
    truncation: u32,
    indices: Vec<MultiIndex>,
    lookup: HashMap<MultiIndex, usize>,
}

impl GradedBasis {
    pub fn new(dim: usize, truncation: u32) -> Result<Arc<Self>> {
        if dim == 0 || dim > MAX_DIM {
            return Err(invalid("dim", format!("must be in 1..={MAX_DIM}, got {dim}")));
        }
        let mut indices = Vec::new();
        for order in 0..=truncation {
            compositions(dim, order, &mut Vec::with_capacity(dim), &mut indices);
        }
        let lookup = indices.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
        Ok(Arc::new(Self {
            dim,
            truncation,
            indices,
            lookup,
        }))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn at(&self, i: usize) -> &MultiIndex {
        &self.indices[i]
    }

    pub fn position(&self, alpha: &MultiIndex) -> Option<usize> {
        self.lookup.get(alpha).copied()
    }

    /// Number of leading entries with |α| ≤ `order` (graded order makes this a prefix).
    pub fn prefix_len(&self, order: u32) -> usize {
        self.indices.partition_point(|a| a.order() <= order)
    }

    /// Eigenvalue 2|α| + n of the Hermite operator on entry `i`.
    pub fn eigenvalue(&self, i: usize) -> f64 {
        (2 * self.indices[i].order() as usize + self.dim) as f64
    }
}

fn compositions(parts: usize, total: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    if parts == 1 {
        prefix.push(total);
        out.push(MultiIndex(prefix.clone()));
        prefix.pop();
        return;
    }
    for first in (0..=total).rev() {
        prefix.push(first);
        compositions(parts - 1, total - first, prefix, out);
        prefix.pop();
    }
}

/// #{α ∈ ℕ₀ⁿ : |α| ≤ N} = C(N + n, n).
pub fn basis_size(dim: usize, truncation: u32) -> usize {
    let mut c: u128 = 1;
    for j in 1..=dim as u128 {
        c = c * (truncation as u128 + j) / j;
    }
    c as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn two_dim_block_order() {
        let b = GradedBasis::new(2, 2).unwrap();
        let got: Vec<_> = b.indices().iter().map(|a| a.components().to_vec()).collect();
        assert_eq!(
            got,
            vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]
        );
    }

    #[test]
    fn factorial_of_multi_index() {
        let a = MultiIndex::new(vec![3, 2]);
        assert!((a.factorial() - 12.0).abs() < 1e-9);
        assert_eq!(a.order(), 5);
    }

    #[test]
    fn rejects_bad_dimension() {
        assert!(GradedBasis::new(0, 3).is_err());
        assert!(GradedBasis::new(4, 3).is_err());
    }

    proptest! {
        #[test]
        fn enumeration_is_total_graded_and_duplicate_free(dim in 1usize..=3, n in 0u32..12) {
            let b = GradedBasis::new(dim, n).unwrap();
            prop_assert_eq!(b.len(), basis_size(dim, n));
            let mut seen = std::collections::HashSet::new();
            let mut last = 0;
            for (i, a) in b.indices().iter().enumerate() {
                prop_assert_eq!(a.order(), a.components().iter().sum::<u32>());
                prop_assert!(a.order() <= n);
                prop_assert!(a.order() >= last);
                last = a.order();
                prop_assert!(seen.insert(a.clone()));
                prop_assert_eq!(b.position(a), Some(i));
            }
            for k in 0..=n {
                let p = b.prefix_len(k);
                prop_assert_eq!(p, basis_size(dim, k));
            }
        }
    }
}
