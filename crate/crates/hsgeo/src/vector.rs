//! Sparse coefficient vectors over the weighted orthonormal basis.

use crate::error::{Error, Result};
use crate::family::Family;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// An ordered pair `(i,j)` naming the basis vector `xi_ij`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BasisIndex {
    pub i: u32,
    pub j: u32,
}

impl BasisIndex {
    pub fn new(i: u32, j: u32) -> Self {
        BasisIndex { i, j }
    }

    /// The larger of the two indices.
    pub fn upper(&self) -> u32 {
        self.i.max(self.j)
    }
}

impl std::fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

/// A finite real linear combination of basis vectors `xi_ij`, stored as a
/// sparse map of coordinates. The `xi` basis is orthonormal in the weighted
/// inner product, so `|x|^2` is the plain sum of squared coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraVector {
    family: Family,
    coefficients: BTreeMap<BasisIndex, f64>,
}

impl AlgebraVector {
    pub fn zero(family: Family) -> Self {
        AlgebraVector { family, coefficients: BTreeMap::new() }
    }

    /// The basis vector `xi_ij` itself.
    pub fn basis(family: Family, i: u32, j: u32) -> Result<Self> {
        if !family.admits(i, j) {
            return Err(Error::InadmissibleIndex { i, j, family });
        }
        let mut v = Self::zero(family);
        v.coefficients.insert(BasisIndex::new(i, j), 1.0);
        Ok(v)
    }

    pub fn from_entries(
        family: Family,
        entries: impl IntoIterator<Item = ((u32, u32), f64)>,
    ) -> Result<Self> {
        let mut v = Self::zero(family);
        for ((i, j), c) in entries {
            if !family.admits(i, j) {
                return Err(Error::InadmissibleIndex { i, j, family });
            }
            v.add_coeff(BasisIndex::new(i, j), c);
        }
        Ok(v)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn coeff(&self, idx: BasisIndex) -> f64 {
        self.coefficients.get(&idx).copied().unwrap_or(0.0)
    }

    /// Accumulate a coefficient. Indices that are inadmissible for the family
    /// are dropped: this is the `xi_ij = 0` convention for `i >= j` in the
    /// orthogonal and triangular families.
    pub fn add_coeff(&mut self, idx: BasisIndex, c: f64) {
        if c == 0.0 || !self.family.admits(idx.i, idx.j) {
            return;
        }
        let slot = self.coefficients.entry(idx).or_insert(0.0);
        *slot += c;
        if *slot == 0.0 {
            self.coefficients.remove(&idx);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (BasisIndex, f64)> + '_ {
        self.coefficients.iter().map(|(&k, &v)| (k, v))
    }

    pub fn nnz(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Largest index appearing in the support (0 for the zero vector).
    pub fn max_index(&self) -> u32 {
        self.coefficients.keys().map(|k| k.upper()).max().unwrap_or(0)
    }

    pub fn scaled(&self, a: f64) -> Self {
        let mut out = Self::zero(self.family);
        for (k, v) in self.iter() {
            out.add_coeff(k, a * v);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_family(other)?;
        let mut out = self.clone();
        for (k, v) in other.iter() {
            out.add_coeff(k, v);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scaled(-1.0))
    }

    /// Add `a * other` in place.
    pub fn axpy(&mut self, a: f64, other: &Self) {
        debug_assert_eq!(self.family, other.family);
        for (k, v) in other.iter() {
            self.add_coeff(k, a * v);
        }
    }

    /// Weighted inner product; the `xi` basis is orthonormal so this is the
    /// coefficient dot product over shared indices.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        self.check_family(other)?;
        // iterate over the sparser operand
        let (small, big) = if self.nnz() <= other.nnz() { (self, other) } else { (other, self) };
        Ok(small.iter().map(|(k, v)| v * big.coeff(k)).sum())
    }

    pub fn norm(&self) -> f64 {
        self.iter().map(|(_, v)| v * v).sum::<f64>().sqrt()
    }

    fn check_family(&self, other: &Self) -> Result<()> {
        if self.family != other.family {
            return Err(Error::FamilyMismatch(self.family, other.family));
        }
        Ok(())
    }
}
