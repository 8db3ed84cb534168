//! Finite truncations of the three families: basis enumeration, matrix
//! embedding, Lie bracket and the bracket-continuity ratio.

use crate::error::{Error, Result};
use crate::family::Family;
use crate::scaling::ScalingSequence;
use crate::vector::{AlgebraVector, BasisIndex};
use nalgebra::DMatrix;

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// A family together with a scaling and a truncation level `N`; all indices
/// are `<= N`. Owns the deterministic basis enumeration:
/// lexicographic in `(i,j)` for the general family and lexicographic in
/// `(j,i)` for the orthogonal/triangular families, so the basis at level `N`
/// is a prefix of the basis at level `N+1`.
#[derive(Debug, Clone)]
pub struct TruncatedAlgebra {
    family: Family,
    scaling: ScalingSequence,
    n: u32,
    basis: Vec<BasisIndex>,
}

impl TruncatedAlgebra {
    pub fn new(family: Family, scaling: ScalingSequence, n: u32) -> Self {
        assert!(n >= 1, "truncation level must be at least 1");
        let mut basis = Vec::with_capacity(family.dimension(n));
        match family {
            Family::GeneralHS => {
                for i in 1..=n {
                    for j in 1..=n {
                        basis.push(BasisIndex::new(i, j));
                    }
                }
            }
            Family::OrthogonalHS | Family::TriangularHS => {
                for j in 1..=n {
                    for i in 1..j {
                        basis.push(BasisIndex::new(i, j));
                    }
                }
            }
        }
        debug_assert_eq!(basis.len(), family.dimension(n));
        TruncatedAlgebra { family, scaling, n, basis }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn scaling(&self) -> &ScalingSequence {
        &self.scaling
    }

    pub fn truncation(&self) -> u32 {
        self.n
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// The admissible pairs with both indices `<= N`, in the documented order.
    pub fn basis_indices(&self) -> &[BasisIndex] {
        &self.basis
    }

    /// Position of `idx` in [`basis_indices`](Self::basis_indices).
    pub fn basis_position(&self, idx: BasisIndex) -> Option<usize> {
        if !self.family.admits(idx.i, idx.j) || idx.upper() > self.n {
            return None;
        }
        let (i, j, n) = (idx.i as usize, idx.j as usize, self.n as usize);
        Some(match self.family {
            Family::GeneralHS => (i - 1) * n + (j - 1),
            Family::OrthogonalHS | Family::TriangularHS => (j - 1) * (j - 2) / 2 + (i - 1),
        })
    }

    pub fn basis_vector(&self, i: u32, j: u32) -> Result<AlgebraVector> {
        if self.n < i.max(j) {
            return Err(Error::IndexOutOfRange { i, j, n: self.n });
        }
        AlgebraVector::basis(self.family, i, j)
    }

    fn lambda(&self, i: u32) -> f64 {
        self.scaling.lambda(i)
    }

    /// Dense `N x N` image of `x` under the basis embedding:
    /// `xi_ij -> l_i l_j e_ij` for the general and triangular families,
    /// `xi_ij -> l_i l_j (e_ij - e_ji)/sqrt(2)` for the orthogonal family.
    pub fn embed_matrix(&self, x: &AlgebraVector) -> Result<DMatrix<f64>> {
        if x.family() != self.family {
            return Err(Error::FamilyMismatch(x.family(), self.family));
        }
        let n = self.n as usize;
        let mut m = DMatrix::zeros(n, n);
        for (idx, c) in x.iter() {
            if idx.upper() > self.n {
                return Err(Error::IndexOutOfRange { i: idx.i, j: idx.j, n: self.n });
            }
            let w = c * self.lambda(idx.i) * self.lambda(idx.j);
            let (r, s) = (idx.i as usize - 1, idx.j as usize - 1);
            match self.family {
                Family::GeneralHS | Family::TriangularHS => m[(r, s)] += w,
                Family::OrthogonalHS => {
                    m[(r, s)] += w / SQRT2;
                    m[(s, r)] -= w / SQRT2;
                }
            }
        }
        Ok(m)
    }

    /// Inverse of [`embed_matrix`](Self::embed_matrix) as an orthogonal
    /// projection: exact when `m` lies in the embedded span.
    pub fn project_matrix(&self, m: &DMatrix<f64>) -> AlgebraVector {
        let mut x = AlgebraVector::zero(self.family);
        for &idx in &self.basis {
            let (r, s) = (idx.i as usize - 1, idx.j as usize - 1);
            let w = self.lambda(idx.i) * self.lambda(idx.j);
            let c = match self.family {
                Family::GeneralHS | Family::TriangularHS => m[(r, s)] / w,
                Family::OrthogonalHS => (m[(r, s)] - m[(s, r)]) / (SQRT2 * w),
            };
            x.add_coeff(idx, c);
        }
        x
    }

    /// Bracket of two basis vectors, written into `out`.
    ///
    /// General/triangular: `[xi_ij, xi_km] = d_jk l_j^2 xi_im - d_im l_i^2 xi_kj`;
    /// orthogonal: the four-term `1/sqrt(2)`-weighted expansion. For the
    /// orthogonal and triangular families components at pairs with `i >= j`
    /// are dropped (`xi_ij = 0` convention), which `add_coeff` performs.
    pub fn bracket_basis(&self, a: BasisIndex, b: BasisIndex, scale: f64, out: &mut AlgebraVector) {
        let (i, j, k, m) = (a.i, a.j, b.i, b.j);
        match self.family {
            Family::GeneralHS | Family::TriangularHS => {
                if j == k {
                    let l = self.lambda(j);
                    out.add_coeff(BasisIndex::new(i, m), scale * l * l);
                }
                if i == m {
                    let l = self.lambda(i);
                    out.add_coeff(BasisIndex::new(k, j), -scale * l * l);
                }
            }
            Family::OrthogonalHS => {
                let s = scale / SQRT2;
                if j == k {
                    let l2 = self.lambda(j) * self.lambda(j);
                    out.add_coeff(BasisIndex::new(i, m), s * l2);
                }
                if j == m {
                    let l2 = self.lambda(j) * self.lambda(j);
                    out.add_coeff(BasisIndex::new(k, i), s * l2);
                    out.add_coeff(BasisIndex::new(i, k), -s * l2);
                }
                if i == k {
                    let l2 = self.lambda(i) * self.lambda(i);
                    out.add_coeff(BasisIndex::new(m, j), s * l2);
                    out.add_coeff(BasisIndex::new(j, m), -s * l2);
                }
                if i == m {
                    let l2 = self.lambda(i) * self.lambda(i);
                    out.add_coeff(BasisIndex::new(k, j), -s * l2);
                }
            }
        }
    }

    /// Bilinear extension of the per-family basis bracket.
    pub fn bracket(&self, x: &AlgebraVector, y: &AlgebraVector) -> Result<AlgebraVector> {
        if x.family() != self.family {
            return Err(Error::FamilyMismatch(x.family(), self.family));
        }
        if y.family() != self.family {
            return Err(Error::FamilyMismatch(y.family(), self.family));
        }
        let mut out = AlgebraVector::zero(self.family);
        for (a, ca) in x.iter() {
            for (b, cb) in y.iter() {
                self.bracket_basis(a, b, ca * cb, &mut out);
            }
        }
        Ok(out)
    }

    /// `|[x,y]| / (|x||y|)`; the continuity theorem bounds this by
    /// `2 (sup l_i)^2` for product-form scalings.
    pub fn bracket_bound_ratio(&self, x: &AlgebraVector, y: &AlgebraVector) -> Result<f64> {
        let (nx, ny) = (x.norm(), y.norm());
        if nx == 0.0 || ny == 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok(self.bracket(x, y)?.norm() / (nx * ny))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(family: Family, n: u32) -> TruncatedAlgebra {
        TruncatedAlgebra::new(family, ScalingSequence::constant(1.0).unwrap(), n)
    }

    #[test]
    fn basis_enumeration() {
        let g = alg(Family::GeneralHS, 2);
        let pairs: Vec<_> = g.basis_indices().iter().map(|b| (b.i, b.j)).collect();
        assert_eq!(pairs, vec![(1, 1), (1, 2), (2, 1), (2, 2)]);

        let o = alg(Family::OrthogonalHS, 3);
        let pairs: Vec<_> = o.basis_indices().iter().map(|b| (b.i, b.j)).collect();
        assert_eq!(pairs, vec![(1, 2), (1, 3), (2, 3)]);

        let t = alg(Family::TriangularHS, 4);
        assert_eq!(t.basis_indices().len(), 6);

        for a in [&g, &o, &t] {
            for (p, &idx) in a.basis_indices().iter().enumerate() {
                assert_eq!(a.basis_position(idx), Some(p));
            }
        }
    }

    #[test]
    fn embed_examples() {
        let g = alg(Family::GeneralHS, 2);
        let x = g.basis_vector(1, 2).unwrap();
        let m = g.embed_matrix(&x).unwrap();
        assert_eq!(m[(0, 1)], 1.0);
        assert_eq!(m.iter().map(|v| v * v).sum::<f64>(), 1.0);

        let o = alg(Family::OrthogonalHS, 2);
        let x = o.basis_vector(1, 2).unwrap();
        let m = o.embed_matrix(&x).unwrap();
        assert!((m[(0, 1)] - 1.0 / SQRT2).abs() < 1e-15);
        assert!((m[(1, 0)] + 1.0 / SQRT2).abs() < 1e-15);

        // l_i = 1/i: entry is l_1 l_2 = 1/2
        let s = ScalingSequence::power(1.0).unwrap();
        let g = TruncatedAlgebra::new(Family::GeneralHS, s, 2);
        let m = g.embed_matrix(&g.basis_vector(1, 2).unwrap()).unwrap();
        assert!((m[(0, 1)] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn embed_out_of_range() {
        let g = alg(Family::GeneralHS, 2);
        let x = AlgebraVector::basis(Family::GeneralHS, 1, 3).unwrap();
        assert!(matches!(g.embed_matrix(&x), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn project_inverts_embed() {
        for family in [Family::GeneralHS, Family::OrthogonalHS, Family::TriangularHS] {
            let a = TruncatedAlgebra::new(family, ScalingSequence::power(1.0).unwrap(), 4);
            let x = AlgebraVector::from_entries(family, [((1, 2), 0.7), ((2, 4), -1.3)]).unwrap();
            let back = a.project_matrix(&a.embed_matrix(&x).unwrap());
            assert!(back.sub(&x).unwrap().norm() < 1e-14);
        }
    }

    #[test]
    fn bracket_examples() {
        let g = alg(Family::GeneralHS, 3);
        let x = g.basis_vector(1, 2).unwrap();
        let y = g.basis_vector(2, 3).unwrap();
        let b = g.bracket(&x, &y).unwrap();
        assert_eq!(b.coeff(BasisIndex::new(1, 3)), 1.0);
        assert_eq!(b.nnz(), 1);

        // [x,x] = 0
        assert!(g.bracket(&x, &x).unwrap().is_zero());

        let o = alg(Family::OrthogonalHS, 3);
        let x = o.basis_vector(1, 2).unwrap();
        let y = o.basis_vector(1, 3).unwrap();
        let b = o.bracket(&x, &y).unwrap();
        assert!((b.coeff(BasisIndex::new(2, 3)) + 1.0 / SQRT2).abs() < 1e-15);
        assert_eq!(b.nnz(), 1);
    }

    #[test]
    fn bracket_diagonal_output() {
        // general family admits diagonal outputs: [xi_12, xi_21] = xi_11 - xi_22
        let g = alg(Family::GeneralHS, 2);
        let b = g.bracket(&g.basis_vector(1, 2).unwrap(), &g.basis_vector(2, 1).unwrap()).unwrap();
        assert_eq!(b.coeff(BasisIndex::new(1, 1)), 1.0);
        assert_eq!(b.coeff(BasisIndex::new(2, 2)), -1.0);
    }

    #[test]
    fn bound_ratio() {
        let g = alg(Family::GeneralHS, 3);
        let x = g.basis_vector(1, 2).unwrap();
        let y = g.basis_vector(2, 3).unwrap();
        assert!((g.bracket_bound_ratio(&x, &y).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(
            g.bracket_bound_ratio(&AlgebraVector::zero(Family::GeneralHS), &y),
            Err(Error::ZeroNorm)
        ));
    }
}
