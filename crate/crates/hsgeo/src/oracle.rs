//! Independent brute-force recomputation path. Structure constants are
//! derived by embedding basis vectors as matrices, commutating, and
//! projecting back; the connection comes from the defining half-sum over
//! those constants only; curvature is literal operator composition on
//! coefficient vectors. No formula-level code is shared with the
//! `algebra`/`curvature` modules, so agreement between the two paths is
//! meaningful evidence.

use crate::algebra::TruncatedAlgebra;
use crate::error::{Error, Result};
use crate::vector::AlgebraVector;
use std::collections::BTreeMap;

/// Residual tolerance for projecting commutators onto the embedded basis.
const PROJECTION_TOL: f64 = 1e-12;

/// Sparse coefficient vector over basis positions.
type Coeffs = BTreeMap<usize, f64>;

/// Structure constants `[xi_a, xi_b] = sum_e c_ab^e xi_e`, computed from raw
/// matrix commutators.
pub struct StructureConstants {
    dim: usize,
    table: Vec<Vec<(usize, f64)>>, // (a * dim + b) -> sparse (e, c_ab^e)
}

impl StructureConstants {
    pub fn new(alg: &TruncatedAlgebra) -> Result<Self> {
        let dim = alg.dimension();
        let mut embedded = Vec::with_capacity(dim);
        for &idx in alg.basis_indices() {
            let v = AlgebraVector::basis(alg.family(), idx.i, idx.j)?;
            embedded.push(alg.embed_matrix(&v)?);
        }
        // normalization from the embedding itself, not hard-coded weights
        let norms: Vec<f64> = embedded.iter().map(|e| e.dot(e)).collect();

        let mut table = Vec::with_capacity(dim * dim);
        for a in 0..dim {
            for b in 0..dim {
                let comm = &embedded[a] * &embedded[b] - &embedded[b] * &embedded[a];
                let mut entries = Vec::new();
                for e in 0..dim {
                    let c = comm.dot(&embedded[e]) / norms[e];
                    if c.abs() > 1e-13 {
                        entries.push((e, c));
                    }
                }
                let mut recon = comm.clone();
                for &(e, c) in &entries {
                    recon -= &embedded[e] * c;
                }
                let residual = recon.norm();
                if residual > PROJECTION_TOL * (1.0 + comm.norm()) {
                    return Err(Error::ProjectionResidual { residual, tol: PROJECTION_TOL });
                }
                table.push(entries);
            }
        }
        Ok(StructureConstants { dim, table })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constants(&self, a: usize, b: usize) -> &[(usize, f64)] {
        &self.table[a * self.dim + b]
    }

    /// Bracket of two coefficient vectors through the constant table.
    pub fn bracket(&self, u: &Coeffs, v: &Coeffs) -> Coeffs {
        let mut out = Coeffs::new();
        for (&a, &ua) in u {
            for (&b, &vb) in v {
                for &(e, c) in self.constants(a, b) {
                    add(&mut out, e, ua * vb * c);
                }
            }
        }
        out
    }
}

fn add(v: &mut Coeffs, key: usize, val: f64) {
    if val == 0.0 {
        return;
    }
    let slot = v.entry(key).or_insert(0.0);
    *slot += val;
    if *slot == 0.0 {
        v.remove(&key);
    }
}

fn dot(u: &Coeffs, v: &Coeffs) -> f64 {
    let (small, big) = if u.len() <= v.len() { (u, v) } else { (v, u) };
    small.iter().map(|(k, a)| a * big.get(k).copied().unwrap_or(0.0)).sum()
}

fn axpy(out: &mut Coeffs, s: f64, v: &Coeffs) {
    for (&k, &c) in v {
        add(out, k, s * c);
    }
}

/// The brute-force geometry built on one set of structure constants.
pub struct Oracle {
    sc: StructureConstants,
    nabla: Vec<Coeffs>, // (a * dim + b) -> coefficients of nabla_{xi_a} xi_b
}

impl Oracle {
    pub fn new(alg: &TruncatedAlgebra) -> Result<Self> {
        let sc = StructureConstants::new(alg)?;
        let dim = sc.dim();
        // (nabla_a b)_e = (c_ab^e - c_be^a + c_ea^b) / 2: one pass over the
        // table distributes each constant to the three slots it feeds
        let mut nabla = vec![Coeffs::new(); dim * dim];
        for p in 0..dim {
            for q in 0..dim {
                for &(r, c) in sc.constants(p, q) {
                    add(&mut nabla[p * dim + q], r, 0.5 * c); // c_ab^e at (a,b,e)=(p,q,r)
                    add(&mut nabla[r * dim + p], q, -0.5 * c); // -c_be^a at (b,e,a)=(p,q,r)
                    add(&mut nabla[q * dim + r], p, 0.5 * c); // c_ea^b at (e,a,b)=(p,q,r)
                }
            }
        }
        Ok(Oracle { sc, nabla })
    }

    pub fn structure_constants(&self) -> &StructureConstants {
        &self.sc
    }

    fn nabla(&self, u: &Coeffs, v: &Coeffs) -> Coeffs {
        let dim = self.sc.dim();
        let mut out = Coeffs::new();
        for (&a, &ua) in u {
            for (&b, &vb) in v {
                axpy(&mut out, ua * vb, &self.nabla[a * dim + b]);
            }
        }
        out
    }

    fn riemann(&self, x: &Coeffs, y: &Coeffs, z: &Coeffs) -> Coeffs {
        let mut out = self.nabla(&self.sc.bracket(x, y), z);
        axpy(&mut out, -1.0, &self.nabla(x, &self.nabla(y, z)));
        axpy(&mut out, 1.0, &self.nabla(y, &self.nabla(x, z)));
        out
    }

    fn coeffs(&self, x: &AlgebraVector, alg: &TruncatedAlgebra) -> Result<Coeffs> {
        let mut out = Coeffs::new();
        for (idx, c) in x.iter() {
            let p = alg.basis_position(idx).ok_or(Error::IndexOutOfRange {
                i: idx.i,
                j: idx.j,
                n: alg.truncation(),
            })?;
            add(&mut out, p, c);
        }
        Ok(out)
    }

    /// `R^N(x)` summed over all basis pairs, entirely through the
    /// structure-constant path.
    pub fn ricci(&self, x: &AlgebraVector, alg: &TruncatedAlgebra) -> Result<f64> {
        let xc = self.coeffs(x, alg)?;
        let mut sum = 0.0;
        let mut comp = 0.0;
        for e in 0..self.sc.dim() {
            let mut basis = Coeffs::new();
            basis.insert(e, 1.0);
            let term = dot(&self.riemann(&xc, &basis, &xc), &basis);
            let y = term - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        Ok(sum)
    }
}

/// Single-shot brute-force `R^N(x)`.
pub fn oracle_ricci(x: &AlgebraVector, alg: &TruncatedAlgebra) -> Result<f64> {
    Oracle::new(alg)?.ricci(x, alg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::Family;
    use crate::scaling::ScalingSequence;

    fn alg(family: Family, scaling: &str, n: u32) -> TruncatedAlgebra {
        TruncatedAlgebra::new(family, ScalingSequence::parse(scaling).unwrap(), n)
    }

    #[test]
    fn known_structure_constants() {
        let a = alg(Family::GeneralHS, "const:1", 3);
        let sc = StructureConstants::new(&a).unwrap();
        let p12 = a.basis_position(crate::BasisIndex::new(1, 2)).unwrap();
        let p23 = a.basis_position(crate::BasisIndex::new(2, 3)).unwrap();
        let p13 = a.basis_position(crate::BasisIndex::new(1, 3)).unwrap();
        assert_eq!(sc.constants(p12, p23), &[(p13, 1.0)]);
        // c_aa = 0 for every a
        for p in 0..sc.dim() {
            assert!(sc.constants(p, p).is_empty());
        }
    }

    #[test]
    fn constants_agree_with_formula_bracket() {
        for family in [Family::GeneralHS, Family::OrthogonalHS, Family::TriangularHS] {
            for scaling in ["const:1", "power:1"] {
                let a = alg(family, scaling, 4);
                let sc = StructureConstants::new(&a).unwrap();
                let basis = a.basis_indices();
                for (pa, &ia) in basis.iter().enumerate() {
                    for (pb, &ib) in basis.iter().enumerate() {
                        let va = AlgebraVector::basis(family, ia.i, ia.j).unwrap();
                        let vb = AlgebraVector::basis(family, ib.i, ib.j).unwrap();
                        let formula = a.bracket(&va, &vb).unwrap();
                        let mut diff = formula.clone();
                        for &(e, c) in sc.constants(pa, pb) {
                            let idx = basis[e];
                            diff.add_coeff(idx, -c);
                        }
                        assert!(diff.norm() < 1e-12, "{family} {scaling} [{ia},{ib}] disagrees");
                    }
                }
            }
        }
    }

    #[test]
    fn structure_level_jacobi() {
        let a = alg(Family::OrthogonalHS, "power:1", 5);
        let sc = StructureConstants::new(&a).unwrap();
        let unit = |p: usize| Coeffs::from([(p, 1.0)]);
        for p in 0..sc.dim() {
            for q in 0..sc.dim() {
                for r in 0..sc.dim() {
                    let mut jac = sc.bracket(&unit(p), &sc.bracket(&unit(q), &unit(r)));
                    axpy(&mut jac, 1.0, &sc.bracket(&unit(q), &sc.bracket(&unit(r), &unit(p))));
                    axpy(&mut jac, 1.0, &sc.bracket(&unit(r), &sc.bracket(&unit(p), &unit(q))));
                    let norm: f64 = jac.values().map(|v| v * v).sum::<f64>().sqrt();
                    assert!(norm < 1e-12);
                }
            }
        }
    }

    #[test]
    fn ricci_reproduces_paper_numbers() {
        let a = alg(Family::GeneralHS, "const:1", 6);
        let x = AlgebraVector::basis(Family::GeneralHS, 1, 2).unwrap();
        assert!((oracle_ricci(&x, &a).unwrap() + 3.0).abs() < 1e-10); // -N/2

        // unit-scaling orthogonal truncation is so(N) with its bi-invariant
        // metric: every basis direction has Ricci (N-2)/4
        let a = alg(Family::OrthogonalHS, "const:1", 6);
        let x = AlgebraVector::basis(Family::OrthogonalHS, 1, 2).unwrap();
        assert!((oracle_ricci(&x, &a).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn ricci_regression_nonunit_scaling() {
        // frozen value for the orthogonal family at lambda_i = 1/i, N = 8
        let a = alg(Family::OrthogonalHS, "power:1", 8);
        let x = AlgebraVector::basis(Family::OrthogonalHS, 1, 2).unwrap();
        assert!((oracle_ricci(&x, &a).unwrap() - (-0.8389289580741295)).abs() < 1e-12);
    }
}
