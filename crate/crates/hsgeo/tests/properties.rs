//! Property suites: algebraic identities of the bracket, consistency of the
//! matrix embedding, exp/log roundtrips, and the defining identities of the
//! connection and curvature tensors, over randomized sparse inputs.

use hsgeo::algebra::TruncatedAlgebra;
use hsgeo::curvature::{self, CurvatureEngine};
use hsgeo::explog;
use hsgeo::oracle;
use hsgeo::{AlgebraVector, BasisIndex, Family, ScalingSequence};
use proptest::prelude::*;

type Entries = Vec<((u32, u32), f64)>;

fn any_family() -> impl Strategy<Value = Family> {
    prop_oneof![Just(Family::GeneralHS), Just(Family::OrthogonalHS), Just(Family::TriangularHS),]
}

fn any_scaling() -> impl Strategy<Value = ScalingSequence> {
    prop_oneof![
        Just(ScalingSequence::constant(1.0).unwrap()),
        Just(ScalingSequence::power(1.0).unwrap()),
        Just(ScalingSequence::geometric(0.5f64.sqrt()).unwrap()),
    ]
}

fn entries(n: u32, terms: usize) -> impl Strategy<Value = Entries> {
    prop::collection::vec(((1..=n, 1..=n), -1.0f64..1.0), 1..=terms)
}

/// Build a sparse vector from raw entries; pairs inadmissible for the family
/// are dropped, so the result may occasionally be zero.
fn build(family: Family, raw: &Entries) -> AlgebraVector {
    let mut v = AlgebraVector::zero(family);
    for &((i, j), c) in raw {
        v.add_coeff(BasisIndex::new(i, j), c);
    }
    v
}

proptest! {
    #[test]
    fn bracket_antisymmetry(family in any_family(), scaling in any_scaling(),
                            ex in entries(8, 4), ey in entries(8, 4)) {
        let alg = TruncatedAlgebra::new(family, scaling, 8);
        let (x, y) = (build(family, &ex), build(family, &ey));
        let ab = alg.bracket(&x, &y).unwrap();
        let ba = alg.bracket(&y, &x).unwrap();
        prop_assert!(ab.add(&ba).unwrap().norm() <= 1e-12 * (1.0 + ab.norm()));
    }

    #[test]
    fn jacobi_identity(family in any_family(), scaling in any_scaling(), n in 4u32..=10,
                       ex in entries(10, 4), ey in entries(10, 4), ez in entries(10, 4)) {
        let alg = TruncatedAlgebra::new(family, scaling, n);
        let clip = |e: &Entries| {
            let mut v = AlgebraVector::zero(family);
            for &((i, j), c) in e {
                if i <= n && j <= n {
                    v.add_coeff(BasisIndex::new(i, j), c);
                }
            }
            v
        };
        let (x, y, z) = (clip(&ex), clip(&ey), clip(&ez));
        let mut jac = alg.bracket(&x, &alg.bracket(&y, &z).unwrap()).unwrap();
        jac.axpy(1.0, &alg.bracket(&y, &alg.bracket(&z, &x).unwrap()).unwrap());
        jac.axpy(1.0, &alg.bracket(&z, &alg.bracket(&x, &y).unwrap()).unwrap());
        prop_assert!(jac.norm() <= 1e-10 * (1.0 + x.norm() * y.norm() * z.norm()));
    }

    #[test]
    fn bracket_bilinearity(family in any_family(), scaling in any_scaling(),
                           a in -3.0f64..3.0, b in -3.0f64..3.0,
                           ex in entries(8, 4), exp in entries(8, 4), ey in entries(8, 4)) {
        let alg = TruncatedAlgebra::new(family, scaling, 8);
        let (x, xp, y) = (build(family, &ex), build(family, &exp), build(family, &ey));
        let mut lin = x.scaled(a);
        lin.axpy(b, &xp);
        let lhs = alg.bracket(&lin, &y).unwrap();
        let mut rhs = alg.bracket(&x, &y).unwrap().scaled(a);
        rhs.axpy(b, &alg.bracket(&xp, &y).unwrap());
        prop_assert!(lhs.sub(&rhs).unwrap().norm() <= 1e-12 * (1.0 + rhs.norm()));
    }

    #[test]
    fn embedded_bracket_is_matrix_commutator(family in any_family(), scaling in any_scaling(),
                                             ex in entries(6, 4), ey in entries(6, 4)) {
        let alg = TruncatedAlgebra::new(family, scaling, 6);
        let (x, y) = (build(family, &ex), build(family, &ey));
        let (mx, my) = (alg.embed_matrix(&x).unwrap(), alg.embed_matrix(&y).unwrap());
        let comm = &mx * &my - &my * &mx;
        let emb = alg.embed_matrix(&alg.bracket(&x, &y).unwrap()).unwrap();
        prop_assert!((comm - &emb).norm() <= 1e-12 * (1.0 + emb.norm()));
    }

    #[test]
    fn bracket_continuity_bound(family in any_family(), scaling in any_scaling(),
                                ex in entries(8, 5), ey in entries(8, 5)) {
        let bound = 2.0 * scaling.sup() * scaling.sup();
        let alg = TruncatedAlgebra::new(family, scaling, 8);
        let (x, y) = (build(family, &ex), build(family, &ey));
        if x.norm() > 0.0 && y.norm() > 0.0 {
            prop_assert!(alg.bracket_bound_ratio(&x, &y).unwrap() <= bound * (1.0 + 1e-12));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn log_exp_roundtrip(family in any_family(), scaling in any_scaling(),
                         ex in entries(6, 4)) {
        let alg = TruncatedAlgebra::new(family, scaling, 6);
        let mut x = build(family, &ex);
        if x.norm() > 0.3 {
            x = x.scaled(0.3 / x.norm());
        }
        let g = explog::exp_matrix(&x, &alg).unwrap();
        let back = explog::log_to_algebra(&g, &alg).unwrap();
        prop_assert!(back.sub(&x).unwrap().norm() <= 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn connection_identities(family in any_family(), scaling in any_scaling(),
                             ex in entries(6, 4), ey in entries(6, 4), ez in entries(6, 4)) {
        let alg = TruncatedAlgebra::new(family, scaling, 6);
        let (x, y, z) = (build(family, &ex), build(family, &ey), build(family, &ez));

        // torsion-freeness: nabla_x y - nabla_y x = [x,y]
        let mut torsion = curvature::levi_civita(&x, &y, &alg).unwrap();
        torsion.axpy(-1.0, &curvature::levi_civita(&y, &x, &alg).unwrap());
        torsion.axpy(-1.0, &alg.bracket(&x, &y).unwrap());
        prop_assert!(torsion.norm() <= 1e-10 * (1.0 + x.norm() * y.norm()));

        // metric compatibility at the identity: (nabla_x y, z) = -(y, nabla_x z)
        let a = curvature::levi_civita(&x, &y, &alg).unwrap().inner(&z).unwrap();
        let b = y.inner(&curvature::levi_civita(&x, &z, &alg).unwrap()).unwrap();
        prop_assert!((a + b).abs() <= 1e-10 * (1.0 + a.abs()));
    }

    #[test]
    fn curvature_identities(family in any_family(), scaling in any_scaling(),
                            ex in entries(6, 3), ey in entries(6, 3), ez in entries(6, 3)) {
        let alg = TruncatedAlgebra::new(family, scaling, 6);
        let engine = CurvatureEngine::new(&alg).unwrap();
        let (x, y, z) = (build(family, &ex), build(family, &ey), build(family, &ez));

        // antisymmetry in the first two slots
        let fwd = engine.riemann(&x, &y, &z).unwrap();
        let bwd = engine.riemann(&y, &x, &z).unwrap();
        prop_assert!(fwd.add(&bwd).unwrap().norm() <= 1e-12 * (1.0 + fwd.norm()));

        // pairwise symmetry of the sectional numerator
        let kxy = engine.sectional(&x, &y).unwrap();
        let kyx = engine.sectional(&y, &x).unwrap();
        prop_assert!((kxy - kyx).abs() <= 1e-10 * (1.0 + kxy.abs()));

        // trace identity (hat R^N(x), x) = R^N(x)
        let rhat = engine.ricci_selfadjoint(&x).unwrap();
        let r = engine.ricci_truncated(&x).unwrap();
        prop_assert!((rhat.inner(&x).unwrap() - r).abs() <= 1e-10 * (1.0 + r.abs()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn dual_path_equality(family in any_family(), scaling in any_scaling(),
                          n in 5u32..=6, ex in entries(5, 4)) {
        let alg = TruncatedAlgebra::new(family, scaling, n);
        let engine = CurvatureEngine::new(&alg).unwrap();
        let oracle = oracle::Oracle::new(&alg).unwrap();
        let x = build(family, &ex);
        let a = engine.ricci_truncated(&x).unwrap();
        let b = oracle.ricci(&x, &alg).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a.abs()));
    }

    #[test]
    fn general_family_closed_form_equals_brute_force(scaling in any_scaling(),
                                                     i in 1u32..=4, j in 1u32..=4,
                                                     n in 6u32..=8) {
        // the general-family theorem reproduces the brute-force sum exactly;
        // the full cross-family matrix lives in the acceptance suite
        let alg = TruncatedAlgebra::new(Family::GeneralHS, scaling.clone(), n);
        let x = AlgebraVector::basis(Family::GeneralHS, i, j).unwrap();
        let brute = curvature::ricci_truncated(&x, &alg).unwrap();
        let closed = curvature::ricci_closed_form(Family::GeneralHS, i, j, n, &scaling).unwrap();
        prop_assert!((brute - closed).abs() <= 1e-9 * (1.0 + closed.abs()));
    }
}
