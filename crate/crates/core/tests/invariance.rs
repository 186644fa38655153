//! Criteria are basis independent: transporting a structure by an invertible
//! matrix leaves every cohomology dimension unchanged.

use dgla_core::assoc::{assoc_rigidity, unitality_stability};
use dgla_core::catalog;
use dgla_core::lie::lie_rigidity;
use dgla_core::linalg::int;
use dgla_core::stability::{subalg_stability, SubalgebraProblem};
use dgla_core::{LieAlgebra, Mat, Subspace};
use proptest::prelude::*;

fn invertible(n: usize) -> impl Strategy<Value = Mat> {
    proptest::collection::vec(-2i64..=2, n * n)
        .prop_map(move |v| Mat::from_fn(n, n, |r, c| int(v[r * n + c])))
        .prop_filter("invertible", move |m| m.rank() == n)
}

fn transport_lie(l: &LieAlgebra, p: &Mat) -> LieAlgebra {
    let mu = l
        .to_multimap()
        .pullback(&p.inverse().unwrap())
        .unwrap()
        .compose_output(p)
        .unwrap();
    LieAlgebra::from_bracket(&mu).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn lie_rigidity_ignores_the_basis(p in invertible(3), which in 0usize..3) {
        let l = [catalog::so3(), catalog::heisenberg3(), catalog::abelian(3)][which].clone();
        let moved = transport_lie(&l, &p);
        prop_assert_eq!(lie_rigidity(&moved).unwrap().cohomology_dims, lie_rigidity(&l).unwrap().cohomology_dims);
    }

    #[test]
    fn hochschild_and_unitality_ignore_the_basis(p in invertible(2), which in 0usize..3) {
        let a = [catalog::dual_numbers(), catalog::field_squared(), catalog::upper_triangular2()][which].clone();
        let n = a.dim();
        let p = if n == 2 { p } else { Mat::from_fn(3, 3, |r, c| if r < 2 && c < 2 { p.row(r)[c].clone() } else { int(i64::from(r == c)) }) };
        let moved = a.transport(&p).unwrap();
        prop_assert_eq!(assoc_rigidity(&moved).unwrap().cohomology_dims, assoc_rigidity(&a).unwrap().cohomology_dims);
        let v = unitality_stability(&moved).unwrap();
        prop_assert!(v.passes);
    }

    #[test]
    fn subalgebra_stability_ignores_the_basis(p in invertible(3)) {
        let sl2 = catalog::sl2();
        let borel = Subspace::span(3, &[vec![int(1), int(0), int(0)], vec![int(0), int(1), int(0)]]).unwrap();
        let before = subalg_stability(&SubalgebraProblem::new(sl2.clone(), borel.clone()).unwrap()).unwrap();
        let moved_w = Subspace::new(p.mul(borel.basis()).unwrap()).unwrap();
        let after = subalg_stability(&SubalgebraProblem::new(transport_lie(&sl2, &p), moved_w).unwrap()).unwrap();
        prop_assert_eq!(before.cohomology_dims, after.cohomology_dims);
        prop_assert!(after.passes);
    }
}
