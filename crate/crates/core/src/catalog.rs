//! Small algebras used throughout the tests, the examples and the CLI corpus.

use crate::assoc::AssocAlgebra;
use crate::lie::LieAlgebra;
use crate::linalg::{int, Scalar};

fn lie(dim: usize, entries: &[(usize, usize, usize, i64)]) -> LieAlgebra {
    let e: Vec<(usize, usize, usize, Scalar)> = entries
        .iter()
        .map(|&(i, j, k, v)| (i, j, k, int(v)))
        .collect();
    LieAlgebra::from_entries(dim, &e).expect("catalog entry is a Lie algebra")
}

/// `[e0,e1] = e2`, `[e1,e2] = e0`, `[e2,e0] = e1`.
pub fn so3() -> LieAlgebra {
    lie(3, &[(0, 1, 2, 1), (1, 2, 0, 1), (0, 2, 1, -1)])
}

/// Basis `h, e, f`: `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h`.
pub fn sl2() -> LieAlgebra {
    lie(3, &[(0, 1, 1, 2), (0, 2, 2, -2), (1, 2, 0, 1)])
}

/// Borel subalgebra of `sl2`: basis `h, e`, `[h,e] = 2e`.
pub fn sl2_borel() -> LieAlgebra {
    lie(2, &[(0, 1, 1, 2)])
}

/// The non-abelian 2-dimensional algebra `[e0,e1] = e1`.
pub fn affine_line() -> LieAlgebra {
    lie(2, &[(0, 1, 1, 1)])
}

/// `[x,y] = z`.
pub fn heisenberg3() -> LieAlgebra {
    lie(3, &[(0, 1, 2, 1)])
}

pub fn abelian(dim: usize) -> LieAlgebra {
    LieAlgebra::abelian(dim)
}

fn assoc(
    dim: usize,
    entries: &[(usize, usize, usize, i64)],
    unit: Option<Vec<i64>>,
) -> AssocAlgebra {
    let e: Vec<(usize, usize, usize, Scalar)> = entries
        .iter()
        .map(|&(i, j, k, v)| (i, j, k, int(v)))
        .collect();
    let u = unit.map(|u| u.into_iter().map(int).collect());
    AssocAlgebra::from_entries(dim, &e, u).expect("catalog entry is associative")
}

/// The ground field as a one-dimensional algebra.
pub fn field() -> AssocAlgebra {
    assoc(1, &[(0, 0, 0, 1)], Some(vec![1]))
}

/// `K × K` with idempotents `e0, e1`.
pub fn field_squared() -> AssocAlgebra {
    assoc(2, &[(0, 0, 0, 1), (1, 1, 1, 1)], Some(vec![1, 1]))
}

/// `K[ε]/ε²` on the basis `1, ε`.
pub fn dual_numbers() -> AssocAlgebra {
    assoc(
        2,
        &[(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1)],
        Some(vec![1, 0]),
    )
}

/// `K[x]/x³` on the basis `1, x, x²`.
pub fn truncated_polynomials() -> AssocAlgebra {
    let mut e = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            if i + j < 3 {
                e.push((i, j, i + j, 1));
            }
        }
    }
    assoc(3, &e, Some(vec![1, 0, 0]))
}

/// Matrix units `E_ij` of `M_n(K)`, index `i * n + j`.
pub fn matrix_algebra(n: usize) -> AssocAlgebra {
    let mut e = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                e.push((i * n + j, j * n + l, i * n + l, 1));
            }
        }
    }
    let unit = (0..n * n).map(|a| i64::from(a / n == a % n)).collect();
    assoc(n * n, &e, Some(unit))
}

pub fn m2k() -> AssocAlgebra {
    matrix_algebra(2)
}

/// Upper-triangular 2×2 matrices on the basis `E00, E01, E11`.
pub fn upper_triangular2() -> AssocAlgebra {
    assoc(
        3,
        &[(0, 0, 0, 1), (0, 1, 1, 1), (1, 2, 1, 1), (2, 2, 2, 1)],
        Some(vec![1, 0, 1]),
    )
}

/// Zero multiplication, no unit.
pub fn zero_product(dim: usize) -> AssocAlgebra {
    AssocAlgebra::new(dim, vec![int(0); dim * dim * dim], None)
        .expect("zero product is associative")
}
