//! Lie algebra morphisms as Maurer–Cartan elements of `∧^• V* ⊗ W`.
//!
//! The differential is the CE differential of `V` with `W` as trivial module
//! and the bracket is `[α ⊗ w, β ⊗ w'] = (α ∧ β) ⊗ ν(w, w')`. A linear map
//! `f: V → W` sits in degree 1 with coordinate `i * dim W + a` equal to `F[a][i]`.

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::DMatrix;
use num::Zero;

use crate::dgla::{Dgla, DglaSub, SparseVec, Verdict};
use crate::error::{Error, Result};
use crate::gauge::expm;
use crate::lie::{ce_complex_to, LieAlgebra, Representation};
use crate::linalg::{int, to_f64, Mat, Scalar};
use crate::multilinear::{binomial, sort_sign, Flavor, IndexBasis};

/// `f: (V, μ) → (W, ν)` with matrix `F` of shape `dim W × dim V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieMorphism {
    source: LieAlgebra,
    target: LieAlgebra,
    matrix: Mat,
}

impl LieMorphism {
    /// Validates `F μ(e_i, e_j) = ν(F e_i, F e_j)` on basis pairs.
    pub fn new(source: LieAlgebra, target: LieAlgebra, matrix: Mat) -> Result<Self> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::Shape(format!(
                "morphism matrix must be {}x{}, got {}x{}",
                target.dim(),
                source.dim(),
                matrix.rows(),
                matrix.cols()
            )));
        }
        if let Some((i, j)) = morphism_failure(&source, &target, &matrix) {
            return Err(Error::NotMorphism { i, j });
        }
        Ok(LieMorphism {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(l: LieAlgebra) -> Self {
        let m = Mat::identity(l.dim());
        LieMorphism {
            source: l.clone(),
            target: l,
            matrix: m,
        }
    }

    pub fn zero(source: LieAlgebra, target: LieAlgebra) -> Self {
        let m = Mat::zeros(target.dim(), source.dim());
        LieMorphism {
            source,
            target,
            matrix: m,
        }
    }

    pub fn source(&self) -> &LieAlgebra {
        &self.source
    }

    pub fn target(&self) -> &LieAlgebra {
        &self.target
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    /// Degree-1 coordinates in the morphism DGLA.
    pub fn to_element(&self) -> Vec<Scalar> {
        linear_map_to_element(&self.matrix)
    }

    /// `ρ(x) = ν(f(x), -)`: `W` as a `V`-module through `f`.
    pub fn induced_representation(&self) -> Representation {
        let n = self.source.dim();
        let m = self.target.dim();
        let action = (0..n)
            .map(|i| {
                let fx = self.matrix.column(i);
                Mat::from_fn(m, m, |k, b| {
                    fx.iter().enumerate().fold(Scalar::zero(), |acc, (a, c)| {
                        acc + c * self.target.c(a, b, k)
                    })
                })
            })
            .collect();
        Representation::new(&self.source, m, action).expect("a morphism induces a representation")
    }
}

/// First basis pair on which `F` fails to intertwine the brackets.
pub fn morphism_failure(
    source: &LieAlgebra,
    target: &LieAlgebra,
    f: &Mat,
) -> Option<(usize, usize)> {
    let n = source.dim();
    for i in 0..n {
        for j in i + 1..n {
            let mu: Vec<Scalar> = (0..n).map(|k| source.c(i, j, k).clone()).collect();
            let lhs = f.mul_vec(&mu).expect("shape checked");
            let rhs = target.bracket(&f.column(i), &f.column(j));
            if lhs != rhs {
                return Some((i, j));
            }
        }
    }
    None
}

pub fn linear_map_to_element(f: &Mat) -> Vec<Scalar> {
    (0..f.cols()).flat_map(|i| f.column(i)).collect()
}

pub fn element_to_linear_map(rows: usize, cols: usize, x: &[Scalar]) -> Result<Mat> {
    if x.len() != rows * cols {
        return Err(Error::Shape(format!(
            "expected {} coordinates, got {}",
            rows * cols,
            x.len()
        )));
    }
    Ok(Mat::from_fn(rows, cols, |a, i| x[i * rows + a].clone()))
}

/// Morphism DGLA on `∧^k V* ⊗ W`, `k = 0..=3`.
pub fn morphism_dgla(source: &LieAlgebra, target: &LieAlgebra) -> Result<Dgla> {
    let (n, m) = (source.dim(), target.dim());
    let bases: Vec<IndexBasis> = (0..=3)
        .map(|k| IndexBasis::new(Flavor::Alternating, n, k))
        .collect();
    let dims: Vec<usize> = (0..=3).map(|k| binomial(n, k) * m).collect();
    let ce = ce_complex_to(source, &Representation::trivial(source, m), 3)?;
    let diffs = ce.differentials().to_vec();
    Dgla::new(0, dims, diffs, |i, x, j, y| {
        let (ti, tj) = (
            bases[i as usize].tuple(x / m),
            bases[j as usize].tuple(y / m),
        );
        let mut t: Vec<usize> = ti.iter().chain(tj).copied().collect();
        let Some(s) = sort_sign(&mut t) else {
            return Vec::new();
        };
        let r = bases[(i + j) as usize].rank_of(&t).expect("sorted tuple");
        let (a, b) = (x % m, y % m);
        (0..m)
            .filter(|&c| !target.c(a, b, c).is_zero())
            .map(|c| (r * m + c, target.c(a, b, c) * int(s as i64)))
            .collect::<SparseVec>()
    })
}

/// Compares `∂ + [f, -]` with the CE differential of `W` through `f`.
pub fn morphism_twist_agreement(f: &LieMorphism) -> Result<bool> {
    let g = morphism_dgla(&f.source, &f.target)?;
    let twist = g.twist(&f.to_element())?;
    let ce = ce_complex_to(&f.source, &f.induced_representation(), 3)?;
    Ok(twist.iter().zip(ce.differentials()).all(|(a, b)| a == b))
}

/// Rigidity criterion: passes iff `H¹_CE(V, W)` through `f` vanishes; tangent
/// data the centralizer of `f(V)` in `W`.
pub fn morphism_rigidity(f: &LieMorphism) -> Result<Verdict> {
    let twisted = Arc::new(morphism_dgla(&f.source, &f.target)?.twisted(&f.to_element())?);
    let zero = DglaSub::zero(twisted.clone())?;
    let c = zero.quotient_complex(&vec![Scalar::zero(); twisted.dim(1)])?;
    let dims = BTreeMap::from([
        (0, c.cohomology(0)),
        (1, c.cohomology(1)),
        (2, c.cohomology(2)),
    ]);
    Ok(Verdict::new("morphism-rigidity", dims, 1, c.cocycle_dim(0)))
}

/// `exp(-ad_x) ∘ F` for `x ∈ W`, in floating point.
pub fn morphism_gauge(f: &LieMorphism, x: &[f64]) -> Result<DMatrix<f64>> {
    let m = f.target.dim();
    if x.len() != m {
        return Err(Error::Shape(format!(
            "expected an element of dimension {m}, got {}",
            x.len()
        )));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let ad = DMatrix::from_fn(m, m, |k, b| {
        (0..m)
            .map(|a| x[a] * to_f64(f.target.c(a, b, k)))
            .sum::<f64>()
    });
    let out = expm(&(-ad))? * f.matrix.to_f64();
    if out.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(out)
}
