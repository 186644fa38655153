//! Associative algebras, the Gerstenhaber bracket and Hochschild complexes.
//!
//! The Gerstenhaber graded Lie algebra of `V` has `(V*)^{⊗(d+1)} ⊗ V` in
//! degree `d`; elements are coefficient vectors of tensor-flavor
//! [`MultiMap`]s of arity `d + 1`. The bracket is
//! `[P, Q] = P∘Q - (-1)^{kl} Q∘P` with `P∘Q = Σ_i (-1)^{il} P(…, Q(…), …)`,
//! `Q` inserted at slot `i`. With this convention `½[m, m]` is the
//! associator `m(m(x,y),z) - m(x,m(y,z))`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::{One, Zero};

use crate::complex::CochainComplex;
use crate::dgla::{Dgla, DglaSub, SparseVec, Verdict};
use crate::error::{Error, Result};
use crate::linalg::{int, quotient_data, Mat, Scalar, Subspace};
use crate::multilinear::{Flavor, IndexBasis, MultiMap};

/// Finite-dimensional associative algebra `e_i e_j = Σ_k m[i][j][k] e_k`,
/// optionally with a unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssocAlgebra {
    dim: usize,
    structure: Vec<Scalar>,
    unit: Option<Vec<Scalar>>,
}

impl AssocAlgebra {
    /// Validates associativity on all basis triples and the unit, if given.
    pub fn new(dim: usize, structure: Vec<Scalar>, unit: Option<Vec<Scalar>>) -> Result<Self> {
        if structure.len() != dim * dim * dim {
            return Err(Error::Shape(format!(
                "structure tensor of a {dim}-dimensional algebra needs {} entries",
                dim * dim * dim
            )));
        }
        if unit.as_ref().is_some_and(|u| u.len() != dim) {
            return Err(Error::Shape("unit has the wrong dimension".into()));
        }
        let a = AssocAlgebra {
            dim,
            structure,
            unit,
        };
        if let Some((i, j, k)) = a.associativity_failure() {
            return Err(Error::NotAssociative { i, j, k });
        }
        if let Some(u) = &a.unit {
            for i in 0..dim {
                let e = basis_vector(dim, i);
                if a.product(u, &e) != e || a.product(&e, u) != e {
                    return Err(Error::InvalidUnit { index: i });
                }
            }
        }
        Ok(a)
    }

    /// Builds the tensor from `(i, j, k, value)` entries.
    pub fn from_entries(
        dim: usize,
        entries: &[(usize, usize, usize, Scalar)],
        unit: Option<Vec<Scalar>>,
    ) -> Result<Self> {
        let mut s = vec![Scalar::zero(); dim * dim * dim];
        for (i, j, k, v) in entries {
            if *i >= dim || *j >= dim || *k >= dim {
                return Err(Error::Shape(format!(
                    "structure index ({i}, {j}, {k}) out of range"
                )));
            }
            s[(i * dim + j) * dim + k] += v;
        }
        AssocAlgebra::new(dim, s, unit)
    }

    pub fn from_multiplication(m: &MultiMap, unit: Option<Vec<Scalar>>) -> Result<Self> {
        check_g_element(m, None)?;
        if m.arity() != 2 {
            return Err(Error::Arity {
                expected: 2,
                got: m.arity(),
            });
        }
        AssocAlgebra::new(m.dim_in(), m.coeffs().to_vec(), unit)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn m(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.structure[(i * self.dim + j) * self.dim + k]
    }

    pub fn structure(&self) -> &[Scalar] {
        &self.structure
    }

    pub fn unit(&self) -> Option<&[Scalar]> {
        self.unit.as_deref()
    }

    fn basis_product(&self, i: usize, j: usize) -> &[Scalar] {
        let start = (i * self.dim + j) * self.dim;
        &self.structure[start..start + self.dim]
    }

    pub fn product(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim;
        let mut out = vec![Scalar::zero(); n];
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let w = xi * yj;
                for (o, c) in out.iter_mut().zip(self.basis_product(i, j)) {
                    if !c.is_zero() {
                        *o += &w * c;
                    }
                }
            }
        }
        out
    }

    fn associativity_failure(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let l = self.product(self.basis_product(i, j), &basis_vector(n, k));
                    let r = self.product(&basis_vector(n, i), self.basis_product(j, k));
                    if l != r {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    /// The multiplication as a degree-1 element of the Gerstenhaber algebra.
    pub fn to_multimap(&self) -> MultiMap {
        MultiMap::unflatten(
            Flavor::Tensor,
            2,
            self.dim,
            self.dim,
            self.structure.clone(),
        )
        .expect("n³ coefficients")
    }

    /// Algebra with structure `P m(P⁻¹ x, P⁻¹ y)`, unit `P u`.
    pub fn transport(&self, p: &Mat) -> Result<Self> {
        let inv = p
            .inverse()
            .ok_or_else(|| Error::Shape("transport needs an invertible matrix".into()))?;
        let m = self.to_multimap().pullback(&inv)?.compose_output(p)?;
        let unit = self.unit.as_ref().map(|u| p.mul_vec(u)).transpose()?;
        AssocAlgebra::from_multiplication(&m, unit)
    }
}

pub(crate) fn basis_vector(n: usize, i: usize) -> Vec<Scalar> {
    (0..n)
        .map(|k| {
            if k == i {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        })
        .collect()
}

fn check_g_element(a: &MultiMap, n: Option<usize>) -> Result<()> {
    if a.flavor() != Flavor::Tensor {
        return Err(Error::Flavor(
            "the Gerstenhaber bracket acts on tensor-flavor maps".into(),
        ));
    }
    if a.dim_in() != a.dim_out() {
        return Err(Error::Shape(format!(
            "Gerstenhaber elements map V^k to V, got dim_in {} and dim_out {}",
            a.dim_in(),
            a.dim_out()
        )));
    }
    if let Some(n) = n {
        if a.dim_in() != n {
            return Err(Error::Shape(format!(
                "Gerstenhaber elements over spaces of dimension {n} and {}",
                a.dim_in()
            )));
        }
    }
    Ok(())
}

/// `Σ_i (-1)^{il} P(…, Q(…), …)` for `P = e^I ⊗ e_a`, `Q = e^J ⊗ e_b`, added
/// into `out` with factor `scale`.
fn compose_on_basis(
    target: &IndexBasis,
    n: usize,
    (ti, a): (&[usize], usize),
    (tj, b): (&[usize], usize),
    scale: i64,
    out: &mut SparseVec,
) {
    let l = tj.len() as i64 - 1;
    let mut t = Vec::with_capacity(ti.len() + tj.len() - 1);
    for (i, &x) in ti.iter().enumerate() {
        if x != b {
            continue;
        }
        t.clear();
        t.extend_from_slice(&ti[..i]);
        t.extend_from_slice(tj);
        t.extend_from_slice(&ti[i + 1..]);
        let r = target.rank_of(&t).expect("tensor tuple");
        let sign = if (i as i64 * l).rem_euclid(2) == 0 {
            scale
        } else {
            -scale
        };
        out.push((r * n + a, int(sign)));
    }
}

fn gerstenhaber_on_basis(
    target: &IndexBasis,
    n: usize,
    ti: &[usize],
    a: usize,
    tj: &[usize],
    b: usize,
) -> SparseVec {
    let (k, l) = (ti.len() as i64 - 1, tj.len() as i64 - 1);
    let mut out = Vec::new();
    compose_on_basis(target, n, (ti, a), (tj, b), 1, &mut out);
    let s = if (k * l).rem_euclid(2) == 0 { -1 } else { 1 };
    compose_on_basis(target, n, (tj, b), (ti, a), s, &mut out);
    out
}

/// Gerstenhaber bracket of tensor-flavor `V`-valued maps.
pub fn gerstenhaber_bracket(a: &MultiMap, b: &MultiMap) -> Result<MultiMap> {
    check_g_element(a, None)?;
    check_g_element(b, Some(a.dim_in()))?;
    let n = a.dim_in();
    let arity = a.arity() + b.arity();
    if arity == 0 {
        return Ok(MultiMap::zero(Flavor::Tensor, 0, n, n));
    }
    let arity = arity - 1;
    let (ba, bb) = (a.index_basis(), b.index_basis());
    let target = IndexBasis::new(Flavor::Tensor, n, arity);
    let mut coeffs = vec![Scalar::zero(); target.len() * n];
    for (p, x) in a.coeffs().iter().enumerate().filter(|(_, v)| !v.is_zero()) {
        for (q, y) in b.coeffs().iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            let w = x * y;
            for (idx, s) in
                gerstenhaber_on_basis(&target, n, ba.tuple(p / n), p % n, bb.tuple(q / n), q % n)
            {
                coeffs[idx] += &w * s;
            }
        }
    }
    MultiMap::unflatten(Flavor::Tensor, arity, n, n, coeffs)
}

/// Gerstenhaber DGLA of `K^n` over degrees `-1..=2` (degree 3 would be `n⁵`-dimensional).
pub fn gerstenhaber_dgla(n: usize) -> Result<Dgla> {
    let bases: Vec<IndexBasis> = (0..=3)
        .map(|k| IndexBasis::new(Flavor::Tensor, n, k))
        .collect();
    let dims: Vec<usize> = bases.iter().map(|b| b.len() * n).collect();
    let diffs = dims.windows(2).map(|w| Mat::zeros(w[1], w[0])).collect();
    Dgla::new(-1, dims, diffs, |i, x, j, y| {
        let (bi, bj) = (&bases[(i + 1) as usize], &bases[(j + 1) as usize]);
        gerstenhaber_on_basis(
            &bases[(i + j + 1) as usize],
            n,
            bi.tuple(x / n),
            x % n,
            bj.tuple(y / n),
            y % n,
        )
    })
}

/// Associativity on basis triples, and `[m, m]_G = 0`.
pub fn is_assoc_routes(m: &MultiMap) -> Result<(bool, bool)> {
    check_g_element(m, None)?;
    if m.arity() != 2 {
        return Err(Error::Arity {
            expected: 2,
            got: m.arity(),
        });
    }
    let a = AssocAlgebra {
        dim: m.dim_in(),
        structure: m.coeffs().to_vec(),
        unit: None,
    };
    Ok((
        a.associativity_failure().is_none(),
        gerstenhaber_bracket(m, m)?.is_zero(),
    ))
}

/// Whether a bilinear map is associative; both routes must agree.
pub fn is_assoc(m: &MultiMap) -> Result<bool> {
    let (triples, bracket) = is_assoc_routes(m)?;
    assert_eq!(
        triples, bracket,
        "associativity triples and [m,m]_G disagree"
    );
    Ok(triples)
}

/// Matrix of the Hochschild differential `C^k → C^{k+1}`, `C^k = (V*)^{⊗k} ⊗ V`:
/// `δf(x_1, …) = x_1 f(x_2, …) + Σ_i (-1)^i f(…, x_i x_{i+1}, …) + (-1)^{k+1} f(x_1, …, x_k) x_{k+1}`.
fn hochschild_differential(a: &AssocAlgebra, k: usize) -> Mat {
    let n = a.dim();
    let src = IndexBasis::new(Flavor::Tensor, n, k);
    let dst = IndexBasis::new(Flavor::Tensor, n, k + 1);
    let mut d = Mat::zeros(dst.len() * n, src.len() * n);
    let mut t = Vec::with_capacity(k);
    for row_t in 0..dst.len() {
        let s = dst.tuple(row_t).to_vec();
        let first = src.rank_of(&s[1..]).expect("tensor tuple");
        let last = src.rank_of(&s[..k]).expect("tensor tuple");
        let end_sign = if (k + 1).is_multiple_of(2) {
            int(1)
        } else {
            int(-1)
        };
        for c in 0..n {
            for r in 0..n {
                let left = a.m(s[0], c, r);
                if !left.is_zero() {
                    d[(row_t * n + r, first * n + c)] += left;
                }
                let right = a.m(c, s[k], r);
                if !right.is_zero() {
                    d[(row_t * n + r, last * n + c)] += &end_sign * right;
                }
            }
        }
        for i in 1..=k {
            let sign = if i % 2 == 0 { int(1) } else { int(-1) };
            for (e, coef) in a.basis_product(s[i - 1], s[i]).iter().enumerate() {
                if coef.is_zero() {
                    continue;
                }
                t.clear();
                t.extend_from_slice(&s[..i - 1]);
                t.push(e);
                t.extend_from_slice(&s[i + 1..]);
                let col_t = src.rank_of(&t).expect("tensor tuple");
                let w = &sign * coef;
                for c in 0..n {
                    d[(row_t * n + c, col_t * n + c)] += &w;
                }
            }
        }
    }
    d
}

/// Hochschild complex `C^0 → … → C^3` with coefficients in `V`.
pub fn hochschild_complex(a: &AssocAlgebra) -> Result<CochainComplex> {
    let n = a.dim();
    let dims = (0..=3).map(|k| n.pow(k as u32) * n).collect();
    let diffs = (0..3).map(|k| hochschild_differential(a, k)).collect();
    CochainComplex::new(0, dims, diffs)
}

/// Sign carrying the twisted Gerstenhaber differential on degree `d` onto
/// the Hochschild differential out of `C^{d+1}`: `(-1)^d`. Rescaling arity-`k`
/// cochains by `(-1)^{k(k+1)/2}` turns this into an isomorphism of complexes.
pub fn twist_sign(d: i32) -> Scalar {
    if d.rem_euclid(2) == 0 {
        int(1)
    } else {
        int(-1)
    }
}

/// Compares `[m, -]_G` with the Hochschild differential degree by degree.
pub fn hochschild_twist_agreement(a: &AssocAlgebra) -> Result<bool> {
    let g = gerstenhaber_dgla(a.dim())?;
    let twist = g.twist(a.to_multimap().coeffs())?;
    let h = hochschild_complex(a)?;
    for d in -1..=1i32 {
        if twist[(d + 1) as usize] != h.differential(d + 1).scale(&twist_sign(d)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Rigidity criterion: passes iff `HH²(V, V) = 0`; tangent data `Der(V, m)`.
pub fn assoc_rigidity(a: &AssocAlgebra) -> Result<Verdict> {
    let twisted = Arc::new(gerstenhaber_dgla(a.dim())?.twisted(a.to_multimap().coeffs())?);
    let zero = DglaSub::zero(twisted.clone())?;
    let c = zero.quotient_complex(&vec![Scalar::zero(); twisted.dim(1)])?;
    let dims = BTreeMap::from([
        (0, c.cohomology(-1)),
        (1, c.cohomology(0)),
        (2, c.cohomology(1)),
    ]);
    Ok(Verdict::new("assoc-rigidity", dims, 2, c.cocycle_dim(0)))
}

/// Degree-wise subspaces of normalized cochains: those pulled back along
/// `p: V → V/Ku`, i.e. vanishing as soon as one argument is the unit.
pub fn normalized_subspaces(a: &AssocAlgebra, max_degree: i32) -> Result<Vec<Subspace>> {
    let u = a.unit().ok_or(Error::MissingUnit)?;
    let n = a.dim();
    let (_, p) = quotient_data(n, &Subspace::span(n, &[u.to_vec()])?)?;
    let mut subs = vec![Subspace::full(n)];
    for d in 0..=max_degree {
        let arity = (d + 1) as usize;
        let small = IndexBasis::new(Flavor::Tensor, n - 1, arity).len() * n;
        let vectors: Vec<Vec<Scalar>> = (0..small)
            .map(|idx| {
                let mut coeffs = vec![Scalar::zero(); small];
                coeffs[idx] = Scalar::one();
                let phi = MultiMap::unflatten(Flavor::Tensor, arity, n - 1, n, coeffs)?;
                Ok(phi.pullback(&p)?.coeffs().to_vec())
            })
            .collect::<Result<_>>()?;
        subs.push(Subspace::span(n.pow(arity as u32) * n, &vectors)?);
    }
    Ok(subs)
}

/// The normalized cochains as a sub-DGLA of the Gerstenhaber DGLA twisted
/// by `m`; closure is validated on construction.
pub fn normalized_subcomplex(a: &AssocAlgebra) -> Result<DglaSub> {
    let twisted = Arc::new(gerstenhaber_dgla(a.dim())?.twisted(a.to_multimap().coeffs())?);
    let subs = normalized_subspaces(a, twisted.max_degree())?;
    DglaSub::new(twisted, subs)
}

/// Whether nearby associative structures stay unital: the cohomology of the
/// full modulo the normalized complex in degrees 0 and 1.
pub fn unitality_stability(a: &AssocAlgebra) -> Result<Verdict> {
    let h = normalized_subcomplex(a)?;
    let mut v = h.stability_criterion(&vec![Scalar::zero(); h.parent().dim(1)])?;
    v.criterion = "unitality".into();
    Ok(v)
}
