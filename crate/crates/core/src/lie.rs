//! Lie algebras, their representations, the Nijenhuis–Richardson DGLA and
//! Chevalley–Eilenberg complexes.
//!
//! The NR graded Lie algebra of `V` has `∧^{d+1} V* ⊗ V` in degree `d`, so
//! brackets on `V` are its degree-1 elements and `V` itself sits in degree -1.
//! A degree-`d` element is stored as the coefficient vector of an alternating
//! [`MultiMap`] of arity `d + 1`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::Zero;

use crate::complex::CochainComplex;
use crate::dgla::{Dgla, DglaSub, SparseVec, Verdict};
use crate::error::{Error, Result};
use crate::linalg::{int, Mat, Scalar};
use crate::multilinear::{binomial, sort_sign, Flavor, IndexBasis, MultiMap};

/// Finite-dimensional Lie algebra with `[e_i, e_j] = Σ_k c[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    structure: Vec<Scalar>,
}

impl LieAlgebra {
    /// Validates antisymmetry and the Jacobi identity on basis triples `i < j < k`.
    pub fn new(dim: usize, structure: Vec<Scalar>) -> Result<Self> {
        if structure.len() != dim * dim * dim {
            return Err(Error::Shape(format!(
                "structure tensor of a {dim}-dimensional algebra needs {} entries",
                dim * dim * dim
            )));
        }
        let l = LieAlgebra { dim, structure };
        for i in 0..dim {
            for j in i..dim {
                for k in 0..dim {
                    if l.c(i, j, k) != &-l.c(j, i, k) {
                        return Err(Error::NotAntisymmetric { i, j, k });
                    }
                }
            }
        }
        if let Some((i, j, k)) = l.jacobi_failure() {
            return Err(Error::NotLie { i, j, k });
        }
        Ok(l)
    }

    /// Builds the tensor from `(i, j, k, value)` entries with `i < j`, filling
    /// in `c[j][i][k] = -value`.
    pub fn from_entries(dim: usize, entries: &[(usize, usize, usize, Scalar)]) -> Result<Self> {
        let mut s = vec![Scalar::zero(); dim * dim * dim];
        for (i, j, k, v) in entries {
            if *i >= dim || *j >= dim || *k >= dim {
                return Err(Error::Shape(format!(
                    "structure index ({i}, {j}, {k}) out of range"
                )));
            }
            if i >= j {
                return Err(Error::NotAntisymmetric {
                    i: *i,
                    j: *j,
                    k: *k,
                });
            }
            s[(i * dim + j) * dim + k] += v;
            s[(j * dim + i) * dim + k] -= v;
        }
        LieAlgebra::new(dim, s)
    }

    pub fn from_bracket(mu: &MultiMap) -> Result<Self> {
        check_nr_element(mu, None)?;
        if mu.arity() != 2 {
            return Err(Error::Arity {
                expected: 2,
                got: mu.arity(),
            });
        }
        let n = mu.dim_in();
        let basis = mu.index_basis();
        let mut s = vec![Scalar::zero(); n * n * n];
        for i in 0..n {
            for j in 0..n {
                for (k, v) in mu.on_basis(&basis, &[i, j]).into_iter().enumerate() {
                    s[(i * n + j) * n + k] = v;
                }
            }
        }
        LieAlgebra::new(n, s)
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebra {
            dim,
            structure: vec![Scalar::zero(); dim * dim * dim],
        }
    }

    /// `gl(n)` on the basis `E_ij`, index `i * n + j`.
    pub fn gl(n: usize) -> Self {
        let d = n * n;
        let mut s = vec![Scalar::zero(); d * d * d];
        for (i, j, k, l) in itertools4(n) {
            let (a, b) = (i * n + j, k * n + l);
            if j == k {
                s[(a * d + b) * d + i * n + l] += int(1);
            }
            if l == i {
                s[(a * d + b) * d + k * n + j] -= int(1);
            }
        }
        LieAlgebra {
            dim: d,
            structure: s,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.structure[(i * self.dim + j) * self.dim + k]
    }

    pub fn structure(&self) -> &[Scalar] {
        &self.structure
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim;
        let mut out = vec![Scalar::zero(); n];
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let w = xi * yj;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.c(i, j, k);
                    if !c.is_zero() {
                        *o += &w * c;
                    }
                }
            }
        }
        out
    }

    fn basis_bracket(&self, i: usize, j: usize) -> &[Scalar] {
        let start = (i * self.dim + j) * self.dim;
        &self.structure[start..start + self.dim]
    }

    fn jacobi_failure(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim;
        let e = |i: usize| -> Vec<Scalar> {
            (0..n)
                .map(|k| if k == i { int(1) } else { int(0) })
                .collect()
        };
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let a = self.bracket(&e(i), self.basis_bracket(j, k));
                    let b = self.bracket(&e(j), self.basis_bracket(k, i));
                    let c = self.bracket(&e(k), self.basis_bracket(i, j));
                    if a.iter()
                        .zip(&b)
                        .zip(&c)
                        .any(|((x, y), z)| !(x + y + z).is_zero())
                    {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    /// The bracket as a degree-1 element of the NR DGLA.
    pub fn to_multimap(&self) -> MultiMap {
        MultiMap::from_basis_values(Flavor::Alternating, 2, self.dim, self.dim, |t| {
            self.basis_bracket(t[0], t[1]).to_vec()
        })
    }

    /// `V ⊕ W` with `[V, W] = 0`.
    pub fn direct_sum(&self, other: &LieAlgebra) -> LieAlgebra {
        let (n, m) = (self.dim, other.dim);
        let d = n + m;
        let mut s = vec![Scalar::zero(); d * d * d];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    s[(i * d + j) * d + k] = self.c(i, j, k).clone();
                }
            }
        }
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    s[((n + i) * d + n + j) * d + n + k] = other.c(i, j, k).clone();
                }
            }
        }
        LieAlgebra {
            dim: d,
            structure: s,
        }
    }

    /// `ad(e_i)` as a matrix: column `j` is `[e_i, e_j]`.
    pub fn ad_matrix(&self, i: usize) -> Mat {
        Mat::from_fn(self.dim, self.dim, |k, j| self.c(i, j, k).clone())
    }
}

fn itertools4(n: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..n).flat_map(move |i| {
        (0..n).flat_map(move |j| (0..n).flat_map(move |k| (0..n).map(move |l| (i, j, k, l))))
    })
}

/// Action `ρ: V → End(W)` given by one matrix per basis vector of `V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    dim: usize,
    action: Vec<Mat>,
}

impl Representation {
    /// Validates `ρ([e_i, e_j]) = [ρ(e_i), ρ(e_j)]` on basis pairs.
    pub fn new(lie: &LieAlgebra, dim: usize, action: Vec<Mat>) -> Result<Self> {
        if action.len() != lie.dim() || action.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::Shape(format!(
                "representation needs {} square matrices of size {dim}",
                lie.dim()
            )));
        }
        let r = Representation { dim, action };
        for i in 0..lie.dim() {
            for j in i + 1..lie.dim() {
                let lhs = r.act(lie.basis_bracket(i, j));
                let rhs = r.action[i]
                    .mul(&r.action[j])?
                    .add(&r.action[j].mul(&r.action[i])?.scale(&int(-1)))?;
                if lhs != rhs {
                    return Err(Error::InvalidRepresentation { i, j });
                }
            }
        }
        Ok(r)
    }

    pub fn adjoint(lie: &LieAlgebra) -> Self {
        Representation {
            dim: lie.dim(),
            action: (0..lie.dim()).map(|i| lie.ad_matrix(i)).collect(),
        }
    }

    pub fn trivial(lie: &LieAlgebra, dim: usize) -> Self {
        Representation {
            dim,
            action: vec![Mat::zeros(dim, dim); lie.dim()],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self, i: usize) -> &Mat {
        &self.action[i]
    }

    /// `ρ(x)` for a general vector `x`.
    pub fn act(&self, x: &[Scalar]) -> Mat {
        let mut m = Mat::zeros(self.dim, self.dim);
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            m = m.add(&self.action[i].scale(xi)).expect("same shape");
        }
        m
    }
}

fn check_nr_element(a: &MultiMap, n: Option<usize>) -> Result<()> {
    if a.flavor() != Flavor::Alternating {
        return Err(Error::Flavor(
            "the NR bracket acts on alternating maps".into(),
        ));
    }
    if a.dim_in() != a.dim_out() {
        return Err(Error::Shape(format!(
            "NR elements map V^k to V, got dim_in {} and dim_out {}",
            a.dim_in(),
            a.dim_out()
        )));
    }
    if let Some(n) = n {
        if a.dim_in() != n {
            return Err(Error::Shape(format!(
                "NR elements over spaces of dimension {n} and {}",
                a.dim_in()
            )));
        }
    }
    Ok(())
}

/// Bracket of the basis elements `e^I ⊗ e_a` (degree `|I| - 1`) and
/// `e^J ⊗ e_b`, as flat coordinates in the result basis.
fn nr_on_basis(
    target: &IndexBasis,
    n: usize,
    ti: &[usize],
    a: usize,
    tj: &[usize],
    b: usize,
) -> SparseVec {
    let (k, l) = (ti.len() as i32 - 1, tj.len() as i32 - 1);
    let mut out = Vec::with_capacity(2);
    // (e^J ∧ ι_{e_b} e^I) ⊗ e_a
    if let Some(p) = ti.iter().position(|&x| x == b) {
        let mut t: Vec<usize> = tj
            .iter()
            .copied()
            .chain(ti.iter().copied().filter(|&x| x != b))
            .collect();
        if let Some(s) = sort_sign(&mut t) {
            let r = target.rank_of(&t).expect("sorted tuple");
            let sign = if p % 2 == 0 { s } else { -s };
            out.push((r * n + a, int(sign as i64)));
        }
    }
    // -(-1)^{kl} (e^I ∧ ι_{e_a} e^J) ⊗ e_b
    if let Some(p) = tj.iter().position(|&x| x == a) {
        let mut t: Vec<usize> = ti
            .iter()
            .copied()
            .chain(tj.iter().copied().filter(|&x| x != a))
            .collect();
        if let Some(s) = sort_sign(&mut t) {
            let r = target.rank_of(&t).expect("sorted tuple");
            let mut sign = if p % 2 == 0 { -s } else { s };
            if (k * l).rem_euclid(2) == 1 {
                sign = -sign;
            }
            out.push((r * n + b, int(sign as i64)));
        }
    }
    out
}

/// Nijenhuis–Richardson bracket of alternating `V`-valued maps. For a
/// bracket `μ`, `½[μ, μ]` is the Jacobiator `μ(μ(x,y),z) + μ(μ(y,z),x) + μ(μ(z,x),y)`.
pub fn nr_bracket(a: &MultiMap, b: &MultiMap) -> Result<MultiMap> {
    check_nr_element(a, None)?;
    check_nr_element(b, Some(a.dim_in()))?;
    let n = a.dim_in();
    let arity = a.arity() + b.arity();
    if arity == 0 {
        return Ok(MultiMap::zero(Flavor::Alternating, 0, n, n));
    }
    let arity = arity - 1;
    let (ba, bb) = (a.index_basis(), b.index_basis());
    let target = IndexBasis::new(Flavor::Alternating, n, arity);
    let mut coeffs = vec![Scalar::zero(); target.len() * n];
    for (p, x) in a.coeffs().iter().enumerate().filter(|(_, v)| !v.is_zero()) {
        for (q, y) in b.coeffs().iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            let w = x * y;
            for (idx, s) in nr_on_basis(&target, n, ba.tuple(p / n), p % n, bb.tuple(q / n), q % n)
            {
                coeffs[idx] += &w * s;
            }
        }
    }
    MultiMap::unflatten(Flavor::Alternating, arity, n, n, coeffs)
}

/// NR DGLA of `K^n` over degrees `-1..=3`.
pub fn nr_dgla(n: usize) -> Result<Dgla> {
    nr_dgla_window(n, 3)
}

/// NR DGLA of `K^n` over degrees `-1..=max_degree`; large spaces need a
/// smaller window to keep the exact axiom checks cheap.
pub fn nr_dgla_window(n: usize, max_degree: i32) -> Result<Dgla> {
    if max_degree < 2 {
        return Err(Error::InvalidDgla("window must reach degree 2".into()));
    }
    let bases: Vec<IndexBasis> = (0..=(max_degree + 1) as usize)
        .map(|k| IndexBasis::new(Flavor::Alternating, n, k))
        .collect();
    let dims: Vec<usize> = (0..bases.len()).map(|k| binomial(n, k) * n).collect();
    let diffs = dims.windows(2).map(|w| Mat::zeros(w[1], w[0])).collect();
    Dgla::new(-1, dims, diffs, |i, x, j, y| {
        let (bi, bj) = (&bases[(i + 1) as usize], &bases[(j + 1) as usize]);
        let target = &bases[(i + j + 1) as usize];
        nr_on_basis(target, n, bi.tuple(x / n), x % n, bj.tuple(y / n), y % n)
    })
}

/// Jacobi on basis triples, and `[c, c]_NR = 0`, for an antisymmetric bracket.
pub fn is_lie_routes(c: &MultiMap) -> Result<(bool, bool)> {
    check_nr_element(c, None)?;
    if c.arity() != 2 {
        return Err(Error::Arity {
            expected: 2,
            got: c.arity(),
        });
    }
    let n = c.dim_in();
    let basis = c.index_basis();
    let mut s = vec![Scalar::zero(); n * n * n];
    for i in 0..n {
        for j in 0..n {
            for (k, v) in c.on_basis(&basis, &[i, j]).into_iter().enumerate() {
                s[(i * n + j) * n + k] = v;
            }
        }
    }
    let jacobi = LieAlgebra {
        dim: n,
        structure: s,
    }
    .jacobi_failure()
    .is_none();
    let nr = nr_bracket(c, c)?.is_zero();
    Ok((jacobi, nr))
}

/// Whether an antisymmetric bracket satisfies Jacobi; both routes must agree.
pub fn is_lie(c: &MultiMap) -> Result<bool> {
    let (jacobi, nr) = is_lie_routes(c)?;
    assert_eq!(jacobi, nr, "Jacobi triples and [c,c]_NR disagree");
    Ok(jacobi)
}

/// Coordinates of `d α` for the cochain `α = e^T ⊗ w_c`, collected into the
/// matrix `C^k → C^{k+1}` with `C^k = ∧^k V* ⊗ W`.
fn ce_differential(lie: &LieAlgebra, rep: &Representation, k: usize) -> Mat {
    let (n, m) = (lie.dim(), rep.dim());
    let src = IndexBasis::new(Flavor::Alternating, n, k);
    let dst = IndexBasis::new(Flavor::Alternating, n, k + 1);
    let mut d = Mat::zeros(dst.len() * m, src.len() * m);
    for row_t in 0..dst.len() {
        let s = dst.tuple(row_t).to_vec();
        for i in 0..s.len() {
            let rest: Vec<usize> = s
                .iter()
                .enumerate()
                .filter(|&(p, _)| p != i)
                .map(|(_, &x)| x)
                .collect();
            let col_t = src.rank_of(&rest).expect("sorted");
            let sign = if i % 2 == 0 { int(1) } else { int(-1) };
            let rho = rep.action(s[i]);
            for out in 0..m {
                for c in 0..m {
                    let v = &rho[(out, c)];
                    if !v.is_zero() {
                        d[(row_t * m + out, col_t * m + c)] += &sign * v;
                    }
                }
            }
        }
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                let rest: Vec<usize> = s
                    .iter()
                    .enumerate()
                    .filter(|&(p, _)| p != i && p != j)
                    .map(|(_, &x)| x)
                    .collect();
                let sign = if (i + j) % 2 == 0 { int(1) } else { int(-1) };
                for (e, coef) in lie.basis_bracket(s[i], s[j]).iter().enumerate() {
                    if coef.is_zero() {
                        continue;
                    }
                    let mut t = vec![e];
                    t.extend(&rest);
                    if let Some((col_t, sg)) = src.signed_rank(&t) {
                        let w = &sign * coef * int(sg as i64);
                        for c in 0..m {
                            d[(row_t * m + c, col_t * m + c)] += &w;
                        }
                    }
                }
            }
        }
    }
    d
}

/// CE complex `C^0 → … → C^3` with values in `rep`.
pub fn ce_complex(lie: &LieAlgebra, rep: &Representation) -> Result<CochainComplex> {
    ce_complex_to(lie, rep, 3)
}

pub fn ce_complex_to(lie: &LieAlgebra, rep: &Representation, top: usize) -> Result<CochainComplex> {
    if rep.action.len() != lie.dim() {
        return Err(Error::Shape(
            "representation and Lie algebra dimensions differ".into(),
        ));
    }
    let dims = (0..=top)
        .map(|k| binomial(lie.dim(), k) * rep.dim())
        .collect();
    let diffs = (0..top).map(|k| ce_differential(lie, rep, k)).collect();
    CochainComplex::new(0, dims, diffs)
}

/// Rescaling of arity-`k` cochains, `(-1)^{k(k+1)/2}`, that carries the
/// twisted NR differential onto the CE differential (they differ by `(-1)^d`
/// on NR degree `d`).
pub fn identification_sign(k: i32) -> Scalar {
    if (k * (k + 1) / 2).rem_euclid(2) == 0 {
        int(1)
    } else {
        int(-1)
    }
}

/// Compares `∂ + [μ,-]` on the NR DGLA with the adjoint CE differential in
/// every degree both are built, after the signed identification of cochains.
pub fn adjoint_twist_agreement(lie: &LieAlgebra) -> Result<bool> {
    let g = nr_dgla_window(lie.dim(), 2)?;
    let mu = lie.to_multimap();
    let twist = g.twist(mu.coeffs())?;
    let ce = ce_complex_to(lie, &Representation::adjoint(lie), 3)?;
    for d in -1..=1i32 {
        let k = d + 1;
        let s = identification_sign(k + 1) * identification_sign(k);
        let t = &twist[(d + 1) as usize];
        if *t != ce.differential(k).scale(&s) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Rigidity criterion: passes iff `H²_CE(V, V) = 0`; tangent data `Der(V)`.
pub fn lie_rigidity(lie: &LieAlgebra) -> Result<Verdict> {
    let g = nr_dgla_window(lie.dim(), 2)?;
    let twisted = Arc::new(g.twisted(lie.to_multimap().coeffs())?);
    let zero = DglaSub::zero(twisted.clone())?;
    let c = zero.quotient_complex(&vec![Scalar::zero(); twisted.dim(1)])?;
    let dims = BTreeMap::from([
        (0, c.cohomology(-1)),
        (1, c.cohomology(0)),
        (2, c.cohomology(1)),
    ]);
    Ok(Verdict::new("lie-rigidity", dims, 2, c.cocycle_dim(0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::linalg::frac;
    use proptest::prelude::*;

    fn mm(dim: usize, entries: &[(usize, usize, usize, i64)]) -> MultiMap {
        MultiMap::from_basis_values(Flavor::Alternating, 2, dim, dim, |t| {
            let mut v = vec![int(0); dim];
            for &(i, j, k, c) in entries {
                if (i, j) == (t[0], t[1]) {
                    v[k] += int(c);
                }
            }
            v
        })
    }

    #[test]
    fn rejects_bad_structure() {
        let mut s = vec![int(0); 8];
        s[1] = int(1); // c[0][0][1]
        assert!(matches!(
            LieAlgebra::new(2, s),
            Err(Error::NotAntisymmetric { .. })
        ));
        let c = [(0, 1, 0, 1), (0, 2, 0, 1), (1, 2, 1, 1)].map(|(i, j, k, v)| (i, j, k, int(v)));
        assert!(matches!(
            LieAlgebra::from_entries(3, &c),
            Err(Error::NotLie { .. })
        ));
    }

    #[test]
    fn nr_bracket_of_zero() {
        let z = MultiMap::zero(Flavor::Alternating, 2, 3, 3);
        assert!(nr_bracket(&z, &z).unwrap().is_zero());
    }

    #[test]
    fn so3_squares_to_zero() {
        let mu = catalog::so3().to_multimap();
        let sq = nr_bracket(&mu, &mu).unwrap();
        assert_eq!(sq.arity(), 3);
        assert!(sq.is_zero());
    }

    #[test]
    fn half_bracket_is_jacobiator() {
        let mu = mm(3, &[(0, 1, 0, 1), (0, 2, 0, 1), (1, 2, 1, 1)]);
        let half = nr_bracket(&mu, &mu).unwrap().scale(&frac(1, 2));
        let l = LieAlgebra {
            dim: 3,
            structure: {
                let b = mu.index_basis();
                let mut s = Vec::new();
                for i in 0..3 {
                    for j in 0..3 {
                        s.extend(mu.on_basis(&b, &[i, j]));
                    }
                }
                s
            },
        };
        let e = |i| crate::assoc::basis_vector(3, i);
        let jac = l
            .bracket(&l.bracket(&e(0), &e(1)), &e(2))
            .into_iter()
            .zip(l.bracket(&l.bracket(&e(1), &e(2)), &e(0)))
            .zip(l.bracket(&l.bracket(&e(2), &e(0)), &e(1)))
            .map(|((a, b), c)| a + b + c)
            .collect::<Vec<_>>();
        assert_eq!(half.eval(&[e(0), e(1), e(2)]).unwrap(), jac);
        assert!(jac.iter().any(|x| !x.is_zero()));
    }

    #[test]
    fn degree_zero_bracket_is_infinitesimal_conjugation() {
        // [A, μ] = A μ(x, y) - μ(Ax, y) - μ(x, Ay)
        let mu = catalog::sl2().to_multimap();
        let a = Mat::from_i64(&[&[1, 2, 0], &[0, -1, 3], &[1, 0, 2]]);
        let am = MultiMap::unflatten(
            Flavor::Alternating,
            1,
            3,
            3,
            (0..3).flat_map(|j| a.column(j)).collect(),
        )
        .unwrap();
        let got = nr_bracket(&am, &mu).unwrap();
        let want = mu.compose_output(&a).unwrap();
        let b = mu.index_basis();
        for i in 0..3 {
            for j in i + 1..3 {
                let (x, y) = (
                    crate::assoc::basis_vector(3, i),
                    crate::assoc::basis_vector(3, j),
                );
                let mut w = want.eval(&[x.clone(), y.clone()]).unwrap();
                let t1 = mu.eval(&[a.mul_vec(&x).unwrap(), y.clone()]).unwrap();
                let t2 = mu.eval(&[x.clone(), a.mul_vec(&y).unwrap()]).unwrap();
                for k in 0..3 {
                    w[k] -= &t1[k] + &t2[k];
                }
                assert_eq!(got.on_basis(&b, &[i, j]), w);
            }
        }
    }

    #[test]
    fn is_lie_examples() {
        assert!(is_lie(&MultiMap::zero(Flavor::Alternating, 2, 3, 3)).unwrap());
        assert!(is_lie(&catalog::so3().to_multimap()).unwrap());
        let bad = mm(3, &[(0, 1, 0, 1), (0, 2, 0, 1), (1, 2, 1, 1)]);
        assert_eq!(is_lie_routes(&bad).unwrap(), (false, false));
    }

    #[test]
    fn ce_trivial_and_low_degrees() {
        let ab = catalog::abelian(3);
        let c = ce_complex(&ab, &Representation::trivial(&ab, 2)).unwrap();
        assert!(c.differentials().iter().all(Mat::is_zero));
        // invariants of the adjoint action are the center; degree-1 cocycles are derivations
        let h = catalog::heisenberg3();
        let c = ce_complex(&h, &Representation::adjoint(&h)).unwrap();
        assert_eq!(c.cocycle_dim(0), 1);
        assert_eq!(c.cocycle_dim(1), 6);
        assert_eq!(c.coboundary_dim(1), 2);
        let s = catalog::sl2();
        let c = ce_complex(&s, &Representation::adjoint(&s)).unwrap();
        assert_eq!(c.cocycle_dim(0), 0);
        assert_eq!(c.cocycle_dim(1), 3);
        assert_eq!(c.cohomology(1), 0);
    }

    #[test]
    fn twist_agrees_with_adjoint_ce() {
        for l in [
            catalog::abelian(2),
            catalog::so3(),
            catalog::affine_line(),
            catalog::heisenberg3(),
            catalog::sl2_borel(),
        ] {
            assert!(adjoint_twist_agreement(&l).unwrap());
        }
    }

    #[test]
    fn rigidity_examples() {
        let v = lie_rigidity(&catalog::so3()).unwrap();
        assert!(v.passes);
        assert_eq!(v.tangent_dim, 3);
        let v = lie_rigidity(&catalog::abelian(2)).unwrap();
        assert!(!v.passes);
        assert_eq!(v.obstruction_dim(), 2);
        let v = lie_rigidity(&catalog::sl2()).unwrap();
        assert!(v.passes);
        assert_eq!(v.tangent_dim, 3);
    }

    #[test]
    fn representation_check() {
        let s = catalog::so3();
        let bad = vec![Mat::identity(2), Mat::zeros(2, 2), Mat::zeros(2, 2)];
        assert!(matches!(
            Representation::new(&s, 2, bad),
            Err(Error::InvalidRepresentation { .. })
        ));
        let adj = Representation::adjoint(&s);
        let action = (0..3).map(|i| adj.action(i).clone()).collect();
        assert!(Representation::new(&s, 3, action).is_ok());
    }

    #[test]
    fn gl_is_lie() {
        let g = LieAlgebra::gl(2);
        assert!(LieAlgebra::new(4, g.structure().to_vec()).is_ok());
    }

    fn small() -> impl Strategy<Value = Scalar> {
        (-3i64..=3).prop_map(int)
    }

    fn antisymmetric(n: usize) -> impl Strategy<Value = MultiMap> {
        let len = n * (n - 1) / 2 * n;
        proptest::collection::vec(prop_oneof![3 => Just(int(0)), 2 => small()], len)
            .prop_map(move |c| MultiMap::unflatten(Flavor::Alternating, 2, n, n, c).unwrap())
    }

    fn element(n: usize, arity: usize) -> impl Strategy<Value = MultiMap> {
        let len = binomial(n, arity) * n;
        proptest::collection::vec(prop_oneof![2 => Just(int(0)), 1 => small()], len)
            .prop_map(move |c| MultiMap::unflatten(Flavor::Alternating, arity, n, n, c).unwrap())
    }

    fn jacobi_triple() -> impl Strategy<Value = (MultiMap, MultiMap, MultiMap)> {
        (2usize..=3, 0usize..=3, 0usize..=3, 0usize..=3)
            .prop_filter("degrees stay in -1..=3", |(_, a, b, c)| {
                a + b + c <= 5 && a + b >= 1 && b + c >= 1 && a + c >= 1
            })
            .prop_flat_map(|(n, a, b, c)| (element(n, a), element(n, b), element(n, c)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn is_lie_routes_agree(mu in (2usize..=4).prop_flat_map(antisymmetric)) {
            let (a, b) = is_lie_routes(&mu).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn nr_graded_jacobi((x, y, z) in jacobi_triple()) {
            let (dx, dy) = (x.arity() as i64 - 1, y.arity() as i64 - 1);
            let xy = nr_bracket(&x, &y).unwrap();
            let yx = nr_bracket(&y, &x).unwrap();
            let s = if (dx * dy).rem_euclid(2) == 0 { int(-1) } else { int(1) };
            prop_assert_eq!(&xy, &yx.scale(&s));
            // [[x,y],z] = [x,[y,z]] - (-1)^{|x||y|} [y,[x,z]]
            let lhs = nr_bracket(&xy, &z).unwrap();
            let r1 = nr_bracket(&x, &nr_bracket(&y, &z).unwrap()).unwrap();
            let r2 = nr_bracket(&y, &nr_bracket(&x, &z).unwrap()).unwrap();
            prop_assert_eq!(lhs, r1.add(&r2.scale(&s)).unwrap());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn ce_squares_to_zero_for_conjugated_reps(entries in proptest::collection::vec(-2i64..=2, 9)) {
            let p = Mat::from_fn(3, 3, |r, c| int(entries[r * 3 + c]) + if r == c { int(5) } else { int(0) });
            let pinv = p.inverse().unwrap();
            for l in [catalog::so3(), catalog::sl2(), catalog::heisenberg3()] {
                let adj = Representation::adjoint(&l);
                let action = (0..3).map(|i| p.mul(adj.action(i)).unwrap().mul(&pinv).unwrap()).collect();
                let rep = Representation::new(&l, 3, action).unwrap();
                prop_assert!(ce_complex(&l, &rep).is_ok());
            }
        }
    }
}
