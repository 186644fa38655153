//! Finite-dimensional differential graded Lie algebras over a degree window.
//!
//! A [`Dgla`] stores one differential matrix per degree and one sparse
//! bracket table per pair of degrees whose sum stays inside the window. The
//! constructor checks `∂² = 0`, graded skew-symmetry, the graded Leibniz rule
//! and the graded Jacobi identity exactly on basis tuples; identities that
//! would leave the window are not checked.
//!
//! A [`DglaSub`] is a degree-wise subspace closed under `∂` and the bracket,
//! together with the splittings used to coordinatize `𝔤/𝔥`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num::{One, Zero};

use crate::complex::CochainComplex;
use crate::error::{Error, Result};
use crate::linalg::{format_scalar, max_abs, quotient_data, Mat, Scalar, Subspace};

/// Sparse coordinate vector, sorted by index, without explicit zeros.
pub type SparseVec = Vec<(usize, Scalar)>;

fn normalize_sparse(mut v: SparseVec) -> SparseVec {
    v.sort_by_key(|(i, _)| *i);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (i, x) in v {
        match out.last_mut() {
            Some((j, y)) if *j == i => *y += x,
            _ => out.push((i, x)),
        }
    }
    out.retain(|(_, x)| !x.is_zero());
    out
}

pub fn sparse_from_dense(v: &[Scalar]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

fn sign(parity: i32) -> Scalar {
    if parity.rem_euclid(2) == 0 {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

/// Brackets of basis vectors for one ordered pair of degrees.
#[derive(Clone, Debug)]
pub struct BracketTable {
    right_dim: usize,
    entries: Vec<SparseVec>,
}

impl BracketTable {
    pub fn from_fn(
        left_dim: usize,
        right_dim: usize,
        mut f: impl FnMut(usize, usize) -> SparseVec,
    ) -> Self {
        let mut entries = Vec::with_capacity(left_dim * right_dim);
        for a in 0..left_dim {
            for b in 0..right_dim {
                entries.push(normalize_sparse(f(a, b)));
            }
        }
        BracketTable { right_dim, entries }
    }

    pub fn get(&self, a: usize, b: usize) -> &SparseVec {
        &self.entries[a * self.right_dim + b]
    }
}

/// Element of one homogeneous component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    pub degree: i32,
    pub coords: Vec<Scalar>,
}

#[derive(Clone)]
pub struct Dgla {
    min_degree: i32,
    dims: Vec<usize>,
    differentials: Vec<Mat>,
    brackets: HashMap<(i32, i32), BracketTable>,
}

impl fmt::Debug for Dgla {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Dgla")
            .field("min_degree", &self.min_degree)
            .field("dims", &self.dims)
            .finish()
    }
}

impl Dgla {
    /// Builds and validates a DGLA from per-degree differentials and a bracket
    /// on basis vectors `(deg_x, a, deg_y, b) ↦ [e_a, e_b]`.
    ///
    /// `differentials[i]` is the map out of degree `min_degree + i`; the last
    /// degree has no outgoing differential, so `differentials.len() == dims.len() - 1`.
    pub fn new(
        min_degree: i32,
        dims: Vec<usize>,
        differentials: Vec<Mat>,
        mut bracket: impl FnMut(i32, usize, i32, usize) -> SparseVec,
    ) -> Result<Self> {
        let g = Self::assemble(min_degree, dims, differentials, &mut bracket)?;
        g.check_axioms()?;
        Ok(g)
    }

    fn assemble(
        min_degree: i32,
        dims: Vec<usize>,
        differentials: Vec<Mat>,
        bracket: &mut impl FnMut(i32, usize, i32, usize) -> SparseVec,
    ) -> Result<Self> {
        if dims.is_empty() || differentials.len() + 1 != dims.len() {
            return Err(Error::InvalidDgla(
                "need one differential per degree below the top".into(),
            ));
        }
        for (i, d) in differentials.iter().enumerate() {
            if d.cols() != dims[i] || d.rows() != dims[i + 1] {
                return Err(Error::InvalidDgla(format!(
                    "differential out of degree {} has the wrong shape",
                    min_degree + i as i32
                )));
            }
        }
        let max_degree = min_degree + dims.len() as i32 - 1;
        let mut brackets = HashMap::new();
        for i in min_degree..=max_degree {
            for j in min_degree..=max_degree {
                if i + j < min_degree || i + j > max_degree {
                    continue;
                }
                let (di, dj) = (
                    dims[(i - min_degree) as usize],
                    dims[(j - min_degree) as usize],
                );
                let target = dims[(i + j - min_degree) as usize];
                let table = BracketTable::from_fn(di, dj, |a, b| bracket(i, a, j, b));
                if table.entries.iter().flatten().any(|(k, _)| *k >= target) {
                    return Err(Error::InvalidDgla(format!(
                        "bracket of degrees ({i}, {j}) leaves the target space"
                    )));
                }
                brackets.insert((i, j), table);
            }
        }
        Ok(Dgla {
            min_degree,
            dims,
            differentials,
            brackets,
        })
    }

    pub fn min_degree(&self) -> i32 {
        self.min_degree
    }

    pub fn max_degree(&self) -> i32 {
        self.min_degree + self.dims.len() as i32 - 1
    }

    pub fn in_window(&self, degree: i32) -> bool {
        degree >= self.min_degree && degree <= self.max_degree()
    }

    pub fn dim(&self, degree: i32) -> usize {
        if self.in_window(degree) {
            self.dims[(degree - self.min_degree) as usize]
        } else {
            0
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Matrix of `∂: 𝔤^degree → 𝔤^{degree+1}` (empty past the window).
    pub fn differential(&self, degree: i32) -> Mat {
        if degree >= self.min_degree && degree < self.max_degree() {
            self.differentials[(degree - self.min_degree) as usize].clone()
        } else {
            Mat::zeros(self.dim(degree + 1), self.dim(degree))
        }
    }

    pub fn has_zero_differential(&self) -> bool {
        self.differentials.iter().all(Mat::is_zero)
    }

    pub fn bracket_table(&self, i: i32, j: i32) -> Option<&BracketTable> {
        self.brackets.get(&(i, j))
    }

    /// Bracket of homogeneous elements.
    pub fn bracket(&self, i: i32, x: &[Scalar], j: i32, y: &[Scalar]) -> Result<Vec<Scalar>> {
        if x.len() != self.dim(i) || y.len() != self.dim(j) {
            return Err(Error::Shape(
                "element dimension does not match its degree".into(),
            ));
        }
        let table = self.brackets.get(&(i, j)).ok_or_else(|| {
            Error::Shape(format!("bracket of degrees ({i}, {j}) leaves the window"))
        })?;
        let mut out = vec![Scalar::zero(); self.dim(i + j)];
        for (a, xa) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (b, yb) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let entry = table.get(a, b);
                if entry.is_empty() {
                    continue;
                }
                let w = xa * yb;
                for (k, c) in entry {
                    out[*k] += &w * c;
                }
            }
        }
        Ok(out)
    }

    /// Matrix of `[x, -]: 𝔤^target → 𝔤^{target + deg(x)}`.
    pub fn ad(&self, degree: i32, x: &[Scalar], target: i32) -> Result<Mat> {
        let table = self.brackets.get(&(degree, target)).ok_or_else(|| {
            Error::Shape(format!(
                "bracket of degrees ({degree}, {target}) leaves the window"
            ))
        })?;
        if x.len() != self.dim(degree) {
            return Err(Error::Shape(
                "element dimension does not match its degree".into(),
            ));
        }
        let mut m = Mat::zeros(self.dim(degree + target), self.dim(target));
        for (a, xa) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for b in 0..self.dim(target) {
                for (k, c) in table.get(a, b) {
                    m[(*k, b)] += xa * c;
                }
            }
        }
        Ok(m)
    }

    /// `∂q + ½[q, q]` for `q ∈ 𝔤¹`.
    pub fn mc_curvature(&self, q: &[Scalar]) -> Result<Vec<Scalar>> {
        if q.len() != self.dim(1) {
            return Err(Error::Shape(format!(
                "expected a degree-1 element of dimension {}, got {}",
                self.dim(1),
                q.len()
            )));
        }
        let dq = self.differential(1).mul_vec(q)?;
        let qq = self.bracket(1, q, 1, q)?;
        let half = Scalar::new(1.into(), 2.into());
        Ok(dq.iter().zip(&qq).map(|(a, b)| a + &half * b).collect())
    }

    pub fn is_maurer_cartan(&self, q: &[Scalar]) -> bool {
        self.mc_curvature(q)
            .map(|c| c.iter().all(Zero::is_zero))
            .unwrap_or(false)
    }

    fn require_mc(&self, q: &[Scalar]) -> Result<()> {
        let c = self.mc_curvature(q)?;
        if c.iter().any(|x| !x.is_zero()) {
            return Err(Error::NotMaurerCartan(format!("{:e}", max_abs(&c))));
        }
        Ok(())
    }

    /// Matrices of `∂ + [q, -]` out of every degree below the top.
    pub fn twist(&self, q: &[Scalar]) -> Result<Vec<Mat>> {
        self.require_mc(q)?;
        (self.min_degree..self.max_degree())
            .map(|i| self.differential(i).add(&self.ad(1, q, i)?))
            .collect()
    }

    /// The same graded Lie algebra with differential `∂ + [q, -]`; its
    /// Maurer-Cartan elements are the `q'` with `q + q'` Maurer-Cartan in `self`.
    pub fn twisted(&self, q: &[Scalar]) -> Result<Dgla> {
        let differentials = self.twist(q)?;
        let g = Dgla {
            differentials,
            ..self.clone()
        };
        g.check_leibniz()?;
        Ok(g)
    }

    /// Direct sum with vanishing cross brackets; both windows must agree.
    pub fn direct_sum(&self, other: &Dgla) -> Result<Dgla> {
        if self.min_degree != other.min_degree || self.dims.len() != other.dims.len() {
            return Err(Error::InvalidDgla(
                "direct sum needs matching degree windows".into(),
            ));
        }
        let dims: Vec<usize> = self
            .dims
            .iter()
            .zip(&other.dims)
            .map(|(a, b)| a + b)
            .collect();
        let differentials = (0..self.differentials.len())
            .map(|s| {
                let (a, b) = (&self.differentials[s], &other.differentials[s]);
                Mat::from_fn(a.rows() + b.rows(), a.cols() + b.cols(), |r, c| {
                    if r < a.rows() && c < a.cols() {
                        a[(r, c)].clone()
                    } else if r >= a.rows() && c >= a.cols() {
                        b[(r - a.rows(), c - a.cols())].clone()
                    } else {
                        Scalar::zero()
                    }
                })
            })
            .collect();
        let g = Self::assemble(self.min_degree, dims, differentials, &mut |i, a, j, b| {
            let (si, sj, sk) = (self.dim(i), self.dim(j), self.dim(i + j));
            match (a < si, b < sj) {
                (true, true) => self.brackets[&(i, j)].get(a, b).clone(),
                (false, false) => other.brackets[&(i, j)]
                    .get(a - si, b - sj)
                    .iter()
                    .map(|(k, c)| (k + sk, c.clone()))
                    .collect(),
                _ => Vec::new(),
            }
        })?;
        g.check_axioms()?;
        Ok(g)
    }

    /// Exact check of every axiom on basis tuples.
    pub fn check_axioms(&self) -> Result<()> {
        self.check_square_zero()?;
        self.check_skew()?;
        self.check_leibniz()?;
        self.check_jacobi()
    }

    fn check_square_zero(&self) -> Result<()> {
        for (s, w) in self.differentials.windows(2).enumerate() {
            if !w[1].mul(&w[0])?.is_zero() {
                return Err(Error::InvalidDgla(format!(
                    "∂² ≠ 0 out of degree {}",
                    self.min_degree + s as i32
                )));
            }
        }
        Ok(())
    }

    fn check_skew(&self) -> Result<()> {
        for (&(i, j), table) in &self.brackets {
            if i > j {
                continue;
            }
            let other = &self.brackets[&(j, i)];
            let s = sign(i * j + 1);
            for a in 0..self.dim(i) {
                for b in 0..self.dim(j) {
                    let lhs = table.get(a, b);
                    let rhs: SparseVec =
                        other.get(b, a).iter().map(|(k, c)| (*k, c * &s)).collect();
                    if *lhs != rhs {
                        return Err(Error::InvalidDgla(format!(
                            "graded skew-symmetry fails for basis pair ({i}:{a}, {j}:{b})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_leibniz(&self) -> Result<()> {
        if self.has_zero_differential() {
            return Ok(());
        }
        let max = self.max_degree();
        for i in self.min_degree..=max {
            for j in self.min_degree..=max {
                if [i + 1, j + 1, i + j, i + j + 1]
                    .iter()
                    .any(|&d| !self.in_window(d))
                {
                    continue;
                }
                let (di, dj) = (self.differential(i), self.differential(j));
                let dij = self.differential(i + j);
                let s = sign(i);
                let (ti, tj) = (&self.brackets[&(i + 1, j)], &self.brackets[&(i, j + 1)]);
                for a in 0..self.dim(i) {
                    for b in 0..self.dim(j) {
                        let mut acc = vec![Scalar::zero(); self.dim(i + j + 1)];
                        for (t, c) in self.brackets[&(i, j)].get(a, b) {
                            for (r, o) in acc.iter_mut().enumerate() {
                                let m = &dij[(r, *t)];
                                if !m.is_zero() {
                                    *o += c * m;
                                }
                            }
                        }
                        for t in 0..self.dim(i + 1) {
                            let m = &di[(t, a)];
                            if m.is_zero() {
                                continue;
                            }
                            for (k, c) in ti.get(t, b) {
                                acc[*k] -= m * c;
                            }
                        }
                        for t in 0..self.dim(j + 1) {
                            let m = &dj[(t, b)];
                            if m.is_zero() {
                                continue;
                            }
                            for (k, c) in tj.get(a, t) {
                                acc[*k] -= &s * m * c;
                            }
                        }
                        if acc.iter().any(|x| !x.is_zero()) {
                            return Err(Error::InvalidDgla(format!(
                                "graded Leibniz rule fails for basis pair ({i}:{a}, {j}:{b})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `[[x,y],z] = [x,[y,z]] - (-1)^{|x||y|} [y,[x,z]]` on basis triples
    /// `x ≤ y ≤ z` in (degree, index) order; with skew-symmetry in place the
    /// remaining orderings are equivalent.
    fn check_jacobi(&self) -> Result<()> {
        let max = self.max_degree();
        for i in self.min_degree..=max {
            for j in i..=max {
                for k in j..=max {
                    if [i + j, j + k, i + k, i + j + k]
                        .iter()
                        .any(|&d| !self.in_window(d))
                    {
                        continue;
                    }
                    self.check_jacobi_block(i, j, k)?;
                }
            }
        }
        Ok(())
    }

    fn check_jacobi_block(&self, i: i32, j: i32, k: i32) -> Result<()> {
        let t_ij = &self.brackets[&(i, j)];
        let t_ij_k = &self.brackets[&(i + j, k)];
        let t_jk = &self.brackets[&(j, k)];
        let t_i_jk = &self.brackets[&(i, j + k)];
        let t_ik = &self.brackets[&(i, k)];
        let t_j_ik = &self.brackets[&(j, i + k)];
        let s = sign(i * j);
        let mut buf = vec![Scalar::zero(); self.dim(i + j + k)];
        let mut touched: Vec<usize> = Vec::new();
        for a in 0..self.dim(i) {
            let b0 = if i == j { a } else { 0 };
            for b in b0..self.dim(j) {
                let c0 = if j == k { b } else { 0 };
                for c in c0..self.dim(k) {
                    for (t, x) in t_ij.get(a, b) {
                        for (u, y) in t_ij_k.get(*t, c) {
                            buf[*u] += x * y;
                            touched.push(*u);
                        }
                    }
                    for (t, x) in t_jk.get(b, c) {
                        for (u, y) in t_i_jk.get(a, *t) {
                            buf[*u] -= x * y;
                            touched.push(*u);
                        }
                    }
                    for (t, x) in t_ik.get(a, c) {
                        for (u, y) in t_j_ik.get(b, *t) {
                            buf[*u] += &s * x * y;
                            touched.push(*u);
                        }
                    }
                    let bad = touched.iter().any(|&u| !buf[u].is_zero());
                    for &u in &touched {
                        buf[u] = Scalar::zero();
                    }
                    touched.clear();
                    if bad {
                        return Err(Error::InvalidDgla(format!(
                            "graded Jacobi identity fails for basis triple ({i}:{a}, {j}:{b}, {k}:{c})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Outcome of a cohomological criterion.
///
/// `passes` is true exactly when the obstruction group vanishes. A failing
/// criterion is inconclusive: the underlying theorems only go one way.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub criterion: String,
    pub cohomology_dims: BTreeMap<i32, usize>,
    pub obstruction_degree: i32,
    pub tangent_dim: usize,
    pub passes: bool,
}

impl Verdict {
    pub fn new(
        criterion: impl Into<String>,
        cohomology_dims: BTreeMap<i32, usize>,
        obstruction_degree: i32,
        tangent_dim: usize,
    ) -> Self {
        let passes = cohomology_dims.get(&obstruction_degree).copied() == Some(0);
        Verdict {
            criterion: criterion.into(),
            cohomology_dims,
            obstruction_degree,
            tangent_dim,
            passes,
        }
    }

    pub fn obstruction_dim(&self) -> usize {
        self.cohomology_dims
            .get(&self.obstruction_degree)
            .copied()
            .unwrap_or(0)
    }

    pub fn conclusion(&self) -> &'static str {
        if self.passes {
            "criterion passes"
        } else {
            "criterion inconclusive"
        }
    }
}

/// Differential graded Lie subalgebra with chosen splittings.
#[derive(Clone, Debug)]
pub struct DglaSub {
    parent: Arc<Dgla>,
    subspaces: Vec<Subspace>,
    complements: Vec<Subspace>,
    projections: Vec<Mat>,
}

impl DglaSub {
    /// Validates closure under `∂` and the bracket on basis pairs.
    pub fn new(parent: Arc<Dgla>, subspaces: Vec<Subspace>) -> Result<Self> {
        if subspaces.len() != parent.dims.len() {
            return Err(Error::NotSubalgebra("need one subspace per degree".into()));
        }
        let mut complements = Vec::new();
        let mut projections = Vec::new();
        for (s, sub) in subspaces.iter().enumerate() {
            let (c, p) = quotient_data(parent.dims[s], sub)?;
            complements.push(c);
            projections.push(p);
        }
        let h = DglaSub {
            parent,
            subspaces,
            complements,
            projections,
        };
        h.check_closure()?;
        Ok(h)
    }

    pub fn zero(parent: Arc<Dgla>) -> Result<Self> {
        let subs = parent.dims.iter().map(|&d| Subspace::zero(d)).collect();
        DglaSub::new(parent, subs)
    }

    pub fn full(parent: Arc<Dgla>) -> Result<Self> {
        let subs = parent.dims.iter().map(|&d| Subspace::full(d)).collect();
        DglaSub::new(parent, subs)
    }

    fn slot(&self, degree: i32) -> usize {
        assert!(
            self.parent.in_window(degree),
            "degree {degree} outside the window"
        );
        (degree - self.parent.min_degree) as usize
    }

    pub fn parent(&self) -> &Arc<Dgla> {
        &self.parent
    }

    pub fn subspace(&self, degree: i32) -> &Subspace {
        &self.subspaces[self.slot(degree)]
    }

    /// Columns span the splitting `σ: 𝔤/𝔥 → 𝔤` in this degree.
    pub fn complement(&self, degree: i32) -> &Subspace {
        &self.complements[self.slot(degree)]
    }

    /// Coordinates on `𝔤/𝔥`, vanishing on `𝔥`.
    pub fn projection(&self, degree: i32) -> &Mat {
        &self.projections[self.slot(degree)]
    }

    pub fn codim(&self, degree: i32) -> usize {
        self.complement(degree).dim()
    }

    pub fn contains(&self, degree: i32, v: &[Scalar]) -> bool {
        self.projection(degree)
            .mul_vec(v)
            .map(|p| p.iter().all(Zero::is_zero))
            .unwrap_or(false)
    }

    fn check_closure(&self) -> Result<()> {
        let g = &self.parent;
        for i in g.min_degree..g.max_degree() {
            let image = self
                .projection(i + 1)
                .mul(&g.differential(i))?
                .mul(self.subspace(i).basis())?;
            if !image.is_zero() {
                return Err(Error::NotSubalgebra(format!(
                    "∂ does not preserve the subspace in degree {i}"
                )));
            }
        }
        let vectors: Vec<Vec<Vec<Scalar>>> = self.subspaces.iter().map(Subspace::vectors).collect();
        for &(i, j) in g.brackets.keys() {
            if i > j {
                continue;
            }
            let p = self.projection(i + j);
            if p.rows() == 0 {
                continue;
            }
            for (a, x) in vectors[self.slot(i)].iter().enumerate() {
                let b0 = if i == j { a } else { 0 };
                for (b, y) in vectors[self.slot(j)].iter().enumerate().skip(b0) {
                    let br = g.bracket(i, x, j, y)?;
                    if p.mul_vec(&br)?.iter().any(|v| !v.is_zero()) {
                        return Err(Error::NotSubalgebra(format!(
                            "bracket of subspace basis vectors ({i}:{a}, {j}:{b}) leaves the subspace"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Complex `(𝔤/𝔥, ∂ + [q,-])` in quotient coordinates over the whole window.
    pub fn quotient_complex(&self, q: &[Scalar]) -> Result<CochainComplex> {
        if !self.contains(1, q) {
            return Err(Error::NotInSubalgebra { degree: 1 });
        }
        let g = &self.parent;
        let twist = g.twist(q)?;
        let diffs = (g.min_degree..g.max_degree())
            .map(|i| {
                let t = &twist[(i - g.min_degree) as usize];
                self.projection(i + 1)
                    .mul(t)?
                    .mul(self.complement(i).basis())
            })
            .collect::<Result<Vec<_>>>()?;
        let dims = (g.min_degree..=g.max_degree())
            .map(|i| self.codim(i))
            .collect();
        CochainComplex::new(g.min_degree, dims, diffs)
    }

    /// Cohomological stability criterion: passes iff `H¹(𝔤/𝔥, ∂̄ + [q,-]) = 0`.
    /// The tangent dimension is `dim ker(∂̄: 𝔤⁰/𝔥⁰ → 𝔤¹/𝔥¹)`.
    pub fn stability_criterion(&self, q: &[Scalar]) -> Result<Verdict> {
        let c = self.quotient_complex(q)?;
        let dims = BTreeMap::from([(0, c.cohomology(0)), (1, c.cohomology(1))]);
        Ok(Verdict::new("quotient-h1", dims, 1, c.cocycle_dim(0)))
    }
}

pub fn describe(v: &[Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(format_scalar).collect();
    format!("[{}]", parts.join(", "))
}
