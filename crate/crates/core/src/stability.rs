//! Stability of subalgebras and of morphisms.
//!
//! Every criterion here is an instance of the quotient-complex test of
//! [`DglaSub::stability_criterion`]; each also has a Chevalley–Eilenberg
//! description, and [`RouteComparison`] records both computations so they
//! can be compared degree by degree.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::Zero;

use crate::complex::CochainComplex;
use crate::dgla::{Dgla, DglaSub, Verdict};
use crate::error::{Error, Result};
use crate::lie::{ce_complex_to, nr_dgla_window, LieAlgebra, Representation};
use crate::linalg::{int, quotient_data, Mat, Scalar, Subspace};
use crate::morphism::{morphism_dgla, LieMorphism};
use crate::multilinear::{binomial, Flavor, MultiMap};

/// Checks that `w` is closed under the bracket of `l`.
pub fn check_lie_subalgebra(l: &LieAlgebra, w: &Subspace) -> Result<()> {
    if w.ambient_dim() != l.dim() {
        return Err(Error::AmbientMismatch {
            expected: l.dim(),
            got: w.ambient_dim(),
        });
    }
    let vs = w.vectors();
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            if !w.contains(&l.bracket(&vs[i], &vs[j])) {
                return Err(Error::NotLieSubalgebra { i, j });
            }
        }
    }
    Ok(())
}

/// Bracket of `l` restricted to the subalgebra `w`, in the basis of `w`.
pub fn restricted_algebra(l: &LieAlgebra, w: &Subspace) -> Result<LieAlgebra> {
    check_lie_subalgebra(l, w)?;
    let vs = w.vectors();
    let k = vs.len();
    let mut s = vec![Scalar::zero(); k * k * k];
    for i in 0..k {
        for j in 0..k {
            let c = w
                .coordinates(&l.bracket(&vs[i], &vs[j]))
                .expect("closed under the bracket");
            s[(i * k + j) * k..(i * k + j + 1) * k].clone_from_slice(&c);
        }
    }
    LieAlgebra::new(k, s)
}

/// Action of `w` on `l/w` (or of a source algebra through `f` on a quotient):
/// `ρ(x)[v] = P [ι(x), σ(v)]` with `ι` given by columns of `embed`.
fn quotient_action(target: &LieAlgebra, embed: &Mat, u: &Subspace) -> Result<Vec<Mat>> {
    let (complement, p) = quotient_data(target.dim(), u)?;
    let sigma = complement.vectors();
    (0..embed.cols())
        .map(|i| {
            let x = embed.column(i);
            let cols: Vec<Vec<Scalar>> = sigma
                .iter()
                .map(|v| p.mul_vec(&target.bracket(&x, v)))
                .collect::<Result<_>>()?;
            Ok(Mat::from_columns(p.rows(), &cols))
        })
        .collect()
}

/// Dimensions and cohomology of two complexes that should be isomorphic,
/// over CE degrees `0..=2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RouteComparison {
    pub quotient_dims: Vec<usize>,
    pub quotient_cohomology: Vec<usize>,
    pub ce_dims: Vec<usize>,
    pub ce_cohomology: Vec<usize>,
}

impl RouteComparison {
    /// `offset` maps CE degree `k` to quotient-complex degree `k + offset`.
    fn new(quotient: &CochainComplex, offset: i32, ce: &CochainComplex) -> Self {
        let degs = 0..=2i32;
        RouteComparison {
            quotient_dims: degs.clone().map(|k| quotient.dim(k + offset)).collect(),
            quotient_cohomology: degs
                .clone()
                .map(|k| quotient.cohomology(k + offset))
                .collect(),
            ce_dims: degs.clone().map(|k| ce.dim(k)).collect(),
            ce_cohomology: degs.map(|k| ce.cohomology(k)).collect(),
        }
    }

    pub fn agree(&self) -> bool {
        self.quotient_dims == self.ce_dims && self.quotient_cohomology == self.ce_cohomology
    }
}

/// A subalgebra `W` of `(V, μ)`.
#[derive(Clone, Debug)]
pub struct SubalgebraProblem {
    ambient: LieAlgebra,
    sub: Subspace,
}

impl SubalgebraProblem {
    pub fn new(ambient: LieAlgebra, sub: Subspace) -> Result<Self> {
        check_lie_subalgebra(&ambient, &sub)?;
        Ok(SubalgebraProblem { ambient, sub })
    }

    pub fn ambient(&self) -> &LieAlgebra {
        &self.ambient
    }

    pub fn sub(&self) -> &Subspace {
        &self.sub
    }

    /// `V/W` as a `W`-module.
    pub fn quotient_representation(&self) -> Result<(LieAlgebra, Representation)> {
        let w = restricted_algebra(&self.ambient, &self.sub)?;
        let action = quotient_action(&self.ambient, self.sub.basis(), &self.sub)?;
        let dim = self.ambient.dim() - self.sub.dim();
        let rep = Representation::new(&w, dim, action)?;
        Ok((w, rep))
    }
}

/// Kernel of `∧^{d+1} V* ⊗ V → ∧^{d+1} W* ⊗ V/W` in each NR degree `d`.
pub fn subalg_subspaces(p: &SubalgebraProblem, max_degree: i32) -> Result<Vec<Subspace>> {
    let n = p.ambient.dim();
    let (_, proj) = quotient_data(n, &p.sub)?;
    (-1..=max_degree)
        .map(|d| {
            let arity = (d + 1) as usize;
            let len = binomial(n, arity) * n;
            let cols: Vec<Vec<Scalar>> = (0..len)
                .map(|idx| {
                    let mut c = vec![Scalar::zero(); len];
                    c[idx] = int(1);
                    let alpha = MultiMap::unflatten(Flavor::Alternating, arity, n, n, c)?;
                    Ok(alpha
                        .pullback(p.sub.basis())?
                        .compose_output(&proj)?
                        .coeffs()
                        .to_vec())
                })
                .collect::<Result<_>>()?;
            let rows = binomial(p.sub.dim(), arity) * proj.rows();
            Ok(Mat::from_columns(rows, &cols).kernel_basis())
        })
        .collect()
}

/// Sub-DGLA of brackets preserving `W`, inside the NR DGLA over degrees `-1..=2`.
pub fn subalg_subdgla(p: &SubalgebraProblem) -> Result<DglaSub> {
    let g = Arc::new(nr_dgla_window(p.ambient.dim(), 2)?);
    DglaSub::new(g, subalg_subspaces(p, 2)?)
}

fn subalg_quotient(p: &SubalgebraProblem) -> Result<CochainComplex> {
    subalg_subdgla(p)?.quotient_complex(p.ambient.to_multimap().coeffs())
}

/// Quotient complex (NR degree `d`) against `CE(W, V/W)` (degree `d + 1`).
pub fn subalg_routes(p: &SubalgebraProblem) -> Result<RouteComparison> {
    let q = subalg_quotient(p)?;
    let (w, rep) = p.quotient_representation()?;
    let ce = ce_complex_to(&w, &rep, 3)?;
    Ok(RouteComparison::new(&q, -1, &ce))
}

fn ce_numbered(c: &CochainComplex, offset: i32) -> BTreeMap<i32, usize> {
    (0..=2).map(|k| (k, c.cohomology(k + offset))).collect()
}

/// Stability of `W`: passes iff `H²_CE(W, V/W) = 0`; tangent data `Der(W, V/W)`.
pub fn subalg_stability(p: &SubalgebraProblem) -> Result<Verdict> {
    let q = subalg_quotient(p)?;
    Ok(Verdict::new(
        "subalgebra",
        ce_numbered(&q, -1),
        2,
        q.cocycle_dim(0),
    ))
}

/// NR DGLA of `V ⊕ W` as the direct sum of the two NR DGLAs, degrees `-1..=2`.
pub fn pair_dgla(source: &LieAlgebra, target: &LieAlgebra) -> Result<Dgla> {
    nr_dgla_window(source.dim(), 2)?.direct_sum(&nr_dgla_window(target.dim(), 2)?)
}

/// `(α, β) ↦ f∘α - β∘f^{∧(d+1)}` in each degree `d = -1..=2`.
pub fn f_map(f: &LieMorphism) -> Result<Vec<Mat>> {
    let (n, m) = (f.source().dim(), f.target().dim());
    let fm = f.matrix();
    (-1..=2)
        .map(|d| {
            let arity = (d + 1) as usize;
            let (la, lb) = (binomial(n, arity) * n, binomial(m, arity) * m);
            let mut cols = Vec::with_capacity(la + lb);
            for idx in 0..la {
                let mut c = vec![Scalar::zero(); la];
                c[idx] = int(1);
                cols.push(
                    MultiMap::unflatten(Flavor::Alternating, arity, n, n, c)?
                        .compose_output(fm)?
                        .coeffs()
                        .to_vec(),
                );
            }
            for idx in 0..lb {
                let mut c = vec![Scalar::zero(); lb];
                c[idx] = int(-1);
                cols.push(
                    MultiMap::unflatten(Flavor::Alternating, arity, m, m, c)?
                        .pullback(fm)?
                        .coeffs()
                        .to_vec(),
                );
            }
            Ok(Mat::from_columns(binomial(n, arity) * m, &cols))
        })
        .collect()
}

/// `ker F` as a sub-DGLA of [`pair_dgla`].
pub fn pair_subdgla(f: &LieMorphism) -> Result<DglaSub> {
    let g = Arc::new(pair_dgla(f.source(), f.target())?);
    let subs = f_map(f)?.iter().map(Mat::kernel_basis).collect();
    DglaSub::new(g, subs)
}

pub fn pair_element(f: &LieMorphism) -> Vec<Scalar> {
    let mut q = f.source().to_multimap().coeffs().to_vec();
    q.extend_from_slice(f.target().to_multimap().coeffs());
    q
}

/// Stability of `f` under simultaneous deformation of source and target.
pub fn pair_stability(f: &LieMorphism) -> Result<Verdict> {
    let mut v = pair_subdgla(f)?.stability_criterion(&pair_element(f))?;
    v.criterion = "pair".into();
    Ok(v)
}

/// Graph of `f` inside `V ⊕ W`.
pub fn graph_problem(f: &LieMorphism) -> Result<SubalgebraProblem> {
    let (n, m) = (f.source().dim(), f.target().dim());
    let vectors: Vec<Vec<Scalar>> = (0..n)
        .map(|i| {
            let mut v: Vec<Scalar> = (0..n)
                .map(|k| if k == i { int(1) } else { int(0) })
                .collect();
            v.extend(f.matrix().column(i));
            v
        })
        .collect();
    SubalgebraProblem::new(
        f.source().direct_sum(f.target()),
        Subspace::span(n + m, &vectors)?,
    )
}

/// Stability of the graph of `f` as a subalgebra of `V ⊕ W`.
pub fn graph_stability(f: &LieMorphism) -> Result<Verdict> {
    let mut v = subalg_stability(&graph_problem(f)?)?;
    v.criterion = "graph".into();
    Ok(v)
}

/// Graph quotient complex against `CE(V, W)` with `W` a module through `f`.
pub fn graph_routes(f: &LieMorphism) -> Result<RouteComparison> {
    let q = subalg_quotient(&graph_problem(f)?)?;
    let ce = ce_complex_to(f.source(), &f.induced_representation(), 3)?;
    Ok(RouteComparison::new(&q, -1, &ce))
}

/// A morphism `f: V → W` whose image lies in the subalgebra `U ⊆ W`.
#[derive(Clone, Debug)]
pub struct MapIntoSubalgProblem {
    f: LieMorphism,
    u: Subspace,
}

impl MapIntoSubalgProblem {
    pub fn new(f: LieMorphism, u: Subspace) -> Result<Self> {
        check_lie_subalgebra(f.target(), &u)?;
        for i in 0..f.source().dim() {
            if !u.contains(&f.matrix().column(i)) {
                return Err(Error::ImageNotContained { index: i });
            }
        }
        Ok(MapIntoSubalgProblem { f, u })
    }

    pub fn morphism(&self) -> &LieMorphism {
        &self.f
    }

    pub fn sub(&self) -> &Subspace {
        &self.u
    }

    /// `W/U` as a `V`-module through `f`.
    pub fn quotient_representation(&self) -> Result<Representation> {
        let action = quotient_action(self.f.target(), self.f.matrix(), &self.u)?;
        Representation::new(
            self.f.source(),
            self.f.target().dim() - self.u.dim(),
            action,
        )
    }
}

/// `∧^k V* ⊗ U` inside the morphism DGLA.
pub fn into_subalg_subdgla(p: &MapIntoSubalgProblem) -> Result<DglaSub> {
    let (n, m) = (p.f.source().dim(), p.f.target().dim());
    let g = Arc::new(morphism_dgla(p.f.source(), p.f.target())?);
    let us = p.u.vectors();
    let subs = (0..=3)
        .map(|k| {
            let len = binomial(n, k) * m;
            let vectors: Vec<Vec<Scalar>> = (0..binomial(n, k))
                .flat_map(|r| {
                    us.iter().map(move |u| {
                        let mut v = vec![Scalar::zero(); len];
                        v[r * m..(r + 1) * m].clone_from_slice(u);
                        v
                    })
                })
                .collect();
            Subspace::span(len, &vectors)
        })
        .collect::<Result<_>>()?;
    DglaSub::new(g, subs)
}

/// Quotient complex against `CE(V, W/U)` through `f`, same degrees.
pub fn into_subalg_routes(p: &MapIntoSubalgProblem) -> Result<RouteComparison> {
    let q = into_subalg_subdgla(p)?.quotient_complex(&p.f.to_element())?;
    let ce = ce_complex_to(p.f.source(), &p.quotient_representation()?, 3)?;
    Ok(RouteComparison::new(&q, 0, &ce))
}

/// Stability of "maps into `U`": passes iff `H¹_CE(V, W/U) = 0`; tangent
/// data `{[w] ∈ W/U : ν(w, f(V)) ⊆ U}`.
pub fn map_into_subalg_stability(p: &MapIntoSubalgProblem) -> Result<Verdict> {
    let q = into_subalg_subdgla(p)?.quotient_complex(&p.f.to_element())?;
    Ok(Verdict::new(
        "into-subalgebra",
        ce_numbered(&q, 0),
        1,
        q.cocycle_dim(0),
    ))
}

/// Matrix of `A ↦ Aᵀ G + G A` on `End(K^n)`, coordinates `A_ij` at `i * n + j`.
fn invariance_map(g: &Mat) -> Mat {
    let n = g.rows();
    Mat::from_fn(n * n, n * n, |row, col| {
        let (k, l) = (row / n, row % n);
        let (a, b) = (col / n, col % n);
        let mut v = Scalar::zero();
        if b == k {
            v += &g[(a, l)];
        }
        if b == l {
            v += &g[(k, a)];
        }
        v
    })
}

fn form_subalgebra(g: &Mat, sign: i64) -> Result<Subspace> {
    let n = g.rows();
    if g.cols() != n {
        return Err(Error::Shape("bilinear form must be square".into()));
    }
    if *g != g.transpose().scale(&int(sign)) {
        return Err(Error::WrongSymmetry);
    }
    if g.rank() != n {
        return Err(Error::DegenerateForm);
    }
    let s = invariance_map(g).kernel_basis();
    check_lie_subalgebra(&LieAlgebra::gl(n), &s)?;
    Ok(s)
}

/// `so(C, g)` inside `End(C)` for a symmetric nondegenerate `g`.
pub fn so_subalgebra(g: &Mat) -> Result<Subspace> {
    form_subalgebra(g, 1)
}

/// `sp(C, ω)` inside `End(C)` for an antisymmetric nondegenerate `ω`.
pub fn sp_subalgebra(omega: &Mat) -> Result<Subspace> {
    form_subalgebra(omega, -1)
}

/// The standard representation `so3 → gl3` with `U = so(3, I)`.
pub fn standard_so3_problem() -> Result<MapIntoSubalgProblem> {
    let so3 = crate::catalog::so3();
    // (L_i)_{jk} = -ε_{ijk}
    let eps = |i: usize, j: usize, k: usize| -> i64 {
        if i == j || j == k || i == k {
            0
        } else if (j + 3 - i) % 3 == 1 {
            1
        } else {
            -1
        }
    };
    let f = Mat::from_fn(9, 3, |r, i| int(-eps(i, r / 3, r % 3)));
    let f = LieMorphism::new(so3, LieAlgebra::gl(3), f)?;
    MapIntoSubalgProblem::new(f, so_subalgebra(&Mat::identity(3))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn borel() -> SubalgebraProblem {
        let s = Subspace::span(
            3,
            &[vec![int(1), int(0), int(0)], vec![int(0), int(1), int(0)]],
        )
        .unwrap();
        SubalgebraProblem::new(catalog::sl2(), s).unwrap()
    }

    #[test]
    fn rejects_non_subalgebra() {
        // span{e, f} is not closed: [e, f] = h
        let s = Subspace::span(
            3,
            &[vec![int(0), int(1), int(0)], vec![int(0), int(0), int(1)]],
        )
        .unwrap();
        assert!(matches!(
            SubalgebraProblem::new(catalog::sl2(), s),
            Err(Error::NotLieSubalgebra { .. })
        ));
    }

    #[test]
    fn extreme_subspaces() {
        let full = SubalgebraProblem::new(catalog::sl2(), Subspace::full(3)).unwrap();
        let h = subalg_subdgla(&full).unwrap();
        for d in -1..=2 {
            assert_eq!(h.codim(d), 0);
        }
        assert!(subalg_stability(&full).unwrap().passes);
        let zero = SubalgebraProblem::new(catalog::sl2(), Subspace::zero(3)).unwrap();
        let h = subalg_subdgla(&zero).unwrap();
        for d in 0..=2 {
            assert_eq!(h.codim(d), 0);
        }
    }

    #[test]
    fn borel_codimension_and_routes() {
        let h = subalg_subdgla(&borel()).unwrap();
        assert_eq!(h.codim(1), 1);
        let r = subalg_routes(&borel()).unwrap();
        assert!(r.agree(), "{r:?}");
        let v = subalg_stability(&borel()).unwrap();
        assert_eq!(v.cohomology_dims[&2], r.ce_cohomology[2]);
    }

    #[test]
    fn line_in_abelian_plane_passes() {
        let s = Subspace::span(2, &[vec![int(1), int(0)]]).unwrap();
        let p = SubalgebraProblem::new(catalog::abelian(2), s).unwrap();
        let v = subalg_stability(&p).unwrap();
        assert!(v.passes);
        assert!(subalg_routes(&p).unwrap().agree());
    }

    #[test]
    fn pair_kernel_examples() {
        let z = LieMorphism::zero(catalog::abelian(2), catalog::abelian(1));
        let fm = f_map(&z).unwrap();
        assert!(fm[1].is_zero());
        let h = pair_subdgla(&z).unwrap();
        assert_eq!(h.codim(0), 0);
        let id = LieMorphism::identity(catalog::sl2());
        let fm = f_map(&id).unwrap();
        let h = pair_subdgla(&id).unwrap();
        assert_eq!(h.codim(1), fm[2].rank());
        // kernel of F¹ for the identity is the diagonal
        assert_eq!(h.subspace(1).dim(), 9);
        for v in h.subspace(1).vectors() {
            assert_eq!(v[..9], v[9..]);
        }
    }

    #[test]
    fn pair_membership_is_morphism_condition() {
        let f = LieMorphism::new(
            catalog::sl2_borel(),
            catalog::sl2(),
            Mat::from_i64(&[&[1, 0], &[0, 1], &[0, 0]]),
        )
        .unwrap();
        let h = pair_subdgla(&f).unwrap();
        assert!(h.contains(1, &pair_element(&f)));
        let mut q = pair_element(&f);
        q[0] += int(1);
        assert!(!h.contains(1, &q));
    }

    #[test]
    fn pair_zero_between_abelian() {
        let z = LieMorphism::zero(catalog::abelian(1), catalog::abelian(1));
        let v = pair_stability(&z).unwrap();
        let h = pair_subdgla(&z).unwrap();
        assert_eq!(v.obstruction_dim(), h.codim(1));
    }

    #[test]
    fn graph_of_identity_and_zero() {
        let id = LieMorphism::identity(catalog::sl2());
        let r = graph_routes(&id).unwrap();
        assert!(r.agree(), "{r:?}");
        assert!(graph_stability(&id).unwrap().passes);
        let z = LieMorphism::zero(catalog::affine_line(), catalog::abelian(1));
        assert!(graph_routes(&z).unwrap().agree());
    }

    #[test]
    fn into_subalgebra_examples() {
        let f = LieMorphism::zero(catalog::abelian(2), catalog::sl2());
        let full = MapIntoSubalgProblem::new(f.clone(), Subspace::full(3)).unwrap();
        assert!(map_into_subalg_stability(&full).unwrap().passes);
        let zero = MapIntoSubalgProblem::new(f, Subspace::zero(3)).unwrap();
        let v = map_into_subalg_stability(&zero).unwrap();
        assert_eq!(v.obstruction_dim(), 6);
        assert!(into_subalg_routes(&zero).unwrap().agree());
        let bad = LieMorphism::identity(catalog::sl2());
        assert!(matches!(
            MapIntoSubalgProblem::new(bad, Subspace::zero(3)),
            Err(Error::ImageNotContained { index: 0 })
        ));
    }

    #[test]
    fn classical_subalgebras() {
        assert_eq!(so_subalgebra(&Mat::identity(3)).unwrap().dim(), 3);
        let omega = Mat::from_i64(&[&[0, 1], &[-1, 0]]);
        assert_eq!(sp_subalgebra(&omega).unwrap().dim(), 3);
        assert_eq!(
            sp_subalgebra(&Mat::from_i64(&[
                &[0, 0, 1, 0],
                &[0, 0, 0, 1],
                &[-1, 0, 0, 0],
                &[0, -1, 0, 0]
            ]))
            .unwrap()
            .dim(),
            10
        );
        assert!(matches!(so_subalgebra(&omega), Err(Error::WrongSymmetry)));
        assert!(matches!(
            so_subalgebra(&Mat::from_i64(&[&[1, 0], &[0, 0]])),
            Err(Error::DegenerateForm)
        ));
    }

    #[test]
    fn standard_so3_is_stable() {
        let p = standard_so3_problem().unwrap();
        let rep = p.quotient_representation().unwrap();
        assert_eq!(rep.dim(), 6);
        let v = map_into_subalg_stability(&p).unwrap();
        assert!(v.passes);
        assert!(into_subalg_routes(&p).unwrap().agree());
    }
}
