//! Multilinear maps `V^k -> W` stored as coefficient tensors over canonical bases.
//!
//! Two flavors share one representation: alternating maps (elements of
//! `∧^k V* ⊗ W`) store one coefficient block per strictly increasing index
//! tuple, tensor maps (elements of `(V*)^{⊗k} ⊗ W`) store every `k`-tuple.
//! Tuples are ordered lexicographically and the flat coordinate of
//! `(tuple, out)` is `rank(tuple) * dim_out + out`.

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{Mat, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    Alternating,
    Tensor,
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of basis multi-indices of arity `k` over an `n`-dimensional space.
pub fn tuple_count(flavor: Flavor, n: usize, k: usize) -> usize {
    match flavor {
        Flavor::Alternating => binomial(n, k),
        Flavor::Tensor => n.pow(k as u32),
    }
}

/// Sorts `t` in place and returns the sign of the sorting permutation, or
/// `None` when an index repeats.
pub fn sort_sign(t: &mut [usize]) -> Option<i8> {
    let mut sign = 1i8;
    for i in 1..t.len() {
        let mut j = i;
        while j > 0 && t[j - 1] > t[j] {
            t.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && t[j - 1] == t[j] {
            return None;
        }
    }
    Some(sign)
}

/// Enumerated multi-indices of one flavor, arity and dimension, with an
/// inverse lookup table keyed by the base-`n` encoding of a tuple.
#[derive(Clone, Debug)]
pub struct IndexBasis {
    flavor: Flavor,
    n: usize,
    k: usize,
    tuples: Vec<usize>,
    lookup: Vec<u32>,
}

impl IndexBasis {
    pub fn new(flavor: Flavor, n: usize, k: usize) -> Self {
        let count = tuple_count(flavor, n, k);
        let mut tuples = Vec::with_capacity(count * k);
        let mut cur = vec![0usize; k];
        let total = n.pow(k as u32);
        let mut lookup = vec![u32::MAX; total];
        let mut rank = 0u32;
        for (code, entry) in lookup.iter_mut().enumerate() {
            let mut c = code;
            for slot in (0..k).rev() {
                cur[slot] = c % n.max(1);
                c /= n.max(1);
            }
            let keep = match flavor {
                Flavor::Tensor => true,
                Flavor::Alternating => cur.windows(2).all(|w| w[0] < w[1]),
            };
            if keep {
                tuples.extend_from_slice(&cur);
                *entry = rank;
                rank += 1;
            }
        }
        debug_assert_eq!(rank as usize, count);
        IndexBasis {
            flavor,
            n,
            k,
            tuples,
            lookup,
        }
    }

    pub fn len(&self) -> usize {
        self.tuples.len().checked_div(self.k).unwrap_or(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn tuple(&self, r: usize) -> &[usize] {
        &self.tuples[r * self.k..(r + 1) * self.k]
    }

    fn encode(&self, t: &[usize]) -> usize {
        t.iter().fold(0, |acc, &i| acc * self.n + i)
    }

    /// Rank of a tuple already in canonical form (increasing for the alternating flavor).
    pub fn rank_of(&self, t: &[usize]) -> Option<usize> {
        debug_assert_eq!(t.len(), self.k);
        let r = self.lookup[self.encode(t)];
        (r != u32::MAX).then_some(r as usize)
    }

    /// Rank and sign of an arbitrary tuple: alternating tuples are sorted
    /// (repeated indices give `None`), tensor tuples map with sign `+1`.
    pub fn signed_rank(&self, t: &[usize]) -> Option<(usize, i8)> {
        match self.flavor {
            Flavor::Tensor => self.rank_of(t).map(|r| (r, 1)),
            Flavor::Alternating => {
                let mut s = t.to_vec();
                let sign = sort_sign(&mut s)?;
                self.rank_of(&s).map(|r| (r, sign))
            }
        }
    }
}

/// A `k`-linear map from `K^dim_in` to `K^dim_out`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiMap {
    flavor: Flavor,
    arity: usize,
    dim_in: usize,
    dim_out: usize,
    coeffs: Vec<Scalar>,
}

impl MultiMap {
    pub fn zero(flavor: Flavor, arity: usize, dim_in: usize, dim_out: usize) -> Self {
        let len = tuple_count(flavor, dim_in, arity) * dim_out;
        MultiMap {
            flavor,
            arity,
            dim_in,
            dim_out,
            coeffs: vec![Scalar::zero(); len],
        }
    }

    /// Builds a map from its values on canonical basis tuples.
    pub fn from_basis_values(
        flavor: Flavor,
        arity: usize,
        dim_in: usize,
        dim_out: usize,
        mut value: impl FnMut(&[usize]) -> Vec<Scalar>,
    ) -> Self {
        let basis = IndexBasis::new(flavor, dim_in, arity);
        let mut m = MultiMap::zero(flavor, arity, dim_in, dim_out);
        for r in 0..basis.len() {
            let v = value(basis.tuple(r));
            debug_assert_eq!(v.len(), dim_out);
            m.coeffs[r * dim_out..(r + 1) * dim_out].clone_from_slice(&v);
        }
        m
    }

    /// An arity-0 map: just a vector of `W`.
    pub fn constant_on(dim_in: usize, flavor: Flavor, v: Vec<Scalar>) -> Self {
        MultiMap {
            flavor,
            arity: 0,
            dim_in,
            dim_out: v.len(),
            coeffs: v,
        }
    }

    /// The identity `V -> V` viewed as an arity-1 map.
    pub fn identity(flavor: Flavor, n: usize) -> Self {
        MultiMap::from_basis_values(flavor, 1, n, n, |t| {
            (0..n)
                .map(|o| {
                    if o == t[0] {
                        Scalar::one()
                    } else {
                        Scalar::zero()
                    }
                })
                .collect()
        })
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn index_basis(&self) -> IndexBasis {
        IndexBasis::new(self.flavor, self.dim_in, self.arity)
    }

    /// Value on a tuple of basis vectors (any order; alternating maps pick up the sign).
    pub fn on_basis(&self, basis: &IndexBasis, t: &[usize]) -> Vec<Scalar> {
        match basis.signed_rank(t) {
            None => vec![Scalar::zero(); self.dim_out],
            Some((r, sign)) => {
                let block = &self.coeffs[r * self.dim_out..(r + 1) * self.dim_out];
                if sign > 0 {
                    block.to_vec()
                } else {
                    block.iter().map(|x| -x).collect()
                }
            }
        }
    }

    pub fn eval(&self, args: &[Vec<Scalar>]) -> Result<Vec<Scalar>> {
        if args.len() != self.arity {
            return Err(Error::Arity {
                expected: self.arity,
                got: args.len(),
            });
        }
        if let Some(a) = args.iter().find(|a| a.len() != self.dim_in) {
            return Err(Error::Shape(format!(
                "argument of length {} for input dimension {}",
                a.len(),
                self.dim_in
            )));
        }
        let basis = self.index_basis();
        let all = IndexBasis::new(Flavor::Tensor, self.dim_in, self.arity);
        let mut out = vec![Scalar::zero(); self.dim_out];
        for r in 0..all.len() {
            let t = all.tuple(r);
            let mut w = Scalar::one();
            for (slot, &i) in t.iter().enumerate() {
                if args[slot][i].is_zero() {
                    w = Scalar::zero();
                    break;
                }
                w *= &args[slot][i];
            }
            if w.is_zero() {
                continue;
            }
            for (o, v) in out.iter_mut().zip(self.on_basis(&basis, t)) {
                if !v.is_zero() {
                    *o += &w * v;
                }
            }
        }
        Ok(out)
    }

    /// Interior product: the first argument is fixed to `v`.
    pub fn insert(&self, v: &[Scalar]) -> Result<MultiMap> {
        if self.arity == 0 {
            return Err(Error::Arity {
                expected: 1,
                got: 0,
            });
        }
        if v.len() != self.dim_in {
            return Err(Error::Shape(
                "inserted vector has the wrong dimension".into(),
            ));
        }
        let basis = self.index_basis();
        let mut full = vec![0usize; self.arity];
        Ok(MultiMap::from_basis_values(
            self.flavor,
            self.arity - 1,
            self.dim_in,
            self.dim_out,
            |t| {
                let mut acc = vec![Scalar::zero(); self.dim_out];
                for (i, vi) in v.iter().enumerate() {
                    if vi.is_zero() {
                        continue;
                    }
                    full[0] = i;
                    full[1..].copy_from_slice(t);
                    for (a, x) in acc.iter_mut().zip(self.on_basis(&basis, &full)) {
                        *a += vi * x;
                    }
                }
                acc
            },
        ))
    }

    /// Shuffle-sum wedge of a scalar-valued alternating form with an
    /// alternating map.
    pub fn wedge(a: &MultiMap, b: &MultiMap) -> Result<MultiMap> {
        if a.flavor != Flavor::Alternating || b.flavor != Flavor::Alternating {
            return Err(Error::Flavor("wedge needs alternating operands".into()));
        }
        if a.dim_out != 1 {
            return Err(Error::Flavor(
                "left wedge factor must be scalar-valued".into(),
            ));
        }
        if a.dim_in != b.dim_in {
            return Err(Error::Shape("wedge factors over different spaces".into()));
        }
        let (p, q) = (a.arity, b.arity);
        let (ba, bb) = (a.index_basis(), b.index_basis());
        let subsets = IndexBasis::new(Flavor::Alternating, p + q, p);
        let mut order = vec![0usize; p + q];
        Ok(MultiMap::from_basis_values(
            Flavor::Alternating,
            p + q,
            a.dim_in,
            b.dim_out,
            |t| {
                let mut acc = vec![Scalar::zero(); b.dim_out];
                for s in 0..subsets.len() {
                    let pos = subsets.tuple(s);
                    let mut rest = Vec::with_capacity(q);
                    let mut chosen = Vec::with_capacity(p);
                    for (slot, &idx) in t.iter().enumerate() {
                        if pos.contains(&slot) {
                            chosen.push(idx);
                        } else {
                            rest.push(idx);
                        }
                    }
                    order[..p].copy_from_slice(pos);
                    let mut k = p;
                    for slot in 0..p + q {
                        if !pos.contains(&slot) {
                            order[k] = slot;
                            k += 1;
                        }
                    }
                    let sign = sort_sign(&mut order.clone()).expect("permutation");
                    let av = &a.on_basis(&ba, &chosen)[0];
                    if av.is_zero() {
                        continue;
                    }
                    for (o, x) in acc.iter_mut().zip(b.on_basis(&bb, &rest)) {
                        if sign > 0 {
                            *o += av * x;
                        } else {
                            *o -= av * x;
                        }
                    }
                }
                acc
            },
        ))
    }

    /// `x_1..x_k ↦ m(p x_1, ..., p x_k)`; the result has input dimension `p.cols()`.
    pub fn pullback(&self, p: &Mat) -> Result<MultiMap> {
        if p.rows() != self.dim_in {
            return Err(Error::Shape(format!(
                "pullback along {}x{} for input dimension {}",
                p.rows(),
                p.cols(),
                self.dim_in
            )));
        }
        let cols = p.columns();
        Ok(MultiMap::from_basis_values(
            self.flavor,
            self.arity,
            p.cols(),
            self.dim_out,
            |t| {
                let args: Vec<Vec<Scalar>> = t.iter().map(|&i| cols[i].clone()).collect();
                self.eval(&args).expect("shapes checked")
            },
        ))
    }

    /// Post-composition with a linear map on the output space.
    pub fn compose_output(&self, f: &Mat) -> Result<MultiMap> {
        if f.cols() != self.dim_out {
            return Err(Error::Shape(
                "output map does not match the output dimension".into(),
            ));
        }
        let blocks = self.coeffs.len() / self.dim_out.max(1);
        let mut coeffs = Vec::with_capacity(blocks * f.rows());
        for b in 0..blocks {
            let block = &self.coeffs[b * self.dim_out..(b + 1) * self.dim_out];
            coeffs.extend(f.mul_vec(block)?);
        }
        if self.dim_out == 0 {
            coeffs =
                vec![Scalar::zero(); tuple_count(self.flavor, self.dim_in, self.arity) * f.rows()];
        }
        Ok(MultiMap {
            flavor: self.flavor,
            arity: self.arity,
            dim_in: self.dim_in,
            dim_out: f.rows(),
            coeffs,
        })
    }

    pub fn flatten(&self) -> Vec<Scalar> {
        self.coeffs.clone()
    }

    pub fn unflatten(
        flavor: Flavor,
        arity: usize,
        dim_in: usize,
        dim_out: usize,
        v: Vec<Scalar>,
    ) -> Result<Self> {
        let len = tuple_count(flavor, dim_in, arity) * dim_out;
        if v.len() != len {
            return Err(Error::Shape(format!(
                "expected {len} coordinates, got {}",
                v.len()
            )));
        }
        Ok(MultiMap {
            flavor,
            arity,
            dim_in,
            dim_out,
            coeffs: v,
        })
    }

    pub fn add(&self, other: &MultiMap) -> Result<MultiMap> {
        if (self.flavor, self.arity, self.dim_in, self.dim_out)
            != (other.flavor, other.arity, other.dim_in, other.dim_out)
        {
            return Err(Error::Shape("adding maps of different types".into()));
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(MultiMap {
            coeffs,
            ..self.clone()
        })
    }

    pub fn scale(&self, s: &Scalar) -> MultiMap {
        MultiMap {
            coeffs: self.coeffs.iter().map(|a| a * s).collect(),
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;
    use proptest::prelude::*;

    fn e(n: usize, i: usize) -> Vec<Scalar> {
        (0..n)
            .map(|j| if i == j { int(1) } else { int(0) })
            .collect()
    }

    fn so3() -> MultiMap {
        // μ(e1,e2)=e3, μ(e2,e3)=e1, μ(e3,e1)=e2
        MultiMap::from_basis_values(Flavor::Alternating, 2, 3, 3, |t| match t {
            [0, 1] => e(3, 2),
            [1, 2] => e(3, 0),
            [0, 2] => e(3, 1).into_iter().map(|x| -x).collect(),
            _ => unreachable!(),
        })
    }

    fn dx(n: usize, i: usize) -> MultiMap {
        MultiMap::from_basis_values(Flavor::Alternating, 1, n, 1, |t| {
            vec![int((t[0] == i) as i64)]
        })
    }

    #[test]
    fn tuple_counts() {
        assert_eq!(tuple_count(Flavor::Alternating, 3, 2) * 3, 9);
        assert_eq!(tuple_count(Flavor::Tensor, 3, 2), 9);
        assert_eq!(tuple_count(Flavor::Alternating, 2, 3), 0);
        assert_eq!(IndexBasis::new(Flavor::Alternating, 4, 0).len(), 1);
        let m = MultiMap::zero(Flavor::Alternating, 2, 3, 3);
        assert_eq!(m.flatten().len(), 9);
    }

    #[test]
    fn eval_examples() {
        let id = MultiMap::identity(Flavor::Alternating, 3);
        assert_eq!(id.eval(&[e(3, 0)]).unwrap(), e(3, 0));
        let mu = so3();
        let v = vec![int(1), int(2), int(-1)];
        assert!(mu.eval(&[v.clone(), v]).unwrap().iter().all(Zero::is_zero));
        assert_eq!(mu.eval(&[e(3, 0), e(3, 1)]).unwrap(), e(3, 2));
        assert!(matches!(mu.eval(&[e(3, 0)]), Err(Error::Arity { .. })));
        assert!(matches!(mu.eval(&[e(3, 0), e(2, 0)]), Err(Error::Shape(_))));
    }

    #[test]
    fn insert_examples() {
        let id = MultiMap::identity(Flavor::Alternating, 3);
        let c = id.insert(&e(3, 1)).unwrap();
        assert_eq!(c.arity(), 0);
        assert_eq!(c.eval(&[]).unwrap(), e(3, 1));
        let mu = so3();
        let once = mu.insert(&e(3, 0)).unwrap();
        assert!(once.insert(&e(3, 0)).unwrap().is_zero());
        assert_eq!(once.eval(&[e(3, 1)]).unwrap(), e(3, 2));
        assert_eq!(
            once.eval(&[e(3, 2)]).unwrap(),
            vec![int(0), int(-1), int(0)]
        );
        assert!(matches!(c.insert(&e(3, 0)), Err(Error::Arity { .. })));
    }

    #[test]
    fn wedge_examples() {
        let v = vec![int(0), int(0), int(1)];
        let dx2_v = MultiMap::from_basis_values(Flavor::Alternating, 1, 3, 3, |t| {
            if t[0] == 1 {
                v.clone()
            } else {
                vec![int(0); 3]
            }
        });
        let w = MultiMap::wedge(&dx(3, 0), &dx2_v).unwrap();
        assert_eq!(w.eval(&[e(3, 0), e(3, 1)]).unwrap(), v);
        let dx1_v = MultiMap::from_basis_values(Flavor::Alternating, 1, 3, 3, |t| {
            if t[0] == 0 {
                v.clone()
            } else {
                vec![int(0); 3]
            }
        });
        assert!(MultiMap::wedge(&dx(3, 0), &dx1_v).unwrap().is_zero());
        let sum = dx(3, 0).add(&dx(3, 1)).unwrap();
        let w = MultiMap::wedge(&sum, &dx1_v).unwrap();
        let neg_v: Vec<Scalar> = v.iter().map(|x| -x).collect();
        assert_eq!(w.eval(&[e(3, 0), e(3, 1)]).unwrap(), neg_v);
        let tensor = MultiMap::identity(Flavor::Tensor, 3);
        assert!(matches!(
            MultiMap::wedge(&dx(3, 0), &tensor),
            Err(Error::Flavor(_))
        ));
    }

    #[test]
    fn pullback_examples() {
        let mu = so3();
        assert_eq!(mu.pullback(&Mat::identity(3)).unwrap(), mu);
        assert!(mu.pullback(&Mat::zeros(3, 3)).unwrap().is_zero());
        // tensor map on K^2 pulled back along K^2 -> K (as a 2x... shape: p: K^1 -> K^2)
        let t = MultiMap::from_basis_values(Flavor::Tensor, 2, 2, 1, |t| {
            vec![int((t[0] * 2 + t[1] + 1) as i64)]
        });
        let p = Mat::from_i64(&[&[1], &[1]]);
        let pb = t.pullback(&p).unwrap();
        // direct evaluation: t((1,1),(1,1)) = 1+2+3+4
        assert_eq!(
            pb.eval(&[vec![int(1)], vec![int(1)]]).unwrap(),
            vec![int(10)]
        );
        assert!(matches!(
            mu.pullback(&Mat::identity(2)),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn flatten_roundtrip_and_constant() {
        let c = MultiMap::constant_on(3, Flavor::Alternating, vec![int(1), int(2)]);
        assert_eq!(c.flatten(), vec![int(1), int(2)]);
        assert_eq!(c.eval(&[]).unwrap(), vec![int(1), int(2)]);
        assert!(MultiMap::unflatten(Flavor::Alternating, 2, 3, 3, vec![int(0); 8]).is_err());
    }

    fn vec_strategy(n: usize) -> impl Strategy<Value = Vec<Scalar>> {
        proptest::collection::vec(-3i64..=3, n).prop_map(|v| v.into_iter().map(int).collect())
    }

    fn map_strategy() -> impl Strategy<Value = (MultiMap, usize)> {
        (1usize..=4, 1usize..=3, 1usize..=3, any::<bool>()).prop_flat_map(|(n, k, m, alt)| {
            let flavor = if alt {
                Flavor::Alternating
            } else {
                Flavor::Tensor
            };
            let len = tuple_count(flavor, n, k) * m;
            vec_strategy(len)
                .prop_map(move |v| (MultiMap::unflatten(flavor, k, n, m, v).unwrap(), n))
        })
    }

    proptest! {
        #[test]
        fn eval_is_multilinear((m, n) in map_strategy(), seed in proptest::collection::vec(-3i64..=3, 64)) {
            let k = m.arity();
            let mut it = seed.into_iter().cycle();
            let mut draw = || (0..n).map(|_| int(it.next().unwrap())).collect::<Vec<_>>();
            let args: Vec<Vec<Scalar>> = (0..k).map(|_| draw()).collect();
            let extra = draw();
            let slot = 0;
            let base = m.eval(&args).unwrap();
            let mut shifted = args.clone();
            shifted[slot] = args[slot].iter().zip(&extra).map(|(a, b)| a + b * int(2)).collect();
            let mut only = args.clone();
            only[slot] = extra;
            let lhs = m.eval(&shifted).unwrap();
            let rhs: Vec<Scalar> = base.iter().zip(m.eval(&only).unwrap()).map(|(a, b)| a + b * int(2)).collect();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn alternating_sign_and_double_insert((m, n) in map_strategy(), seed in proptest::collection::vec(-3i64..=3, 64)) {
            prop_assume!(m.flavor() == Flavor::Alternating && m.arity() >= 2);
            let mut it = seed.into_iter().cycle();
            let args: Vec<Vec<Scalar>> = (0..m.arity()).map(|_| (0..n).map(|_| int(it.next().unwrap())).collect()).collect();
            let mut swapped = args.clone();
            swapped.swap(0, 1);
            let a = m.eval(&args).unwrap();
            let b: Vec<Scalar> = m.eval(&swapped).unwrap().into_iter().map(|x| -x).collect();
            prop_assert_eq!(a, b);
            let v = &args[0];
            prop_assert!(m.insert(v).unwrap().insert(v).unwrap().is_zero());
        }

        #[test]
        fn flatten_unflatten_roundtrip((m, _n) in map_strategy()) {
            let back = MultiMap::unflatten(m.flavor(), m.arity(), m.dim_in(), m.dim_out(), m.flatten()).unwrap();
            prop_assert_eq!(back, m);
        }
    }
}
