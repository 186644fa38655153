//! Gauge flows in floating point.
//!
//! For `x ∈ 𝔤⁰` let `A` be the matrix of `[x,-]` on `𝔤¹`. The flow of
//! `dQ/dt = ∂x - [x, Q]` from `q` reaches `exp(-A) q + φ(-A) ∂x` at `t = 1`,
//! with `φ(z) = (eᶻ - 1)/z`. Both terms come out of one exponential of the
//! augmented `(n+1)×(n+1)` matrix `[[-A, ∂x], [0, 0]]` applied to `(q, 1)`.

use nalgebra::{DMatrix, DVector};

use crate::dgla::Dgla;
use crate::error::{Error, Result};
use crate::linalg::to_f64;

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

fn norm1(a: &DMatrix<f64>) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn all_finite(a: &DMatrix<f64>) -> bool {
    a.iter().all(|x| x.is_finite())
}

/// Matrix exponential by scaling and squaring with the degree-13 Padé approximant.
pub fn expm(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if a.nrows() != a.ncols() {
        return Err(Error::Shape(format!(
            "expm needs a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    if !all_finite(a) {
        return Err(Error::NonFinite);
    }
    let n = a.nrows();
    if n == 0 {
        return Ok(a.clone());
    }
    let norm = norm1(a);
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = a / 2f64.powi(s);
    let b = &PADE13;
    let id = DMatrix::<f64>::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let u_inner = &a6 * (&a6 * b[13] + &a4 * b[11] + &a2 * b[9])
        + &a6 * b[7]
        + &a4 * b[5]
        + &a2 * b[3]
        + &id * b[1];
    let u = &a * u_inner;
    let v = &a6 * (&a6 * b[12] + &a4 * b[10] + &a2 * b[8])
        + &a6 * b[6]
        + &a4 * b[4]
        + &a2 * b[2]
        + &id * b[0];
    let p = &v + &u;
    let q = &v - &u;
    let mut r = q.lu().solve(&p).ok_or(Error::NonFinite)?;
    for _ in 0..s {
        r = &r * &r;
    }
    if !all_finite(&r) {
        return Err(Error::NonFinite);
    }
    Ok(r)
}

/// Float copies of the pieces of a DGLA the gauge action touches.
#[derive(Clone, Debug)]
pub struct GaugeContext {
    /// `[e_a, -]` on `𝔤¹` for each basis vector `e_a` of `𝔤⁰`.
    ad0: Vec<DMatrix<f64>>,
    d0: DMatrix<f64>,
    d1: DMatrix<f64>,
    /// `[e_a, e_b]` for basis vectors of `𝔤¹`, as sparse coordinates in `𝔤²`.
    bracket11: Vec<Vec<(usize, f64)>>,
    n0: usize,
    n1: usize,
    n2: usize,
}

impl GaugeContext {
    pub fn new(g: &Dgla) -> Result<Self> {
        let (n0, n1, n2) = (g.dim(0), g.dim(1), g.dim(2));
        let t01 = g
            .bracket_table(0, 1)
            .ok_or_else(|| Error::Shape("window must contain degrees 0, 1, 2".into()))?;
        let t11 = g
            .bracket_table(1, 1)
            .ok_or_else(|| Error::Shape("window must contain degrees 0, 1, 2".into()))?;
        let ad0 = (0..n0)
            .map(|a| {
                let mut m = DMatrix::zeros(n1, n1);
                for b in 0..n1 {
                    for (k, c) in t01.get(a, b) {
                        m[(*k, b)] = to_f64(c);
                    }
                }
                m
            })
            .collect();
        let bracket11 = (0..n1 * n1)
            .map(|ab| {
                t11.get(ab / n1, ab % n1)
                    .iter()
                    .map(|(k, c)| (*k, to_f64(c)))
                    .collect()
            })
            .collect();
        Ok(GaugeContext {
            ad0,
            d0: g.differential(0).to_f64(),
            d1: g.differential(1).to_f64(),
            bracket11,
            n0,
            n1,
            n2,
        })
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.n0, self.n1, self.n2)
    }

    fn check(&self, q: &[f64], x: &[f64]) -> Result<()> {
        if q.len() != self.n1 || x.len() != self.n0 {
            return Err(Error::Shape(format!(
                "gauge flow expects q of dimension {} and x of dimension {}, got {} and {}",
                self.n1,
                self.n0,
                q.len(),
                x.len()
            )));
        }
        if q.iter().chain(x).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(())
    }

    /// Matrix of `[x, -]` on `𝔤¹`.
    pub fn ad(&self, x: &[f64]) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n1, self.n1);
        for (a, xa) in x.iter().enumerate() {
            if *xa != 0.0 {
                m += &self.ad0[a] * *xa;
            }
        }
        m
    }

    /// The augmented generator `[[-[x,-], ∂x], [0, 0]]`; linear in `x`.
    pub fn generator(&self, x: &[f64]) -> DMatrix<f64> {
        let n = self.n1;
        let mut m = DMatrix::zeros(n + 1, n + 1);
        m.view_mut((0, 0), (n, n)).copy_from(&(-self.ad(x)));
        let dx = &self.d0 * DVector::from_column_slice(x);
        m.view_mut((0, n), (n, 1)).copy_from(&dx);
        m
    }

    fn augmented(q: &[f64]) -> DVector<f64> {
        let mut v = DVector::zeros(q.len() + 1);
        v.rows_mut(0, q.len()).copy_from_slice(q);
        v[q.len()] = 1.0;
        v
    }

    pub fn flow(&self, q: &[f64], x: &[f64]) -> Result<Vec<f64>> {
        self.check(q, x)?;
        let e = expm(&self.generator(x))?;
        let out = e * Self::augmented(q);
        let r: Vec<f64> = out.iter().take(self.n1).copied().collect();
        if r.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(r)
    }

    /// Derivative of `x ↦ flow(q, x)` in direction `dir`, from the block
    /// identity `exp([[M, E], [0, M]]) = [[e^M, L(M, E)], [0, e^M]]`.
    pub fn flow_derivative(&self, q: &[f64], x: &[f64], dir: &[f64]) -> Result<Vec<f64>> {
        self.check(q, x)?;
        self.check(q, dir)?;
        let m = self.generator(x);
        let e = self.generator(dir);
        let k = m.nrows();
        let mut big = DMatrix::zeros(2 * k, 2 * k);
        big.view_mut((0, 0), (k, k)).copy_from(&m);
        big.view_mut((k, k), (k, k)).copy_from(&m);
        big.view_mut((0, k), (k, k)).copy_from(&e);
        let l = expm(&big)?.view((0, k), (k, k)).into_owned();
        let out = l * Self::augmented(q);
        Ok(out.iter().take(self.n1).copied().collect())
    }

    /// Classical RK4 on `dQ/dt = ∂x - [x, Q]` over `[0, 1]`.
    pub fn flow_ode(&self, q: &[f64], x: &[f64], steps: usize) -> Result<Vec<f64>> {
        self.check(q, x)?;
        if steps == 0 {
            return Err(Error::Shape("RK4 needs at least one step".into()));
        }
        let a = self.ad(x);
        let dx = &self.d0 * DVector::from_column_slice(x);
        let rhs = |y: &DVector<f64>| &dx - &a * y;
        let h = 1.0 / steps as f64;
        let mut y = DVector::from_column_slice(q);
        for _ in 0..steps {
            let k1 = rhs(&y);
            let k2 = rhs(&(&y + &k1 * (h / 2.0)));
            let k3 = rhs(&(&y + &k2 * (h / 2.0)));
            let k4 = rhs(&(&y + &k3 * h));
            y += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
            if y.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        Ok(y.iter().copied().collect())
    }

    /// `∂q + ½[q, q]` in floating point.
    pub fn curvature(&self, q: &[f64]) -> Result<Vec<f64>> {
        if q.len() != self.n1 {
            return Err(Error::Shape(format!(
                "expected dimension {}, got {}",
                self.n1,
                q.len()
            )));
        }
        let mut out = &self.d1 * DVector::from_column_slice(q);
        for a in 0..self.n1 {
            if q[a] == 0.0 {
                continue;
            }
            for b in 0..self.n1 {
                let w = 0.5 * q[a] * q[b];
                if w == 0.0 {
                    continue;
                }
                for (k, c) in &self.bracket11[a * self.n1 + b] {
                    out[*k] += w * c;
                }
            }
        }
        Ok(out.iter().copied().collect())
    }
}

/// `Q^X` through the augmented matrix exponential.
pub fn gauge_flow(g: &Dgla, q: &[f64], x: &[f64]) -> Result<Vec<f64>> {
    GaugeContext::new(g)?.flow(q, x)
}

/// RK4 oracle for [`gauge_flow`].
pub fn gauge_flow_ode(g: &Dgla, q: &[f64], x: &[f64], steps: usize) -> Result<Vec<f64>> {
    GaugeContext::new(g)?.flow_ode(q, x, steps)
}

pub fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}
