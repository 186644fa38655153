//! Newton iteration for a gauge that moves a nearby Maurer–Cartan element
//! into a sub-DGLA.
//!
//! Unknowns are coordinates `v` on `𝔤⁰/𝔥⁰`, lifted by the splitting `σ₀`; the
//! residual is the `𝔤¹/𝔥¹` component of `(q')^{σ₀(v)}`. Its Jacobian at
//! `v = 0, q' = q` is the quotient differential out of degree 0, which may
//! have a kernel of dimension `tangent_dim`, so steps are minimum-norm.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dgla::{Dgla, DglaSub, Verdict};
use crate::error::{Error, Result};
use crate::gauge::{max_norm, GaugeContext};
use crate::linalg::{to_f64, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct NormalizeOptions {
    pub tolerance: f64,
    pub max_iter: usize,
    /// Largest curvature accepted for `q'`.
    pub mc_tolerance: f64,
    pub finite_difference: bool,
    pub fd_step: f64,
    pub initial_guess: Option<Vec<f64>>,
}

impl Default for NormalizeOptions {
    fn default() -> Self {
        NormalizeOptions {
            tolerance: 1e-9,
            max_iter: 50,
            mc_tolerance: 1e-10,
            finite_difference: false,
            fd_step: 1e-6,
            initial_guess: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaugeResult {
    /// Coordinates on `𝔤⁰/𝔥⁰`.
    pub v: Vec<f64>,
    /// `σ₀(v) ∈ 𝔤⁰`.
    pub x: Vec<f64>,
    /// Max-norm of the `𝔤¹/𝔥¹` component of `(q')^x`.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn mat_f64(m: &crate::linalg::Mat) -> DMatrix<f64> {
    m.to_f64()
}

/// Residual map `v ↦ P₁ (q')^{σ₀(v)}` and its derivatives.
#[derive(Clone, Debug)]
pub struct NormalizationProblem {
    ctx: GaugeContext,
    lift: DMatrix<f64>,
    project: DMatrix<f64>,
    q_prime: Vec<f64>,
}

impl NormalizationProblem {
    pub fn new(h: &DglaSub, q_prime: &[f64]) -> Result<Self> {
        Self::with_context(h, GaugeContext::new(h.parent())?, q_prime)
    }

    fn with_context(h: &DglaSub, ctx: GaugeContext, q_prime: &[f64]) -> Result<Self> {
        if q_prime.len() != ctx.dims().1 {
            return Err(Error::Shape(format!(
                "expected a degree-1 element of dimension {}, got {}",
                ctx.dims().1,
                q_prime.len()
            )));
        }
        Ok(NormalizationProblem {
            ctx,
            lift: mat_f64(h.complement(0).basis()),
            project: mat_f64(h.projection(1)),
            q_prime: q_prime.to_vec(),
        })
    }

    pub fn unknowns(&self) -> usize {
        self.lift.ncols()
    }

    pub fn equations(&self) -> usize {
        self.project.nrows()
    }

    pub fn lift(&self, v: &[f64]) -> Vec<f64> {
        (&self.lift * DVector::from_column_slice(v))
            .iter()
            .copied()
            .collect()
    }

    pub fn gauged(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.ctx.flow(&self.q_prime, &self.lift(v))
    }

    pub fn residual(&self, v: &[f64]) -> Result<DVector<f64>> {
        Ok(&self.project * DVector::from_vec(self.gauged(v)?))
    }

    /// Analytic Jacobian from the Fréchet derivative of the exponential.
    pub fn jacobian(&self, v: &[f64]) -> Result<DMatrix<f64>> {
        let x = self.lift(v);
        let mut j = DMatrix::zeros(self.equations(), self.unknowns());
        for c in 0..self.unknowns() {
            let dir: Vec<f64> = self.lift.column(c).iter().copied().collect();
            let d = self.ctx.flow_derivative(&self.q_prime, &x, &dir)?;
            j.set_column(c, &(&self.project * DVector::from_vec(d)));
        }
        Ok(j)
    }

    /// Central differences with step `h`.
    pub fn jacobian_fd(&self, v: &[f64], h: f64) -> Result<DMatrix<f64>> {
        let mut j = DMatrix::zeros(self.equations(), self.unknowns());
        for c in 0..self.unknowns() {
            let (mut up, mut down) = (v.to_vec(), v.to_vec());
            up[c] += h;
            down[c] -= h;
            let col = (self.residual(&up)? - self.residual(&down)?) / (2.0 * h);
            j.set_column(c, &col);
        }
        Ok(j)
    }
}

fn min_norm_step(j: &DMatrix<f64>, r: &DVector<f64>) -> Result<DVector<f64>> {
    let svd = j.clone().svd(true, true);
    let smax = svd.singular_values.iter().fold(0.0f64, |m, s| m.max(*s));
    let pinv = svd
        .pseudo_inverse(smax * 1e-10 + f64::MIN_POSITIVE)
        .map_err(|_| Error::NonFinite)?;
    Ok(pinv * r)
}

/// A sub-DGLA and base point whose criterion has been checked once, ready
/// to normalize any number of nearby elements.
#[derive(Clone, Debug)]
pub struct Normalizer {
    h: DglaSub,
    ctx: GaugeContext,
    verdict: Verdict,
}

impl Normalizer {
    /// Fails with [`Error::CriterionFails`] unless `H¹(𝔤/𝔥)` vanishes at `q ∈ 𝔥¹`.
    pub fn new(h: &DglaSub, q: &[Scalar]) -> Result<Self> {
        let verdict = h.stability_criterion(q)?;
        if !verdict.passes {
            return Err(Error::CriterionFails {
                obstruction: verdict.obstruction_dim(),
            });
        }
        Ok(Normalizer {
            h: h.clone(),
            ctx: GaugeContext::new(h.parent())?,
            verdict,
        })
    }

    pub fn verdict(&self) -> &Verdict {
        &self.verdict
    }

    pub fn problem(&self, q_prime: &[f64]) -> Result<NormalizationProblem> {
        NormalizationProblem::with_context(&self.h, self.ctx.clone(), q_prime)
    }

    /// Finds `v` with `(q')^{σ₀(v)} ∈ 𝔥¹`.
    pub fn solve(&self, q_prime: &[f64], opts: &NormalizeOptions) -> Result<GaugeResult> {
        let problem = self.problem(q_prime)?;
        let curvature = max_norm(&problem.ctx.curvature(q_prime)?);
        if curvature.is_nan() || curvature > opts.mc_tolerance {
            return Err(Error::NotMaurerCartan(format!("{curvature:e}")));
        }
        let mut v = match &opts.initial_guess {
            Some(g) if g.len() != problem.unknowns() => {
                return Err(Error::Shape(format!(
                    "initial guess needs {} coordinates, got {}",
                    problem.unknowns(),
                    g.len()
                )))
            }
            Some(g) => g.clone(),
            None => vec![0.0; problem.unknowns()],
        };
        let mut best = f64::INFINITY;
        for iter in 0..=opts.max_iter {
            let r = problem.residual(&v)?;
            let res = r.amax();
            best = best.min(res);
            if res <= opts.tolerance {
                let x = problem.lift(&v);
                return Ok(GaugeResult {
                    v,
                    x,
                    residual: res,
                    iterations: iter,
                    converged: true,
                });
            }
            if iter == opts.max_iter {
                break;
            }
            let j = if opts.finite_difference {
                problem.jacobian_fd(&v, opts.fd_step)?
            } else {
                problem.jacobian(&v)?
            };
            let step = min_norm_step(&j, &r)?;
            for (vi, s) in v.iter_mut().zip(step.iter()) {
                *vi -= s;
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        Err(Error::NoConvergence {
            iterations: opts.max_iter,
            residual: best,
        })
    }
}

/// Finds `v` with `(q')^{σ₀(v)} ∈ 𝔥¹`, given the criterion passes at `q ∈ 𝔥¹`.
pub fn normalize(
    h: &DglaSub,
    q: &[Scalar],
    q_prime: &[f64],
    opts: &NormalizeOptions,
) -> Result<GaugeResult> {
    Normalizer::new(h, q)?.solve(q_prime, opts)
}

/// Basis of `ker(∂̄: 𝔤⁰/𝔥⁰ → 𝔤¹/𝔥¹)` in `σ₀`-coordinates; offsets of the
/// initial guess along these sample the family of solutions.
pub fn tangent_directions(h: &DglaSub, q: &[Scalar]) -> Result<Vec<Vec<f64>>> {
    let c = h.quotient_complex(q)?;
    Ok(c.differential(0)
        .kernel_basis()
        .vectors()
        .iter()
        .map(|v| v.iter().map(to_f64).collect())
        .collect())
}

/// `q^x` for a pseudo-random `x ∈ 𝔤⁰` with `‖x‖_∞ = epsilon`, fixed by `seed`.
pub fn perturb_in_orbit(g: &Dgla, q: &[Scalar], seed: u64, epsilon: f64) -> Result<Vec<f64>> {
    let qf: Vec<f64> = q.iter().map(to_f64).collect();
    if epsilon == 0.0 {
        return Ok(qf);
    }
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::Shape(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<f64> = (0..g.dim(0)).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    let m = max_norm(&x);
    if m > 0.0 {
        x.iter_mut().for_each(|v| *v *= epsilon / m);
    }
    GaugeContext::new(g)?.flow(&qf, &x)
}
