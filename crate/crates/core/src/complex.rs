//! Finite cochain complexes with exact differentials.

use crate::error::{Error, Result};
use crate::linalg::{rank, Mat};

/// `C^lo -> C^{lo+1} -> ... -> C^hi`, with `diffs[i]` the map out of degree `lo + i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainComplex {
    min_degree: i32,
    dims: Vec<usize>,
    diffs: Vec<Mat>,
}

impl CochainComplex {
    /// Validates shapes and `d ∘ d = 0`.
    pub fn new(min_degree: i32, dims: Vec<usize>, diffs: Vec<Mat>) -> Result<Self> {
        if dims.is_empty() || diffs.len() + 1 != dims.len() {
            return Err(Error::Shape(format!(
                "{} spaces need {} differentials, got {}",
                dims.len(),
                dims.len().saturating_sub(1),
                diffs.len()
            )));
        }
        for (i, d) in diffs.iter().enumerate() {
            if d.cols() != dims[i] || d.rows() != dims[i + 1] {
                return Err(Error::Shape(format!(
                    "differential out of degree {} is {}x{}, expected {}x{}",
                    min_degree + i as i32,
                    d.rows(),
                    d.cols(),
                    dims[i + 1],
                    dims[i]
                )));
            }
        }
        for w in diffs.windows(2) {
            let comp = w[1].mul(&w[0])?;
            if !comp.is_zero() {
                return Err(Error::NotAComplex {
                    rows: comp.rows(),
                    cols: comp.cols(),
                });
            }
        }
        Ok(CochainComplex {
            min_degree,
            dims,
            diffs,
        })
    }

    pub fn min_degree(&self) -> i32 {
        self.min_degree
    }

    pub fn max_degree(&self) -> i32 {
        self.min_degree + self.dims.len() as i32 - 1
    }

    pub fn dim(&self, degree: i32) -> usize {
        self.slot(degree).map_or(0, |s| self.dims[s])
    }

    fn slot(&self, degree: i32) -> Option<usize> {
        (degree >= self.min_degree && degree <= self.max_degree())
            .then(|| (degree - self.min_degree) as usize)
    }

    /// Differential out of `degree`; the zero map past the top degree.
    pub fn differential(&self, degree: i32) -> Mat {
        match self.slot(degree) {
            Some(s) if s < self.diffs.len() => self.diffs[s].clone(),
            Some(s) => Mat::zeros(0, self.dims[s]),
            None => Mat::zeros(self.dim(degree + 1), 0),
        }
    }

    pub fn differentials(&self) -> &[Mat] {
        &self.diffs
    }

    /// `dim ker(d^degree)`.
    pub fn cocycle_dim(&self, degree: i32) -> usize {
        let d = self.differential(degree);
        d.cols() - rank(&d)
    }

    /// `rank(d^{degree-1})`.
    pub fn coboundary_dim(&self, degree: i32) -> usize {
        rank(&self.differential(degree - 1))
    }

    pub fn cohomology(&self, degree: i32) -> usize {
        if self.slot(degree).is_none() {
            return 0;
        }
        self.cocycle_dim(degree) - self.coboundary_dim(degree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_complex() {
        let c = CochainComplex::new(
            0,
            vec![1, 2, 1],
            vec![Mat::from_i64(&[&[1], &[0]]), Mat::from_i64(&[&[0, 1]])],
        )
        .unwrap();
        assert_eq!(c.cohomology(0), 0);
        assert_eq!(c.cohomology(1), 0);
        assert_eq!(c.cohomology(2), 0);
        assert_eq!(c.cohomology(5), 0);
        let bad = CochainComplex::new(
            0,
            vec![1, 2, 1],
            vec![Mat::from_i64(&[&[1], &[0]]), Mat::from_i64(&[&[1, 0]])],
        );
        assert!(matches!(bad, Err(Error::NotAComplex { .. })));
    }

    #[test]
    fn top_degree_is_all_cocycles() {
        let c = CochainComplex::new(-1, vec![2, 3], vec![Mat::zeros(3, 2)]).unwrap();
        assert_eq!(c.cohomology(0), 3);
        assert_eq!(c.cohomology(-1), 2);
        assert_eq!(c.max_degree(), 0);
    }
}
