use serde::Serialize;

use super::matrix::{rank, rank_kernel, EchelonBasis, SparseMatrix, Vector};
use super::{one, zero, KernelError};

/// A contiguous window `C^start → C^{start+1} → … → C^end` of a cochain
/// complex. `differentials[k]` maps `spaces[k]` to `spaces[k + 1]` and is
/// stored as a `dim(k+1) × dim(k)` matrix acting on column vectors.
///
/// Construction checks the shapes and that consecutive differentials
/// compose to zero, so every window in the system satisfies d² = 0.
#[derive(Clone, Debug)]
pub struct ComplexWindow {
    start: i64,
    spaces: Vec<Vec<String>>,
    differentials: Vec<SparseMatrix>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeCohomology {
    pub degree: i64,
    pub dim: usize,
    #[serde(skip)]
    pub representatives: Vec<Vector>,
    /// False on the two boundary degrees, where the incoming or outgoing
    /// differential may have been clipped by the window.
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyReport {
    pub degrees: Vec<DegreeCohomology>,
}

impl CohomologyReport {
    pub fn at(&self, degree: i64) -> Option<&DegreeCohomology> {
        self.degrees.iter().find(|d| d.degree == degree)
    }

    pub fn dim(&self, degree: i64) -> Option<usize> {
        self.at(degree).map(|d| d.dim)
    }
}

impl ComplexWindow {
    pub fn new(
        start: i64,
        spaces: Vec<Vec<String>>,
        differentials: Vec<SparseMatrix>,
    ) -> Result<Self, KernelError> {
        if spaces.is_empty() {
            return Err(KernelError::ShapeMismatch("window has no degrees".into()));
        }
        if differentials.len() + 1 != spaces.len() {
            return Err(KernelError::ShapeMismatch(format!(
                "{} spaces need {} differentials, got {}",
                spaces.len(),
                spaces.len() - 1,
                differentials.len()
            )));
        }
        for (k, d) in differentials.iter().enumerate() {
            if d.cols() != spaces[k].len() || d.rows() != spaces[k + 1].len() {
                return Err(KernelError::ShapeMismatch(format!(
                    "differential from degree {} is {}×{}, expected {}×{}",
                    start + k as i64,
                    d.rows(),
                    d.cols(),
                    spaces[k + 1].len(),
                    spaces[k].len()
                )));
            }
        }
        for k in 1..differentials.len() {
            let composite = differentials[k].mul(&differentials[k - 1])?;
            if !composite.is_zero() {
                return Err(KernelError::DSquaredNonzero(
                    start + k as i64 - 1,
                    start + k as i64 + 1,
                ));
            }
        }
        Ok(ComplexWindow {
            start,
            spaces,
            differentials,
        })
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn end(&self) -> i64 {
        self.start + self.spaces.len() as i64 - 1
    }

    pub fn space(&self, degree: i64) -> &[String] {
        &self.spaces[(degree - self.start) as usize]
    }

    /// Differential leaving `degree`, if it lies inside the window.
    pub fn differential(&self, degree: i64) -> Option<&SparseMatrix> {
        if degree < self.start {
            return None;
        }
        self.differentials.get((degree - self.start) as usize)
    }

    pub fn cohomology(&self) -> CohomologyReport {
        let mut degrees = Vec::with_capacity(self.spaces.len());
        for (k, space) in self.spaces.iter().enumerate() {
            let degree = self.start + k as i64;
            let dim = space.len();
            let kernel = match self.differentials.get(k) {
                Some(d) => rank_kernel(d).1,
                None => identity_basis(dim),
            };
            let mut span = EchelonBasis::new(dim);
            if k > 0 {
                let incoming = &self.differentials[k - 1];
                for c in 0..incoming.cols() {
                    span.insert(&incoming.column(c));
                }
            }
            let mut representatives = Vec::new();
            for v in kernel {
                if span.insert(&v) {
                    representatives.push(v);
                }
            }
            degrees.push(DegreeCohomology {
                degree,
                dim: representatives.len(),
                representatives,
                certified: k > 0 && k + 1 < self.spaces.len(),
            });
        }
        CohomologyReport { degrees }
    }

    /// Cohomology dimensions only, via ranks.
    pub fn betti(&self) -> Vec<(i64, usize)> {
        let ranks: Vec<usize> = self.differentials.iter().map(rank).collect();
        (0..self.spaces.len())
            .map(|k| {
                let out = ranks.get(k).copied().unwrap_or(0);
                let inc = if k > 0 { ranks[k - 1] } else { 0 };
                (self.start + k as i64, self.spaces[k].len() - out - inc)
            })
            .collect()
    }
}

fn identity_basis(dim: usize) -> Vec<Vector> {
    (0..dim)
        .map(|i| {
            let mut v = vec![zero(); dim];
            v[i] = one();
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("e{i}")).collect()
    }

    #[test]
    fn zero_complex() {
        let w = ComplexWindow::new(
            0,
            vec![vec![], vec![], vec![]],
            vec![SparseMatrix::zeros(0, 0), SparseMatrix::zeros(0, 0)],
        )
        .unwrap();
        assert!(w.cohomology().degrees.iter().all(|d| d.dim == 0));
    }

    #[test]
    fn multiplication_by_two_is_acyclic_in_the_interior() {
        let two = SparseMatrix::from_dense(1, 1, &[vec![rat(2)]]);
        let w = ComplexWindow::new(
            -1,
            vec![vec![], labels(1), labels(1), vec![]],
            vec![SparseMatrix::zeros(1, 0), two, SparseMatrix::zeros(0, 1)],
        )
        .unwrap();
        let h = w.cohomology();
        assert_eq!(h.dim(0), Some(0));
        assert_eq!(h.dim(1), Some(0));
        assert!(h.at(0).unwrap().certified);
        assert!(!h.at(-1).unwrap().certified);
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let err = ComplexWindow::new(0, vec![labels(2), labels(1)], vec![SparseMatrix::zeros(2, 2)]);
        assert!(matches!(err, Err(KernelError::ShapeMismatch(_))));
    }

    #[test]
    fn nonzero_square_is_rejected() {
        let one = SparseMatrix::identity(1);
        let err = ComplexWindow::new(0, vec![labels(1), labels(1), labels(1)], vec![one.clone(), one]);
        assert!(matches!(err, Err(KernelError::DSquaredNonzero(0, 2))));
    }

    /// Koszul complex of 3x² on ℚ[x] truncated at polynomial degree 8,
    /// compared with the brute-force quotient ℚ[x]_{≤8} / (x²)·ℚ[x]_{≤6}.
    #[test]
    fn koszul_complex_of_three_x_squared() {
        let top = 8usize;
        let source = top - 2 + 1;
        let mut mult = SparseMatrix::zeros(top + 1, source);
        for k in 0..source {
            mult.set(k + 2, k, rat(3));
        }
        let w = ComplexWindow::new(
            -2,
            vec![vec![], labels(source), labels(top + 1), vec![]],
            vec![SparseMatrix::zeros(source, 0), mult, SparseMatrix::zeros(0, top + 1)],
        )
        .unwrap();
        let h = w.cohomology();
        // quotient basis {1, x}: every x^k with k ≥ 2 is a multiple of x².
        let brute = (0..=top).filter(|k| *k < 2).count();
        assert_eq!(h.dim(0), Some(brute));
        assert_eq!(h.dim(-1), Some(0));
        assert!(h.at(0).unwrap().certified && h.at(-1).unwrap().certified);
        assert_eq!(w.betti()[2], (0, 2));
    }
}
