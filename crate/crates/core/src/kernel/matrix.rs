use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::{KernelError, Rational};

pub type Vector = Vec<Rational>;

/// Row-major sparse matrix over ℚ. Zero entries are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, Rational>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            data: vec![BTreeMap::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_dense(rows: usize, cols: usize, entries: &[Vec<Rational>]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (r, row) in entries.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vector]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            for (r, v) in col.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.data[r].get(&c).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        if v.is_zero() {
            self.data[r].remove(&c);
        } else {
            self.data[r].insert(c, v);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &Rational) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        if v.is_zero() {
            return;
        }
        let entry = self.data[r].entry(c).or_insert_with(Rational::zero);
        *entry += v;
        if entry.is_zero() {
            self.data[r].remove(&c);
        }
    }

    pub fn row(&self, r: usize) -> &BTreeMap<usize, Rational> {
        &self.data[r]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_dense(&self) -> Vec<Vector> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c)).collect())
            .collect()
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut t = SparseMatrix::zeros(self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                t.data[*c].insert(r, v.clone());
            }
        }
        t
    }

    pub fn scale(&self, s: &Rational) -> SparseMatrix {
        let mut out = SparseMatrix::zeros(self.rows, self.cols);
        if s.is_zero() {
            return out;
        }
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                out.data[r].insert(*c, v * s);
            }
        }
        out
    }

    pub fn add(&self, other: &SparseMatrix) -> Result<SparseMatrix, KernelError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(KernelError::ShapeMismatch(format!(
                "cannot add {}×{} and {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = self.clone();
        for (r, row) in other.data.iter().enumerate() {
            for (c, v) in row {
                out.add_to(r, *c, v);
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix, KernelError> {
        if self.cols != other.rows {
            return Err(KernelError::ShapeMismatch(format!(
                "cannot multiply {}×{} by {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = SparseMatrix::zeros(self.rows, other.cols);
        for (r, row) in self.data.iter().enumerate() {
            for (k, a) in row {
                for (c, b) in &other.data[*k] {
                    out.add_to(r, *c, &(a * b));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vector {
        assert_eq!(v.len(), self.cols, "vector length does not match columns");
        self.data
            .iter()
            .map(|row| {
                row.iter()
                    .fold(Rational::zero(), |acc, (c, a)| acc + a * &v[*c])
            })
            .collect()
    }
}

impl fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SparseMatrix {}×{} [", self.rows, self.cols)?;
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "  {}", cells.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form with the fixed pivot rule: rows are processed
/// top to bottom and each surviving row pivots on its smallest nonzero
/// column. Returns the reduced pivot rows (pivot entry 1) and their pivot
/// columns.
fn rref(m: &SparseMatrix) -> (Vec<BTreeMap<usize, Rational>>, Vec<usize>) {
    let mut pivots: Vec<BTreeMap<usize, Rational>> = Vec::new();
    let mut pivot_cols: Vec<usize> = Vec::new();
    for row in &m.data {
        let mut row = row.clone();
        for (p, pc) in pivots.iter().zip(&pivot_cols) {
            if let Some(f) = row.get(pc).cloned() {
                axpy(&mut row, &-f, p);
            }
        }
        let Some((&pc, lead)) = row.iter().next() else {
            continue;
        };
        let inv = lead.recip();
        for v in row.values_mut() {
            *v *= &inv;
        }
        for p in pivots.iter_mut() {
            if let Some(f) = p.get(&pc).cloned() {
                axpy(p, &-f, &row);
            }
        }
        pivots.push(row);
        pivot_cols.push(pc);
    }
    (pivots, pivot_cols)
}

/// `row += f * other`, dropping cancelled entries.
fn axpy(row: &mut BTreeMap<usize, Rational>, f: &Rational, other: &BTreeMap<usize, Rational>) {
    for (c, v) in other {
        let e = row.entry(*c).or_insert_with(Rational::zero);
        *e += f * v;
        if e.is_zero() {
            row.remove(c);
        }
    }
}

/// Rank and an exact kernel basis. The kernel basis has one vector per
/// non-pivot column `j`, normalised so its `j`-th entry is 1; the result is
/// deterministic for identical inputs.
pub fn rank_kernel(m: &SparseMatrix) -> (usize, Vec<Vector>) {
    let (pivots, pivot_cols) = rref(m);
    let rank = pivots.len();
    let mut is_pivot = vec![false; m.cols];
    for &pc in &pivot_cols {
        is_pivot[pc] = true;
    }
    let mut kernel = Vec::new();
    for free in (0..m.cols).filter(|c| !is_pivot[*c]) {
        let mut v = vec![Rational::zero(); m.cols];
        v[free] = Rational::one();
        for (p, pc) in pivots.iter().zip(&pivot_cols) {
            if let Some(f) = p.get(&free) {
                v[*pc] = -f.clone();
            }
        }
        kernel.push(v);
    }
    (rank, kernel)
}

pub fn rank(m: &SparseMatrix) -> usize {
    rref(m).0.len()
}

/// Some exact solution of `m x = b`, or `None` when the system is
/// inconsistent. Free variables are set to zero.
pub fn solve(m: &SparseMatrix, b: &[Rational]) -> Option<Vector> {
    assert_eq!(b.len(), m.rows, "right-hand side has the wrong length");
    let mut aug = SparseMatrix::zeros(m.rows, m.cols + 1);
    for r in 0..m.rows {
        for (c, v) in m.row(r) {
            aug.set(r, *c, v.clone());
        }
        aug.set(r, m.cols, b[r].clone());
    }
    let (pivots, pivot_cols) = rref(&aug);
    let mut x = vec![Rational::zero(); m.cols];
    for (p, pc) in pivots.iter().zip(&pivot_cols) {
        if *pc == m.cols {
            return None;
        }
        x[*pc] = p.get(&m.cols).cloned().unwrap_or_else(Rational::zero);
    }
    Some(x)
}

pub fn inverse(m: &SparseMatrix) -> Result<Option<SparseMatrix>, KernelError> {
    if m.rows != m.cols {
        return Err(KernelError::NotSquare(m.rows, m.cols));
    }
    let n = m.rows;
    let mut aug = SparseMatrix::zeros(n, 2 * n);
    for r in 0..n {
        for (c, v) in m.row(r) {
            aug.set(r, *c, v.clone());
        }
        aug.set(r, n + r, Rational::one());
    }
    let (pivots, pivot_cols) = rref(&aug);
    if pivots.len() < n || pivot_cols.iter().take(n).any(|&c| c >= n) {
        return Ok(None);
    }
    let mut inv = SparseMatrix::zeros(n, n);
    for (p, pc) in pivots.iter().zip(&pivot_cols).take(n) {
        for (c, v) in p.range(n..) {
            inv.set(*pc, c - n, v.clone());
        }
    }
    Ok(Some(inv))
}

/// Determinant by Gaussian elimination with the same fixed pivot rule
/// applied column by column.
pub fn determinant(m: &SparseMatrix) -> Result<Rational, KernelError> {
    if m.rows != m.cols {
        return Err(KernelError::NotSquare(m.rows, m.cols));
    }
    let n = m.rows;
    let mut rows: Vec<BTreeMap<usize, Rational>> = m.data.clone();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pr) = (col..n).find(|&r| rows[r].contains_key(&col)) else {
            return Ok(Rational::zero());
        };
        if pr != col {
            rows.swap(pr, col);
            det = -det;
        }
        let pivot_row = rows[col].clone();
        let pv = pivot_row[&col].clone();
        det *= &pv;
        for r in (col + 1)..n {
            if let Some(f) = rows[r].get(&col).cloned() {
                let factor = -(f / &pv);
                axpy(&mut rows[r], &factor, &pivot_row);
            }
        }
    }
    Ok(det)
}

/// Incrementally maintained echelon basis for testing linear independence
/// and span membership.
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    dim: usize,
    rows: Vec<BTreeMap<usize, Rational>>,
    pivot_cols: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(dim: usize) -> Self {
        EchelonBasis {
            dim,
            rows: Vec::new(),
            pivot_cols: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[Rational]) -> BTreeMap<usize, Rational> {
        assert_eq!(v.len(), self.dim, "vector length does not match basis ambient dimension");
        let mut row: BTreeMap<usize, Rational> = v
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (i, x.clone()))
            .collect();
        for (p, pc) in self.rows.iter().zip(&self.pivot_cols) {
            if let Some(f) = row.get(pc).cloned() {
                axpy(&mut row, &-f, p);
            }
        }
        row
    }

    /// Normal form of `v` modulo the span: zero on every pivot column.
    pub fn remainder(&self, v: &[Rational]) -> Vector {
        let row = self.reduce(v);
        let mut out = vec![Rational::zero(); self.dim];
        for (c, x) in row {
            out[c] = x;
        }
        out
    }

    pub fn pivot_columns(&self) -> &[usize] {
        &self.pivot_cols
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` if it is independent of the current span; returns whether it
    /// was added.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        let mut row = self.reduce(v);
        let Some((&pc, lead)) = row.iter().next() else {
            return false;
        };
        let inv = lead.recip();
        for x in row.values_mut() {
            *x *= &inv;
        }
        self.rows.push(row);
        self.pivot_cols.push(pc);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{rat, ratio};

    fn m(rows: &[&[i64]]) -> SparseMatrix {
        let dense: Vec<Vector> = rows
            .iter()
            .map(|r| r.iter().map(|x| rat(*x)).collect())
            .collect();
        SparseMatrix::from_dense(rows.len(), rows.first().map_or(0, |r| r.len()), &dense)
    }

    #[test]
    fn identity_has_full_rank_and_empty_kernel() {
        let (r, k) = rank_kernel(&SparseMatrix::identity(2));
        assert_eq!(r, 2);
        assert!(k.is_empty());
    }

    #[test]
    fn single_row_kernel_is_forced() {
        let (r, k) = rank_kernel(&m(&[&[1, 1]]));
        assert_eq!(r, 1);
        assert_eq!(k, vec![vec![rat(-1), rat(1)]]);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let a = m(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 0, 1]]);
        let (r, k) = rank_kernel(&a);
        assert_eq!(r + k.len(), 4);
        for v in &k {
            assert!(a.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn solve_detects_inconsistency() {
        let a = m(&[&[1, 1], &[2, 2]]);
        assert!(solve(&a, &[rat(1), rat(3)]).is_none());
        let x = solve(&a, &[rat(1), rat(2)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![rat(1), rat(2)]);
    }

    #[test]
    fn inverse_and_determinant() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = inverse(&a).unwrap().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), SparseMatrix::identity(2));
        assert_eq!(determinant(&a).unwrap(), rat(1));
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).unwrap().is_none());
        assert_eq!(determinant(&m(&[&[0, 1], &[1, 0]])).unwrap(), rat(-1));
        let b = SparseMatrix::from_dense(1, 1, &[vec![ratio(3, 4)]]);
        assert_eq!(determinant(&b).unwrap(), ratio(3, 4));
    }

    #[test]
    fn echelon_basis_membership() {
        let mut basis = EchelonBasis::new(3);
        assert!(basis.insert(&[rat(1), rat(1), rat(0)]));
        assert!(basis.insert(&[rat(0), rat(1), rat(1)]));
        assert!(!basis.insert(&[rat(1), rat(2), rat(1)]));
        assert!(basis.contains(&[rat(2), rat(0), rat(-2)]));
        assert!(!basis.contains(&[rat(0), rat(0), rat(1)]));
    }
}
