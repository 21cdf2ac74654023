//! Dense exact linear algebra over GF(p^e): matrices, reduced row echelon
//! form, kernels, and canonical subspaces.
//!
//! Subspaces are always held with their basis in RREF and no zero rows, so
//! structural equality decides subspace equality. There are no tolerances
//! anywhere; all arithmetic is exact.

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};

/// Row-major dense matrix over a finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<u32> = self.row(r).iter().map(|x| x.index()).collect();
            writeln!(f, "  {:?}", row)?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![FieldElement::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, FieldElement::ONE);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<FieldElement>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in &rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> FieldElement {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vec(&self, r: usize) -> Vec<FieldElement> {
        self.row(r).to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.at(r, c));
            }
        }
        t
    }

    pub fn mul(&self, f: &Field, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = Matrix::zero(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.at(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.at(r, c);
                    out.set(r, c, f.add(cur, f.mul(a, b)));
                }
            }
        }
        out
    }

    /// Matrix applied to a column vector.
    pub fn matvec(&self, f: &Field, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        let mut out = vec![FieldElement::ZERO; self.rows];
        for r in 0..self.rows {
            let mut acc = FieldElement::ZERO;
            let row = self.row(r);
            for (a, b) in row.iter().zip(v) {
                if !a.is_zero() && !b.is_zero() {
                    acc = f.add(acc, f.mul(*a, *b));
                }
            }
            out[r] = acc;
        }
        out
    }

    pub fn stack(top: &Matrix, bottom: &Matrix) -> Matrix {
        assert_eq!(top.cols, bottom.cols, "column mismatch");
        let mut data = Vec::with_capacity((top.rows + bottom.rows) * top.cols);
        data.extend_from_slice(&top.data);
        data.extend_from_slice(&bottom.data);
        Matrix {
            rows: top.rows + bottom.rows,
            cols: top.cols,
            data,
        }
    }

    /// Reduced row echelon form: returns (R, pivot columns, rank).
    pub fn rref(&self, f: &Field) -> (Matrix, Vec<usize>, usize) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pr = 0usize;
        for pc in 0..m.cols {
            // Find a pivot in column pc at or below row pr.
            let mut pivot_row = None;
            for r in pr..m.rows {
                if !m.at(r, pc).is_zero() {
                    pivot_row = Some(r);
                    break;
                }
            }
            let Some(prow) = pivot_row else { continue };
            m.swap_rows(pr, prow);
            let inv = f
                .inv(m.at(pr, pc))
                .expect("pivot entries are nonzero");
            m.scale_row(f, pr, inv);
            for r in 0..m.rows {
                if r != pr {
                    let factor = m.at(r, pc);
                    if !factor.is_zero() {
                        m.sub_scaled_row(f, r, pr, factor, pc);
                    }
                }
            }
            pivots.push(pc);
            pr += 1;
            if pr == m.rows {
                break;
            }
        }
        let rank = pivots.len();
        (m, pivots, rank)
    }

    pub fn rank(&self, f: &Field) -> usize {
        self.rref(f).2
    }

    /// Right kernel {v : M v = 0}, canonical.
    pub fn kernel(&self, f: &Field) -> Subspace {
        let (r, pivots, rank) = self.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut rows = Vec::with_capacity(free.len());
        for &j in &free {
            let mut v = vec![FieldElement::ZERO; self.cols];
            v[j] = FieldElement::ONE;
            for (i, &pc) in pivots.iter().enumerate().take(rank) {
                v[pc] = f.neg(r.at(i, j));
            }
            rows.push(v);
        }
        Subspace::from_rows(f, self.cols, rows)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, f: &Field, r: usize, s: FieldElement) {
        for c in 0..self.cols {
            let v = self.at(r, c);
            if !v.is_zero() {
                self.set(r, c, f.mul(v, s));
            }
        }
    }

    /// row_r -= factor * row_src, starting from column `from` (earlier columns
    /// of row_src are already zero in echelon elimination).
    fn sub_scaled_row(&mut self, f: &Field, r: usize, src: usize, factor: FieldElement, from: usize) {
        for c in from..self.cols {
            let s = self.at(src, c);
            if s.is_zero() {
                continue;
            }
            let cur = self.at(r, c);
            self.set(r, c, f.sub(cur, f.mul(factor, s)));
        }
    }
}

/// A subspace of F^n held by a canonical RREF basis with no zero rows.
/// Two subspaces are equal iff their bases are identical.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subspace(dim {} of F^{})", self.dim(), self.ambient)
    }
}

impl Subspace {
    pub fn zero(ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: Matrix::zero(0, ambient),
        }
    }

    pub fn full(ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: Matrix::identity(ambient),
        }
    }

    /// Canonicalizes a spanning set.
    pub fn from_rows(f: &Field, ambient: usize, rows: Vec<Vec<FieldElement>>) -> Subspace {
        if rows.is_empty() {
            return Subspace::zero(ambient);
        }
        Subspace::from_matrix(f, Matrix::from_rows(rows))
    }

    pub fn from_matrix(f: &Field, m: Matrix) -> Subspace {
        let ambient = m.cols();
        let (r, _, rank) = m.rref(f);
        let mut data = Vec::with_capacity(rank * ambient);
        for i in 0..rank {
            data.extend_from_slice(r.row(i));
        }
        Subspace {
            ambient,
            basis: Matrix {
                rows: rank,
                cols: ambient,
                data,
            },
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_rows(&self) -> impl Iterator<Item = &[FieldElement]> {
        (0..self.basis.rows).map(move |r| self.basis.row(r))
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Reduces `v` against the basis; `Some(residue-free coordinates)` when v
    /// lies in the subspace.
    pub fn coords_of(&self, f: &Field, v: &[FieldElement]) -> Option<Vec<FieldElement>> {
        assert_eq!(v.len(), self.ambient);
        let mut rem = v.to_vec();
        let mut coords = vec![FieldElement::ZERO; self.dim()];
        for (i, row) in self.basis_rows().enumerate() {
            let pc = row
                .iter()
                .position(|x| !x.is_zero())
                .expect("basis rows are nonzero");
            let c = rem[pc];
            if c.is_zero() {
                continue;
            }
            coords[i] = c;
            for (rv, bv) in rem.iter_mut().zip(row) {
                if !bv.is_zero() {
                    *rv = f.sub(*rv, f.mul(c, *bv));
                }
            }
        }
        if rem.iter().all(|x| x.is_zero()) {
            Some(coords)
        } else {
            None
        }
    }

    pub fn contains_vector(&self, f: &Field, v: &[FieldElement]) -> bool {
        self.coords_of(f, v).is_some()
    }

    pub fn contains(&self, f: &Field, other: &Subspace) -> bool {
        other.basis_rows().all(|r| self.contains_vector(f, r))
    }

    pub fn sum(&self, f: &Field, other: &Subspace) -> Result<Subspace> {
        let (s, _) = self.sum_and_intersection(f, other)?;
        Ok(s)
    }

    pub fn intersect(&self, f: &Field, other: &Subspace) -> Result<Subspace> {
        let (_, i) = self.sum_and_intersection(f, other)?;
        Ok(i)
    }

    /// Zassenhaus: one elimination yields both the sum and the intersection.
    pub fn sum_and_intersection(&self, f: &Field, other: &Subspace) -> Result<(Subspace, Subspace)> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        let n = self.ambient;
        let mut rows = Vec::with_capacity(self.dim() + other.dim());
        for r in self.basis_rows() {
            let mut row = Vec::with_capacity(2 * n);
            row.extend_from_slice(r);
            row.extend_from_slice(r);
            rows.push(row);
        }
        for r in other.basis_rows() {
            let mut row = Vec::with_capacity(2 * n);
            row.extend_from_slice(r);
            row.extend(std::iter::repeat(FieldElement::ZERO).take(n));
            rows.push(row);
        }
        if rows.is_empty() {
            return Ok((Subspace::zero(n), Subspace::zero(n)));
        }
        let (red, _, rank) = Matrix::from_rows(rows).rref(f);
        let mut sum_rows = Vec::new();
        let mut int_rows = Vec::new();
        for i in 0..rank {
            let left = &red.row(i)[..n];
            if left.iter().any(|x| !x.is_zero()) {
                sum_rows.push(left.to_vec());
            } else {
                int_rows.push(red.row(i)[n..].to_vec());
            }
        }
        Ok((
            Subspace::from_rows(f, n, sum_rows),
            Subspace::from_rows(f, n, int_rows),
        ))
    }
}
