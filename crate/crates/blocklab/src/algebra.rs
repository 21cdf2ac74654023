//! Finite-dimensional associative unital algebras given by structure
//! constants, optionally carrying a symmetrizing bilinear form.
//!
//! All the subspace calculus lives here: products, commutator subspaces,
//! center, annihilators, perps with respect to the form, ideal powers, and
//! corners at idempotents. Conventions: elements are coordinate vectors in
//! the algebra basis; the annihilator of U is `{a : Ua = 0}` with U acting on
//! the left.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::linalg::{Matrix, Subspace};

/// Coordinate vector of an algebra element in the algebra's basis.
pub type AlgebraElement = Vec<FieldElement>;

pub fn vec_add(f: &Field, a: &[FieldElement], b: &[FieldElement]) -> AlgebraElement {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

pub fn vec_sub(f: &Field, a: &[FieldElement], b: &[FieldElement]) -> AlgebraElement {
    a.iter().zip(b).map(|(&x, &y)| f.sub(x, y)).collect()
}

pub fn vec_scale(f: &Field, s: FieldElement, a: &[FieldElement]) -> AlgebraElement {
    a.iter().map(|&x| f.mul(s, x)).collect()
}

pub fn vec_is_zero(a: &[FieldElement]) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// Associative unital algebra by structure constants.
#[derive(Clone)]
pub struct Algebra {
    field: Field,
    dim: usize,
    /// sc[(i*dim + j)*dim + t] = t-th coordinate of b_i * b_j.
    sc: Vec<FieldElement>,
    unit: AlgebraElement,
}

impl std::fmt::Debug for Algebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Algebra(dim {} over {:?})", self.dim, self.field)
    }
}

impl Algebra {
    /// Validated construction: checks the unit law and associativity on all
    /// basis triples, failing loudly with the offending triple.
    pub fn new(
        field: Field,
        dim: usize,
        sc: Vec<FieldElement>,
        unit: AlgebraElement,
    ) -> Result<Algebra> {
        let alg = Algebra::assemble(field, dim, sc, unit)?;
        alg.check_unit_law()?;
        alg.check_associativity_full()?;
        Ok(alg)
    }

    /// Construction for algebras derived from an already validated parent
    /// (corners, subalgebras, quotients): the unit law is checked fully,
    /// associativity on a seeded sample of triples. A failure here is an
    /// internal bug, not bad input.
    pub(crate) fn from_derived_parts(
        field: Field,
        dim: usize,
        sc: Vec<FieldElement>,
        unit: AlgebraElement,
    ) -> Result<Algebra> {
        let alg = Algebra::assemble(field, dim, sc, unit)?;
        alg.check_unit_law()
            .map_err(|e| Error::Internal(format!("derived algebra: {e}")))?;
        alg.check_associativity_sample(2048)
            .map_err(|e| Error::Internal(format!("derived algebra: {e}")))?;
        Ok(alg)
    }

    /// Construction from a monomial multiplication rule whose associativity
    /// is already certified (e.g. a validated Cayley table): only the unit
    /// law is re-checked.
    pub(crate) fn from_monomial_table(
        field: Field,
        dim: usize,
        product_index: &[usize],
        unit: AlgebraElement,
    ) -> Result<Algebra> {
        assert_eq!(product_index.len(), dim * dim);
        let mut sc = vec![FieldElement::ZERO; dim * dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                let t = product_index[i * dim + j];
                sc[(i * dim + j) * dim + t] = FieldElement::ONE;
            }
        }
        let alg = Algebra::assemble(field, dim, sc, unit)?;
        alg.check_unit_law()?;
        Ok(alg)
    }

    fn assemble(
        field: Field,
        dim: usize,
        sc: Vec<FieldElement>,
        unit: AlgebraElement,
    ) -> Result<Algebra> {
        if dim == 0 {
            return Err(Error::InvalidInput("algebra dimension must be >= 1".into()));
        }
        if sc.len() != dim * dim * dim {
            return Err(Error::InvalidInput(format!(
                "expected {} structure constants, got {}",
                dim * dim * dim,
                sc.len()
            )));
        }
        if unit.len() != dim {
            return Err(Error::InvalidInput("unit vector has wrong length".into()));
        }
        Ok(Algebra { field, dim, sc, unit })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &AlgebraElement {
        &self.unit
    }

    pub fn one(&self) -> AlgebraElement {
        self.unit.clone()
    }

    pub fn zero_element(&self) -> AlgebraElement {
        vec![FieldElement::ZERO; self.dim]
    }

    pub fn basis_element(&self, i: usize) -> AlgebraElement {
        let mut v = self.zero_element();
        v[i] = FieldElement::ONE;
        v
    }

    #[inline]
    pub fn basis_product(&self, i: usize, j: usize) -> &[FieldElement] {
        let base = (i * self.dim + j) * self.dim;
        &self.sc[base..base + self.dim]
    }

    /// Bilinear product via structure constants.
    pub fn multiply(&self, x: &[FieldElement], y: &[FieldElement]) -> AlgebraElement {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert_eq!(y.len(), self.dim);
        let f = &self.field;
        let mut out = self.zero_element();
        for (i, &xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let s = f.mul(xi, yj);
                if s.is_zero() {
                    continue;
                }
                let row = self.basis_product(i, j);
                for (o, &r) in out.iter_mut().zip(row) {
                    if !r.is_zero() {
                        *o = f.add(*o, f.mul(s, r));
                    }
                }
            }
        }
        out
    }

    pub fn element_pow(&self, x: &[FieldElement], n: u64) -> AlgebraElement {
        let mut acc = self.one();
        let mut base = x.to_vec();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.multiply(&acc, &base);
            }
            base = self.multiply(&base, &base);
            n >>= 1;
        }
        acc
    }

    pub fn is_idempotent(&self, x: &[FieldElement]) -> bool {
        self.multiply(x, x) == x
    }

    /// Matrix of left multiplication by x (column-vector convention).
    pub fn left_mul_matrix(&self, x: &[FieldElement]) -> Matrix {
        let f = &self.field;
        let d = self.dim;
        let mut m = Matrix::zero(d, d);
        for (i, &xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for j in 0..d {
                let row = self.basis_product(i, j);
                for (t, &r) in row.iter().enumerate() {
                    if !r.is_zero() {
                        let cur = m.at(t, j);
                        m.set(t, j, f.add(cur, f.mul(xi, r)));
                    }
                }
            }
        }
        m
    }

    /// Matrix of right multiplication by x.
    pub fn right_mul_matrix(&self, x: &[FieldElement]) -> Matrix {
        let f = &self.field;
        let d = self.dim;
        let mut m = Matrix::zero(d, d);
        for (j, &xj) in x.iter().enumerate() {
            if xj.is_zero() {
                continue;
            }
            for i in 0..d {
                let row = self.basis_product(i, j);
                for (t, &r) in row.iter().enumerate() {
                    if !r.is_zero() {
                        let cur = m.at(t, i);
                        m.set(t, i, f.add(cur, f.mul(xj, r)));
                    }
                }
            }
        }
        m
    }

    /// Span of all products uv over basis vectors of U and V.
    pub fn subspace_product(&self, u: &Subspace, v: &Subspace) -> Subspace {
        let f = &self.field;
        let mut rows = Vec::with_capacity(u.dim() * v.dim());
        for ub in u.basis_rows() {
            let lu = self.left_mul_matrix(ub);
            for vb in v.basis_rows() {
                rows.push(lu.matvec(f, vb));
            }
        }
        Subspace::from_rows(f, self.dim, rows)
    }

    /// Commutator subspace [U, V]: span of uv - vu over basis pairs, which
    /// suffices by bilinearity.
    pub fn commutator_subspace(&self, u: &Subspace, v: &Subspace) -> Subspace {
        let f = &self.field;
        let lus: Vec<Matrix> = u.basis_rows().map(|r| self.left_mul_matrix(r)).collect();
        let lvs: Vec<Matrix> = v.basis_rows().map(|r| self.left_mul_matrix(r)).collect();
        let ubs: Vec<&[FieldElement]> = u.basis_rows().collect();
        let vbs: Vec<&[FieldElement]> = v.basis_rows().collect();
        let mut rows = Vec::with_capacity(ubs.len() * vbs.len());
        for (li, &ub) in lus.iter().zip(&ubs) {
            for (lj, &vb) in lvs.iter().zip(&vbs) {
                let uv = li.matvec(f, vb);
                let vu = lj.matvec(f, ub);
                rows.push(vec_sub(f, &uv, &vu));
            }
        }
        Subspace::from_rows(f, self.dim, rows)
    }

    /// Full commutator subspace [A, A].
    pub fn commutator_full(&self) -> Subspace {
        let full = Subspace::full(self.dim);
        self.commutator_subspace(&full, &full)
    }

    /// Center as the kernel of the stacked maps x -> x b_i - b_i x.
    pub fn center(&self) -> Subspace {
        let d = self.dim;
        let mut stacked = Matrix::zero(d * d, d);
        for i in 0..d {
            let bi = self.basis_element(i);
            let li = self.left_mul_matrix(&bi);
            let ri = self.right_mul_matrix(&bi);
            for r in 0..d {
                for c in 0..d {
                    stacked.set(i * d + r, c, self.field.sub(ri.at(r, c), li.at(r, c)));
                }
            }
        }
        stacked.kernel(&self.field)
    }

    /// Left-acting annihilator {a : Ua = 0}.
    pub fn annihilator(&self, u: &Subspace) -> Subspace {
        let f = &self.field;
        let d = self.dim;
        if u.is_zero() {
            return Subspace::full(d);
        }
        let mut stacked = Matrix::zero(u.dim() * d, d);
        for (k, ub) in u.basis_rows().enumerate() {
            let lu = self.left_mul_matrix(ub);
            for r in 0..d {
                for c in 0..d {
                    stacked.set(k * d + r, c, lu.at(r, c));
                }
            }
        }
        stacked.kernel(f)
    }

    /// Perp with respect to the symmetrizing form: kernel of (basis of U) * gram.
    pub fn perp(&self, form: &SymmetrizingForm, u: &Subspace) -> Subspace {
        let f = &self.field;
        if u.is_zero() {
            return Subspace::full(self.dim);
        }
        let m = u.basis().mul(f, form.gram());
        m.kernel(f)
    }

    pub fn is_two_sided_ideal(&self, i: &Subspace) -> bool {
        let f = &self.field;
        let full = Subspace::full(self.dim);
        let left = self.subspace_product(&full, i);
        let right = self.subspace_product(i, &full);
        i.contains(f, &left) && i.contains(f, &right)
    }

    /// The descending chain I, I^2, ..., I^n for a validated two-sided ideal.
    pub fn ideal_power(&self, i: &Subspace, n: usize) -> Result<Vec<Subspace>> {
        assert!(n >= 1);
        if !self.is_two_sided_ideal(i) {
            return Err(Error::NotAnIdeal);
        }
        let mut chain = vec![i.clone()];
        for _ in 2..=n {
            let prev = chain.last().unwrap();
            chain.push(self.subspace_product(prev, i));
        }
        Ok(chain)
    }

    /// Image of a -> x a y for idempotents x, y.
    pub fn corner(&self, x: &[FieldElement], y: &[FieldElement]) -> Result<Subspace> {
        if !self.is_idempotent(x) || !self.is_idempotent(y) {
            return Err(Error::NotIdempotent);
        }
        Ok(self.corner_unchecked(x, y))
    }

    pub(crate) fn corner_unchecked(&self, x: &[FieldElement], y: &[FieldElement]) -> Subspace {
        let f = &self.field;
        let t = self.left_mul_matrix(x).mul(f, &self.right_mul_matrix(y));
        Subspace::from_matrix(f, t.transpose())
    }

    /// Compression of a subspace to the (x, y) corner: span of {x v y}.
    pub fn corner_compress(
        &self,
        x: &[FieldElement],
        y: &[FieldElement],
        v: &Subspace,
    ) -> Subspace {
        let f = &self.field;
        let t = self.left_mul_matrix(x).mul(f, &self.right_mul_matrix(y));
        let rows: Vec<AlgebraElement> = v.basis_rows().map(|r| t.matvec(f, r)).collect();
        Subspace::from_rows(f, self.dim, rows)
    }

    /// The subalgebra carried by a multiplicatively closed subspace with the
    /// given unit, as a standalone algebra plus the embedding data.
    pub fn subalgebra_at(&self, carrier: &Subspace, unit: &[FieldElement]) -> Result<Embedded> {
        let f = &self.field;
        let k = carrier.dim();
        let basis: Vec<AlgebraElement> = carrier.basis_rows().map(|r| r.to_vec()).collect();
        let mut sc = vec![FieldElement::ZERO; k * k * k];
        for i in 0..k {
            for j in 0..k {
                let prod = self.multiply(&basis[i], &basis[j]);
                let coords = carrier.coords_of(f, &prod).ok_or_else(|| {
                    Error::Internal("subalgebra carrier is not multiplicatively closed".into())
                })?;
                sc[(i * k + j) * k..(i * k + j) * k + k].copy_from_slice(&coords);
            }
        }
        let unit_coords = carrier
            .coords_of(f, unit)
            .ok_or_else(|| Error::Internal("subalgebra unit lies outside the carrier".into()))?;
        let algebra = Algebra::from_derived_parts(self.field.clone(), k, sc, unit_coords)?;
        Ok(Embedded {
            algebra,
            carrier: carrier.clone(),
        })
    }

    /// The corner algebra eAe with unit e and the restriction of the form,
    /// revalidated. A degenerate restriction signals a bug: corners of
    /// symmetric algebras at idempotents stay symmetric.
    pub fn corner_algebra(
        &self,
        e: &[FieldElement],
        form: &SymmetrizingForm,
    ) -> Result<(Embedded, SymmetrizingForm)> {
        if !self.is_idempotent(e) || vec_is_zero(e) {
            return Err(Error::NotIdempotent);
        }
        let carrier = self.corner_unchecked(e, e);
        let emb = self.subalgebra_at(&carrier, e)?;
        let k = carrier.dim();
        let mut gram = Matrix::zero(k, k);
        let rows: Vec<&[FieldElement]> = carrier.basis_rows().collect();
        for i in 0..k {
            for j in 0..k {
                gram.set(i, j, form.value(&self.field, rows[i], rows[j]));
            }
        }
        let sub_form = SymmetrizingForm::new(&emb.algebra, gram)
            .map_err(|err| Error::Internal(format!("restricted form invalid: {err}")))?;
        Ok((emb, sub_form))
    }

    fn check_unit_law(&self) -> Result<()> {
        for i in 0..self.dim {
            let bi = self.basis_element(i);
            if self.multiply(&self.unit, &bi) != bi || self.multiply(&bi, &self.unit) != bi {
                return Err(Error::UnitLawViolated(i));
            }
        }
        Ok(())
    }

    fn check_associativity_full(&self) -> Result<()> {
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    self.check_triple(i, j, k)?;
                }
            }
        }
        Ok(())
    }

    fn check_associativity_sample(&self, samples: usize) -> Result<()> {
        let total = self.dim * self.dim * self.dim;
        if total <= samples {
            return self.check_associativity_full();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0xa550c);
        for _ in 0..samples {
            let i = rng.random_range(0..self.dim);
            let j = rng.random_range(0..self.dim);
            let k = rng.random_range(0..self.dim);
            self.check_triple(i, j, k)?;
        }
        Ok(())
    }

    #[inline]
    fn check_triple(&self, i: usize, j: usize, k: usize) -> Result<()> {
        let f = &self.field;
        let d = self.dim;
        // (b_i b_j) b_k and b_i (b_j b_k), expanded through the constants.
        let mut lhs = vec![FieldElement::ZERO; d];
        let ij = self.basis_product(i, j).to_vec();
        for (t, &c) in ij.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = self.basis_product(t, k);
            for (l, &r) in lhs.iter_mut().zip(row) {
                if !r.is_zero() {
                    *l = f.add(*l, f.mul(c, r));
                }
            }
        }
        let mut rhs = vec![FieldElement::ZERO; d];
        let jk = self.basis_product(j, k).to_vec();
        for (t, &c) in jk.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = self.basis_product(i, t);
            for (l, &r) in rhs.iter_mut().zip(row) {
                if !r.is_zero() {
                    *l = f.add(*l, f.mul(c, r));
                }
            }
        }
        if lhs != rhs {
            return Err(Error::NotAssociative { i, j, k });
        }
        Ok(())
    }
}

/// A subalgebra or corner of a parent algebra together with its embedding:
/// `carrier` holds the parent-coordinate basis matching the subalgebra basis
/// row for row, so subspaces transport both ways.
#[derive(Clone)]
pub struct Embedded {
    pub algebra: Algebra,
    pub carrier: Subspace,
}

impl Embedded {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// Subalgebra coordinates -> parent coordinates.
    pub fn embed_element(&self, x: &[FieldElement]) -> AlgebraElement {
        let f = self.algebra.field();
        let d = self.carrier.ambient_dim();
        let mut out = vec![FieldElement::ZERO; d];
        for (xi, row) in x.iter().zip(self.carrier.basis_rows()) {
            if xi.is_zero() {
                continue;
            }
            for (o, &r) in out.iter_mut().zip(row) {
                if !r.is_zero() {
                    *o = f.add(*o, f.mul(*xi, r));
                }
            }
        }
        out
    }

    /// Parent vector lying in the carrier -> subalgebra coordinates.
    pub fn compress_element(&self, v: &[FieldElement]) -> Result<AlgebraElement> {
        self.carrier
            .coords_of(self.algebra.field(), v)
            .ok_or_else(|| Error::Internal("vector lies outside the carrier".into()))
    }

    pub fn embed_subspace(&self, u: &Subspace) -> Subspace {
        let f = self.algebra.field();
        let rows: Vec<AlgebraElement> = u.basis_rows().map(|r| self.embed_element(r)).collect();
        Subspace::from_rows(f, self.carrier.ambient_dim(), rows)
    }

    pub fn compress_subspace(&self, v: &Subspace) -> Result<Subspace> {
        let f = self.algebra.field();
        let rows = v
            .basis_rows()
            .map(|r| self.compress_element(r))
            .collect::<Result<Vec<_>>>()?;
        Ok(Subspace::from_rows(f, self.algebra.dim(), rows))
    }
}

/// A symmetric, associative, nondegenerate bilinear form making the algebra
/// symmetric.
#[derive(Clone, Debug)]
pub struct SymmetrizingForm {
    gram: Matrix,
}

impl SymmetrizingForm {
    pub fn new(alg: &Algebra, gram: Matrix) -> Result<SymmetrizingForm> {
        let f = alg.field();
        let d = alg.dim();
        assert_eq!(gram.rows(), d);
        assert_eq!(gram.cols(), d);
        for i in 0..d {
            for j in 0..d {
                if gram.at(i, j) != gram.at(j, i) {
                    return Err(Error::FormNotSymmetric);
                }
            }
        }
        let rank = gram.rank(f);
        if rank != d {
            return Err(Error::FormDegenerate { rank, dim: d });
        }
        // Associativity <b_i b_j, b_k> = <b_i, b_j b_k> on all triples.
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let mut lhs = FieldElement::ZERO;
                    for (t, &c) in alg.basis_product(i, j).iter().enumerate() {
                        if !c.is_zero() {
                            lhs = f.add(lhs, f.mul(c, gram.at(t, k)));
                        }
                    }
                    let mut rhs = FieldElement::ZERO;
                    for (t, &c) in alg.basis_product(j, k).iter().enumerate() {
                        if !c.is_zero() {
                            rhs = f.add(rhs, f.mul(c, gram.at(i, t)));
                        }
                    }
                    if lhs != rhs {
                        return Err(Error::FormNotAssociative { i, j, k });
                    }
                }
            }
        }
        Ok(SymmetrizingForm { gram })
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn value(&self, f: &Field, x: &[FieldElement], y: &[FieldElement]) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        for (i, &xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let g = self.gram.at(i, j);
                if !g.is_zero() {
                    acc = f.add(acc, f.mul(f.mul(xi, yj), g));
                }
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> Field {
        Field::new(p, 1).unwrap()
    }

    /// Group algebra of the cyclic group of order n (used before the group
    /// module exists in the dependency order of tests).
    fn cyclic_algebra(f: &Field, n: usize) -> Algebra {
        let table: Vec<usize> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i + j) % n))
            .collect();
        let mut unit = vec![FieldElement::ZERO; n];
        unit[0] = FieldElement::ONE;
        Algebra::from_monomial_table(f.clone(), n, &table, unit).unwrap()
    }

    /// 2x2 matrix units over f: basis E11, E12, E21, E22.
    fn matrix_algebra_2x2(f: &Field) -> Algebra {
        let d = 4;
        let idx = |r: usize, c: usize| r * 2 + c;
        let mut sc = vec![FieldElement::ZERO; d * d * d];
        for (r1, c1) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            for (r2, c2) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                let i = idx(r1, c1);
                let j = idx(r2, c2);
                if c1 == r2 {
                    sc[(i * d + j) * d + idx(r1, c2)] = FieldElement::ONE;
                }
            }
        }
        let mut unit = vec![FieldElement::ZERO; d];
        unit[idx(0, 0)] = FieldElement::ONE;
        unit[idx(1, 1)] = FieldElement::ONE;
        Algebra::new(f.clone(), d, sc, unit).unwrap()
    }

    #[test]
    fn cyclic_group_algebra_constructs() {
        let f = gf(3);
        let a = cyclic_algebra(&f, 3);
        assert_eq!(a.dim(), 3);
        // g * g^2 = 1.
        let g = a.basis_element(1);
        let g2 = a.basis_element(2);
        assert_eq!(a.multiply(&g, &g2), a.one());
    }

    #[test]
    fn matrix_units_construct_with_unit_e11_plus_e22() {
        let f = gf(2);
        let a = matrix_algebra_2x2(&f);
        assert_eq!(a.dim(), 4);
        let x = a.basis_element(1); // E12
        assert_eq!(a.multiply(&a.one(), &x), x);
    }

    #[test]
    fn broken_associativity_reports_triple() {
        let f = gf(3);
        let a = cyclic_algebra(&f, 3);
        let mut sc = Vec::with_capacity(27);
        for i in 0..3 {
            for j in 0..3 {
                sc.extend_from_slice(a.basis_product(i, j));
            }
        }
        // Perturb one product.
        sc[(1 * 3 + 1) * 3] = FieldElement::ONE;
        sc[(1 * 3 + 1) * 3 + 2] = FieldElement::ONE;
        let err = Algebra::new(f, 3, sc, a.one()).unwrap_err();
        assert!(matches!(err, Error::NotAssociative { .. }), "{err:?}");
    }

    #[test]
    fn multiply_is_bilinear_sampled() {
        use rand::SeedableRng;
        let f = gf(5);
        let a = cyclic_algebra(&f, 4);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..40 {
            let x: AlgebraElement = (0..4).map(|_| f.random(&mut rng)).collect();
            let y: AlgebraElement = (0..4).map(|_| f.random(&mut rng)).collect();
            let z: AlgebraElement = (0..4).map(|_| f.random(&mut rng)).collect();
            let lhs = a.multiply(&vec_add(&f, &x, &y), &z);
            let rhs = vec_add(&f, &a.multiply(&x, &z), &a.multiply(&y, &z));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn subspace_product_examples() {
        let f = gf(3);
        let a = cyclic_algebra(&f, 3);
        let full = Subspace::full(3);
        let zero = Subspace::zero(3);
        assert!(a.subspace_product(&full, &zero).is_zero());
        let one_span = Subspace::from_rows(&f, 3, vec![a.one()]);
        assert_eq!(a.subspace_product(&one_span, &full), full);
        // J = span{g - 1, g^2 - 1}; J*J is spanned by (g-1)^2 = g^2 + g + 1
        // over GF(3), which is one-dimensional.
        let g = a.basis_element(1);
        let g2 = a.basis_element(2);
        let j = Subspace::from_rows(
            &f,
            3,
            vec![vec_sub(&f, &g, &a.one()), vec_sub(&f, &g2, &a.one())],
        );
        let jj = a.subspace_product(&j, &j);
        assert_eq!(jj.dim(), 1);
        let expect = vec![f.one(), f.one(), f.one()];
        assert!(jj.contains_vector(&f, &expect));
    }

    #[test]
    fn commutator_subspace_examples() {
        let f2 = gf(2);
        let comm = cyclic_algebra(&f2, 4);
        assert!(comm.commutator_full().is_zero());

        let m2 = matrix_algebra_2x2(&f2);
        let c = m2.commutator_full();
        // Trace-zero matrices over GF(2): dimension 3.
        assert_eq!(c.dim(), 3);
        for row in c.basis_rows() {
            // trace = coefficient of E11 plus coefficient of E22
            assert_eq!(f2.add(row[0], row[3]), FieldElement::ZERO);
        }
    }

    #[test]
    fn commutator_is_bilinear_in_subspaces() {
        use rand::Rng;
        use rand::SeedableRng;
        let f = gf(2);
        let a = matrix_algebra_2x2(&f);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        for _ in 0..25 {
            let rand_sub = |rng: &mut rand_chacha::ChaCha8Rng| {
                let k = rng.random_range(0..=4usize);
                let rows: Vec<AlgebraElement> = (0..k)
                    .map(|_| (0..4).map(|_| f.random(rng)).collect())
                    .collect();
                Subspace::from_rows(&f, 4, rows)
            };
            let u = rand_sub(&mut rng);
            let v = rand_sub(&mut rng);
            let w = rand_sub(&mut rng);
            let uv = u.sum(&f, &v).unwrap();
            let lhs = a.commutator_subspace(&uv, &w);
            let rhs = a
                .commutator_subspace(&u, &w)
                .sum(&f, &a.commutator_subspace(&v, &w))
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn center_examples() {
        let f = gf(3);
        let a = cyclic_algebra(&f, 3);
        assert_eq!(a.center(), Subspace::full(3));

        let f2 = gf(2);
        let m2 = matrix_algebra_2x2(&f2);
        let z = m2.center();
        assert_eq!(z.dim(), 1);
        assert!(z.contains_vector(&f2, &m2.one()));
    }

    #[test]
    fn annihilator_examples() {
        let f = gf(2);
        let a = cyclic_algebra(&f, 2); // GF(2)[C2] = F[t]/t^2 with t = 1 + g
        let zero = Subspace::zero(2);
        assert_eq!(a.annihilator(&zero), Subspace::full(2));
        let one_span = Subspace::from_rows(&f, 2, vec![a.one()]);
        assert!(a.annihilator(&one_span).is_zero());
        let t = vec![f.one(), f.one()];
        let j = Subspace::from_rows(&f, 2, vec![t.clone()]);
        let ann = a.annihilator(&j);
        assert_eq!(ann.dim(), 1);
        assert!(ann.contains_vector(&f, &t));
    }

    fn c2_form(a: &Algebra) -> SymmetrizingForm {
        // <g, h> = 1 iff gh = 1: for C2 with basis (1, g) this is the identity.
        SymmetrizingForm::new(a, Matrix::identity(2)).unwrap()
    }

    #[test]
    fn perp_examples() {
        let f = gf(2);
        let a = cyclic_algebra(&f, 2);
        let form = c2_form(&a);
        assert_eq!(a.perp(&form, &Subspace::zero(2)), Subspace::full(2));
        assert!(a.perp(&form, &Subspace::full(2)).is_zero());
        let t = vec![f.one(), f.one()];
        let j = Subspace::from_rows(&f, 2, vec![t.clone()]);
        assert_eq!(a.perp(&form, &j), j);
    }

    #[test]
    fn ideal_power_examples() {
        let f = gf(3);
        let a = cyclic_algebra(&f, 3);
        let g = a.basis_element(1);
        let g2 = a.basis_element(2);
        let j = Subspace::from_rows(
            &f,
            3,
            vec![vec_sub(&f, &g, &a.one()), vec_sub(&f, &g2, &a.one())],
        );
        let chain = a.ideal_power(&j, 3).unwrap();
        let dims: Vec<usize> = chain.iter().map(|s| s.dim()).collect();
        assert_eq!(dims, vec![2, 1, 0]);
        assert_eq!(chain[0], j);

        // A random non-ideal subspace is rejected.
        let not_ideal = Subspace::from_rows(&f, 3, vec![g.clone()]);
        assert!(matches!(
            a.ideal_power(&not_ideal, 2),
            Err(Error::NotAnIdeal)
        ));
    }

    #[test]
    fn corner_examples() {
        let f = gf(2);
        let m2 = matrix_algebra_2x2(&f);
        let full = m2.corner(&m2.one(), &m2.one()).unwrap();
        assert_eq!(full, Subspace::full(4));
        let e11 = m2.basis_element(0);
        let e22 = m2.basis_element(3);
        assert_eq!(m2.corner(&e11, &e11).unwrap().dim(), 1);
        let c12 = m2.corner(&e11, &e22).unwrap();
        assert_eq!(c12.dim(), 1);
        assert!(c12.contains_vector(&f, &m2.basis_element(1)));
        let g = m2.basis_element(1); // E12 is not idempotent
        assert!(matches!(m2.corner(&g, &e11), Err(Error::NotIdempotent)));
    }

    #[test]
    fn corner_algebra_of_matrix_units() {
        let f = gf(2);
        let m2 = matrix_algebra_2x2(&f);
        let gram = {
            // <x, y> = trace(xy) is symmetrizing for M_2.
            let mut g = Matrix::zero(4, 4);
            for i in 0..4 {
                for j in 0..4 {
                    let prod = m2.multiply(&m2.basis_element(i), &m2.basis_element(j));
                    g.set(i, j, f.add(prod[0], prod[3]));
                }
            }
            g
        };
        let form = SymmetrizingForm::new(&m2, gram).unwrap();
        let e11 = m2.basis_element(0);
        let (emb, _sub_form) = m2.corner_algebra(&e11, &form).unwrap();
        assert_eq!(emb.dim(), 1);

        let (whole, _) = m2.corner_algebra(&m2.one(), &form).unwrap();
        assert_eq!(whole.dim(), 4);
    }

    #[test]
    fn embedded_transport_round_trip() {
        let f = gf(2);
        let m2 = matrix_algebra_2x2(&f);
        let e11 = m2.basis_element(0);
        let carrier = m2.corner(&e11, &e11).unwrap();
        let emb = m2.subalgebra_at(&carrier, &e11).unwrap();
        let x = emb.algebra.one();
        let up = emb.embed_element(&x);
        assert_eq!(up, e11);
        assert_eq!(emb.compress_element(&up).unwrap(), x);
    }

    #[test]
    fn degenerate_form_rejected() {
        let f = gf(2);
        let a = cyclic_algebra(&f, 2);
        let gram = Matrix::zero(2, 2);
        assert!(matches!(
            SymmetrizingForm::new(&a, gram),
            Err(Error::FormDegenerate { .. })
        ));
    }
}
