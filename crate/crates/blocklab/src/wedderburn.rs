//! Structure theory: Jacobson radical, quotients, semisimple splitting,
//! idempotent lifting, primitive decompositions of 1, block decomposition,
//! and basic-algebra extraction.
//!
//! The radical uses the classical characteristic-p chain of characteristic
//! polynomial coefficient functionals (Cohen-Ivanyos-Wales style) over the
//! prime field: starting from the trace form of the regular representation,
//! stage i intersects with the kernel of x -> c_{p^i}(M(x y)) over y in the
//! previous layer, where c_k is the k-th charpoly coefficient. Each stage map
//! is additive on the previous layer, so every step is plain linear algebra
//! over GF(p). The outcome is post-validated (two-sided ideal, nilpotent)
//! rather than trusted.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{vec_add, vec_is_zero, vec_sub, Algebra, AlgebraElement, Embedded, SymmetrizingForm};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::linalg::{Matrix, Subspace};
use crate::poly::{coprime_split, minimal_polynomial, Poly};

// ---------------------------------------------------------------------------
// Prime-field helpers on raw residue matrices
// ---------------------------------------------------------------------------

fn fp_inv(x: u64, p: u64) -> u64 {
    // p is prime and x != 0.
    let mut acc = 1u64;
    let mut base = x % p;
    let mut n = p - 2;
    while n > 0 {
        if n & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        n >>= 1;
    }
    acc
}

/// In-place row reduction; returns pivot columns and drops zero rows.
fn fp_rref(rows: &mut Vec<Vec<u32>>, cols: usize, p: u64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut pr = 0usize;
    for pc in 0..cols {
        let Some(sel) = (pr..rows.len()).find(|&r| rows[r][pc] != 0) else {
            continue;
        };
        rows.swap(pr, sel);
        let inv = fp_inv(rows[pr][pc] as u64, p);
        for c in pc..cols {
            rows[pr][c] = (rows[pr][c] as u64 * inv % p) as u32;
        }
        for r in 0..rows.len() {
            if r != pr && rows[r][pc] != 0 {
                let factor = rows[r][pc] as u64;
                for c in pc..cols {
                    let sub = factor * rows[pr][c] as u64 % p;
                    rows[r][c] = ((rows[r][c] as u64 + p - sub) % p) as u32;
                }
            }
        }
        pivots.push(pc);
        pr += 1;
        if pr == rows.len() {
            break;
        }
    }
    rows.truncate(pr);
    pivots
}

/// Basis of {v : M v = 0} over GF(p).
fn fp_kernel(mat: &[Vec<u32>], cols: usize, p: u64) -> Vec<Vec<u32>> {
    let mut rows: Vec<Vec<u32>> = mat.to_vec();
    let pivots = fp_rref(&mut rows, cols, p);
    let mut out = Vec::new();
    for j in 0..cols {
        if pivots.contains(&j) {
            continue;
        }
        let mut v = vec![0u32; cols];
        v[j] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            let val = rows[i][j];
            if val != 0 {
                v[pc] = (p - val as u64) as u32 % p as u32;
            }
        }
        out.push(v);
    }
    out
}

/// Characteristic polynomial of an n x n matrix over GF(p), low degree first
/// (coefficients of det(lambda I - M)). Hessenberg reduction followed by the
/// standard Hessenberg determinant recurrence.
fn charpoly_mod_p(mat: &mut [u64], n: usize, p: u64) -> Vec<u64> {
    let idx = |r: usize, c: usize| r * n + c;
    // Similarity reduction to upper Hessenberg form.
    for k in 0..n.saturating_sub(2) {
        let Some(piv) = ((k + 1)..n).find(|&r| mat[idx(r, k)] != 0) else {
            continue;
        };
        if piv != k + 1 {
            for c in 0..n {
                mat.swap(idx(k + 1, c), idx(piv, c));
            }
            for r in 0..n {
                mat.swap(idx(r, k + 1), idx(r, piv));
            }
        }
        let inv = fp_inv(mat[idx(k + 1, k)], p);
        for i in (k + 2)..n {
            let factor = mat[idx(i, k)] % p;
            if factor == 0 {
                continue;
            }
            let factor = factor * inv % p;
            // row_i -= factor * row_{k+1}; col_{k+1} += factor * col_i.
            for c in k..n {
                let sub = factor * mat[idx(k + 1, c)] % p;
                mat[idx(i, c)] = (mat[idx(i, c)] + p - sub) % p;
            }
            for r in 0..n {
                let add = factor * mat[idx(r, i)] % p;
                mat[idx(r, k + 1)] = (mat[idx(r, k + 1)] + add) % p;
            }
        }
    }
    // p_0 = 1; p_k from the trailing principal minors of lambda I - H.
    let mut polys: Vec<Vec<u64>> = Vec::with_capacity(n + 1);
    polys.push(vec![1]);
    for k in 1..=n {
        let mut next = vec![0u64; k + 1];
        // (lambda - H[k-1][k-1]) * p_{k-1}
        let diag = mat[idx(k - 1, k - 1)] % p;
        for (i, &c) in polys[k - 1].iter().enumerate() {
            next[i + 1] = (next[i + 1] + c) % p;
            next[i] = (next[i] + (p - diag) * c) % p;
        }
        // - sum over i of H[k-1-i][k-1] * (prod of subdiagonals) * p_{k-1-i}
        let mut subprod = 1u64;
        for i in 1..k {
            subprod = subprod * (mat[idx(k - i, k - i - 1)] % p) % p;
            if subprod == 0 {
                break;
            }
            let h = mat[idx(k - 1 - i, k - 1)] % p;
            if h == 0 {
                continue;
            }
            let coeff = h * subprod % p;
            for (j, &c) in polys[k - 1 - i].iter().enumerate() {
                let sub = coeff * c % p;
                next[j] = (next[j] + p - sub) % p;
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

// ---------------------------------------------------------------------------
// Radical
// ---------------------------------------------------------------------------

/// The Jacobson radical with its full power chain.
#[derive(Clone, Debug)]
pub struct RadicalData {
    /// J as a canonical subspace of the algebra.
    pub radical: Subspace,
    /// The chain J, J^2, ..., J^lambda; the final entry is the zero subspace.
    pub powers: Vec<Subspace>,
    /// Least n with J^n = 0; equals 1 exactly for semisimple algebras.
    pub loewy_length: usize,
}

impl RadicalData {
    /// J^n for 1 <= n <= loewy_length.
    pub fn power(&self, n: usize) -> &Subspace {
        &self.powers[n - 1]
    }
}

/// Digit layout for restriction of scalars: the GF(p)-coordinate of
/// (algebra coordinate j, modulus-power u) sits at index j*e + u.
fn pack_row(f: &Field, digits: &[u32], dim: usize) -> AlgebraElement {
    let e = f.extension_degree() as usize;
    let p = f.characteristic() as u64;
    let mut out = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut packed = 0u64;
        for u in (0..e).rev() {
            packed = packed * p + digits[j * e + u] as u64;
        }
        out.push(FieldElement(packed as u32));
    }
    out
}

/// The GF(p)-matrix of left multiplication by z on the algebra viewed as a
/// prime-field space.
fn blow_up_left_mul(a: &Algebra, z: &[FieldElement]) -> Vec<u64> {
    let f = a.field();
    let d = a.dim();
    let e = f.extension_degree() as usize;
    let p = f.characteristic();
    let n = d * e;
    let lz = a.left_mul_matrix(z);
    let xpow: Vec<FieldElement> = (0..e)
        .map(|u| FieldElement((p as u64).pow(u as u32) as u32))
        .collect();
    let mut out = vec![0u64; n * n];
    let mut digits = vec![0u32; e];
    for jp in 0..d {
        for j in 0..d {
            let entry = lz.at(jp, j);
            if entry.is_zero() {
                continue;
            }
            for (u, &xp) in xpow.iter().enumerate() {
                let w = f.mul(entry, xp);
                f.digits_into(w, &mut digits);
                for up in 0..e {
                    if digits[up] != 0 {
                        out[(jp * e + up) * n + (j * e + u)] = digits[up] as u64;
                    }
                }
            }
        }
    }
    out
}

/// Jacobson radical via the characteristic-p trace/charpoly-coefficient
/// chain over GF(p), post-validated and packaged with its power chain.
pub fn radical(a: &Algebra) -> Result<RadicalData> {
    let f = a.field();
    let d = a.dim();
    let e = f.extension_degree() as usize;
    let p = f.characteristic() as u64;
    let n = d * e;

    // Stage 0: kernel of the trace form tr M(x y) of the regular
    // representation, restricted to the prime field. With tau_t = tr L_{b_t}
    // and T[i][k] = tau((b_i b_k)), the Gram entry at ((i,u),(k,v)) is the
    // field trace of x^{u+v} T[i][k].
    let tau: Vec<FieldElement> = (0..d)
        .map(|t| {
            let mut acc = FieldElement::ZERO;
            for j in 0..d {
                acc = f.add(acc, a.basis_product(t, j)[j]);
            }
            acc
        })
        .collect();
    let xpow_full: Vec<FieldElement> = {
        let mut v = vec![FieldElement::ONE];
        let x = FieldElement(p as u32);
        for s in 1..(2 * e).max(1) {
            let prev = v[s - 1];
            v.push(if e == 1 { FieldElement::ONE } else { f.mul(prev, x) });
        }
        v
    };
    let mut gram: Vec<Vec<u32>> = vec![vec![0u32; n]; n];
    for i in 0..d {
        for k in 0..d {
            let row = a.basis_product(i, k);
            let mut t_ik = FieldElement::ZERO;
            for (c, &tt) in row.iter().zip(&tau) {
                if !c.is_zero() && !tt.is_zero() {
                    t_ik = f.add(t_ik, f.mul(*c, tt));
                }
            }
            if t_ik.is_zero() {
                continue;
            }
            for u in 0..e {
                for v in 0..e {
                    let val = f.mul(xpow_full[u + v], t_ik);
                    let tr = f.trace_to_prime(val);
                    gram[i * e + u][k * e + v] = tr;
                }
            }
        }
    }
    let mut basis: Vec<Vec<u32>> = fp_kernel(&gram, n, p);
    fp_rref(&mut basis, n, p);

    // Stages i >= 1 with functionals c_{p^i} while p^i <= n.
    let mut level = p;
    while level <= n as u64 && !basis.is_empty() {
        let r = basis.len();
        let elems: Vec<AlgebraElement> = basis.iter().map(|row| pack_row(f, row, d)).collect();
        let lmats: Vec<Matrix> = elems.iter().map(|x| a.left_mul_matrix(x)).collect();
        let coeff_index = n - level as usize;
        let mut phi: Vec<Vec<u32>> = vec![vec![0u32; r]; r];
        for t in 0..r {
            for (s, lm) in lmats.iter().enumerate() {
                let z = lm.matvec(f, &elems[t]);
                if vec_is_zero(&z) {
                    continue;
                }
                let mut m = blow_up_left_mul(a, &z);
                let coeffs = charpoly_mod_p(&mut m, n, p);
                phi[t][s] = coeffs[coeff_index] as u32;
            }
        }
        let ker = fp_kernel(&phi, r, p);
        let mut next: Vec<Vec<u32>> = ker
            .iter()
            .map(|c| {
                let mut row = vec![0u32; n];
                for (s, &cs) in c.iter().enumerate() {
                    if cs == 0 {
                        continue;
                    }
                    for (rv, &bv) in row.iter_mut().zip(&basis[s]) {
                        *rv = ((*rv as u64 + cs as u64 * bv as u64) % p) as u32;
                    }
                }
                row
            })
            .collect();
        fp_rref(&mut next, n, p);
        basis = next;
        level *= p;
    }

    let j_rows: Vec<AlgebraElement> = basis.iter().map(|row| pack_row(f, row, d)).collect();
    let prime_dim = basis.len();
    let j = Subspace::from_rows(f, d, j_rows);
    if prime_dim != e * j.dim() {
        return Err(Error::Internal(
            "radical candidate is not a subspace over the coefficient field".into(),
        ));
    }
    if !a.is_two_sided_ideal(&j) {
        return Err(Error::Internal("radical candidate is not an ideal".into()));
    }
    let powers = if j.is_zero() {
        vec![Subspace::zero(d)]
    } else {
        let mut chain = vec![j.clone()];
        while !chain.last().unwrap().is_zero() {
            if chain.len() > d + 1 {
                return Err(Error::Internal("radical candidate is not nilpotent".into()));
            }
            let next = a.subspace_product(chain.last().unwrap(), &j);
            if next.dim() >= chain.last().unwrap().dim() && !next.is_zero() {
                return Err(Error::Internal(
                    "radical power chain fails to descend".into(),
                ));
            }
            chain.push(next);
        }
        chain
    };
    let loewy_length = powers.len();
    Ok(RadicalData {
        radical: j,
        powers,
        loewy_length,
    })
}

// ---------------------------------------------------------------------------
// Quotient algebra
// ---------------------------------------------------------------------------

/// A/I for a two-sided ideal I, with a section along the coordinate
/// complement of the ideal's pivot columns.
pub struct QuotientData {
    pub algebra: Algebra,
    ideal: Subspace,
    complement: Vec<usize>,
    parent_dim: usize,
}

impl QuotientData {
    pub fn project(&self, v: &[FieldElement]) -> AlgebraElement {
        let f = self.algebra.field();
        let mut rem = v.to_vec();
        for row in self.ideal.basis_rows() {
            let pc = row.iter().position(|x| !x.is_zero()).expect("nonzero row");
            let c = rem[pc];
            if c.is_zero() {
                continue;
            }
            for (rv, bv) in rem.iter_mut().zip(row) {
                if !bv.is_zero() {
                    *rv = f.sub(*rv, f.mul(c, *bv));
                }
            }
        }
        self.complement.iter().map(|&c| rem[c]).collect()
    }

    pub fn lift(&self, w: &[FieldElement]) -> AlgebraElement {
        let mut out = vec![FieldElement::ZERO; self.parent_dim];
        for (&c, &val) in self.complement.iter().zip(w) {
            out[c] = val;
        }
        out
    }
}

pub fn quotient_by_ideal(a: &Algebra, ideal: &Subspace) -> Result<QuotientData> {
    if !a.is_two_sided_ideal(ideal) {
        return Err(Error::NotAnIdeal);
    }
    let f = a.field();
    let d = a.dim();
    let pivot_cols: Vec<usize> = ideal
        .basis_rows()
        .map(|r| r.iter().position(|x| !x.is_zero()).expect("nonzero row"))
        .collect();
    let complement: Vec<usize> = (0..d).filter(|c| !pivot_cols.contains(c)).collect();
    let k = complement.len();
    if k == 0 {
        return Err(Error::Internal("quotient by the whole algebra".into()));
    }

    let project = |v: &[FieldElement]| -> AlgebraElement {
        let mut rem = v.to_vec();
        for (row, &pc) in ideal.basis_rows().zip(&pivot_cols) {
            let c = rem[pc];
            if c.is_zero() {
                continue;
            }
            for (rv, bv) in rem.iter_mut().zip(row) {
                if !bv.is_zero() {
                    *rv = f.sub(*rv, f.mul(c, *bv));
                }
            }
        }
        complement.iter().map(|&c| rem[c]).collect()
    };

    let mut sc = vec![FieldElement::ZERO; k * k * k];
    for i in 0..k {
        for j in 0..k {
            let mut bi = vec![FieldElement::ZERO; d];
            bi[complement[i]] = FieldElement::ONE;
            let mut bj = vec![FieldElement::ZERO; d];
            bj[complement[j]] = FieldElement::ONE;
            let prod = project(&a.multiply(&bi, &bj));
            sc[(i * k + j) * k..(i * k + j) * k + k].copy_from_slice(&prod);
        }
    }
    let unit = project(a.unit());
    let algebra = Algebra::from_derived_parts(f.clone(), k, sc, unit)?;
    Ok(QuotientData {
        algebra,
        ideal: ideal.clone(),
        complement,
        parent_dim: d,
    })
}

// ---------------------------------------------------------------------------
// Idempotent machinery
// ---------------------------------------------------------------------------

/// Evaluates a polynomial at an algebra element (Horner).
fn eval_poly_at(a: &Algebra, poly: &Poly, z: &[FieldElement]) -> AlgebraElement {
    let f = a.field();
    let mut acc = a.zero_element();
    for &c in poly.coeffs().iter().rev() {
        acc = a.multiply(&acc, z);
        if !c.is_zero() {
            let scaled: AlgebraElement = a.one().iter().map(|&u| f.mul(c, u)).collect();
            acc = vec_add(f, &acc, &scaled);
        }
    }
    acc
}

/// Minimal polynomial of multiplication by z inside the algebra.
fn element_min_poly(a: &Algebra, z: &[FieldElement]) -> Result<Poly> {
    minimal_polynomial(a.field(), &a.left_mul_matrix(z))
}

/// Splits off a proper idempotent from z when its minimal polynomial admits a
/// coprime factorization: with mp = f1 f2 and u f1 + v f2 = 1, the element
/// (v f2)(z) is idempotent, nonzero, and not the unit.
fn idempotent_from_element(a: &Algebra, z: &[FieldElement]) -> Result<Option<AlgebraElement>> {
    let f = a.field();
    let mp = element_min_poly(a, z)?;
    let Some((f1, f2)) = coprime_split(f, &mp) else {
        return Ok(None);
    };
    let (g, _u, v) = Poly::ext_gcd(f, &f1, &f2);
    if !g.is_one() {
        return Err(Error::Internal("coprime split factors share a divisor".into()));
    }
    let e1 = eval_poly_at(a, &v.mul(f, &f2), z);
    if vec_is_zero(&e1) || e1 == a.one() || !a.is_idempotent(&e1) {
        return Err(Error::Internal("CRT idempotent construction failed".into()));
    }
    Ok(Some(e1))
}

/// All primitive idempotents of a commutative split semisimple algebra,
/// refined by minimal-polynomial coprime splits of basis elements. Errors
/// with NotSplit when a component is a proper field extension, and flags
/// non-semisimple input detected through non-squarefree minimal polynomials.
fn commutative_primitive_idempotents(a: &Algebra) -> Result<Vec<AlgebraElement>> {
    let f = a.field();
    let mut work: Vec<AlgebraElement> = vec![a.one()];
    let mut finished: Vec<AlgebraElement> = Vec::new();
    while let Some(idem) = work.pop() {
        let carrier = a.corner_unchecked(&idem, &idem);
        if carrier.dim() == 1 {
            finished.push(idem);
            continue;
        }
        let emb = a.subalgebra_at(&carrier, &idem)?;
        let c = &emb.algebra;
        let mut found = None;
        for i in 0..c.dim() {
            let z = c.basis_element(i);
            let mp = element_min_poly(c, &z)?;
            if mp.deg() >= 1 {
                let sqfree = Poly::gcd(f, &mp, &mp.derivative(f));
                if mp.derivative(f).is_zero() || sqfree.deg() >= 1 {
                    return Err(Error::Internal(
                        "non-semisimple input to the idempotent splitter".into(),
                    ));
                }
            }
            if let Some(e1) = idempotent_from_element(c, &z)? {
                found = Some(e1);
                break;
            }
        }
        match found {
            Some(e1) => {
                let e1_parent = emb.embed_element(&e1);
                let e2_parent = vec_sub(f, &idem, &e1_parent);
                work.push(e1_parent);
                work.push(e2_parent);
            }
            None => {
                // Every basis element has an irreducible minimal polynomial,
                // so this component is a field extension of degree > 1.
                return Err(Error::NotSplit(format!(
                    "component of dimension {} is a proper field extension",
                    carrier.dim()
                )));
            }
        }
    }
    finished.sort_by_key(|e| e.iter().map(|x| x.index()).collect::<Vec<_>>());
    Ok(finished)
}

/// One simple component of a semisimple algebra.
#[derive(Clone, Debug)]
pub struct ComponentData {
    /// Central primitive idempotent cutting out the component.
    pub idempotent: AlgebraElement,
    /// Dimension of the component; n^2 for a split component M_n(F).
    pub dim: usize,
}

/// Central primitive idempotents and component dimensions of a semisimple
/// algebra, by splitting its center. The splitness check (every component
/// has a one-dimensional center) is built into the center splitter.
pub fn semisimple_split(a: &Algebra) -> Result<Vec<ComponentData>> {
    let z = a.center();
    let z_emb = a.subalgebra_at(&z, a.unit())?;
    let prims = commutative_primitive_idempotents(&z_emb.algebra)?;
    let mut out = Vec::with_capacity(prims.len());
    for prim in prims {
        let idem = z_emb.embed_element(&prim);
        let dim = a.corner_unchecked(&idem, &idem).dim();
        out.push(ComponentData { idempotent: idem, dim });
    }
    out.sort_by_key(|c| c.idempotent.iter().map(|x| x.index()).collect::<Vec<_>>());
    Ok(out)
}

/// Lifts an element idempotent modulo the radical to an exact idempotent by
/// p-power iteration: powers of a single element commute, so with p^k at
/// least the Loewy length, (a^(p^k))^2 - a^(p^k) = (a^2 - a)^(p^k) lands in
/// J^(p^k) = 0.
pub fn lift_idempotent(
    a: &Algebra,
    rad: &RadicalData,
    abar: &[FieldElement],
) -> Result<AlgebraElement> {
    let f = a.field();
    let defect = vec_sub(f, &a.multiply(abar, abar), abar);
    if !vec_is_zero(&defect) && !rad.radical.contains_vector(f, &defect) {
        return Err(Error::NotIdempotentModRadical);
    }
    let p = f.characteristic() as u64;
    let mut pk = 1u64;
    let mut result = abar.to_vec();
    while pk < rad.loewy_length as u64 {
        result = a.element_pow(&result, p);
        pk *= p;
    }
    if !a.is_idempotent(&result) {
        return Err(Error::Internal("p-power lift failed to converge".into()));
    }
    Ok(result)
}

/// Lifts a complete orthogonal family from A/J to A sequentially, conjugating
/// each representative into the corner of the complement of the already
/// lifted part so orthogonality is preserved.
fn lift_orthogonal_family(
    a: &Algebra,
    rad: &RadicalData,
    quot: &QuotientData,
    bars: &[AlgebraElement],
) -> Result<Vec<AlgebraElement>> {
    let f = a.field();
    let mut lifted: Vec<AlgebraElement> = Vec::with_capacity(bars.len());
    let mut partial_sum = a.zero_element();
    for bar in bars {
        let complement = vec_sub(f, &a.one(), &partial_sum);
        let rep = quot.lift(bar);
        let conj = a.multiply(&a.multiply(&complement, &rep), &complement);
        let e = lift_idempotent(a, rad, &conj)?;
        if quot.project(&e) != *bar {
            return Err(Error::Internal("lift does not reduce to its source".into()));
        }
        partial_sum = vec_add(f, &partial_sum, &e);
        lifted.push(e);
    }
    if partial_sum != a.one() {
        return Err(Error::Internal("lifted family does not sum to 1".into()));
    }
    for i in 0..lifted.len() {
        for j in 0..lifted.len() {
            if i != j && !vec_is_zero(&a.multiply(&lifted[i], &lifted[j])) {
                return Err(Error::Internal("lifted family is not orthogonal".into()));
            }
        }
    }
    Ok(lifted)
}

/// Orthogonal primitive idempotents of 1 grouped into isomorphism classes.
#[derive(Clone, Debug)]
pub struct IdempotentDecomposition {
    pub idempotents: Vec<AlgebraElement>,
    /// Partition of idempotent indices by simple component of A/J.
    pub classes: Vec<Vec<usize>>,
    /// Lowest index in each class.
    pub representatives: Vec<usize>,
}

impl IdempotentDecomposition {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn representative_elements(&self) -> Vec<&AlgebraElement> {
        self.representatives
            .iter()
            .map(|&i| &self.idempotents[i])
            .collect()
    }
}

/// Splits the unit of one simple component of a split semisimple algebra
/// into primitive orthogonal idempotents: random corner elements with
/// coprime-splittable minimal polynomials, with a deterministic fallback
/// enumerating basis elements and pairwise sums.
fn split_component_unit(
    abar: &Algebra,
    unit_c: &AlgebraElement,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<AlgebraElement>> {
    let f = abar.field();
    let mut work = vec![unit_c.clone()];
    let mut out = Vec::new();
    while let Some(idem) = work.pop() {
        let carrier = abar.corner_unchecked(&idem, &idem);
        if carrier.dim() == 1 {
            out.push(idem);
            continue;
        }
        let emb = abar.subalgebra_at(&carrier, &idem)?;
        let c = &emb.algebra;
        let k = c.dim();
        let mut split = None;
        for _ in 0..64 {
            let z: AlgebraElement = (0..k).map(|_| f.random(rng)).collect();
            if vec_is_zero(&z) {
                continue;
            }
            if let Some(e1) = idempotent_from_element(c, &z)? {
                split = Some(e1);
                break;
            }
        }
        if split.is_none() {
            // Deterministic fallback: basis elements, then pairwise sums.
            'outer: for i in 0..k {
                if let Some(e1) = idempotent_from_element(c, &c.basis_element(i))? {
                    split = Some(e1);
                    break;
                }
                for j in (i + 1)..k {
                    let z = vec_add(f, &c.basis_element(i), &c.basis_element(j));
                    if let Some(e1) = idempotent_from_element(c, &z)? {
                        split = Some(e1);
                        break 'outer;
                    }
                }
            }
        }
        let Some(e1) = split else {
            return Err(Error::SplittingStagnation);
        };
        let e1_parent = emb.embed_element(&e1);
        let e2_parent = vec_sub(f, &idem, &e1_parent);
        work.push(e1_parent);
        work.push(e2_parent);
    }
    Ok(out)
}

/// Primitive decomposition of 1: split A/J component by component, lift the
/// family, and group by simple component. Deterministic for a fixed seed.
pub fn primitive_decomposition(
    a: &Algebra,
    rad: &RadicalData,
    seed: u64,
) -> Result<IdempotentDecomposition> {
    let quot = quotient_by_ideal(a, &rad.radical)?;
    let comps = semisimple_split(&quot.algebra)?;
    let mut bars: Vec<AlgebraElement> = Vec::new();
    let mut class_of: Vec<usize> = Vec::new();
    for (ci, comp) in comps.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (0x9e3779b97f4a7c15u64.wrapping_mul(ci as u64 + 1)));
        let prims = split_component_unit(&quot.algebra, &comp.idempotent, &mut rng)?;
        // Accounting: a split component M_n(F) has dimension n^2 and yields
        // exactly n primitive idempotents.
        let n_sq = prims.len() * prims.len();
        if n_sq != comp.dim {
            return Err(Error::Internal(format!(
                "component of dimension {} split into {} primitives",
                comp.dim,
                prims.len()
            )));
        }
        for p in prims {
            bars.push(p);
            class_of.push(ci);
        }
    }
    let lifted = lift_orthogonal_family(a, rad, &quot, &bars)?;
    // Primitivity in the quotient: the corner at each image must be a line.
    for e in &lifted {
        let ebar = quot.project(e);
        if quot.algebra.corner_unchecked(&ebar, &ebar).dim() != 1 {
            return Err(Error::Internal("lifted idempotent is not primitive".into()));
        }
    }
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); comps.len()];
    for (idx, &ci) in class_of.iter().enumerate() {
        classes[ci].push(idx);
    }
    let representatives: Vec<usize> = classes.iter().map(|c| c[0]).collect();
    Ok(IdempotentDecomposition {
        idempotents: lifted,
        classes,
        representatives,
    })
}

// ---------------------------------------------------------------------------
// Blocks and basic algebras
// ---------------------------------------------------------------------------

/// One block: the corner of A at a primitive central idempotent, with the
/// restricted symmetrizing form.
pub struct BlockData {
    pub idempotent: AlgebraElement,
    pub embedded: Embedded,
    pub form: SymmetrizingForm,
}

pub struct BlockDecomposition {
    pub blocks: Vec<BlockData>,
}

/// Block decomposition: primitive idempotents of the center (split and
/// lifted inside Z(A)), then corners at those idempotents.
pub fn block_decomposition(a: &Algebra, form: &SymmetrizingForm) -> Result<BlockDecomposition> {
    let f = a.field();
    let z = a.center();
    let z_emb = a.subalgebra_at(&z, a.unit())?;
    let z_alg = &z_emb.algebra;
    let z_rad = radical(z_alg)?;
    let quot = quotient_by_ideal(z_alg, &z_rad.radical)?;
    let bars = commutative_primitive_idempotents(&quot.algebra)?;
    let lifted = lift_orthogonal_family(z_alg, &z_rad, &quot, &bars)?;
    let mut idems: Vec<AlgebraElement> = lifted
        .iter()
        .map(|e| z_emb.embed_element(e))
        .collect();
    idems.sort_by_key(|e| e.iter().map(|x| x.index()).collect::<Vec<_>>());
    let mut blocks = Vec::with_capacity(idems.len());
    let mut total = 0usize;
    for idem in idems {
        let (embedded, sub_form) = a.corner_algebra(&idem, form)?;
        total += embedded.dim();
        blocks.push(BlockData {
            idempotent: idem,
            embedded,
            form: sub_form,
        });
    }
    if total != a.dim() {
        return Err(Error::Internal(format!(
            "block dimensions sum to {total}, expected {}",
            a.dim()
        )));
    }
    // Central: each idempotent commutes with every basis element by
    // construction (it lies in the center subspace); sum must be 1.
    let sum = blocks.iter().fold(a.zero_element(), |acc, b| {
        vec_add(f, &acc, &b.idempotent)
    });
    if sum != a.one() {
        return Err(Error::Internal("block idempotents do not sum to 1".into()));
    }
    Ok(BlockDecomposition { blocks })
}

/// The basic algebra eBe at e = sum of one idempotent per class, with the
/// class representatives transported into eBe coordinates.
pub struct BasicAlgebra {
    pub embedded: Embedded,
    pub form: SymmetrizingForm,
    /// Class representatives in eBe coordinates, in class order.
    pub idempotents: Vec<AlgebraElement>,
}

pub fn basic_algebra(
    b: &Algebra,
    form: &SymmetrizingForm,
    dec: &IdempotentDecomposition,
) -> Result<BasicAlgebra> {
    let f = b.field();
    let mut e = b.zero_element();
    for &rep in &dec.representatives {
        e = vec_add(f, &e, &dec.idempotents[rep]);
    }
    let (embedded, sub_form) = b.corner_algebra(&e, form)?;
    let idempotents = dec
        .representatives
        .iter()
        .map(|&rep| embedded.compress_element(&dec.idempotents[rep]))
        .collect::<Result<Vec<_>>>()?;
    Ok(BasicAlgebra {
        embedded,
        form: sub_form,
        idempotents,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{group_algebra, splitting_degree, Group, DEFAULT_ORDER_CAP};

    fn cyclic(n: usize) -> Group {
        let table: Vec<Vec<usize>> = (0..n)
            .map(|i| (0..n).map(|j| (i + j) % n).collect())
            .collect();
        Group::from_cayley(table, None).unwrap()
    }

    fn sym3() -> Group {
        Group::from_permutations(3, &[vec![1, 0, 2], vec![1, 2, 0]], DEFAULT_ORDER_CAP).unwrap()
    }

    fn v4() -> Group {
        Group::from_permutations(4, &[vec![1, 0, 3, 2], vec![2, 3, 0, 1]], DEFAULT_ORDER_CAP)
            .unwrap()
    }

    #[test]
    fn charpoly_small_oracle() {
        // Brute-force determinant of (lambda I - M) by cofactor expansion
        // over polynomial arithmetic mod p.
        fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
            let mut out = vec![0u64; a.len() + b.len() - 1];
            for (i, &x) in a.iter().enumerate() {
                for (j, &y) in b.iter().enumerate() {
                    out[i + j] = (out[i + j] + x * y) % p;
                }
            }
            out
        }
        fn poly_add_scaled(a: &mut Vec<u64>, b: &[u64], s: u64, p: u64) {
            if a.len() < b.len() {
                a.resize(b.len(), 0);
            }
            for (i, &x) in b.iter().enumerate() {
                a[i] = (a[i] + s * x) % p;
            }
        }
        fn det_poly(entries: &[Vec<Vec<u64>>], p: u64) -> Vec<u64> {
            let n = entries.len();
            if n == 1 {
                return entries[0][0].clone();
            }
            let mut acc = vec![0u64];
            for k in 0..n {
                let minor: Vec<Vec<Vec<u64>>> = (1..n)
                    .map(|r| {
                        (0..n)
                            .filter(|&c| c != k)
                            .map(|c| entries[r][c].clone())
                            .collect()
                    })
                    .collect();
                let sub = det_poly(&minor, p);
                let term = poly_mul(&entries[0][k], &sub, p);
                let sign = if k % 2 == 0 { 1 } else { p - 1 };
                poly_add_scaled(&mut acc, &term, sign, p);
            }
            acc
        }

        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for &p in &[2u64, 3, 5] {
            for n in 1..=4usize {
                for _ in 0..10 {
                    let mut m: Vec<u64> = (0..n * n).map(|_| rng.random_range(0..p)).collect();
                    let entries: Vec<Vec<Vec<u64>>> = (0..n)
                        .map(|r| {
                            (0..n)
                                .map(|c| {
                                    // lambda I - M entry as a degree-1 poly
                                    let constant = (p - m[r * n + c]) % p;
                                    if r == c {
                                        vec![constant, 1]
                                    } else {
                                        vec![constant, 0]
                                    }
                                })
                                .collect()
                        })
                        .collect();
                    let mut expect = det_poly(&entries, p);
                    expect.resize(n + 1, 0);
                    let got = charpoly_mod_p(&mut m, n, p);
                    assert_eq!(got, expect, "charpoly mismatch at p={p}, n={n}");
                }
            }
        }
    }

    #[test]
    fn radical_is_zero_in_the_semisimple_case() {
        // p does not divide |G|: Maschke.
        let f25 = Field::new(5, 2).unwrap();
        let (a, _) = group_algebra(&sym3(), &f25).unwrap();
        let rad = radical(&a).unwrap();
        assert!(rad.radical.is_zero());
        assert_eq!(rad.loewy_length, 1);
    }

    #[test]
    fn radical_of_p_group_is_augmentation_ideal() {
        let f3 = Field::new(3, 1).unwrap();
        let (a, _) = group_algebra(&cyclic(3), &f3).unwrap();
        let rad = radical(&a).unwrap();
        assert_eq!(rad.radical.dim(), 2);
        assert_eq!(rad.loewy_length, 3);
        // J is spanned by g - 1, g^2 - 1.
        let f = a.field();
        let g = a.basis_element(1);
        let aug = vec_sub(f, &g, &a.one());
        assert!(rad.radical.contains_vector(f, &aug));

        let f2 = Field::new(2, 1).unwrap();
        let (b, _) = group_algebra(&v4(), &f2).unwrap();
        let rb = radical(&b).unwrap();
        assert_eq!(rb.radical.dim(), 3);
        assert_eq!(rb.loewy_length, 3);
        let dims: Vec<usize> = rb.powers.iter().map(|s| s.dim()).collect();
        assert_eq!(dims, vec![3, 1, 0]);
    }

    #[test]
    fn radical_of_s3_mod_3_has_dimension_4() {
        let f3 = Field::new(3, 1).unwrap();
        let (a, _) = group_algebra(&sym3(), &f3).unwrap();
        let rad = radical(&a).unwrap();
        assert_eq!(rad.radical.dim(), 4);
        assert_eq!(rad.loewy_length, 3);
    }

    /// Independent oracle for commutative algebras: the nilpotent elements
    /// form the kernel of the additive p^k-power map (k with p^k >= dim),
    /// computed over the prime field.
    fn commutative_nilpotent_subspace(a: &Algebra) -> Subspace {
        let f = a.field();
        let d = a.dim();
        let e = f.extension_degree() as usize;
        let p = f.characteristic() as u64;
        let n = d * e;
        let mut pk = 1u64;
        while pk < d as u64 {
            pk *= p;
        }
        let mut cols: Vec<Vec<u32>> = Vec::with_capacity(n);
        let mut digits = vec![0u32; e];
        for j in 0..d {
            for u in 0..e {
                let mut v = a.basis_element(j);
                let xu = FieldElement((p as u64).pow(u as u32) as u32);
                for c in v.iter_mut() {
                    *c = f.mul(*c, xu);
                }
                let img = a.element_pow(&v, pk);
                let mut col = vec![0u32; n];
                for (jj, &cv) in img.iter().enumerate() {
                    f.digits_into(cv, &mut digits);
                    for (uu, &dd) in digits.iter().enumerate() {
                        col[jj * e + uu] = dd;
                    }
                }
                cols.push(col);
            }
        }
        // Kernel of the n x n prime-field matrix with those columns.
        let mat: Vec<Vec<u32>> = (0..n)
            .map(|r| (0..n).map(|c| cols[c][r]).collect())
            .collect();
        let ker = fp_kernel(&mat, n, p);
        let rows: Vec<AlgebraElement> = ker.iter().map(|row| pack_row(f, row, d)).collect();
        Subspace::from_rows(f, d, rows)
    }

    #[test]
    fn radical_matches_commutative_nilpotent_oracle() {
        for (group, p, e) in [
            (cyclic(3), 3u64, 1u32),
            (cyclic(4), 2, 1),
            (cyclic(6), 3, 1),
            (cyclic(6), 2, 2),
            (v4(), 2, 1),
            (cyclic(9), 3, 1),
        ] {
            let field = Field::new(p, e).unwrap();
            let (a, _) = group_algebra(&group, &field).unwrap();
            let rad = radical(&a).unwrap();
            let oracle = commutative_nilpotent_subspace(&a);
            assert_eq!(rad.radical, oracle, "p={p} |G|={}", group.order());
        }
    }

    #[test]
    fn semisimple_split_examples() {
        // The field itself: one component of dimension 1.
        let f = Field::new(3, 1).unwrap();
        let trivial = Algebra::from_monomial_table(f.clone(), 1, &[0], vec![FieldElement::ONE]).unwrap();
        let comps = semisimple_split(&trivial).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].dim, 1);

        // GF(3)[S3]/J: two one-dimensional components.
        let (a, _) = group_algebra(&sym3(), &f).unwrap();
        let rad = radical(&a).unwrap();
        let quot = quotient_by_ideal(&a, &rad.radical).unwrap();
        let comps = semisimple_split(&quot.algebra).unwrap();
        let dims: Vec<usize> = comps.iter().map(|c| c.dim).collect();
        assert_eq!(dims, vec![1, 1]);

        // GF(25)[S3]: three components of dimensions 1, 1, 4.
        let f25 = Field::new(5, 2).unwrap();
        let (a25, _) = group_algebra(&sym3(), &f25).unwrap();
        let comps = semisimple_split(&a25).unwrap();
        let mut dims: Vec<usize> = comps.iter().map(|c| c.dim).collect();
        dims.sort_unstable();
        assert_eq!(dims, vec![1, 1, 4]);
    }

    #[test]
    fn splitness_failure_detected_over_small_field() {
        // GF(2)[C3] = GF(2) x GF(4) is semisimple but not split: the second
        // component is a proper field extension.
        let f2 = Field::new(2, 1).unwrap();
        let (a, _) = group_algebra(&cyclic(3), &f2).unwrap();
        let err = semisimple_split(&a).unwrap_err();
        assert!(matches!(err, Error::NotSplit(_)), "{err:?}");
    }

    #[test]
    fn lift_idempotent_examples() {
        let f3 = Field::new(3, 1).unwrap();
        let (a, _) = group_algebra(&sym3(), &f3).unwrap();
        let rad = radical(&a).unwrap();
        assert_eq!(lift_idempotent(&a, &rad, &a.one()).unwrap(), a.one());
        assert_eq!(
            lift_idempotent(&a, &rad, &a.zero_element()).unwrap(),
            a.zero_element()
        );
        // A representative of a quotient idempotent lifts to an exact one.
        let quot = quotient_by_ideal(&a, &rad.radical).unwrap();
        let comps = semisimple_split(&quot.algebra).unwrap();
        let rep = quot.lift(&comps[0].idempotent);
        let e = lift_idempotent(&a, &rad, &rep).unwrap();
        assert!(a.is_idempotent(&e));
        assert_eq!(quot.project(&e), comps[0].idempotent);
        // Non-idempotents modulo J are rejected.
        let g = a.basis_element(1);
        assert!(matches!(
            lift_idempotent(&a, &rad, &g),
            Err(Error::NotIdempotentModRadical)
        ));
    }

    #[test]
    fn primitive_decomposition_examples() {
        // Local algebra: a single idempotent, one class.
        let f3 = Field::new(3, 1).unwrap();
        let (c3, _) = group_algebra(&cyclic(3), &f3).unwrap();
        let rad = radical(&c3).unwrap();
        let dec = primitive_decomposition(&c3, &rad, 7).unwrap();
        assert_eq!(dec.idempotents.len(), 1);
        assert_eq!(dec.class_count(), 1);
        assert_eq!(dec.idempotents[0], c3.one());

        // GF(3)[S3]: two primitives in two classes.
        let (s3a, _) = group_algebra(&sym3(), &f3).unwrap();
        let rad = radical(&s3a).unwrap();
        let dec = primitive_decomposition(&s3a, &rad, 7).unwrap();
        assert_eq!(dec.idempotents.len(), 2);
        assert_eq!(dec.class_count(), 2);

        // GF(25)[S3]: four primitives in three classes of sizes 1, 1, 2.
        let f25 = Field::new(5, 2).unwrap();
        let (s3b, _) = group_algebra(&sym3(), &f25).unwrap();
        let rad = radical(&s3b).unwrap();
        let dec = primitive_decomposition(&s3b, &rad, 7).unwrap();
        assert_eq!(dec.idempotents.len(), 4);
        assert_eq!(dec.class_count(), 3);
        let mut sizes: Vec<usize> = dec.classes.iter().map(|c| c.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 1, 2]);
    }

    #[test]
    fn primitive_decomposition_is_deterministic() {
        let f25 = Field::new(5, 2).unwrap();
        let (a, _) = group_algebra(&sym3(), &f25).unwrap();
        let rad = radical(&a).unwrap();
        let d1 = primitive_decomposition(&a, &rad, 99).unwrap();
        let d2 = primitive_decomposition(&a, &rad, 99).unwrap();
        assert_eq!(d1.idempotents, d2.idempotents);
        assert_eq!(d1.classes, d2.classes);
    }

    #[test]
    fn block_decomposition_examples() {
        // p-group: FG is local, a single block.
        let f2 = Field::new(2, 1).unwrap();
        let (a, form) = group_algebra(&v4(), &f2).unwrap();
        let blocks = block_decomposition(&a, &form).unwrap();
        assert_eq!(blocks.blocks.len(), 1);
        assert_eq!(blocks.blocks[0].embedded.dim(), 4);

        // Semisimple: blocks are the simple components, dims 1, 1, 4.
        let f25 = Field::new(5, 2).unwrap();
        let (b, form_b) = group_algebra(&sym3(), &f25).unwrap();
        let blocks = block_decomposition(&b, &form_b).unwrap();
        let mut dims: Vec<usize> = blocks.blocks.iter().map(|x| x.embedded.dim()).collect();
        dims.sort_unstable();
        assert_eq!(dims, vec![1, 1, 4]);

        // GF(3)[S3]: a single block of dimension 6; cross-check by an
        // exhaustive idempotent scan of the three-dimensional center.
        let f3 = Field::new(3, 1).unwrap();
        let (c, form_c) = group_algebra(&sym3(), &f3).unwrap();
        let blocks = block_decomposition(&c, &form_c).unwrap();
        assert_eq!(blocks.blocks.len(), 1);
        assert_eq!(blocks.blocks[0].embedded.dim(), 6);
        let z = c.center();
        assert_eq!(z.dim(), 3);
        let basis: Vec<AlgebraElement> = z.basis_rows().map(|r| r.to_vec()).collect();
        let f = c.field();
        let mut idempotents_found = 0;
        for i0 in 0..3u32 {
            for i1 in 0..3u32 {
                for i2 in 0..3u32 {
                    let mut v = c.zero_element();
                    for (coef, b) in [(i0, &basis[0]), (i1, &basis[1]), (i2, &basis[2])] {
                        for (vv, bv) in v.iter_mut().zip(b) {
                            *vv = f.add(*vv, f.mul(FieldElement(coef), *bv));
                        }
                    }
                    if c.is_idempotent(&v) {
                        idempotents_found += 1;
                    }
                }
            }
        }
        // Only 0 and 1: the center of a single block has no proper idempotents.
        assert_eq!(idempotents_found, 2);
    }

    #[test]
    fn basic_algebra_examples() {
        // Already basic: eBe = B.
        let f3 = Field::new(3, 1).unwrap();
        let (a, form) = group_algebra(&sym3(), &f3).unwrap();
        let rad = radical(&a).unwrap();
        let dec = primitive_decomposition(&a, &rad, 7).unwrap();
        let basic = basic_algebra(&a, &form, &dec).unwrap();
        assert_eq!(basic.embedded.dim(), 6);

        // The M_2 block of GF(25)[S3] has a one-dimensional basic algebra.
        let f25 = Field::new(5, 2).unwrap();
        let (b, form_b) = group_algebra(&sym3(), &f25).unwrap();
        let blocks = block_decomposition(&b, &form_b).unwrap();
        let big = blocks
            .blocks
            .iter()
            .find(|x| x.embedded.dim() == 4)
            .expect("matrix block");
        let block_rad = radical(&big.embedded.algebra).unwrap();
        let dec_b = primitive_decomposition(&big.embedded.algebra, &block_rad, 7).unwrap();
        assert_eq!(dec_b.idempotents.len(), 2);
        assert_eq!(dec_b.class_count(), 1);
        let basic_b = basic_algebra(&big.embedded.algebra, &big.form, &dec_b).unwrap();
        assert_eq!(basic_b.embedded.dim(), 1);
    }

    #[test]
    fn radical_transports_to_corners() {
        // e J e = J(eAe) under the corner embedding.
        let f3 = Field::new(3, 1).unwrap();
        let (a, form) = group_algebra(&sym3(), &f3).unwrap();
        let rad = radical(&a).unwrap();
        let dec = primitive_decomposition(&a, &rad, 7).unwrap();
        let basic = basic_algebra(&a, &form, &dec).unwrap();
        let corner_rad = radical(&basic.embedded.algebra).unwrap();
        let e_parent: AlgebraElement = {
            let mut e = a.zero_element();
            for &rep in &dec.representatives {
                e = vec_add(a.field(), &e, &dec.idempotents[rep]);
            }
            e
        };
        let eje = a.corner_compress(&e_parent, &e_parent, &rad.radical);
        let transported = basic.embedded.compress_subspace(&eje).unwrap();
        assert_eq!(transported, corner_rad.radical);
    }

    #[test]
    fn splitting_degree_retry_path_is_never_needed_classically() {
        // The classical bound gives a split algebra for these cases; the
        // pipeline-level retry exists as defense only.
        for (g, p) in [(sym3(), 3u64), (sym3(), 5), (cyclic(4), 2), (v4(), 3)] {
            let e = splitting_degree(&g, p).unwrap();
            let field = Field::new(p, e).unwrap();
            let (a, _) = group_algebra(&g, &field).unwrap();
            let rad = radical(&a).unwrap();
            let quot = quotient_by_ideal(&a, &rad.radical);
            let quot = match quot {
                Ok(q) => q,
                Err(_) => continue,
            };
            assert!(semisimple_split(&quot.algebra).is_ok());
        }
    }
}
