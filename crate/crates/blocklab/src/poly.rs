//! Univariate polynomials over GF(p^e) in canonical form, plus the two
//! factor-splitting services the idempotent machinery needs: coprime
//! factor splits and minimal polynomials of matrices.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::linalg::Matrix;

/// Coefficients low degree first, trailing zeros stripped; zero is empty.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<FieldElement>,
}

impl std::fmt::Debug for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let c: Vec<u32> = self.coeffs.iter().map(|x| x.index()).collect();
        write!(f, "Poly{:?}", c)
    }
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly {
            coeffs: vec![FieldElement::ONE],
        }
    }

    pub fn x() -> Poly {
        Poly {
            coeffs: vec![FieldElement::ZERO, FieldElement::ONE],
        }
    }

    /// `x - c`.
    pub fn linear(f: &Field, c: FieldElement) -> Poly {
        Poly::from_coeffs(vec![f.neg(c), FieldElement::ONE])
    }

    pub fn from_coeffs(mut coeffs: Vec<FieldElement>) -> Poly {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == FieldElement::ONE
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().expect("nonzero polynomial")
    }

    pub fn leading(&self) -> FieldElement {
        *self.coeffs.last().expect("nonzero polynomial")
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == FieldElement::ONE
    }

    pub fn add(&self, f: &Field, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![FieldElement::ZERO; n];
        for (i, o) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(FieldElement::ZERO);
            let b = other.coeffs.get(i).copied().unwrap_or(FieldElement::ZERO);
            *o = f.add(a, b);
        }
        Poly::from_coeffs(out)
    }

    pub fn sub(&self, f: &Field, other: &Poly) -> Poly {
        self.add(f, &other.scale(f, f.neg(FieldElement::ONE)))
    }

    pub fn scale(&self, f: &Field, s: FieldElement) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|&c| f.mul(c, s)).collect())
    }

    pub fn mul(&self, f: &Field, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![FieldElement::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = f.add(out[i + j], f.mul(a, b));
                }
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn div_rem(&self, f: &Field, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if self.is_zero() || self.deg() < divisor.deg() {
            return (Poly::zero(), self.clone());
        }
        let dl_inv = f.inv(divisor.leading()).expect("nonzero leading");
        let mut rem = self.coeffs.clone();
        let dd = divisor.deg();
        let mut quot = vec![FieldElement::ZERO; rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = rem[k];
            if c.is_zero() {
                continue;
            }
            let qc = f.mul(c, dl_inv);
            quot[k - dd] = qc;
            for (i, &dcoef) in divisor.coeffs.iter().enumerate() {
                rem[k - dd + i] = f.sub(rem[k - dd + i], f.mul(qc, dcoef));
            }
        }
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    pub fn rem(&self, f: &Field, divisor: &Poly) -> Poly {
        self.div_rem(f, divisor).1
    }

    /// Exact quotient; panics when the division leaves a remainder.
    pub fn div_exact(&self, f: &Field, divisor: &Poly) -> Poly {
        let (q, r) = self.div_rem(f, divisor);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn make_monic(&self, f: &Field) -> Poly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        self.scale(f, f.inv(self.leading()).expect("nonzero leading"))
    }

    /// Monic greatest common divisor.
    pub fn gcd(f: &Field, a: &Poly, b: &Poly) -> Poly {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let r = a.rem(f, &b);
            a = b;
            b = r;
        }
        a.make_monic(f)
    }

    /// Extended gcd: returns monic g and (u, v) with u*a + v*b = g.
    pub fn ext_gcd(f: &Field, a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
        let mut r0 = a.clone();
        let mut r1 = b.clone();
        let mut s0 = Poly::one();
        let mut s1 = Poly::zero();
        let mut t0 = Poly::zero();
        let mut t1 = Poly::one();
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(f, &r1);
            let s = s0.sub(f, &q.mul(f, &s1));
            let t = t0.sub(f, &q.mul(f, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (Poly::zero(), s0, t0);
        }
        let lead_inv = f.inv(r0.leading()).expect("nonzero leading");
        (
            r0.scale(f, lead_inv),
            s0.scale(f, lead_inv),
            t0.scale(f, lead_inv),
        )
    }

    pub fn derivative(&self, f: &Field) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, &c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(f.mul(c, f.from_u64(i as u64)));
        }
        Poly::from_coeffs(out)
    }

    pub fn eval(&self, f: &Field, x: FieldElement) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = f.add(f.mul(acc, x), c);
        }
        acc
    }

    /// `self^n mod modulus` by square-and-multiply.
    pub fn pow_mod(&self, f: &Field, mut n: u64, modulus: &Poly) -> Poly {
        let mut base = self.rem(f, modulus);
        let mut acc = Poly::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(f, &base).rem(f, modulus);
            }
            base = base.mul(f, &base).rem(f, modulus);
            n >>= 1;
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// Coprime splitting
// ---------------------------------------------------------------------------

/// Splits monic `f` of degree >= 1 into monic coprime factors of degree >= 1,
/// or returns `None` when `f` is a power of a single irreducible.
///
/// Strategy: squarefree separation via gcd(f, f'), p-th-power unwrapping for
/// vanishing derivatives, distinct-degree separation via gcd(f, x^(q^d) - x)
/// with root extraction by exhaustive scan over GF(q), and an equal-degree
/// fallback for products of same-degree irreducibles.
pub fn coprime_split(f: &Field, poly: &Poly) -> Option<(Poly, Poly)> {
    assert!(!poly.is_zero() && poly.is_monic(), "monic input required");
    assert!(poly.deg() >= 1, "degree >= 1 required");
    if poly.deg() == 1 {
        return None;
    }

    let deriv = poly.derivative(f);
    if deriv.is_zero() {
        // f(x) = g(x^p) = (g~)^p with g~ the coefficient-wise p-th root of g;
        // any coprime split of g~ powers up to one of f.
        let root = pth_root_poly(f, poly);
        let (a, b) = coprime_split(f, &root)?;
        let p = f.characteristic() as u64;
        return Some((poly_power(f, &a, p), poly_power(f, &b, p)));
    }

    let g = Poly::gcd(f, poly, &deriv);
    let w = if g.deg() == 0 {
        poly.clone()
    } else {
        poly.div_exact(f, &g).make_monic(f)
    };
    // w is squarefree and carries the factors of f whose multiplicity is not
    // divisible by p. Separate f along w first.
    let w_part = primary_part(f, poly, &w);
    let rest = poly.div_exact(f, &w_part).make_monic(f);
    if w_part.deg() >= 1 && rest.deg() >= 1 {
        return Some((w_part, rest));
    }
    if rest.deg() >= 1 {
        // All factors of f have multiplicity divisible by p, so the
        // derivative-zero branch above would have fired.
        unreachable!("squarefree part cannot be trivial when f' != 0");
    }
    // Every irreducible factor of f divides w; split w and lift.
    let (w1, _w2) = split_squarefree(f, &w)?;
    let f1 = primary_part(f, poly, &w1);
    let f2 = poly.div_exact(f, &f1).make_monic(f);
    debug_assert!(f1.deg() >= 1 && f2.deg() >= 1);
    Some((f1, f2))
}

/// The divisor of `f` supported on the irreducible factors of `w`:
/// gcd(f, w^(deg f)), computed with reductions mod f to keep degrees small.
fn primary_part(f: &Field, poly: &Poly, w: &Poly) -> Poly {
    let wk = w.pow_mod(f, poly.deg() as u64, poly);
    if wk.is_zero() {
        // w^(deg f) is divisible by f itself.
        return poly.clone();
    }
    Poly::gcd(f, poly, &wk)
}

/// Coefficient-wise p-th root of g where f(x) = g(x^p).
fn pth_root_poly(f: &Field, poly: &Poly) -> Poly {
    let p = f.characteristic() as usize;
    let e = f.extension_degree();
    let root_exp = f.order() / f.characteristic() as u64; // c -> c^(q/p) inverts Frobenius
    let mut out = Vec::new();
    for (i, &c) in poly.coeffs().iter().enumerate() {
        if i % p == 0 {
            let r = if e == 1 { c } else { f.pow(c, root_exp) };
            out.push(r);
        } else {
            debug_assert!(c.is_zero());
        }
    }
    Poly::from_coeffs(out)
}

fn poly_power(f: &Field, base: &Poly, mut n: u64) -> Poly {
    let mut acc = Poly::one();
    let mut b = base.clone();
    while n > 0 {
        if n & 1 == 1 {
            acc = acc.mul(f, &b);
        }
        b = b.mul(f, &b);
        n >>= 1;
    }
    acc
}

/// Splits a monic squarefree polynomial with at least two irreducible factors;
/// `None` when irreducible.
fn split_squarefree(f: &Field, w: &Poly) -> Option<(Poly, Poly)> {
    if w.deg() <= 1 {
        return None;
    }
    let q = f.order();
    // Linear-factor part via gcd(w, x^q - x).
    let xq = Poly::x().pow_mod(f, q, w);
    let lin = Poly::gcd(f, w, &xq.sub(f, &Poly::x()));
    if lin.deg() >= 1 && lin.deg() < w.deg() {
        return Some((lin.clone(), w.div_exact(f, &lin).make_monic(f)));
    }
    if lin.deg() == w.deg() {
        // All factors are linear: exhaustive root scan finds one.
        for c in f.elements() {
            if w.eval(f, c).is_zero() {
                let l = Poly::linear(f, c);
                let rest = w.div_exact(f, &l).make_monic(f);
                return Some((l, rest));
            }
        }
        unreachable!("a fully split polynomial has a root in the field");
    }
    // No linear factors. Distinct-degree separation.
    let mut frob = xq; // x^(q^d) mod w, starting at d = 1
    for d in 2..=w.deg() / 2 {
        frob = frob.pow_mod(f, q, w);
        let g = Poly::gcd(f, w, &frob.sub(f, &Poly::x()));
        if g.deg() >= 1 && g.deg() < w.deg() {
            return Some((g.clone(), w.div_exact(f, &g).make_monic(f)));
        }
        if g.deg() == w.deg() {
            // Product of at least two irreducibles, all of degree exactly d.
            return Some(split_equal_degree(f, w, d));
        }
    }
    None
}

/// Cantor-Zassenhaus equal-degree splitting for a squarefree product of at
/// least two degree-d irreducibles. The RNG is internally seeded so results
/// are reproducible.
fn split_equal_degree(f: &Field, w: &Poly, d: usize) -> (Poly, Poly) {
    let q = f.order();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0edf_5eed);
    for _ in 0..512 {
        let t = random_poly(f, w.deg(), &mut rng);
        if t.is_zero() {
            continue;
        }
        let candidate = if f.characteristic() == 2 {
            // Trace map over GF(2^(e d)).
            let steps = f.extension_degree() as usize * d;
            let mut s = t.rem(f, w);
            let mut term = t.rem(f, w);
            for _ in 1..steps {
                term = term.mul(f, &term).rem(f, w);
                s = s.add(f, &term);
            }
            s
        } else {
            // t^((q^d - 1)/2) - 1 via the norm map: q^d - 1 = (q - 1) * sum q^i.
            let mut norm = t.rem(f, w);
            let mut tq = t.rem(f, w);
            for _ in 1..d {
                tq = tq.pow_mod(f, q, w);
                norm = norm.mul(f, &tq).rem(f, w);
            }
            let s = norm.pow_mod(f, (q - 1) / 2, w);
            s.sub(f, &Poly::one())
        };
        let g = Poly::gcd(f, w, &candidate);
        if g.deg() >= 1 && g.deg() < w.deg() {
            let rest = w.div_exact(f, &g).make_monic(f);
            return (g, rest);
        }
    }
    unreachable!("equal-degree splitting exhausts only with negligible probability");
}

fn random_poly(f: &Field, below_degree: usize, rng: &mut ChaCha8Rng) -> Poly {
    let deg = rng.random_range(1..below_degree.max(2));
    let coeffs: Vec<FieldElement> = (0..=deg).map(|_| f.random(rng)).collect();
    Poly::from_coeffs(coeffs)
}

// ---------------------------------------------------------------------------
// Minimal polynomials
// ---------------------------------------------------------------------------

/// Monic minimal polynomial of a square matrix, found by growing the linear
/// span of I, M, M^2, ... until a dependency appears.
pub fn minimal_polynomial(f: &Field, m: &Matrix) -> Result<Poly> {
    if m.rows() != m.cols() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Poly::one());
    }
    // Echelonized flattened powers with bookkeeping of the combination of
    // powers each stored row represents.
    let mut rows: Vec<Vec<FieldElement>> = Vec::new();
    let mut combos: Vec<Vec<FieldElement>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    let mut power = Matrix::identity(n);
    for k in 0..=n {
        let mut v: Vec<FieldElement> = (0..n).flat_map(|r| power.row(r).to_vec()).collect();
        let mut combo = vec![FieldElement::ZERO; n + 2];
        combo[k] = FieldElement::ONE;
        for (row, (c, &pc)) in rows.iter().zip(combos.iter().zip(&pivots)) {
            let factor = v[pc];
            if factor.is_zero() {
                continue;
            }
            for (vi, ri) in v.iter_mut().zip(row) {
                if !ri.is_zero() {
                    *vi = f.sub(*vi, f.mul(factor, *ri));
                }
            }
            for (ci, cc) in combo.iter_mut().zip(c) {
                if !cc.is_zero() {
                    *ci = f.sub(*ci, f.mul(factor, *cc));
                }
            }
        }
        if let Some(pc) = v.iter().position(|x| !x.is_zero()) {
            let inv = f.inv(v[pc]).expect("nonzero pivot");
            for x in v.iter_mut() {
                if !x.is_zero() {
                    *x = f.mul(*x, inv);
                }
            }
            for x in combo.iter_mut() {
                if !x.is_zero() {
                    *x = f.mul(*x, inv);
                }
            }
            rows.push(v);
            combos.push(combo);
            pivots.push(pc);
            power = power.mul(f, m);
        } else {
            // The tracked combination now satisfies sum_j combo[j] M^j = 0
            // with combo[k] = 1, so it is the minimal polynomial itself.
            let coeffs = combo[..=k].to_vec();
            return Ok(Poly::from_coeffs(coeffs).make_monic(f));
        }
    }
    Err(Error::Internal(
        "minimal polynomial search exceeded the dimension bound".into(),
    ))
}
