//! Finite groups by Cayley table or permutation generators, conjugacy data,
//! splitting-field degrees, and the group algebra FG with its standard
//! symmetrizing form <g, h> = 1 iff gh = 1.

use crate::algebra::{Algebra, AlgebraElement, SymmetrizingForm};
use crate::error::{Error, Result};
use crate::field::{multiplicative_order, Field, FieldElement};
use crate::linalg::Matrix;

pub const DEFAULT_ORDER_CAP: usize = 512;

/// A finite group as a validated Cayley table; index 0 is the identity.
#[derive(Clone, Debug)]
pub struct Group {
    order: usize,
    /// table[i * order + j] = index of the product g_i g_j.
    table: Vec<usize>,
    names: Option<Vec<String>>,
}

#[derive(Clone, Debug)]
pub struct ConjugacyData {
    /// Partition of element indices into conjugacy classes; the identity's
    /// class comes first, classes ordered by least member.
    pub classes: Vec<Vec<usize>>,
}

impl ConjugacyData {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }
}

impl Group {
    /// Validates a Cayley table: Latin square, associativity (feasible at
    /// desk scale), index 0 a two-sided identity.
    pub fn from_cayley(table: Vec<Vec<usize>>, names: Option<Vec<String>>) -> Result<Group> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidInput("empty Cayley table".into()));
        }
        let mut flat = Vec::with_capacity(n * n);
        for row in &table {
            if row.len() != n {
                return Err(Error::InvalidInput("Cayley table is not square".into()));
            }
            for &v in row {
                if v >= n {
                    return Err(Error::InvalidInput(format!(
                        "table entry {v} out of range 0..{n}"
                    )));
                }
                flat.push(v);
            }
        }
        // Latin square: each row and column is a permutation.
        for i in 0..n {
            let mut seen_row = vec![false; n];
            let mut seen_col = vec![false; n];
            for j in 0..n {
                let r = flat[i * n + j];
                if seen_row[r] {
                    return Err(Error::NotLatinSquare(format!("row {i} repeats {r}")));
                }
                seen_row[r] = true;
                let c = flat[j * n + i];
                if seen_col[c] {
                    return Err(Error::NotLatinSquare(format!("column {i} repeats {c}")));
                }
                seen_col[c] = true;
            }
        }
        for i in 0..n {
            if flat[i] != i || flat[i * n] != i {
                return Err(Error::NoIdentity);
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ij = flat[i * n + j];
                for k in 0..n {
                    let jk = flat[j * n + k];
                    if flat[ij * n + k] != flat[i * n + jk] {
                        return Err(Error::TableNotAssociative { i, j, k });
                    }
                }
            }
        }
        if let Some(ns) = &names {
            if ns.len() != n {
                return Err(Error::InvalidInput("name list length mismatch".into()));
            }
        }
        Ok(Group {
            order: n,
            table: flat,
            names,
        })
    }

    /// Closure of permutation generators by breadth-first multiplication.
    /// Elements are indexed in discovery order with the identity first, so
    /// the result is deterministic.
    pub fn from_permutations(degree: usize, generators: &[Vec<usize>], cap: usize) -> Result<Group> {
        for g in generators {
            if g.len() != degree {
                return Err(Error::InvalidPermutation(format!(
                    "generator has length {} but degree is {degree}",
                    g.len()
                )));
            }
            let mut seen = vec![false; degree];
            for &img in g {
                if img >= degree || seen[img] {
                    return Err(Error::InvalidPermutation(format!("{g:?}")));
                }
                seen[img] = true;
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut elements: Vec<Vec<usize>> = vec![identity.clone()];
        let mut lookup = std::collections::HashMap::new();
        lookup.insert(identity, 0usize);
        let mut frontier = 0usize;
        while frontier < elements.len() {
            let cur = elements[frontier].clone();
            for g in generators {
                // compose: apply cur first, then g
                let next: Vec<usize> = cur.iter().map(|&x| g[x]).collect();
                if !lookup.contains_key(&next) {
                    if elements.len() >= cap {
                        return Err(Error::ClosureExceedsCap(cap));
                    }
                    lookup.insert(next.clone(), elements.len());
                    elements.push(next);
                }
            }
            frontier += 1;
        }
        let n = elements.len();
        let mut table = vec![vec![0usize; n]; n];
        for i in 0..n {
            for j in 0..n {
                let prod: Vec<usize> = elements[j].iter().map(|&x| elements[i][x]).collect();
                table[i][j] = lookup[&prod];
            }
        }
        Group::from_cayley(table, None)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.table[i * self.order + j]
    }

    pub fn inverse(&self, i: usize) -> usize {
        (0..self.order)
            .find(|&j| self.mul(i, j) == 0)
            .expect("every element has an inverse")
    }

    pub fn element_order(&self, i: usize) -> usize {
        let mut acc = i;
        let mut n = 1;
        while acc != 0 {
            acc = self.mul(acc, i);
            n += 1;
        }
        n
    }

    pub fn exponent(&self) -> u64 {
        (0..self.order).fold(1u64, |acc, i| lcm(acc, self.element_order(i) as u64))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|i| (i..self.order).all(|j| self.mul(i, j) == self.mul(j, i)))
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|i| self.table[i * self.order..(i + 1) * self.order].to_vec())
            .collect()
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Brute-force orbit partition under conjugation.
    pub fn conjugacy_classes(&self) -> ConjugacyData {
        let n = self.order;
        let inverses: Vec<usize> = (0..n).map(|i| self.inverse(i)).collect();
        let mut assigned = vec![false; n];
        let mut classes = Vec::new();
        for g in 0..n {
            if assigned[g] {
                continue;
            }
            let mut class = Vec::new();
            for h in 0..n {
                let conj = self.mul(self.mul(h, g), inverses[h]);
                if !assigned[conj] {
                    assigned[conj] = true;
                    class.push(conj);
                }
            }
            class.sort_unstable();
            classes.push(class);
        }
        ConjugacyData { classes }
    }

    /// Number of conjugacy classes of elements whose order is coprime to p.
    pub fn p_regular_class_count(&self, p: u64) -> usize {
        self.conjugacy_classes()
            .classes
            .iter()
            .filter(|c| self.element_order(c[0]) as u64 % p != 0)
            .count()
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Extension degree e such that GF(p^e) contains the m-th roots of unity for
/// m the p'-part of the exponent of G; such a field splits FG. The pipeline
/// re-checks splitness downstream and retries with a doubled degree if the
/// classical bound were ever insufficient.
pub fn splitting_degree(group: &Group, p: u64) -> Result<u32> {
    if !crate::field::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mut m = group.exponent();
    while m % p == 0 {
        m /= p;
    }
    let e = multiplicative_order(p, m)?;
    Ok(e as u32)
}

/// The group algebra FG with structure constants from the Cayley table and
/// the standard symmetrizing form (Gram matrix of g -> g^{-1}).
pub fn group_algebra(group: &Group, field: &Field) -> Result<(Algebra, SymmetrizingForm)> {
    let n = group.order();
    let mut unit: AlgebraElement = vec![FieldElement::ZERO; n];
    unit[0] = FieldElement::ONE;
    let algebra = Algebra::from_monomial_table(field.clone(), n, &group.table, unit)?;
    let form = group_form(group, &algebra)?;
    Ok((algebra, form))
}

/// Gram matrix G[i][j] = 1 iff g_i g_j = 1, validated as a symmetrizing form.
pub fn group_form(group: &Group, algebra: &Algebra) -> Result<SymmetrizingForm> {
    let n = group.order();
    let mut gram = Matrix::zero(n, n);
    for i in 0..n {
        for j in 0..n {
            if group.mul(i, j) == 0 {
                gram.set(i, j, FieldElement::ONE);
            }
        }
    }
    SymmetrizingForm::new(algebra, gram)
}
