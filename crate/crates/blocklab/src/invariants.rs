//! Block invariants and the verification battery.
//!
//! For each block B with radical chain J ⊇ J² ⊇ ... and class
//! representatives e_1, ..., e_l of primitive idempotents, this module
//! computes the Cartan matrix c_ij = dim e_i B e_j, the sequence
//! c(B, n) = Σ_i dim e_i B e_i / e_i J^n e_i, the socle-center dimensions
//! dim Ann(J^n) ∩ Z(B) (cross-computed through the perp of the symmetrizing
//! form), the diagonal Ext dimensions, and the threshold m up to which the
//! socle-center dimensions agree with c(B, n).
//!
//! Every identity the workbench relies on is also re-checked numerically on
//! each block, with both sides of each equivalence evaluated independently.
//! A failed check never aborts an analysis; it becomes a witnessed report
//! entry, because a failure indicates a defect in the tool.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, AlgebraElement, SymmetrizingForm};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::group::Group;
use crate::linalg::Subspace;
use crate::wedderburn::{
    basic_algebra, primitive_decomposition, radical, BasicAlgebra, BlockData, BlockDecomposition,
    IdempotentDecomposition, RadicalData,
};

/// Number of random subspace pairs per algebra for the randomized identity
/// checks.
pub const RANDOM_TRIALS: usize = 50;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

fn check(name: &str, passed: bool, witness: Option<String>) -> CheckResult {
    debug_assert!(passed || witness.is_some(), "failures must carry a witness");
    CheckResult {
        name: name.to_string(),
        passed,
        witness,
    }
}

#[derive(Clone, Debug, Default)]
pub struct CheckReport {
    pub checks: Vec<CheckResult>,
}

impl CheckReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

/// The Cartan matrix of a block over class representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanData {
    pub size: usize,
    /// Row-major l x l entries.
    pub entries: Vec<usize>,
}

impl CartanData {
    pub fn at(&self, i: usize, j: usize) -> usize {
        self.entries[i * self.size + j]
    }

    pub fn trace(&self) -> usize {
        (0..self.size).map(|i| self.at(i, i)).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.size).all(|i| (0..self.size).all(|j| self.at(i, j) == self.at(j, i)))
    }
}

/// c_ij = dim e_i B e_j over class representatives.
pub fn cartan_matrix(b: &Algebra, dec: &IdempotentDecomposition) -> Result<CartanData> {
    let reps = dec.representative_elements();
    let l = reps.len();
    let mut entries = vec![0usize; l * l];
    for (i, ei) in reps.iter().enumerate() {
        for (j, ej) in reps.iter().enumerate() {
            entries[i * l + j] = b.corner(ei, ej)?.dim();
        }
    }
    Ok(CartanData { size: l, entries })
}

/// c(B, n) for n = 1..=lambda: the diagonal corner dimensions of B modulo
/// the radical powers, summed over class representatives.
pub fn c_sequence(b: &Algebra, dec: &IdempotentDecomposition, rad: &RadicalData) -> Vec<usize> {
    let reps = dec.representative_elements();
    let diag: Vec<usize> = reps
        .iter()
        .map(|e| b.corner_unchecked(e, e).dim())
        .collect();
    (1..=rad.loewy_length)
        .map(|n| {
            let jn = rad.power(n);
            reps.iter()
                .zip(&diag)
                .map(|(e, &dee)| dee - b.corner_compress(e, e, jn).dim())
                .sum()
        })
        .collect()
}

/// dim Ann_B(J^n) ∩ Z(B) for n = 1..=lambda, cross-computed through the perp
/// of the symmetrizing form. The two routes must agree exactly; disagreement
/// is an internal error.
pub fn socle_center_dims(
    b: &Algebra,
    form: &SymmetrizingForm,
    rad: &RadicalData,
) -> Result<Vec<usize>> {
    let f = b.field();
    let z = b.center();
    let mut out = Vec::with_capacity(rad.loewy_length);
    for n in 1..=rad.loewy_length {
        let jn = rad.power(n);
        let via_ann = b.annihilator(jn);
        let via_perp = b.perp(form, jn);
        if via_ann != via_perp {
            return Err(Error::Internal(format!(
                "annihilator and perp of J^{n} disagree: dims {} vs {}",
                via_ann.dim(),
                via_perp.dim()
            )));
        }
        let dim_ann = via_ann.intersect(f, &z)?.dim();
        let dim_perp = via_perp.intersect(f, &z)?.dim();
        if dim_ann != dim_perp {
            return Err(Error::Internal(format!(
                "socle-center dimensions disagree at n = {n}: {dim_ann} vs {dim_perp}"
            )));
        }
        out.push(dim_ann);
    }
    Ok(out)
}

/// dim e_i (J/J^2) e_i per class representative: the self-extension
/// dimensions of the simple modules in a split basic setting.
pub fn ext_diagonal(b: &Algebra, dec: &IdempotentDecomposition, rad: &RadicalData) -> Vec<usize> {
    let reps = dec.representative_elements();
    if rad.loewy_length < 2 {
        return vec![0; reps.len()];
    }
    let j1 = rad.power(1);
    let j2 = rad.power(2);
    reps.iter()
        .map(|e| b.corner_compress(e, e, j1).dim() - b.corner_compress(e, e, j2).dim())
        .collect()
}

/// The compressed radical powers e J^n e inside the basic algebra eBe, for
/// n = 1..=lambda (the last entry is zero).
pub fn radical_powers_in_basic(
    b: &Algebra,
    basic: &BasicAlgebra,
    rad: &RadicalData,
) -> Result<Vec<Subspace>> {
    let e_parent = basic.embedded.embed_element(basic.embedded.algebra.unit().as_slice());
    (1..=rad.loewy_length)
        .map(|n| {
            let compressed = b.corner_compress(&e_parent, &e_parent, rad.power(n));
            basic.embedded.compress_subspace(&compressed)
        })
        .collect()
}

/// The subspace B(n) = Σ_i e_i J^n e_i + Σ_{i≠j} e_i B e_j of the basic
/// algebra, given the compressed radical power e J^n e in eBe coordinates.
fn build_diag_radical_subspace(basic: &BasicAlgebra, jn_basic: &Subspace) -> Subspace {
    let c = &basic.embedded.algebra;
    let f = c.field();
    let mut acc = Subspace::zero(c.dim());
    for (i, ei) in basic.idempotents.iter().enumerate() {
        for (j, ej) in basic.idempotents.iter().enumerate() {
            let part = if i == j {
                c.corner_compress(ei, ei, jn_basic)
            } else {
                c.corner_unchecked(ei, ej)
            };
            acc = acc.sum(f, &part).expect("same ambient");
        }
    }
    acc
}

/// B(n) with its dimension identity validated: dim B(n)^perp must equal the
/// supplied c(B, n). A violation is an internal error.
pub fn b_subspace(
    basic: &BasicAlgebra,
    jn_basic: &Subspace,
    expected_c: usize,
) -> Result<Subspace> {
    let bn = build_diag_radical_subspace(basic, jn_basic);
    let perp_dim = basic
        .embedded
        .algebra
        .perp(&basic.form, &bn)
        .dim();
    if perp_dim != expected_c {
        return Err(Error::Internal(format!(
            "dim B(n)^perp = {perp_dim} but c(B, n) = {expected_c}"
        )));
    }
    Ok(bn)
}

/// The bracket-containment criterion at level n: for all pairs (i, j),
/// [e_i B e_j, e_j B e_i] ⊆ e_i J^n e_i + e_j J^n e_j inside eBe.
pub fn corner_bracket_criterion(basic: &BasicAlgebra, jn_basic: &Subspace) -> bool {
    let c = &basic.embedded.algebra;
    let f = c.field();
    let l = basic.idempotents.len();
    for i in 0..l {
        for j in 0..l {
            let ei = &basic.idempotents[i];
            let ej = &basic.idempotents[j];
            let cij = c.corner_unchecked(ei, ej);
            let cji = c.corner_unchecked(ej, ei);
            let bracket = c.commutator_subspace(&cij, &cji);
            let target = c
                .corner_compress(ei, ei, jn_basic)
                .sum(f, &c.corner_compress(ej, ej, jn_basic))
                .expect("same ambient");
            if !target.contains(f, &bracket) {
                return false;
            }
        }
    }
    true
}

/// Outcome of the threshold computation on the two sequences.
#[derive(Clone, Debug)]
pub struct ThresholdOutcome {
    /// Largest m with equality for all n <= m; None when lambda = 1 (the
    /// threshold is undefined for semisimple blocks).
    pub m: Option<usize>,
    /// Whether the equality set is exactly the prefix {1, ..., m}.
    pub prefix_exact: bool,
}

pub fn threshold(c_seq: &[usize], socz_seq: &[usize]) -> ThresholdOutcome {
    assert_eq!(c_seq.len(), socz_seq.len());
    let lambda = c_seq.len();
    let equal: Vec<bool> = c_seq
        .iter()
        .zip(socz_seq)
        .map(|(a, b)| a == b)
        .collect();
    let prefix_len = equal.iter().take_while(|&&b| b).count();
    let prefix_exact = equal.iter().skip(prefix_len).all(|&b| !b);
    if lambda < 2 {
        return ThresholdOutcome {
            m: None,
            prefix_exact,
        };
    }
    ThresholdOutcome {
        m: Some(prefix_len),
        prefix_exact,
    }
}

/// All numeric invariants of one block.
#[derive(Clone, Debug)]
pub struct InvariantProfile {
    /// dim Z(B), the operational count of ordinary irreducibles.
    pub k: usize,
    /// Number of idempotent classes (simple modules).
    pub l: usize,
    pub lambda: usize,
    pub cartan: CartanData,
    pub c_seq: Vec<usize>,
    pub socz_seq: Vec<usize>,
    pub ext_diag: Vec<usize>,
    /// Threshold m; None when lambda = 1.
    pub m: Option<usize>,
}

/// Everything computed for one block: the profile plus the per-block checks
/// and the data the algebra-level accounting needs.
pub struct BlockAnalysis {
    pub dim: usize,
    pub profile: InvariantProfile,
    pub checks: Vec<CheckResult>,
    pub radical_dim: usize,
    /// J(B) embedded back into the parent algebra's coordinates.
    pub radical_in_parent: Subspace,
    pub class_sizes: Vec<usize>,
}

fn random_subspace(f: &Field, ambient: usize, rng: &mut ChaCha8Rng) -> Subspace {
    let k = rng.random_range(0..=ambient);
    let rows: Vec<AlgebraElement> = (0..k)
        .map(|_| (0..ambient).map(|_| f.random(rng)).collect())
        .collect();
    Subspace::from_rows(f, ambient, rows)
}

fn random_subspace_of(f: &Field, parent: &Subspace, rng: &mut ChaCha8Rng) -> Subspace {
    let k = rng.random_range(0..=parent.dim());
    let rows: Vec<AlgebraElement> = (0..k)
        .map(|_| {
            let mut acc = vec![crate::field::FieldElement::ZERO; parent.ambient_dim()];
            for row in parent.basis_rows() {
                let c = f.random(rng);
                if c.is_zero() {
                    continue;
                }
                for (a, &r) in acc.iter_mut().zip(row) {
                    if !r.is_zero() {
                        *a = f.add(*a, f.mul(c, r));
                    }
                }
            }
            acc
        })
        .collect();
    Subspace::from_rows(f, parent.ambient_dim(), rows)
}

/// Randomized perp-calculus identities: double perp, De Morgan for sums and
/// intersections, monotonicity, and the dimension formula.
fn perp_calculus_check(
    name: &str,
    alg: &Algebra,
    form: &SymmetrizingForm,
    rng: &mut ChaCha8Rng,
) -> CheckResult {
    let f = alg.field();
    let d = alg.dim();
    for trial in 0..RANDOM_TRIALS {
        let u = random_subspace(f, d, rng);
        let v = random_subspace(f, d, rng);
        let pu = alg.perp(form, &u);
        let pv = alg.perp(form, &v);
        if alg.perp(form, &pu) != u {
            return check(name, false, Some(format!("trial {trial}: (U^perp)^perp != U, dim U = {}", u.dim())));
        }
        if pu.dim() != d - u.dim() {
            return check(name, false, Some(format!("trial {trial}: dim U^perp = {} != {} - {}", pu.dim(), d, u.dim())));
        }
        let (sum_uv, int_uv) = u.sum_and_intersection(f, &v).expect("same ambient");
        let lhs_sum = alg.perp(form, &sum_uv);
        let rhs_sum = pu.intersect(f, &pv).expect("same ambient");
        if lhs_sum != rhs_sum {
            return check(name, false, Some(format!("trial {trial}: (U+V)^perp != U^perp ∩ V^perp")));
        }
        let lhs_int = alg.perp(form, &int_uv);
        let rhs_int = pu.sum(f, &pv).expect("same ambient");
        if lhs_int != rhs_int {
            return check(name, false, Some(format!("trial {trial}: (U∩V)^perp != U^perp + V^perp")));
        }
        let w = random_subspace_of(f, &u, rng);
        let pw = alg.perp(form, &w);
        if !pw.contains(f, &pu) {
            return check(name, false, Some(format!("trial {trial}: W ⊆ U but U^perp ⊄ W^perp")));
        }
    }
    check(name, true, None)
}

/// Randomized bilinearity of the commutator subspace in both arguments.
fn commutator_bilinear_check(
    name: &str,
    alg: &Algebra,
    rng: &mut ChaCha8Rng,
) -> CheckResult {
    let f = alg.field();
    let d = alg.dim();
    for trial in 0..RANDOM_TRIALS {
        let u = random_subspace(f, d, rng);
        let v = random_subspace(f, d, rng);
        let w = random_subspace(f, d, rng);
        let uv = u.sum(f, &v).expect("same ambient");
        let lhs = alg.commutator_subspace(&uv, &w);
        let rhs = alg
            .commutator_subspace(&u, &w)
            .sum(f, &alg.commutator_subspace(&v, &w))
            .expect("same ambient");
        if lhs != rhs {
            return check(name, false, Some(format!("trial {trial}: [U+V, W] != [U,W] + [V,W]")));
        }
        let vw = v.sum(f, &w).expect("same ambient");
        let lhs2 = alg.commutator_subspace(&u, &vw);
        let rhs2 = alg
            .commutator_subspace(&u, &v)
            .sum(f, &alg.commutator_subspace(&u, &w))
            .expect("same ambient");
        if lhs2 != rhs2 {
            return check(name, false, Some(format!("trial {trial}: [U, V+W] != [U,V] + [U,W]")));
        }
    }
    check(name, true, None)
}

fn center_commutator_perp_check(
    name: &str,
    alg: &Algebra,
    form: &SymmetrizingForm,
) -> CheckResult {
    let comm = alg.commutator_full();
    let lhs = alg.perp(form, &comm);
    let rhs = alg.center();
    if lhs == rhs {
        check(name, true, None)
    } else {
        check(
            name,
            false,
            Some(format!(
                "[A,A]^perp has dim {} but Z(A) has dim {}",
                lhs.dim(),
                rhs.dim()
            )),
        )
    }
}

/// The full per-block analysis: radical, idempotents, basic algebra, all
/// invariants, and the complete check battery for this block.
pub fn analyze_block(block: &BlockData, seed: u64) -> Result<BlockAnalysis> {
    let b = &block.embedded.algebra;
    let form = &block.form;
    let rad = radical(b)?;
    let dec = primitive_decomposition(b, &rad, seed)?;
    let basic = basic_algebra(b, form, &dec)?;
    let lambda = rad.loewy_length;

    let cartan = cartan_matrix(b, &dec)?;
    let c_seq = c_sequence(b, &dec, &rad);
    let socz_seq = socle_center_dims(b, form, &rad)?;
    let ext_diag = ext_diagonal(b, &dec, &rad);
    let z = b.center();
    let k = z.dim();
    let l = dec.class_count();
    let thr = threshold(&c_seq, &socz_seq);
    let profile = InvariantProfile {
        k,
        l,
        lambda,
        cartan: cartan.clone(),
        c_seq: c_seq.clone(),
        socz_seq: socz_seq.clone(),
        ext_diag: ext_diag.clone(),
        m: thr.m,
    };

    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc0ffee);

    // Randomized subspace identities on B and on eBe.
    checks.push(perp_calculus_check("perp_calculus_random", b, form, &mut rng));
    checks.push(perp_calculus_check(
        "perp_calculus_random_basic",
        &basic.embedded.algebra,
        &basic.form,
        &mut rng,
    ));
    checks.push(commutator_bilinear_check(
        "commutator_bilinear_random",
        b,
        &mut rng,
    ));
    checks.push(center_commutator_perp_check(
        "center_eq_commutator_perp",
        b,
        form,
    ));
    checks.push(center_commutator_perp_check(
        "center_eq_commutator_perp_basic",
        &basic.embedded.algebra,
        &basic.form,
    ));

    // Annihilator = perp on the radical powers (ideals) of B.
    {
        let mut failure = None;
        for n in 1..=lambda {
            let jn = rad.power(n);
            if b.annihilator(jn) != b.perp(form, jn) {
                failure = Some(format!("Ann(J^{n}) != (J^{n})^perp"));
                break;
            }
        }
        checks.push(check(
            "annihilator_eq_perp_on_radical_powers",
            failure.is_none(),
            failure,
        ));
    }

    // Transport to the basic algebra: e J^n e is an ideal of eBe, the
    // annihilator identity holds there, and socle-center dimensions agree
    // between B and eBe for every n.
    let basic_powers = radical_powers_in_basic(b, &basic, &rad)?;
    {
        let c = &basic.embedded.algebra;
        let zc = c.center();
        let fc = c.field();
        let mut failure = None;
        for (n, jn_basic) in basic_powers.iter().enumerate() {
            let n = n + 1;
            if !c.is_two_sided_ideal(jn_basic) {
                failure = Some(format!("eJ^{n}e is not an ideal of eBe"));
                break;
            }
            let ann_basic = c.annihilator(jn_basic);
            if ann_basic != c.perp(&basic.form, jn_basic) {
                failure = Some(format!("Ann_eBe(eJ^{n}e) != perp in eBe"));
                break;
            }
            let lhs = socz_seq[n - 1];
            let rhs = ann_basic.intersect(fc, &zc).expect("same ambient").dim();
            if lhs != rhs {
                failure = Some(format!(
                    "socle-center dim at n = {n}: {lhs} in B vs {rhs} in eBe"
                ));
                break;
            }
        }
        checks.push(check("corner_ideal_transfer", failure.is_none(), failure));
    }

    // Independent radical of eBe must match the transported e J e.
    {
        let corner_rad = radical(&basic.embedded.algebra)?;
        let passed = corner_rad.radical == basic_powers[0];
        let witness = (!passed).then(|| {
            format!(
                "J(eBe) has dim {} but eJe has dim {}",
                corner_rad.radical.dim(),
                basic_powers[0].dim()
            )
        });
        checks.push(check("radical_corner_transport", passed, witness));
    }

    // dim eBe = sum of Cartan entries.
    {
        let total: usize = cartan.entries.iter().sum();
        let passed = basic.embedded.dim() == total;
        checks.push(check(
            "basic_dim_eq_cartan_sum",
            passed,
            (!passed).then(|| format!("dim eBe = {} vs Σ c_ij = {total}", basic.embedded.dim())),
        ));
    }

    checks.push(check(
        "cartan_symmetric",
        cartan.is_symmetric(),
        (!cartan.is_symmetric()).then(|| format!("{:?}", cartan.entries)),
    ));
    {
        let diag_ok = (0..cartan.size).all(|i| cartan.at(i, i) >= 1);
        checks.push(check(
            "cartan_diagonal_positive",
            diag_ok,
            (!diag_ok).then(|| format!("{:?}", cartan.entries)),
        ));
    }

    // dim B(n)^perp = c(B, n) for every n.
    {
        let c = &basic.embedded.algebra;
        let mut failure = None;
        for (n, jn_basic) in basic_powers.iter().enumerate() {
            let bn = build_diag_radical_subspace(&basic, jn_basic);
            let perp_dim = c.perp(&basic.form, &bn).dim();
            if perp_dim != c_seq[n] {
                failure = Some(format!(
                    "n = {}: dim B(n)^perp = {perp_dim} but c(B, n) = {}",
                    n + 1,
                    c_seq[n]
                ));
                break;
            }
        }
        checks.push(check("diag_radical_perp_dims", failure.is_none(), failure));
    }

    // Off-diagonal corners lie in the commutator subspace of eBe.
    {
        let c = &basic.embedded.algebra;
        let fc = c.field();
        let comm = c.commutator_full();
        let mut failure = None;
        'outer: for (i, ei) in basic.idempotents.iter().enumerate() {
            for (j, ej) in basic.idempotents.iter().enumerate() {
                if i == j {
                    continue;
                }
                let cij = c.corner_unchecked(ei, ej);
                if !comm.contains(fc, &cij) {
                    failure = Some(format!("e_{i} B e_{j} ⊄ [eBe, eBe]"));
                    break 'outer;
                }
            }
        }
        checks.push(check(
            "offdiag_corners_in_commutator",
            failure.is_none(),
            failure,
        ));
    }

    // [eBe, eBe] decomposes into corner brackets plus off-diagonal corners.
    {
        let c = &basic.embedded.algebra;
        let fc = c.field();
        let comm = c.commutator_full();
        let mut target = Subspace::zero(c.dim());
        for (i, ei) in basic.idempotents.iter().enumerate() {
            for (j, ej) in basic.idempotents.iter().enumerate() {
                let cij = c.corner_unchecked(ei, ej);
                let cji = c.corner_unchecked(ej, ei);
                target = target
                    .sum(fc, &c.commutator_subspace(&cij, &cji))
                    .expect("same ambient");
                if i != j {
                    target = target.sum(fc, &cij).expect("same ambient");
                }
            }
        }
        let passed = target.contains(fc, &comm);
        checks.push(check(
            "commutator_in_corner_brackets",
            passed,
            (!passed).then(|| {
                format!(
                    "[eBe,eBe] has dim {} but the corner decomposition spans {}",
                    comm.dim(),
                    target.dim()
                )
            }),
        ));
    }

    // The socle-center bound socz(n) <= c(B, n) for every n.
    {
        let violation = (0..lambda).find(|&i| socz_seq[i] > c_seq[i]);
        checks.push(check(
            "socle_center_upper_bound",
            violation.is_none(),
            violation.map(|i| {
                format!("n = {}: socz = {} > c = {}", i + 1, socz_seq[i], c_seq[i])
            }),
        ));
    }

    // Threshold shape: equalities form exactly the prefix {1..m} with m >= 2
    // whenever lambda >= 2; undefined for semisimple blocks.
    {
        let (passed, witness) = if lambda < 2 {
            (true, Some("undefined (semisimple)".to_string()))
        } else {
            match thr.m {
                Some(m) if m >= 2 && thr.prefix_exact => (true, Some(format!("m = {m}"))),
                Some(m) => (
                    false,
                    Some(format!(
                        "m = {m}, prefix_exact = {}; c_seq = {c_seq:?}, socz_seq = {socz_seq:?}",
                        thr.prefix_exact
                    )),
                ),
                None => (false, Some("missing threshold for lambda >= 2".into())),
            }
        };
        checks.push(check("threshold_prefix_shape", passed, witness));
    }

    // Equivalence: socz(n) = c(B, n) iff the corner bracket criterion holds
    // at n, with the two sides computed by disjoint code paths.
    {
        let mut failure = None;
        for (n, jn_basic) in basic_powers.iter().enumerate() {
            let lhs = socz_seq[n] == c_seq[n];
            let rhs = corner_bracket_criterion(&basic, jn_basic);
            if lhs != rhs {
                failure = Some(format!(
                    "n = {}: equality = {lhs} but bracket criterion = {rhs}",
                    n + 1
                ));
                break;
            }
        }
        checks.push(check(
            "corner_bracket_criterion_equivalence",
            failure.is_none(),
            failure,
        ));
    }

    // socz(2) = l + sum of diagonal Ext dimensions (when lambda >= 2).
    {
        let (passed, witness) = if lambda < 2 {
            (true, Some("not applicable (lambda = 1)".to_string()))
        } else {
            let expect = l + ext_diag.iter().sum::<usize>();
            let got = socz_seq[1];
            (
                got == expect,
                (got != expect).then(|| format!("socz(2) = {got} but l + ΣExt = {expect}")),
            )
        };
        checks.push(check("socle2_center_identity", passed, witness));
    }

    // socz(1) = l.
    {
        let got = socz_seq[0];
        checks.push(check(
            "socle1_center_eq_simple_count",
            got == l,
            (got != l).then(|| format!("socz(1) = {got} but l = {l}")),
        ));
    }

    // k <= trace of the Cartan matrix.
    {
        let tr = cartan.trace();
        checks.push(check(
            "center_dim_le_cartan_trace",
            k <= tr,
            (k > tr).then(|| format!("k = {k} > tr C = {tr}")),
        ));
    }

    // k = dim Z(B) = socz(lambda).
    {
        let got = *socz_seq.last().expect("lambda >= 1");
        checks.push(check(
            "center_dim_consistency",
            got == k,
            (got != k).then(|| format!("socz(lambda) = {got} but dim Z = {k}")),
        ));
    }

    // Sequence shapes: both sequences nondecreasing with the right endpoints.
    {
        let nondecr = |s: &[usize]| s.windows(2).all(|w| w[0] <= w[1]);
        let mut problems = Vec::new();
        if !nondecr(&c_seq) {
            problems.push(format!("c_seq not nondecreasing: {c_seq:?}"));
        }
        if !nondecr(&socz_seq) {
            problems.push(format!("socz_seq not nondecreasing: {socz_seq:?}"));
        }
        if c_seq[0] != l {
            problems.push(format!("c(1) = {} != l = {l}", c_seq[0]));
        }
        if *c_seq.last().unwrap() != cartan.trace() {
            problems.push(format!(
                "c(lambda) = {} != tr C = {}",
                c_seq.last().unwrap(),
                cartan.trace()
            ));
        }
        checks.push(check(
            "sequence_shapes",
            problems.is_empty(),
            (!problems.is_empty()).then(|| problems.join("; ")),
        ));
    }

    // Commutative blocks have m = lambda.
    {
        let commutative = b.commutator_full().is_zero();
        let (passed, witness) = if !commutative {
            (true, Some("not applicable (noncommutative)".to_string()))
        } else if lambda < 2 {
            (true, Some("undefined (semisimple)".to_string()))
        } else {
            let ok = thr.m == Some(lambda);
            (ok, (!ok).then(|| format!("commutative block with m = {:?} != lambda = {lambda}", thr.m)))
        };
        checks.push(check("commutative_threshold_full", passed, witness));
    }

    // dim B/J equals the sum of squared class sizes (split semisimple
    // quotient accounting).
    {
        let expect: usize = dec.classes.iter().map(|c| c.len() * c.len()).sum();
        let got = b.dim() - rad.radical.dim();
        checks.push(check(
            "semisimple_dim_accounting",
            got == expect,
            (got != expect).then(|| format!("dim B/J = {got} but Σ n_i^2 = {expect}")),
        ));
    }

    let class_sizes: Vec<usize> = dec.classes.iter().map(|c| c.len()).collect();
    let radical_in_parent = block.embedded.embed_subspace(&rad.radical);
    Ok(BlockAnalysis {
        dim: b.dim(),
        profile,
        checks,
        radical_dim: rad.radical.dim(),
        radical_in_parent,
        class_sizes,
    })
}

/// Algebra-level checks for FG itself: randomized subspace identities with
/// the group form, structural accounting against the conjugacy data, and the
/// radical oracles.
pub fn algebra_checks(
    group: &Group,
    p: u64,
    a: &Algebra,
    form: &SymmetrizingForm,
    blocks: &BlockDecomposition,
    analyses: &[BlockAnalysis],
    seed: u64,
) -> Vec<CheckResult> {
    let f = a.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xa16e_b7a);
    let mut checks = Vec::new();

    checks.push(perp_calculus_check("perp_calculus_random", a, form, &mut rng));
    checks.push(commutator_bilinear_check(
        "commutator_bilinear_random",
        a,
        &mut rng,
    ));
    checks.push(center_commutator_perp_check(
        "center_eq_commutator_perp",
        a,
        form,
    ));

    {
        let total: usize = analyses.iter().map(|x| x.dim).sum();
        checks.push(check(
            "block_dim_sum",
            total == a.dim(),
            (total != a.dim()).then(|| format!("Σ block dims = {total} != {}", a.dim())),
        ));
    }

    {
        let classes = group.conjugacy_classes().class_count();
        let zdim = a.center().dim();
        checks.push(check(
            "center_dim_eq_class_count",
            zdim == classes,
            (zdim != classes).then(|| format!("dim Z(FG) = {zdim} but {classes} classes")),
        ));
    }

    {
        let expect = group.p_regular_class_count(p);
        let total: usize = analyses.iter().map(|x| x.profile.l).sum();
        checks.push(check(
            "simple_count_eq_p_regular_classes",
            total == expect,
            (total != expect).then(|| {
                format!("Σ l(B) = {total} but {expect} p-regular classes")
            }),
        ));
    }

    {
        let coprime = group.order() as u64 % p != 0;
        let (passed, witness) = if coprime {
            let total: usize = analyses.iter().map(|x| x.radical_dim).sum();
            (
                total == 0,
                if total == 0 {
                    None
                } else {
                    Some(format!("p coprime to |G| but Σ dim J(B) = {total}"))
                },
            )
        } else {
            (true, Some("not applicable (p divides |G|)".to_string()))
        };
        checks.push(check("radical_zero_when_order_coprime", passed, witness));
    }

    {
        let mut order = group.order() as u64;
        while order % p == 0 {
            order /= p;
        }
        let is_p_group = order == 1;
        let (passed, witness) = if is_p_group {
            // FG is local: one block whose radical is the augmentation ideal.
            let aug = {
                let one = a.one();
                let rows: Vec<AlgebraElement> = (1..a.dim())
                    .map(|g| {
                        let mut v = a.basis_element(g);
                        for (x, o) in v.iter_mut().zip(&one) {
                            *x = f.sub(*x, *o);
                        }
                        v
                    })
                    .collect();
                Subspace::from_rows(f, a.dim(), rows)
            };
            if blocks.blocks.len() != 1 {
                (
                    false,
                    Some(format!("p-group algebra split into {} blocks", blocks.blocks.len())),
                )
            } else if analyses[0].radical_in_parent != aug {
                (
                    false,
                    Some(format!(
                        "J has dim {} but the augmentation ideal has dim {}",
                        analyses[0].radical_in_parent.dim(),
                        aug.dim()
                    )),
                )
            } else {
                (true, None)
            }
        } else {
            (true, Some("not applicable (G is not a p-group)".to_string()))
        };
        checks.push(check("radical_augmentation_for_p_group", passed, witness));
    }

    checks
}

/// The combined report over one analyzed group algebra: algebra-level checks
/// followed by every block's checks (prefixed with the block index).
pub fn verify_battery(
    group: &Group,
    p: u64,
    a: &Algebra,
    form: &SymmetrizingForm,
    blocks: &BlockDecomposition,
    analyses: &[BlockAnalysis],
    seed: u64,
) -> CheckReport {
    let mut checks = algebra_checks(group, p, a, form, blocks, analyses, seed);
    for (i, analysis) in analyses.iter().enumerate() {
        for c in &analysis.checks {
            checks.push(CheckResult {
                name: format!("block{}::{}", i, c.name),
                passed: c.passed,
                witness: c.witness.clone(),
            });
        }
    }
    CheckReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{group_algebra, splitting_degree, Group, DEFAULT_ORDER_CAP};
    use crate::wedderburn::block_decomposition;

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

    fn analyzed(group: &Group, p: u64) -> Vec<BlockAnalysis> {
        let e = splitting_degree(group, p).unwrap();
        let field = Field::new(p, e).unwrap();
        let (a, form) = group_algebra(group, &field).unwrap();
        let blocks = block_decomposition(&a, &form).unwrap();
        blocks
            .blocks
            .iter()
            .map(|b| analyze_block(b, 0xb10c).unwrap())
            .collect()
    }

    #[test]
    fn cartan_of_c3_mod_3() {
        let analyses = analyzed(&cyclic(3), 3);
        assert_eq!(analyses.len(), 1);
        let p = &analyses[0].profile;
        assert_eq!(p.cartan.entries, vec![3]);
        assert_eq!(p.l, 1);
        assert_eq!(p.k, 3);
        assert_eq!(p.lambda, 3);
        assert_eq!(p.c_seq, vec![1, 2, 3]);
        assert_eq!(p.socz_seq, vec![1, 2, 3]);
        assert_eq!(p.m, Some(3));
        assert!(analyses[0].checks.iter().all(|c| c.passed));
    }

    #[test]
    fn invariants_of_v4_mod_2() {
        let analyses = analyzed(&v4(), 2);
        assert_eq!(analyses.len(), 1);
        let p = &analyses[0].profile;
        assert_eq!(p.lambda, 3);
        assert_eq!(p.c_seq, vec![1, 3, 4]);
        assert_eq!(p.socz_seq, vec![1, 3, 4]);
        assert_eq!(p.m, Some(3));
        assert_eq!(p.k, 4);
        assert_eq!(p.cartan.trace(), 4);
        assert!(analyses[0].checks.iter().all(|c| c.passed));
    }

    #[test]
    fn invariants_of_s3_mod_3() {
        let analyses = analyzed(&sym3(), 3);
        assert_eq!(analyses.len(), 1);
        let p = &analyses[0].profile;
        assert_eq!(p.l, 2);
        assert_eq!(p.k, 3);
        assert_eq!(p.lambda, 3);
        assert_eq!(p.cartan.entries, vec![2, 1, 1, 2]);
        assert_eq!(p.c_seq, vec![2, 2, 4]);
        assert_eq!(p.socz_seq, vec![2, 2, 3]);
        assert_eq!(p.m, Some(2));
        assert_eq!(p.ext_diag, vec![0, 0]);
        assert!(analyses[0].checks.iter().all(|c| c.passed), "{:?}", analyses[0].checks.iter().filter(|c| !c.passed).collect::<Vec<_>>());
    }

    #[test]
    fn invariants_of_s3_mod_5_blocks() {
        let analyses = analyzed(&sym3(), 5);
        assert_eq!(analyses.len(), 3);
        let mut dims: Vec<usize> = analyses.iter().map(|a| a.dim).collect();
        dims.sort_unstable();
        assert_eq!(dims, vec![1, 1, 4]);
        for a in &analyses {
            let p = &a.profile;
            assert_eq!(p.lambda, 1);
            assert_eq!(p.cartan.entries, vec![1]);
            assert_eq!(p.k, 1);
            assert_eq!(p.l, 1);
            assert_eq!(p.c_seq, vec![1]);
            assert_eq!(p.socz_seq, vec![1]);
            assert_eq!(p.m, None);
            assert!(a.checks.iter().all(|c| c.passed));
        }
    }

    #[test]
    fn b_subspace_dimensions_for_s3() {
        let field = Field::new(3, 1).unwrap();
        let (a, form) = group_algebra(&sym3(), &field).unwrap();
        let blocks = block_decomposition(&a, &form).unwrap();
        let block = &blocks.blocks[0];
        let b = &block.embedded.algebra;
        let rad = radical(b).unwrap();
        let dec = primitive_decomposition(b, &rad, 7).unwrap();
        let basic = basic_algebra(b, &block.form, &dec).unwrap();
        let powers = radical_powers_in_basic(b, &basic, &rad).unwrap();
        let cs = c_sequence(b, &dec, &rad);
        // n = 2: dim B(2) = 4 and its perp has dim c(B, 2) = 2.
        let bn = b_subspace(&basic, &powers[1], cs[1]).unwrap();
        assert_eq!(bn.dim(), 4);
        assert_eq!(cs[1], 2);
        // n = lambda: B(lambda) consists of the off-diagonal corners only.
        let bl = b_subspace(&basic, &powers[2], cs[2]).unwrap();
        assert_eq!(bl.dim(), 2);
        assert_eq!(cs[2], 4);
    }

    #[test]
    fn bracket_criterion_matches_equalities_for_s3() {
        let field = Field::new(3, 1).unwrap();
        let (a, form) = group_algebra(&sym3(), &field).unwrap();
        let blocks = block_decomposition(&a, &form).unwrap();
        let block = &blocks.blocks[0];
        let b = &block.embedded.algebra;
        let rad = radical(b).unwrap();
        let dec = primitive_decomposition(b, &rad, 7).unwrap();
        let basic = basic_algebra(b, &block.form, &dec).unwrap();
        let powers = radical_powers_in_basic(b, &basic, &rad).unwrap();
        assert!(corner_bracket_criterion(&basic, &powers[0]));
        assert!(corner_bracket_criterion(&basic, &powers[1]));
        assert!(!corner_bracket_criterion(&basic, &powers[2]));
    }

    #[test]
    fn threshold_examples() {
        let t = threshold(&[1, 2, 3], &[1, 2, 3]);
        assert_eq!(t.m, Some(3));
        assert!(t.prefix_exact);
        let t = threshold(&[2, 2, 4], &[2, 2, 3]);
        assert_eq!(t.m, Some(2));
        assert!(t.prefix_exact);
        let t = threshold(&[1], &[1]);
        assert_eq!(t.m, None);
    }

    #[test]
    fn full_battery_passes_for_s3_family() {
        for p in [2u64, 3, 5] {
            let g = sym3();
            let e = splitting_degree(&g, p).unwrap();
            let field = Field::new(p, e).unwrap();
            let (a, form) = group_algebra(&g, &field).unwrap();
            let blocks = block_decomposition(&a, &form).unwrap();
            let analyses: Vec<BlockAnalysis> = blocks
                .blocks
                .iter()
                .map(|b| analyze_block(b, 0xb10c).unwrap())
                .collect();
            let report = verify_battery(&g, p, &a, &form, &blocks, &analyses, 0xb10c);
            assert!(
                report.all_passed(),
                "p = {p}: {:?}",
                report.failures()
            );
        }
    }
}
