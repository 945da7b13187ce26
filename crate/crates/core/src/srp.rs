//! Strongly regular partitions: the three axioms, the coefficient matrix of
//! downward inclusion counts, and the algebraic checks built on it
//! (closure of the block span, structure constants, powers of the matrix).

use std::fmt;

use num_rational::Rational64;

use crate::error::{GoaError, Result};
use crate::matrix::Matrix;
use crate::operators::{
    enumerate_incidence_functions, realizes, Complementation, Derivation, Eklr, EllPower, LinearMap,
};
use crate::partition::Partition;
use crate::poly::{Basis, Poly};
use crate::scalar::{binomial, Scalar};
use crate::subset::{subsets_of_size, SubsetMask};
use crate::Rational;

/// Outcome of the three strong-regularity axioms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SrpReport {
    /// Axiom 1: each block holds sets of one size.
    pub size_homogeneous: bool,
    pub size_witness: Option<String>,
    /// Axiom 2: complements of a block form a block.
    pub complement_closed: bool,
    pub complement_witness: Option<String>,
    /// Axiom 3: `|{B in O_j : B ⊆ A}|` does not depend on `A in O_i`.
    pub downward_constant: bool,
    pub downward_witness: Option<String>,
    /// `binom(O_i, O_j)` when all axioms hold.
    pub binom: Option<Vec<Vec<u64>>>,
}

impl SrpReport {
    pub fn ok(&self) -> bool {
        self.size_homogeneous && self.complement_closed && self.downward_constant
    }

    pub fn first_witness(&self) -> Option<&str> {
        self.size_witness
            .as_deref()
            .or(self.complement_witness.as_deref())
            .or(self.downward_witness.as_deref())
    }
}

/// Per-block counts of the subsets of `a`.
fn downward_row(p: &Partition, a: SubsetMask) -> Vec<u64> {
    let mut row = vec![0u64; p.num_blocks()];
    for b in a.submasks() {
        row[p.block_of(b)] += 1;
    }
    row
}

pub fn verify_strongly_regular(p: &Partition) -> SrpReport {
    let g = p.ground();
    let mut rep = SrpReport { size_homogeneous: true, ..SrpReport::default() };

    for (i, b) in p.blocks().iter().enumerate() {
        if b.size().is_none() {
            let k = b.first().len();
            let odd = b.members().iter().find(|a| a.len() != k).expect("mixed block");
            rep.size_homogeneous = false;
            rep.size_witness = Some(format!("block {i} holds {{{}}} and {{{odd}}} of different sizes", b.first()));
            break;
        }
    }

    rep.complement_closed = true;
    for (i, b) in p.blocks().iter().enumerate() {
        if b.complement().is_none() {
            let target = p.block_of(g.complement(b.first()));
            let witness = b
                .members()
                .iter()
                .find(|a| p.block_of(g.complement(**a)) != target)
                .map(|a| format!("complements of {{{}}} and {{{a}}} lie in different blocks", b.first()))
                .unwrap_or_else(|| format!("complements of block {i} form a proper part of block {target}"));
            rep.complement_closed = false;
            rep.complement_witness = Some(witness);
            break;
        }
    }

    rep.downward_constant = true;
    'outer: for (i, b) in p.blocks().iter().enumerate() {
        let first = downward_row(p, b.first());
        for &a in &b.members()[1..] {
            let row = downward_row(p, a);
            if let Some(j) = (0..row.len()).find(|&j| row[j] != first[j]) {
                rep.downward_constant = false;
                rep.downward_witness = Some(format!(
                    "block {i}: {{{}}} contains {} members of block {j}, {{{a}}} contains {}",
                    b.first(),
                    first[j],
                    row[j]
                ));
                break 'outer;
            }
        }
    }

    if rep.ok() {
        rep.binom = Some(p.blocks().iter().map(|b| downward_row(p, b.first())).collect());
    }
    rep
}

/// `entry[i][j] = binom(O_i, O_j)` together with block metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffMatrix {
    entries: Vec<Vec<u64>>,
    /// `♯O_i`.
    cardinalities: Vec<usize>,
    /// `|O_i|`.
    block_lens: Vec<usize>,
    complement: Vec<usize>,
}

impl CoeffMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> u64 {
        self.entries[i][j]
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.entries[i]
    }

    pub fn cardinality(&self, i: usize) -> usize {
        self.cardinalities[i]
    }

    pub fn block_len(&self, i: usize) -> usize {
        self.block_lens[i]
    }

    pub fn complement(&self, i: usize) -> usize {
        self.complement[i]
    }

    pub fn to_matrix<T: Scalar>(&self) -> Matrix<T> {
        let s = self.size();
        Matrix::from_fn(s, s, |i, j| T::from_i64(self.entries[i][j] as i64))
    }
}

impl fmt::Display for CoeffMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// The coefficient matrix, cross-checked against the operator `C ∘ l ∘ C`
/// applied to each block polynomial.
pub fn coeff_matrix(p: &Partition) -> Result<CoeffMatrix> {
    let rep = verify_strongly_regular(p);
    let Some(entries) = rep.binom.clone() else {
        return Err(GoaError::input(format!(
            "partition is not strongly regular: {}",
            rep.first_witness().unwrap_or("axiom failure")
        )));
    };
    let m = CoeffMatrix {
        entries,
        cardinalities: (0..p.num_blocks()).map(|i| p.cardinality(i)).collect(),
        block_lens: p.blocks().iter().map(|b| b.len()).collect(),
        complement: p.blocks().iter().map(|b| b.complement().expect("axiom 2")).collect(),
    };
    let g = p.ground();
    let comp = Complementation::new(g);
    let ell = EllPower::new(g, 1)?;
    for j in 0..p.num_blocks() {
        let image = comp.apply(&ell.apply(&comp.apply(&p.block_poly::<Rational64>(j))?)?)?;
        let coords = p.block_coordinates(&image).ok_or_else(|| {
            GoaError::verification(format!("C l C maps block {j} outside the span of the blocks"))
        })?;
        for (i, c) in coords.iter().enumerate() {
            if *c != Rational64::from_integer(m.entries[i][j] as i64) {
                return Err(GoaError::verification(format!(
                    "C l C column {j} disagrees with the inclusion count at row {i}: {c} vs {}",
                    m.entries[i][j]
                )));
            }
        }
    }
    Ok(m)
}

/// `|{B in O_j : B ⊇ A}|` for `A in O_i`, checked constant and checked
/// against `(|O_j| / |O_i|) binom(O_j, O_i)` and `binom(O_c(i), O_c(j))`.
pub fn upward_count(p: &Partition, m: &CoeffMatrix, i: usize, j: usize) -> Result<u64> {
    let g = p.ground();
    let mut value = None;
    for &a in p.members(i) {
        let free = g.complement(a);
        let count = free.submasks().filter(|extra| p.block_of(a.union(*extra)) == j).count() as u64;
        match value {
            None => value = Some(count),
            Some(v) if v != count => {
                return Err(GoaError::verification(format!(
                    "upward count from block {i} to block {j} is not constant ({v} vs {count} at {{{a}}})"
                )))
            }
            _ => {}
        }
    }
    let value = value.expect("blocks are nonempty");
    let scaled = m.block_len(j) as u64 * m.entry(j, i);
    let via_sizes = scaled.is_multiple_of(m.block_len(i) as u64).then(|| scaled / m.block_len(i) as u64);
    let via_complements = m.entry(m.complement(i), m.complement(j));
    if via_sizes != Some(value) || via_complements != value {
        return Err(GoaError::verification(format!(
            "upward count {i}->{j}: direct {value}, size form {scaled}/{}, complement form {via_complements}",
            m.block_len(i)
        )));
    }
    Ok(value)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureReport {
    pub closed: bool,
    /// Operations tested before the first failure (or in total).
    pub checks: usize,
    pub failure: Option<String>,
}

/// Tests that `span{p_O}` contains `1` and is closed under `∂`, `C` and
/// products. Membership of `q` means its `ε` coefficients are constant on
/// every block.
pub fn verify_goa_closure(p: &Partition) -> ClosureReport {
    let g = p.ground();
    let s = p.num_blocks();
    let mut checks = 0;
    let fail = |checks: usize, what: String| ClosureReport { closed: false, checks, failure: Some(what) };

    let eps: Vec<Poly<Rational>> =
        (0..s).map(|i| p.block_poly::<Rational>(i).change_basis(Basis::Eps)).collect();
    // Each p_O is a sum of ε_B over the up-closure, so the block polynomials
    // themselves must be block-constant in the ε basis.
    for (i, e) in eps.iter().enumerate() {
        checks += 1;
        if !p.spans(e) {
            return fail(checks, format!("p of block {i} itself is not constant on blocks"));
        }
    }
    checks += 1;
    if !p.spans(&Poly::<Rational>::one(g)) {
        return fail(checks, "the unit 1 is not in the span".into());
    }

    let d = Derivation::new(g);
    let c = Complementation::new(g);
    for i in 0..s {
        let v = p.block_poly::<Rational>(i);
        checks += 1;
        if !p.spans(&d.apply(&v).expect("P basis")) {
            return fail(checks, format!("∂ of block {i} leaves the span"));
        }
        checks += 1;
        if !p.spans(&c.apply(&v).expect("P basis")) {
            return fail(checks, format!("C of block {i} leaves the span"));
        }
    }
    for i in 0..s {
        for j in i..s {
            checks += 1;
            let prod = eps[i].multiply(&eps[j]).expect("same basis");
            if !p.spans(&prod) {
                return fail(checks, format!("product of blocks {i} and {j} leaves the span"));
            }
        }
    }
    ClosureReport { closed: true, checks, failure: None }
}

/// Coefficients of `p_{O_i} p_{O_j}` on the block basis, by the Möbius
/// formula `sum_l (-1)^{♯k-♯l} binom(O_k,O_l) binom(O_l,O_i) binom(O_l,O_j)`
/// and by direct multiplication; the two must agree.
pub fn structure_constants(p: &Partition, m: &CoeffMatrix, i: usize, j: usize) -> Result<Vec<i64>> {
    let s = m.size();
    let mobius: Vec<i64> = (0..s)
        .map(|k| {
            (0..s)
                .map(|l| {
                    let sign = if (m.cardinality(k) + m.cardinality(l)).is_multiple_of(2) { 1 } else { -1 };
                    sign * (m.entry(k, l) * m.entry(l, i) * m.entry(l, j)) as i64
                })
                .sum()
        })
        .collect();
    let prod = p.block_poly::<Rational>(i).multiply(&p.block_poly(j))?;
    let direct = p
        .block_coordinates(&prod)
        .ok_or_else(|| GoaError::verification(format!("p_{i} p_{j} is not in the span of the blocks")))?;
    for (k, c) in direct.iter().enumerate() {
        if *c != Rational::from_integer(mobius[k].into()) {
            return Err(GoaError::verification(format!(
                "structure constant ({i},{j}) at block {k}: Möbius {} vs product {c}",
                mobius[k]
            )));
        }
    }
    Ok(mobius)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MnukhinReport {
    pub m: i64,
    pub holds: bool,
    pub first_failure: Option<(usize, usize)>,
}

/// `(M^m)[i][j] = m^{♯i - ♯j} M[i][j]` with the power computed exactly.
pub fn mnukhin_check(m: &CoeffMatrix, power: i64) -> Result<MnukhinReport> {
    if power == 0 {
        return Err(GoaError::input("power must be nonzero"));
    }
    let mat: Matrix<Rational> = m.to_matrix();
    let mp = mat.pow(power)?;
    let base = Rational::from_integer(power.into());
    let mut first_failure = None;
    'outer: for i in 0..m.size() {
        for j in 0..m.size() {
            let want = if m.entry(i, j) == 0 {
                Rational::from_integer(0.into())
            } else {
                let e = m.cardinality(i) as i32 - m.cardinality(j) as i32;
                num_traits::pow::Pow::pow(&base, e) * Rational::from_integer((m.entry(i, j) as i64).into())
            };
            if mp[(i, j)] != want {
                first_failure = Some((i, j));
                break 'outer;
            }
        }
    }
    Ok(MnukhinReport { m: power, holds: first_failure.is_none(), first_failure })
}

/// `binom(Ω, O_i) binom(O_i^c, O_j^c) = binom(Ω, O_j) binom(O_j, O_i)`, with
/// `binom(Ω, O) = |O|` and the upward count read through complements.
pub fn counting_relation_holds(m: &CoeffMatrix) -> bool {
    (0..m.size()).all(|i| {
        (0..m.size()).all(|j| {
            m.block_len(i) as u64 * m.entry(m.complement(i), m.complement(j)) == m.block_len(j) as u64 * m.entry(j, i)
        })
    })
}

/// Every admissible `E_{k,l,r}` maps each block polynomial into the span.
pub fn eklr_stable(p: &Partition) -> Result<bool> {
    let g = p.ground();
    for i in 0..p.num_blocks() {
        let v = p.block_poly::<Rational64>(i);
        let k = p.cardinality(i);
        for l in 0..=g.n() {
            for r in 0..=k.min(l) {
                let e = Eklr::new(g, k as i64, l as i64, r as i64)?;
                if e.is_admissible() && !p.spans(&e.apply(&v)?) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// For every order-3 incidence function `μ` and blocks `i, j, k`, the number
/// of `(A, B) in O_i × O_j` with `(A, B, C) ⊢ μ` is the same for all
/// `C in O_k`. Brute force; `n <= 5`.
pub fn triple_intersection_stable(p: &Partition) -> Result<bool> {
    let g = p.ground();
    if g.n() > 5 {
        return Err(GoaError::input("triple-intersection check needs n <= 5"));
    }
    let s = p.num_blocks();
    let mus = enumerate_incidence_functions(g, 3)?;
    for mu in &mus {
        let (a_len, b_len, c_len) = (mu.size(1), mu.size(2), mu.size(3));
        let a_sets = subsets_of_size(g.n(), a_len);
        let b_sets = subsets_of_size(g.n(), b_len);
        for k in (0..s).filter(|&k| p.cardinality(k) == c_len) {
            let mut reference: Option<Vec<usize>> = None;
            for &c in p.members(k) {
                let mut counts = vec![0usize; s * s];
                for &a in &a_sets {
                    for &b in &b_sets {
                        if realizes(&[a, b, c], mu) {
                            counts[p.block_of(a) * s + p.block_of(b)] += 1;
                        }
                    }
                }
                match &reference {
                    None => reference = Some(counts),
                    Some(r) if *r != counts => return Ok(false),
                    _ => {}
                }
            }
        }
    }
    Ok(true)
}

/// Number of blocks of size `k + 1` is at least that of size `k`, `k < n/2`.
pub fn livingstone_wagner_holds(p: &Partition) -> bool {
    let n = p.ground().n();
    let count = |k: usize| (0..p.num_blocks()).filter(|&i| p.cardinality(i) == k).count();
    (0..n).filter(|k| 2 * k < n).all(|k| count(k + 1) >= count(k))
}

/// `(|A| - ♯O_j) binom(A, O_j) = sum_{e in A} binom(A - e, O_j)` for one
/// `A in O_i`, with `binom(A - e, O_j)` read from the matrix row of the
/// block of `A - e`.
pub fn kelly_check(p: &Partition, m: &CoeffMatrix, i: usize, j: usize) -> Result<bool> {
    if m.cardinality(j) >= m.cardinality(i) {
        return Err(GoaError::input(format!("Kelly's lemma needs ♯O_{j} < ♯O_{i}")));
    }
    let a = p.members(i)[0];
    let lhs = (a.len() - m.cardinality(j)) as u64 * m.entry(i, j);
    let rhs: u64 = a.elements().map(|e| m.entry(p.block_of(a.without(e)), j)).sum();
    Ok(lhs == rhs)
}

/// Checks Kelly's lemma on all block pairs with strictly smaller target size.
pub fn kelly_holds_everywhere(p: &Partition, m: &CoeffMatrix) -> Result<bool> {
    for i in 0..m.size() {
        for j in 0..m.size() {
            if m.cardinality(j) < m.cardinality(i) && !kelly_check(p, m, i, j)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Each row summed over the blocks of size `k` gives `C(♯O_i, k)`.
pub fn level_row_sums_hold(p: &Partition, m: &CoeffMatrix) -> bool {
    let n = p.ground().n();
    (0..m.size()).all(|i| {
        (0..=n).all(|k| {
            let sum: u64 = (0..m.size()).filter(|&j| m.cardinality(j) == k).map(|j| m.entry(i, j)).sum();
            sum == binomial(m.cardinality(i) as u64, k as u64)
        })
    })
}
