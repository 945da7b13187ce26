//! Decks and reconstruction pairs of a strongly regular partition, and the
//! Kelly, Lovász, Müller and Maynard–Siemons checks on them.

use std::fmt;

use crate::error::{GoaError, Result};
use crate::partition::Partition;
use crate::permgroup::{PermGroup, Permutation, DEFAULT_ELEMENT_CAP};
use crate::srp::{coeff_matrix, CoeffMatrix};
use crate::subset::{GroundSet, SubsetMask};

/// Row of the coefficient matrix restricted to blocks of smaller cardinality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deck {
    pub source: usize,
    /// `(j, binom(O_source, O_j))` for every block `j` with `♯O_j < ♯O_source`.
    pub entries: Vec<(usize, u64)>,
}

pub fn deck(m: &CoeffMatrix, i: usize) -> Deck {
    let k = m.cardinality(i);
    let entries = (0..m.size()).filter(|&j| m.cardinality(j) < k).map(|j| (j, m.entry(i, j))).collect();
    Deck { source: i, entries }
}

impl fmt::Display for Deck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|(j, c)| format!("{j}:{c}")).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// Two blocks of the same cardinality with identical decks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReconPair {
    pub a: usize,
    pub b: usize,
    pub k: usize,
    pub deck: Vec<(usize, u64)>,
}

pub fn reconstruction_pairs(m: &CoeffMatrix, k: usize) -> Vec<ReconPair> {
    let blocks: Vec<usize> = (0..m.size()).filter(|&i| m.cardinality(i) == k).collect();
    let decks: Vec<Deck> = blocks.iter().map(|&i| deck(m, i)).collect();
    let mut out = Vec::new();
    for x in 0..blocks.len() {
        for y in x + 1..blocks.len() {
            if decks[x].entries == decks[y].entries {
                out.push(ReconPair { a: blocks[x], b: blocks[y], k, deck: decks[x].entries.clone() });
            }
        }
    }
    out
}

pub fn all_reconstruction_pairs(m: &CoeffMatrix, n: usize) -> Vec<ReconPair> {
    (0..=n).flat_map(|k| reconstruction_pairs(m, k)).collect()
}

/// `#{B in O_j : |A ∩ B| = r}` for `A in O_i`, by the alternating sum over
/// blocks `V`: `sum (-1)^{♯V - r} C(♯V, r) binom(O_i, V) binom(O_c(V), O_c(j))`.
pub fn stratified_count(m: &CoeffMatrix, i: usize, j: usize, r: usize) -> i64 {
    (0..m.size())
        .filter(|&v| m.cardinality(v) >= r && m.entry(i, v) > 0)
        .map(|v| {
            let sv = m.cardinality(v);
            let sign = if (sv - r).is_multiple_of(2) { 1 } else { -1 };
            sign * crate::scalar::binomial(sv as u64, r as u64) as i64
                * m.entry(i, v) as i64
                * m.entry(m.complement(v), m.complement(j)) as i64
        })
        .sum()
}

fn brute_stratified(p: &Partition, a: SubsetMask, j: usize, r: usize) -> i64 {
    p.members(j).iter().filter(|b| a.intersection(**b).len() == r).count() as i64
}

#[derive(Debug, Clone)]
pub struct LovaszReport {
    pub n: usize,
    /// Every pair found, at any size.
    pub pairs: Vec<ReconPair>,
    /// Pairs with `k > n/2`; Lovász rules these out.
    pub pairs_above_half: Vec<ReconPair>,
    /// `E_{k,k,0}` has no nonzero entry between blocks of size `k > n/2`.
    pub ekk0_vanishes: bool,
    /// For each pair, `#{W in O_a : W ∩ A = ∅} - #{W in O_a : W ∩ B = ∅} = (-1)^k`,
    /// by brute force and by the alternating sum.
    pub difference_identity_holds: bool,
}

impl LovaszReport {
    pub fn holds(&self) -> bool {
        self.pairs_above_half.is_empty() && self.ekk0_vanishes && self.difference_identity_holds
    }
}

pub fn lovasz_check(p: &Partition, m: &CoeffMatrix) -> LovaszReport {
    let n = p.ground().n();
    let pairs = all_reconstruction_pairs(m, n);
    let pairs_above_half = pairs.iter().filter(|q| 2 * q.k > n).cloned().collect();
    let ekk0_vanishes = (0..m.size()).filter(|&i| 2 * m.cardinality(i) > n).all(|i| {
        (0..m.size())
            .filter(|&j| m.cardinality(j) == m.cardinality(i))
            .all(|j| stratified_count(m, i, j, 0) == 0)
    });
    let difference_identity_holds = pairs.iter().all(|q| {
        let want = if q.k % 2 == 0 { 1 } else { -1 };
        let (a, b) = (p.members(q.a)[0], p.members(q.b)[0]);
        let brute = brute_stratified(p, a, q.a, 0) - brute_stratified(p, b, q.a, 0);
        let formula = stratified_count(m, q.a, q.a, 0) - stratified_count(m, q.b, q.a, 0);
        brute == want && formula == want
    });
    LovaszReport { n, pairs, pairs_above_half, ekk0_vanishes, difference_identity_holds }
}

/// One inequality `2^{k - ♯O_j - 1} <= binom(O_j^c, A^c)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MullerBound {
    pub j: usize,
    pub lhs: u64,
    pub rhs: u64,
}

#[derive(Debug, Clone)]
pub struct MullerReport {
    pub pair: ReconPair,
    /// Blocks with `binom(A, O_j) > 0` and `♯O_j < k`.
    pub bounds: Vec<MullerBound>,
    /// Blocks with `♯O_j < k` outside that scope where the inequality fails.
    pub unrestricted_failures: Vec<usize>,
}

impl MullerReport {
    pub fn holds(&self) -> bool {
        self.bounds.iter().all(|b| b.lhs <= b.rhs)
    }
}

pub fn muller_check(m: &CoeffMatrix, pair: &ReconPair) -> MullerReport {
    let k = pair.k;
    let mut bounds = Vec::new();
    let mut unrestricted_failures = Vec::new();
    for j in (0..m.size()).filter(|&j| m.cardinality(j) < k) {
        let lhs = 1u64 << (k - m.cardinality(j) - 1);
        // Members of O_a containing a fixed member of O_j.
        let rhs = m.entry(m.complement(j), m.complement(pair.a));
        if m.entry(pair.a, j) > 0 {
            bounds.push(MullerBound { j, lhs, rhs });
        } else if lhs > rhs {
            unrestricted_failures.push(j);
        }
    }
    MullerReport { pair: pair.clone(), bounds, unrestricted_failures }
}

#[derive(Debug, Clone)]
pub struct TightInstance {
    pub r: usize,
    pub pad: usize,
    pub group: PermGroup,
    pub a: SubsetMask,
    pub b: SubsetMask,
    pub partition: Partition,
    pub matrix: CoeffMatrix,
}

/// The group `<(1,2)(2i+1,2i+2) : i = 1..r-1>` on `2r + pad` points with
/// `A = U ∪ {1}`, `B = U ∪ {2}`, `U = {4, 6, ..., 2r}`.
pub fn lovasz_tight_instance(r: usize, pad: usize) -> Result<TightInstance> {
    if r < 2 {
        return Err(GoaError::input("the tight family needs r >= 2"));
    }
    let n = 2 * r + pad;
    if n > 16 {
        return Err(GoaError::input(format!("2r + pad = {n} exceeds 16")));
    }
    let g = GroundSet::new(n)?;
    let gens = (1..r)
        .map(|i| Permutation::parse(&format!("(1,2)({},{})", 2 * i + 1, 2 * i + 2), g))
        .collect::<Result<Vec<_>>>()?;
    let group = PermGroup::close_generators(g, gens, DEFAULT_ELEMENT_CAP)?;
    let u = SubsetMask::from_elements((2..=r).map(|i| 2 * i));
    let a = u.with(1);
    let b = u.with(2);
    let partition = group.orbit_partition()?;
    let matrix = coeff_matrix(&partition)?;
    let (ia, ib) = (partition.block_of(a), partition.block_of(b));
    if group.order() != 1 << (r - 1) {
        return Err(GoaError::verification(format!("group order {} is not 2^{}", group.order(), r - 1)));
    }
    if ia == ib {
        return Err(GoaError::verification("A and B lie in the same orbit"));
    }
    if deck(&matrix, ia).entries != deck(&matrix, ib).entries {
        return Err(GoaError::verification("A and B have different decks"));
    }
    Ok(TightInstance { r, pad, group, a, b, partition, matrix })
}

impl TightInstance {
    /// The pair with `a` the block of `A`.
    pub fn pair(&self) -> ReconPair {
        let (a, b) = (self.partition.block_of(self.a), self.partition.block_of(self.b));
        ReconPair { a, b, k: self.r, deck: deck(&self.matrix, a).entries }
    }
}

/// `E^S_{A,B} = #{W in O_b : W ∩ A in O_s}`, by brute force and by
/// `sum_V (-1)^{♯V - ♯s} binom(V, O_s) binom(A, V) binom(V^c, B^c)` over
/// blocks `V`; the two must agree.
pub fn exact_intersection_counts(p: &Partition, m: &CoeffMatrix, a: SubsetMask, b: usize, s: usize) -> Result<u64> {
    let brute = p.members(b).iter().filter(|w| p.block_of(w.intersection(a)) == s).count() as i64;
    let ia = p.block_of(a);
    let formula: i64 = (0..m.size())
        .filter(|&v| m.entry(ia, v) > 0)
        .map(|v| {
            let sign = if (m.cardinality(v) + m.cardinality(s)).is_multiple_of(2) { 1 } else { -1 };
            sign * (m.entry(v, s) * m.entry(ia, v) * m.entry(m.complement(v), m.complement(b))) as i64
        })
        .sum();
    if brute != formula {
        return Err(GoaError::verification(format!(
            "E^{s}_{{{a}}},{b}: brute force {brute}, alternating sum {formula}"
        )));
    }
    Ok(brute as u64)
}

/// `sum_S binom(S, T) E^S_{A,B} = binom(A, T) binom(T^c, B^c)` for every block `T`.
pub fn intersection_sum_rule(p: &Partition, m: &CoeffMatrix, a: SubsetMask, b: usize) -> Result<bool> {
    let ia = p.block_of(a);
    let counts = (0..m.size()).map(|s| exact_intersection_counts(p, m, a, b, s)).collect::<Result<Vec<_>>>()?;
    Ok((0..m.size()).all(|t| {
        let lhs: u64 = (0..m.size()).map(|s| m.entry(s, t) * counts[s]).sum();
        lhs == m.entry(ia, t) * m.entry(m.complement(t), m.complement(b))
    }))
}

/// For a pair: `E^T_{A,A} - E^T_{B,A} = (-1)^{|A| - ♯T} binom(A, T)` for every block `T`,
/// where the second index names the block of `A`.
pub fn intersection_difference(p: &Partition, m: &CoeffMatrix, pair: &ReconPair) -> Result<bool> {
    let a = p.members(pair.a)[0];
    let b = p.members(pair.b)[0];
    for t in 0..m.size() {
        let diff = exact_intersection_counts(p, m, a, pair.a, t)? as i64
            - exact_intersection_counts(p, m, b, pair.a, t)? as i64;
        let sign = if (pair.k + m.cardinality(t)).is_multiple_of(2) { 1 } else { -1 };
        if diff != sign * m.entry(pair.a, t) as i64 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone)]
pub struct IndexReport {
    pub order: usize,
    /// Sizes `k` at which reconstruction pairs exist.
    pub pair_sizes: Vec<usize>,
    /// `1 + max k` with pairs, or 1 when there are none.
    pub index: usize,
}

/// Reconstruction index of a group acting freely; at most 5.
pub fn maynard_siemons_index(group: &PermGroup) -> Result<IndexReport> {
    let n = group.ground().n();
    if n > 12 {
        return Err(GoaError::input(format!("reconstruction index needs n <= 12, got {n}")));
    }
    if !group.is_free() {
        return Err(GoaError::input("the group does not act freely (a non-identity element fixes a point)"));
    }
    let p = group.orbit_partition()?;
    let m = coeff_matrix(&p)?;
    let pair_sizes: Vec<usize> = (0..=n).filter(|&k| !reconstruction_pairs(&m, k).is_empty()).collect();
    let index = pair_sizes.last().map_or(1, |k| k + 1);
    if index > 5 {
        return Err(GoaError::verification(format!("free action with reconstruction index {index} > 5")));
    }
    Ok(IndexReport { order: group.order(), pair_sizes, index })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgroup::random_group;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn g(n: usize) -> GroundSet {
        GroundSet::new(n).unwrap()
    }

    fn set(e: &[usize]) -> SubsetMask {
        SubsetMask::from_elements(e.iter().copied())
    }

    fn example() -> (Partition, CoeffMatrix) {
        let p = Partition::parse("n 3\n-\n1 ; 2\n3\n1 2\n1 3 ; 2 3\n1 2 3\n").unwrap();
        let m = coeff_matrix(&p).unwrap();
        (p, m)
    }

    /// Deck by direct subset counting.
    fn naive_deck(p: &Partition, i: usize) -> Vec<(usize, u64)> {
        let a = p.members(i)[0];
        (0..p.num_blocks())
            .filter(|&j| p.cardinality(j) < a.len())
            .map(|j| (j, p.members(j).iter().filter(|b| b.is_subset_of(a)).count() as u64))
            .collect()
    }

    #[test]
    fn decks_on_the_example() {
        let (p, m) = example();
        assert_eq!(deck(&m, 4).entries, vec![(0, 1), (1, 1), (2, 1)]);
        assert!(deck(&m, 0).entries.is_empty());
        assert_eq!(deck(&m, 5).entries.len(), 5);
        for i in 0..m.size() {
            assert_eq!(deck(&m, i).entries, naive_deck(&p, i));
        }
        // Every singleton has the deck [∅: 1], so the two size-1 blocks pair up.
        let ones = reconstruction_pairs(&m, 1);
        assert_eq!(ones.len(), 1);
        assert_eq!((ones[0].a, ones[0].b), (1, 2));
        for k in [0, 2, 3] {
            assert!(reconstruction_pairs(&m, k).is_empty());
        }
    }

    #[test]
    fn decks_match_counting_on_random_orbits() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for n in 2..=6 {
            let p = random_group(g(n), &mut rng).orbit_partition().unwrap();
            let m = coeff_matrix(&p).unwrap();
            for i in 0..m.size() {
                assert_eq!(deck(&m, i).entries, naive_deck(&p, i));
            }
        }
    }

    #[test]
    fn stratified_counts_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for n in 2..=6 {
            let p = random_group(g(n), &mut rng).orbit_partition().unwrap();
            let m = coeff_matrix(&p).unwrap();
            for i in 0..m.size() {
                for j in 0..m.size() {
                    for r in 0..=n {
                        assert_eq!(stratified_count(&m, i, j, r), brute_stratified(&p, p.members(i)[0], j, r));
                    }
                }
            }
        }
    }

    #[test]
    fn tight_r2() {
        let t = lovasz_tight_instance(2, 0).unwrap();
        assert_eq!(t.group.order(), 2);
        assert_eq!((t.a, t.b), (set(&[1, 4]), set(&[2, 4])));
        let pairs = reconstruction_pairs(&t.matrix, 2);
        let want = (t.partition.block_of(set(&[1, 4])), t.partition.block_of(set(&[1, 3])));
        assert!(pairs.iter().any(|q| (q.a, q.b) == (want.0.min(want.1), want.0.max(want.1))));
        let rep = lovasz_check(&t.partition, &t.matrix);
        assert!(rep.holds());
        assert!(rep.pairs.iter().all(|q| q.k <= 2));
        assert!(lovasz_tight_instance(1, 0).is_err());
        assert!(lovasz_tight_instance(8, 1).is_err());
    }

    #[test]
    fn tight_family_pairs_sit_at_r() {
        for r in 2..=4 {
            for pad in 0..=1 {
                let t = lovasz_tight_instance(r, pad).unwrap();
                let rep = lovasz_check(&t.partition, &t.matrix);
                assert!(rep.holds());
                let top = rep.pairs.iter().map(|q| q.k).max().unwrap();
                assert_eq!(top, r);
                let want = t.pair();
                assert!(rep.pairs.iter().any(|q| (q.a, q.b) == (want.a, want.b) || (q.b, q.a) == (want.a, want.b)));
            }
        }
    }

    #[test]
    fn muller_tight_r3() {
        let t = lovasz_tight_instance(3, 0).unwrap();
        let mut want = vec![set(&[1, 4, 6]), set(&[2, 3, 6]), set(&[2, 4, 5]), set(&[1, 3, 5])];
        want.sort();
        assert_eq!(t.group.orbit_of(set(&[1, 4, 6])), want);
        let rep = muller_check(&t.matrix, &t.pair());
        assert!(rep.holds());
        let empty = rep.bounds.iter().find(|b| b.j == 0).unwrap();
        assert_eq!((empty.lhs, empty.rhs), (4, 4));
        assert!(intersection_sum_rule(&t.partition, &t.matrix, t.a, t.partition.block_of(t.b)).unwrap());
        let pair = t.pair();
        assert!(intersection_difference(&t.partition, &t.matrix, &pair).unwrap());
        // T = ∅-block: difference (-1)^3.
        let d = exact_intersection_counts(&t.partition, &t.matrix, t.a, pair.a, 0).unwrap() as i64
            - exact_intersection_counts(&t.partition, &t.matrix, t.b, pair.a, 0).unwrap() as i64;
        assert_eq!(d, -1);
    }

    #[test]
    fn trivial_partition_intersections() {
        let p = Partition::singletons(g(3));
        let m = coeff_matrix(&p).unwrap();
        let one = p.block_of(set(&[1]));
        assert_eq!(exact_intersection_counts(&p, &m, set(&[1]), one, 0).unwrap(), 0);
        assert_eq!(exact_intersection_counts(&p, &m, set(&[1]), one, one).unwrap(), 1);
    }

    #[test]
    fn indices_of_free_actions() {
        let cyc = |n: usize| {
            let text = format!("({})", (1..=n).map(|i| i.to_string()).collect::<Vec<_>>().join(","));
            PermGroup::close_generators(g(n), vec![Permutation::parse(&text, g(n)).unwrap()], 100).unwrap()
        };
        assert!(maynard_siemons_index(&cyc(5)).unwrap().index <= 5);
        // Singletons in different blocks always share the deck [∅: 1].
        assert_eq!(maynard_siemons_index(&PermGroup::trivial(g(3))).unwrap().index, 2);
        assert_eq!(maynard_siemons_index(&PermGroup::trivial(g(1))).unwrap().index, 1);
        let fixes = PermGroup::close_generators(g(3), vec![Permutation::parse("(1,2)", g(3)).unwrap()], 10).unwrap();
        assert!(matches!(maynard_siemons_index(&fixes), Err(GoaError::Input(_))));
    }

    #[test]
    fn random_groups_obey_lovasz_and_muller() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for n in 4..=6 {
            for _ in 0..4 {
                let p = random_group(g(n), &mut rng).orbit_partition().unwrap();
                let m = coeff_matrix(&p).unwrap();
                let rep = lovasz_check(&p, &m);
                assert!(rep.holds());
                for q in &rep.pairs {
                    assert!(muller_check(&m, q).holds());
                    assert!(intersection_difference(&p, &m, q).unwrap());
                }
            }
        }
    }
}
