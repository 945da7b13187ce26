//! Incidence functions (orbit invariants of tuples of subsets under the full
//! symmetric group), the operators `E_μ` they index, and the decomposition of
//! order-3 operators into `u ∘ m ∘ (v ⊗ w)` with `u, v, w` from the
//! `E_{k,l,r}` basis.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{GoaError, Result};
use crate::matrix::EchelonBasis;
use crate::poly::{Basis, Poly};
use crate::scalar::{big_binomial, binomial, is_zero, Scalar};
use crate::subset::{subsets_of_size, GroundSet, SubsetMask};

use super::{Eklr, Epsilon, EpsilonInverse, LinearMap};

/// `μ(J) = |∩_{j in J} S_j|` for `J ⊆ {1..t}`, stored by bit mask of `J`.
/// `μ(∅) = n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IncidenceFunction {
    n: usize,
    order: usize,
    values: Vec<usize>,
}

impl IncidenceFunction {
    pub fn new(n: usize, order: usize, values: Vec<usize>) -> Result<Self> {
        if !(1..=3).contains(&order) {
            return Err(GoaError::input(format!("incidence order {order} not supported")));
        }
        if values.len() != 1 << order {
            return Err(GoaError::input(format!("order {order} needs {} values", 1 << order)));
        }
        if values[0] != n {
            return Err(GoaError::input(format!("μ(∅) must equal n = {n}, got {}", values[0])));
        }
        let mu = IncidenceFunction { n, order, values };
        if let Some(j) = (0..1usize << order).find(|&j| mu.mobius(j) < 0) {
            return Err(GoaError::input(format!("Möbius transform negative at J = {j:b}")));
        }
        Ok(mu)
    }

    /// The incidence function of a concrete tuple.
    pub fn of_tuple(n: usize, sets: &[SubsetMask]) -> Self {
        let order = sets.len();
        let values = (0..1usize << order)
            .map(|j| {
                let mut acc = SubsetMask(u32::MAX);
                for (i, s) in sets.iter().enumerate() {
                    if j & (1 << i) != 0 {
                        acc = acc.intersection(*s);
                    }
                }
                if j == 0 {
                    n
                } else {
                    acc.len()
                }
            })
            .collect();
        IncidenceFunction { n, order, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `μ(J)` for `J` given as a bit mask over `{1..t}`.
    pub fn value(&self, j: usize) -> usize {
        self.values[j]
    }

    /// `μ({i})`, 1-based.
    pub fn size(&self, i: usize) -> usize {
        self.values[1 << (i - 1)]
    }

    /// `sum_{L ⊇ J} (-1)^{|L|-|J|} μ(L)`: the number of elements lying in
    /// exactly the sets indexed by `J`.
    pub fn mobius(&self, j: usize) -> i64 {
        let full = (1usize << self.order) - 1;
        let rest = full & !j;
        let mut sum = 0i64;
        let mut sub = rest;
        loop {
            let l = j | sub;
            let sign = if (l.count_ones() - j.count_ones()).is_multiple_of(2) { 1 } else { -1 };
            sum += sign * self.values[l] as i64;
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        sum
    }

    /// Monotone decreasing under inclusion of index sets.
    pub fn is_monotone(&self) -> bool {
        (0..self.values.len()).all(|j| {
            (0..self.order).all(|i| j & (1 << i) != 0 || self.values[j | (1 << i)] <= self.values[j])
        })
    }

    /// A tuple realizing `μ`: elements are dealt to the Venn regions in order.
    pub fn representative(&self) -> Vec<SubsetMask> {
        let mut sets = vec![SubsetMask::EMPTY; self.order];
        let mut next = 1usize;
        for j in 0..1usize << self.order {
            for _ in 0..self.mobius(j) {
                for (i, s) in sets.iter_mut().enumerate() {
                    if j & (1 << i) != 0 {
                        *s = s.with(next);
                    }
                }
                next += 1;
            }
        }
        sets
    }
}

impl fmt::Display for IncidenceFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (1..self.values.len())
            .map(|j| {
                let idx: Vec<String> = (0..self.order).filter(|i| j & (1 << i) != 0).map(|i| (i + 1).to_string()).collect();
                format!("{}:{}", idx.join(""), self.values[j])
            })
            .collect();
        write!(f, "μ[{}]", parts.join(" "))
    }
}

/// Does the tuple realize `μ` (all nonempty-`J` intersection sizes match)?
pub fn realizes(sets: &[SubsetMask], mu: &IncidenceFunction) -> bool {
    sets.len() == mu.order && (1..1usize << mu.order).all(|j| {
        let mut acc = SubsetMask(u32::MAX);
        for (i, s) in sets.iter().enumerate() {
            if j & (1 << i) != 0 {
                acc = acc.intersection(*s);
            }
        }
        acc.len() == mu.values[j]
    })
}

/// `C(n + 2^t - 1, 2^t - 1)`.
pub fn incidence_count(n: usize, t: usize) -> u64 {
    let parts = 1u64 << t;
    binomial(n as u64 + parts - 1, parts - 1)
}

fn compositions(total: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if parts == 1 {
        prefix.push(total);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in 0..=total {
        prefix.push(first);
        compositions(total - first, parts - 1, prefix, out);
        prefix.pop();
    }
}

/// All incidence functions of order `t` on an `n`-set.
pub fn enumerate_incidence_functions(g: GroundSet, t: usize) -> Result<Vec<IncidenceFunction>> {
    let n = g.n();
    if !(2..=3).contains(&t) {
        return Err(GoaError::input(format!("incidence order {t} not supported (use 2 or 3)")));
    }
    if t == 3 && n > 6 {
        return Err(GoaError::input(format!("order-3 enumeration needs n <= 6, got {n}")));
    }
    let regions = 1usize << t;
    let mut comps = Vec::new();
    compositions(n, regions, &mut Vec::new(), &mut comps);
    let mut out: Vec<IncidenceFunction> = comps
        .into_iter()
        .map(|counts| {
            // μ(J) = number of elements in regions L ⊇ J.
            let values = (0..regions)
                .map(|j| (0..regions).filter(|l| l & j == j).map(|l| counts[l]).sum())
                .collect();
            IncidenceFunction { n, order: t, values }
        })
        .collect();
    out.sort();
    Ok(out)
}

/// `E_μ: p_{S1} ⊗ p_{S2} ↦ sum_{(S1, S2, A) ⊢ μ} p_A` for an order-3 `μ`.
#[derive(Debug, Clone)]
pub struct MuOperator {
    g: GroundSet,
    mu: IncidenceFunction,
}

impl MuOperator {
    pub fn new(g: GroundSet, mu: IncidenceFunction) -> Result<Self> {
        if mu.order != 3 {
            return Err(GoaError::input("E_μ needs an order-3 incidence function"));
        }
        if mu.n != g.n() {
            return Err(GoaError::input("incidence function built for a different ground set"));
        }
        Ok(MuOperator { g, mu })
    }

    pub fn mu(&self) -> &IncidenceFunction {
        &self.mu
    }

    pub fn apply_pair<T: Scalar>(&self, s1: SubsetMask, s2: SubsetMask) -> Poly<T> {
        let mut out = Poly::zero(self.g, Basis::P);
        if s1.len() != self.mu.size(1) || s2.len() != self.mu.size(2) || s1.intersection(s2).len() != self.mu.value(3) {
            return out;
        }
        for a in subsets_of_size(self.g.n(), self.mu.size(3)) {
            if realizes(&[s1, s2, a], &self.mu) {
                out.coeffs_mut()[a.index()] = T::one();
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct Com2Report {
    pub n: usize,
    pub mu_count: usize,
    pub expected_mu_count: u64,
    /// Number of `E_μ` expressed with zero residual.
    pub decomposed: usize,
    /// Composites `F` examined.
    pub composites: usize,
    /// `h(p_A ⊗ p_B) = [A = B] p_A` agrees with `ε^{-1} ∘ m ∘ (ε ⊗ ε)`.
    pub diagonal_map_matches: bool,
    pub first_failure: Option<String>,
}

impl Com2Report {
    pub fn ok(&self) -> bool {
        self.first_failure.is_none()
            && self.diagonal_map_matches
            && self.decomposed == self.mu_count
            && self.mu_count as u64 == self.expected_mu_count
    }
}

fn hadamard<T: Scalar>(a: &Poly<T>, b: &Poly<T>) -> Poly<T> {
    let coeffs = a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| x.clone() * y.clone()).collect();
    Poly::from_coeffs(a.ground(), Basis::P, coeffs).expect("same length")
}

/// Values of a bilinear map on all `(S1, S2)` with `|S1| = a1`, `|S2| = a2`,
/// flattened as `[pair][target mask]`.
fn tabulate<T: Scalar>(
    g: GroundSet,
    a1: usize,
    a2: usize,
    mut f: impl FnMut(SubsetMask, SubsetMask) -> Poly<T>,
) -> Vec<T> {
    let mut out = Vec::new();
    for s1 in subsets_of_size(g.n(), a1) {
        for s2 in subsets_of_size(g.n(), a2) {
            out.extend(f(s1, s2).into_coeffs());
        }
    }
    out
}

/// Expresses every order-3 `E_μ` through composites
/// `F = E_{k,a3,r3} ∘ h ∘ (E_{a1,k,r1} ⊗ E_{a2,k,r2})` and checks the residual.
pub fn verify_com2_decomposition<T: Scalar>(g: GroundSet) -> Result<Com2Report> {
    let n = g.n();
    if n > 3 {
        return Err(GoaError::input(format!("order-3 decomposition check needs n <= 3, got {n}")));
    }
    let all = enumerate_incidence_functions(g, 3)?;
    let mut report = Com2Report {
        n,
        mu_count: all.len(),
        expected_mu_count: incidence_count(n, 3),
        decomposed: 0,
        composites: 0,
        diagonal_map_matches: true,
        first_failure: None,
    };

    let eps = Epsilon::new(g);
    let eps_inv = EpsilonInverse::new(g);
    for a in g.subsets() {
        for b in g.subsets() {
            let prod = LinearMap::<T>::image_of_basis(&eps, a)
                .multiply(&LinearMap::<T>::image_of_basis(&eps, b))?;
            let lhs = eps_inv.apply(&prod)?;
            let rhs = hadamard(&Poly::<T>::monomial(g, a), &Poly::monomial(g, b));
            if !lhs.same_element(&rhs) {
                report.diagonal_map_matches = false;
            }
        }
    }

    for a1 in 0..=n {
        for a2 in 0..=n {
            for a3 in 0..=n {
                let block: Vec<&IncidenceFunction> = all
                    .iter()
                    .filter(|mu| mu.size(1) == a1 && mu.size(2) == a2 && mu.size(3) == a3)
                    .collect();
                if block.is_empty() {
                    continue;
                }
                let reps: Vec<Vec<SubsetMask>> = block.iter().map(|mu| mu.representative()).collect();
                let mut basis = EchelonBasis::<T>::new(block.len());
                let mut tables: Vec<Vec<T>> = Vec::new();
                for k in 0..=n {
                    for r1 in 0..=a1.min(k) {
                        for r2 in 0..=a2.min(k) {
                            for r3 in 0..=a3.min(k) {
                                let e1 = Eklr::new(g, a1 as i64, k as i64, r1 as i64)?;
                                let e2 = Eklr::new(g, a2 as i64, k as i64, r2 as i64)?;
                                let e3 = Eklr::new(g, k as i64, a3 as i64, r3 as i64)?;
                                if !(e1.is_admissible() && e2.is_admissible() && e3.is_admissible()) {
                                    continue;
                                }
                                report.composites += 1;
                                let table = tabulate::<T>(g, a1, a2, |s1, s2| {
                                    let u = e1.image_of_basis(s1);
                                    let v = e2.image_of_basis(s2);
                                    e3.apply(&hadamard(&u, &v)).expect("P basis")
                                });
                                // Coordinates on E_μ read at one realizing tuple per μ.
                                let coords: Vec<T> = reps
                                    .iter()
                                    .map(|rep| {
                                        let (s1, s2, target) = (rep[0], rep[1], rep[2]);
                                        let pairs_before = pair_index(n, a1, a2, s1, s2);
                                        table[pairs_before * g.num_subsets() + target.index()].clone()
                                    })
                                    .collect();
                                basis.insert(&coords);
                                tables.push(table);
                            }
                        }
                    }
                }
                for (idx, mu) in block.iter().enumerate() {
                    let mut target = vec![T::zero(); block.len()];
                    target[idx] = T::one();
                    let Some(combo) = basis.express(&target) else {
                        if report.first_failure.is_none() {
                            report.first_failure = Some(format!("{mu} is outside the span of the composites"));
                        }
                        continue;
                    };
                    let op = MuOperator::new(g, (*mu).clone())?;
                    let mut residual = tabulate::<T>(g, a1, a2, |s1, s2| op.apply_pair(s1, s2));
                    for (c, table) in combo.iter().zip(&tables) {
                        if is_zero(c) {
                            continue;
                        }
                        for (x, y) in residual.iter_mut().zip(table) {
                            *x -= c.clone() * y.clone();
                        }
                    }
                    if residual.iter().all(is_zero) {
                        report.decomposed += 1;
                    } else if report.first_failure.is_none() {
                        report.first_failure = Some(format!("{mu} leaves a nonzero residual"));
                    }
                }
            }
        }
    }
    Ok(report)
}

fn pair_index(n: usize, a1: usize, a2: usize, s1: SubsetMask, s2: SubsetMask) -> usize {
    let firsts = subsets_of_size(n, a1);
    let seconds = subsets_of_size(n, a2);
    let i = firsts.iter().position(|s| *s == s1).expect("size matches");
    let j = seconds.iter().position(|s| *s == s2).expect("size matches");
    i * seconds.len() + j
}

/// `3 dim(F_2)^2` against `dim(F_3)`, i.e. `3 C(n+7,7)^2` vs `C(n+15,15)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionReport {
    pub n: usize,
    pub three_dim_f2_squared: BigInt,
    pub dim_f3: BigInt,
    /// `3 dim(F_2)^2 < dim(F_3)`.
    pub strictly_smaller: bool,
}

pub fn com2_dimension_report(n: usize) -> DimensionReport {
    let d2 = big_binomial(n as u64 + 7, 7);
    let lhs = BigInt::from(3) * &d2 * &d2;
    let d3 = big_binomial(n as u64 + 15, 15);
    DimensionReport { n, strictly_smaller: lhs < d3, three_dim_f2_squared: lhs, dim_f3: d3 }
}

/// Smallest `n` with `3 C(n+7,7)^2 < C(n+15,15)`. The ratio
/// `C(n+15,15) / C(n+7,7)^2` grows with `n`, so doubling then bisection finds it.
pub fn com2_dimension_crossover() -> usize {
    let holds = |n: usize| com2_dimension_report(n).strictly_smaller;
    let mut hi = 1;
    while !holds(hi) {
        hi *= 2;
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn g(n: usize) -> GroundSet {
        GroundSet::new(n).unwrap()
    }

    fn set(e: &[usize]) -> SubsetMask {
        SubsetMask::from_elements(e.iter().copied())
    }

    /// Brute force: collect the incidence functions of all tuples of subsets.
    fn brute_incidence(n: usize, t: usize) -> Vec<IncidenceFunction> {
        let gs = g(n);
        let subsets: Vec<_> = gs.subsets().collect();
        let mut seen = std::collections::BTreeSet::new();
        let mut idx = vec![0usize; t];
        loop {
            let tuple: Vec<_> = idx.iter().map(|&i| subsets[i]).collect();
            seen.insert(IncidenceFunction::of_tuple(n, &tuple));
            let mut pos = 0;
            loop {
                if pos == t {
                    return seen.into_iter().collect();
                }
                idx[pos] += 1;
                if idx[pos] < subsets.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_incidence_functions(g(3), 2).unwrap().len(), 20);
        assert_eq!(enumerate_incidence_functions(g(2), 3).unwrap().len(), 36);
        assert_eq!(enumerate_incidence_functions(g(1), 2).unwrap().len(), 4);
        for n in 1..=5 {
            assert_eq!(enumerate_incidence_functions(g(n), 2).unwrap().len() as u64, incidence_count(n, 2));
            assert_eq!(enumerate_incidence_functions(g(n), 3).unwrap().len() as u64, incidence_count(n, 3));
            assert_eq!(incidence_count(n, 2), binomial(n as u64 + 3, 3));
            assert_eq!(incidence_count(n, 3), binomial(n as u64 + 7, 7));
        }
        assert!(enumerate_incidence_functions(g(3), 4).is_err());
        assert!(enumerate_incidence_functions(g(7), 3).is_err());
    }

    #[test]
    fn enumeration_matches_orbits_of_tuples() {
        for n in 1..=3 {
            for t in 2..=3 {
                assert_eq!(enumerate_incidence_functions(g(n), t).unwrap(), brute_incidence(n, t), "n={n} t={t}");
            }
        }
    }

    #[test]
    fn validity_and_monotonicity() {
        for mu in enumerate_incidence_functions(g(4), 3).unwrap() {
            assert!(mu.is_monotone());
            assert!((0..8).all(|j| mu.mobius(j) >= 0));
            assert!(realizes(&mu.representative(), &mu));
        }
        // |A ∩ B| larger than |A| is not realizable.
        assert!(IncidenceFunction::new(3, 2, vec![3, 1, 2, 2]).is_err());
        assert!(IncidenceFunction::new(3, 2, vec![2, 1, 1, 0]).is_err());
        assert!(IncidenceFunction::new(3, 2, vec![3, 1, 1, 0]).is_ok());
    }

    #[test]
    fn e_mu_examples() {
        let gs = g(3);
        // Diagonal: A = S1 = S2.
        let s = set(&[1, 3]);
        let diag = IncidenceFunction::new(3, 3, vec![3, 2, 2, 2, 2, 2, 2, 2]).unwrap();
        let op = MuOperator::new(gs, diag).unwrap();
        assert_eq!(op.apply_pair::<Q>(s, s), Poly::monomial(gs, s));

        // μ({3}) = 0 forces A = ∅.
        let s1 = set(&[1]);
        let s2 = set(&[2]);
        let empty_a = IncidenceFunction::of_tuple(3, &[s1, s2, SubsetMask::EMPTY]);
        let op = MuOperator::new(gs, empty_a).unwrap();
        assert_eq!(op.apply_pair::<Q>(s1, s2), Poly::one(gs));

        // Brute force over all 8 subsets: |A| = 1, disjoint from both.
        let mu = IncidenceFunction::new(3, 3, vec![3, 1, 1, 0, 1, 0, 0, 0]).unwrap();
        let op = MuOperator::new(gs, mu.clone()).unwrap();
        let mut want = Poly::<Q>::zero(gs, Basis::P);
        for a in gs.subsets() {
            if a.len() == 1 && a.intersection(s1).is_empty() && a.intersection(s2).is_empty() {
                want.coeffs_mut()[a.index()] = Q::from_i64(1);
            }
        }
        assert_eq!(want, Poly::monomial(gs, set(&[3])));
        assert_eq!(op.apply_pair::<Q>(s1, s2), want);

        // Mismatched inputs give zero.
        assert!(op.apply_pair::<Q>(set(&[1, 2]), s2).is_zero());
        let order2 = IncidenceFunction::new(3, 2, vec![3, 1, 1, 0]).unwrap();
        assert!(MuOperator::new(gs, order2).is_err());
    }

    #[test]
    fn order_two_functions_are_the_triples() {
        for n in 1..=6 {
            let mus = enumerate_incidence_functions(g(n), 2).unwrap();
            let mut triples: Vec<_> = mus.iter().map(|m| (m.size(1), m.size(2), m.value(3))).collect();
            triples.sort();
            let mut want = super::super::admissible_triples(n);
            want.sort();
            assert_eq!(triples, want);
        }
    }

    #[test]
    fn com2_small_ground_sets() {
        for n in 1..=2 {
            let rep = verify_com2_decomposition::<Q>(g(n)).unwrap();
            assert!(rep.ok(), "{rep:?}");
        }
        let rep = verify_com2_decomposition::<Q>(g(2)).unwrap();
        assert_eq!(rep.decomposed, 36);
        assert!(verify_com2_decomposition::<Q>(g(4)).is_err());
    }

    #[test]
    fn dimension_comparison_is_exact() {
        // C(27,7) = 888030 and C(35,15) = 3247943160, computed independently.
        let rep = com2_dimension_report(20);
        assert_eq!(rep.dim_f3, BigInt::from(3_247_943_160u64));
        assert_eq!(rep.three_dim_f2_squared, BigInt::from(3u64) * BigInt::from(888_030u64) * BigInt::from(888_030u64));
        assert!(!rep.strictly_smaller);
        let cross = com2_dimension_crossover();
        assert!(com2_dimension_report(cross).strictly_smaller);
        assert!(!com2_dimension_report(cross - 1).strictly_smaller);
        assert!((1..=200).all(|n| !com2_dimension_report(n).strictly_smaller));
    }
}
