//! The intersection-stratified operators `E_{k,l,r}` (a basis of the
//! `S_n`-commutant, i.e. the Terwilliger algebra of the hypercube) and a
//! constructive check that `∂` and `C` generate all of them.

use std::collections::BTreeMap;

use crate::error::{GoaError, Result};
use crate::poly::{Basis, Poly};
use crate::scalar::{binomial, factorial, Scalar};
use crate::subset::{subsets_of_size, GroundSet, SubsetMask};

use super::{Complementation, Derivation, LinearMap, OperatorMatrix};

/// `E_{k,l,r}: p_A ↦ sum_{|B| = l, |A ∩ B| = r} p_B` when `|A| = k`, else 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Eklr {
    g: GroundSet,
    pub k: usize,
    pub l: usize,
    pub r: usize,
    admissible: bool,
}

impl Eklr {
    /// Inadmissible triples (`r > k`, `r > l` or `k + l - r > n`) give the zero
    /// operator with [`Eklr::is_admissible`] false.
    pub fn new(g: GroundSet, k: i64, l: i64, r: i64) -> Result<Self> {
        if k < 0 || l < 0 || r < 0 {
            return Err(GoaError::input(format!("E_{{{k},{l},{r}}} needs nonnegative indices")));
        }
        let (k, l, r) = (k as usize, l as usize, r as usize);
        let admissible = r <= k && r <= l && k + l <= g.n() + r;
        Ok(Eklr { g, k, l, r, admissible })
    }

    pub fn is_admissible(&self) -> bool {
        self.admissible
    }

    /// `id_k = E_{k,k,k}`.
    pub fn id(g: GroundSet, k: usize) -> Self {
        Eklr::new(g, k as i64, k as i64, k as i64).expect("nonnegative")
    }
}

impl<T: Scalar> LinearMap<T> for Eklr {
    fn ground(&self) -> GroundSet {
        self.g
    }

    fn image_of_basis(&self, a: SubsetMask) -> Poly<T> {
        let mut p = Poly::zero(self.g, Basis::P);
        if !self.admissible || a.len() != self.k {
            return p;
        }
        for b in subsets_of_size(self.g.n(), self.l) {
            if a.intersection(b).len() == self.r {
                p.coeffs_mut()[b.index()] = T::one();
            }
        }
        p
    }
}

/// All admissible `(k, l, r)` for a ground set of size `n`.
pub fn admissible_triples(n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for k in 0..=n {
        for l in 0..=n {
            for r in 0..=k.min(l) {
                if k + l <= n + r {
                    out.push((k, l, r));
                }
            }
        }
    }
    out
}

/// Multiplicities in `E_{k-1,k,t} ∘ ∂ = (k - t) E_{k,k,t} + (t + 1) E_{k,k,t+1}`.
pub fn derivcomp_coefficients(k: usize, t: usize) -> (usize, usize) {
    (k - t, t + 1)
}

#[derive(Debug, Clone, Default)]
pub struct TerwilligerReport {
    pub n: usize,
    /// Number of admissible triples.
    pub dimension: usize,
    /// `C(n+3, 3)`.
    pub expected_dimension: u64,
    /// Triples rebuilt from `∂` and `C` and found equal to the direct operator.
    pub reconstructed: usize,
    /// `∂^{n-l} C ∂^n C = n!(n-l)! E_{0,l,0}` for every `l`.
    pub base_normalization_holds: bool,
    /// `E_{0,0,0} ∘ ∂^l = l! E_{l,0,0}` for every `l`.
    pub base_down_step_holds: bool,
    /// `∂^l ∘ E_{0,0,0} = l! E_{l,0,0}` as written with the opposite
    /// composition order; holds only for `l = 0`.
    pub base_down_step_reversed_holds: bool,
    /// `∂^{n-2k} C = (n-2k)! sum_r E_{r,2k-r,0}` for every `1 <= k <= n/2`.
    pub middle_sum_holds: bool,
    /// `E_{k-1,k,t} ∘ ∂ = (k-t) E_{k,k,t} + (t+1) E_{k,k,t+1}` for all steps.
    pub derivcomp_weighted_holds: bool,
    /// The same with both multiplicities equal to one.
    pub derivcomp_unit_holds: bool,
    /// Steps `(k, t)` where the unit-multiplicity form fails.
    pub derivcomp_unit_failures: Vec<(usize, usize)>,
    /// The two triangular systems (left and right `id`) agree wherever both apply.
    pub bascom_sides_agree: bool,
    /// Triples finished with `id_u = C id_{n-u} C` for `u > n/2`.
    pub completed_by_conjugation: usize,
    /// `k > n/2` with `E_{k,k,0} = 0` confirmed.
    pub ekk0_zero: Vec<usize>,
    /// `E_{r,r+1,r}` injective on `r`-sets for every `r < n/2`.
    pub injective_up: bool,
    /// `E_{r+1,r,r}` onto the `r`-sets for every `r < n/2`.
    pub surjective_down: bool,
    /// `E_{r,r+1,r}^T = E_{r+1,r,r}` for every `r`.
    pub transpose_duality: bool,
    /// `sum_t (-1)^{k-1-t} E_{k-1,k,t} ∘ ∂ = id_k` for `k > n/2`, literal signs.
    pub alternating_unit_holds: bool,
    /// A left inverse of `∂` on `k`-sets built from the weighted recursion, `k > n/2`.
    pub alternating_weighted_holds: bool,
    /// First failing triple or identity, if any.
    pub first_failure: Option<String>,
}

impl TerwilligerReport {
    /// True when every construction step reproduced the direct operators.
    /// The unit-multiplicity forms are informational and do not count.
    pub fn ok(&self) -> bool {
        self.first_failure.is_none()
            && self.reconstructed == self.dimension
            && self.dimension as u64 == self.expected_dimension
            && self.base_normalization_holds
            && self.base_down_step_holds
            && self.middle_sum_holds
            && self.derivcomp_weighted_holds
            && self.bascom_sides_agree
            && self.injective_up
            && self.surjective_down
            && self.transpose_duality
            && self.alternating_weighted_holds
    }
}

struct Builder<T: Scalar> {
    g: GroundSet,
    n: usize,
    dpow: Vec<OperatorMatrix<T>>,
    comp: OperatorMatrix<T>,
    built: BTreeMap<(usize, usize, usize), OperatorMatrix<T>>,
    report: TerwilligerReport,
}

impl<T: Scalar> Builder<T> {
    fn direct(&self, k: usize, l: usize, r: usize) -> OperatorMatrix<T> {
        Eklr::new(self.g, k as i64, l as i64, r as i64)
            .and_then(|e| LinearMap::<T>::to_matrix(&e))
            .expect("n checked")
    }

    fn fail(&mut self, what: String) {
        if self.report.first_failure.is_none() {
            self.report.first_failure = Some(what);
        }
    }

    /// Records a reconstructed operator after comparing it with the direct one.
    fn accept(&mut self, k: usize, l: usize, r: usize, m: OperatorMatrix<T>) {
        let admissible = r <= k.min(l) && k + l <= self.n + r;
        let direct = self.direct(k, l, r);
        if !m.approx_eq(&direct) {
            self.fail(format!("E_{{{k},{l},{r}}} reconstruction differs from the direct operator"));
            return;
        }
        if admissible && !self.built.contains_key(&(k, l, r)) {
            self.report.reconstructed += 1;
        }
        self.built.insert((k, l, r), m);
    }

    fn get(&self, k: usize, l: usize, r: usize) -> OperatorMatrix<T> {
        if let Some(m) = self.built.get(&(k, l, r)) {
            return m.clone();
        }
        // Inadmissible triples are zero by definition.
        assert!(!(r <= k.min(l) && k + l <= self.n + r), "E_{{{k},{l},{r}}} requested before construction");
        OperatorMatrix::zero(self.g)
    }

    fn inv_factorial(k: usize) -> T {
        T::one() / factorial::<T>(k)
    }

    fn base_step(&mut self) {
        let n = self.n;
        let c = self.comp.clone();
        let top = self.dpow[n].compose(&c);
        let top = c.compose(&top);
        let mut normalization = true;
        for l in 0..=n {
            let x = self.dpow[n - l].compose(&top);
            let scale = factorial::<T>(n) * factorial::<T>(n - l);
            let want = self.direct(0, l, 0).scale(&scale);
            if !x.approx_eq(&want) {
                normalization = false;
                self.fail(format!("base normalization fails at l = {l}"));
            }
            self.accept(0, l, 0, x.scale(&(T::one() / scale)));
        }
        self.report.base_normalization_holds = normalization;

        let e000 = self.get(0, 0, 0);
        let mut down = true;
        let mut reversed = true;
        for l in 0..=n {
            let y = e000.compose(&self.dpow[l]);
            let want = self.direct(l, 0, 0).scale(&factorial::<T>(l));
            if !y.approx_eq(&want) {
                down = false;
                self.fail(format!("E_000 ∘ ∂^{l} != {l}! E_{{{l},0,0}}"));
            }
            if !self.dpow[l].compose(&e000).approx_eq(&want) {
                reversed = false;
            }
            self.accept(l, 0, 0, y.scale(&Self::inv_factorial(l)));
        }
        self.report.base_down_step_holds = down;
        self.report.base_down_step_reversed_holds = reversed;
    }

    fn induction_step(&mut self, k: usize) {
        let n = self.n;
        // E_{k,k,0} from ∂^{n-2k} ∘ C.
        let s = self.dpow[n - 2 * k].compose(&self.comp);
        let mut want = OperatorMatrix::zero(self.g);
        for r in 0..=2 * k {
            want = want.add(&self.direct(r, 2 * k - r, 0));
        }
        if !s.approx_eq(&want.scale(&factorial::<T>(n - 2 * k))) {
            self.report.middle_sum_holds = false;
            self.fail(format!("∂^{} ∘ C stratification fails at k = {k}", n - 2 * k));
        }
        let mut ekk0 = s.scale(&Self::inv_factorial(n - 2 * k));
        for r in 0..=2 * k {
            if r != k {
                ekk0 = ekk0.sub(&self.get(r, 2 * k - r, 0));
            }
        }
        self.accept(k, k, 0, ekk0);

        // E_{k,k,t+1} from E_{k-1,k,t} ∘ ∂.
        for t in 0..k {
            let lhs = self.get(k - 1, k, t).compose(&self.dpow[1]);
            let unit = self.direct(k, k, t).add(&self.direct(k, k, t + 1));
            if !lhs.approx_eq(&unit) {
                self.report.derivcomp_unit_holds = false;
                self.report.derivcomp_unit_failures.push((k, t));
            }
            let (a, b) = derivcomp_coefficients(k, t);
            let weighted = OperatorMatrix::linear_combination(
                self.g,
                &[(T::from_i64(a as i64), &self.direct(k, k, t)), (T::from_i64(b as i64), &self.direct(k, k, t + 1))],
            );
            if !lhs.approx_eq(&weighted) {
                self.report.derivcomp_weighted_holds = false;
                self.fail(format!("weighted derivation step fails at k = {k}, t = {t}"));
            }
            let prev = self.get(k, k, t);
            let next = lhs.sub(&prev.scale(&T::from_i64(a as i64))).scale(&(T::one() / T::from_i64(b as i64)));
            self.accept(k, k, t + 1, next);
        }

        for other in k..=n {
            self.triangular(k, other, true);
            if other != k {
                self.triangular(other, k, false);
            }
        }
    }

    /// `C ∂^{v-r} C ∂^{u-r} id_u = (u-r)!(v-r)! sum_{w >= r} C(w, r) E_{u,v,w}`
    /// (or with `id_v` on the left), solved from `r = min(u, v)` downwards.
    fn triangular(&mut self, u: usize, v: usize, left_id_on_u: bool) {
        let id_u = self.built.get(&(u, u, u)).cloned();
        let id_v = self.built.get(&(v, v, v)).cloned();
        let primary = if left_id_on_u { id_u.clone() } else { id_v.clone() };
        let Some(primary) = primary else {
            self.fail(format!("no id available for u = {u}, v = {v}"));
            return;
        };
        let top = u.min(v);
        let mut solved: BTreeMap<usize, OperatorMatrix<T>> = BTreeMap::new();
        for r in (0..=top).rev() {
            let core = self.comp.compose(&self.dpow[v - r].compose(&self.comp.compose(&self.dpow[u - r])));
            let x = if left_id_on_u { core.compose(&primary) } else { primary.compose(&core) };
            if let (Some(iu), Some(iv)) = (&id_u, &id_v) {
                let other = if left_id_on_u { iv.compose(&core) } else { core.compose(iu) };
                if !x.approx_eq(&other) {
                    self.report.bascom_sides_agree = false;
                    self.fail(format!("left/right id forms differ at u = {u}, v = {v}, r = {r}"));
                }
            }
            let mut e = x.scale(&(Self::inv_factorial(u - r) * Self::inv_factorial(v - r)));
            for (w, m) in &solved {
                e = e.sub(&m.scale(&T::from_i64(binomial(*w as u64, r as u64) as i64)));
            }
            solved.insert(r, e.clone());
            self.accept(u, v, r, e);
        }
    }
}

/// Rebuilds every `E_{k,l,r}` from `∂` and `C` and checks the side identities.
pub fn verify_terwilliger_generation<T: Scalar>(g: GroundSet) -> Result<TerwilligerReport> {
    let n = g.n();
    if n > 8 {
        return Err(GoaError::input(format!("generation check needs n <= 8, got {n}")));
    }
    let d: OperatorMatrix<T> = Derivation::new(g).to_matrix()?;
    let mut dpow = vec![OperatorMatrix::identity(g)];
    for i in 1..=n {
        dpow.push(d.compose(&dpow[i - 1]));
    }
    let comp: OperatorMatrix<T> = Complementation::new(g).to_matrix()?;
    let mut b = Builder {
        g,
        n,
        dpow,
        comp,
        built: BTreeMap::new(),
        report: TerwilligerReport {
            n,
            dimension: admissible_triples(n).len(),
            expected_dimension: binomial(n as u64 + 3, 3),
            middle_sum_holds: true,
            derivcomp_weighted_holds: true,
            derivcomp_unit_holds: true,
            bascom_sides_agree: true,
            ..Default::default()
        },
    };

    b.base_step();
    for k in 1..=n / 2 {
        b.induction_step(k);
    }
    // Both indices above n/2: take id_u = C id_{n-u} C.
    for u in n / 2 + 1..=n {
        if !b.built.contains_key(&(u, u, u)) {
            let conj = b.comp.compose(&b.get(n - u, n - u, n - u).compose(&b.comp));
            b.accept(u, u, u, conj);
        }
    }
    for u in n / 2 + 1..=n {
        for v in n / 2 + 1..=n {
            let before = b.report.reconstructed;
            b.triangular(u, v, true);
            b.report.completed_by_conjugation += b.report.reconstructed - before;
        }
    }
    // The conjugated ids themselves.
    b.report.completed_by_conjugation += (n / 2 + 1..=n).filter(|u| b.built.contains_key(&(*u, *u, *u))).count();

    let missing: Vec<_> = admissible_triples(n).into_iter().filter(|t| !b.built.contains_key(t)).collect();
    if let Some((k, l, r)) = missing.first() {
        b.fail(format!("E_{{{k},{l},{r}}} was never constructed"));
    }

    for k in n / 2 + 1..=n {
        if b.get(k, k, 0).is_zero() && b.direct(k, k, 0).is_zero() {
            b.report.ekk0_zero.push(k);
        } else {
            b.fail(format!("E_{{{k},{k},0}} is not zero"));
        }
    }

    b.report.injective_up = true;
    b.report.surjective_down = true;
    b.report.transpose_duality = true;
    for r in 0..n {
        let up = b.direct(r, r + 1, r);
        let down = b.direct(r + 1, r, r);
        if up.transpose() != down {
            b.report.transpose_duality = false;
            b.fail(format!("E_{{{r},{},{r}}} transpose differs from E_{{{},{r},{r}}}", r + 1, r + 1));
        }
        if 2 * r < n {
            if !up.is_injective_on_size(r) {
                b.report.injective_up = false;
                b.fail(format!("E_{{{r},{},{r}}} is not injective", r + 1));
            }
            if down.block_rank(r + 1, r) != binomial(n as u64, r as u64) as usize {
                b.report.surjective_down = false;
                b.fail(format!("E_{{{},{r},{r}}} is not surjective", r + 1));
            }
        }
    }

    b.report.alternating_unit_holds = true;
    b.report.alternating_weighted_holds = true;
    for k in n / 2 + 1..=n {
        let id_k = b.direct(k, k, k);
        let comps: Vec<OperatorMatrix<T>> = (0..k).map(|t| b.direct(k - 1, k, t).compose(&b.dpow[1])).collect();
        let unit: Vec<(T, &OperatorMatrix<T>)> = comps
            .iter()
            .enumerate()
            .map(|(t, m)| (if (k - 1 - t) % 2 == 0 { T::one() } else { -T::one() }, m))
            .collect();
        if !OperatorMatrix::linear_combination(g, &unit).approx_eq(&id_k) {
            b.report.alternating_unit_holds = false;
        }
        let weights = left_inverse_weights::<T>(k);
        let weighted: Vec<(T, &OperatorMatrix<T>)> = weights.into_iter().zip(comps.iter()).collect();
        if !OperatorMatrix::linear_combination(g, &weighted).approx_eq(&id_k) {
            b.report.alternating_weighted_holds = false;
            b.fail(format!("weighted left inverse of ∂ fails on {k}-sets"));
        }
    }

    Ok(b.report)
}

/// Weights `c_t` with `sum_t c_t E_{k-1,k,t} ∘ ∂ = id_k + c_0 k E_{k,k,0}`:
/// `c_{k-1} = 1/k`, `c_{t-1} = -c_t (k - t) / t`.
fn left_inverse_weights<T: Scalar>(k: usize) -> Vec<T> {
    let mut c = vec![T::zero(); k];
    c[k - 1] = T::one() / T::from_i64(k as i64);
    for t in (1..k).rev() {
        c[t - 1] = -(c[t].clone() * T::from_i64((k - t) as i64)) / T::from_i64(t as i64);
    }
    c
}
