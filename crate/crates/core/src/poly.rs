//! The quotient algebra of multilinear polynomials, `R[x_1..x_n] / (x_i^2 - x_i)`.
//!
//! A [`Poly`] is a dense coefficient vector indexed by subset masks, tagged
//! with the basis it is expressed in: monomials `p_A = prod_{i in A} x_i`
//! ([`Basis::P`]) or the idempotents `ε_A` with `ε_A(B) = [A = B]`
//! ([`Basis::Eps`]). Arithmetic never converts bases implicitly.

use std::fmt;

use crate::error::{GoaError, Result};
use crate::scalar::{is_zero, Scalar};
use crate::subset::{GroundSet, SubsetMask};
use crate::zeta;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    /// Monomials `p_A`.
    P,
    /// Evaluation idempotents `ε_A`.
    Eps,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::P => write!(f, "P"),
            Basis::Eps => write!(f, "EPS"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Poly<T> {
    g: GroundSet,
    basis: Basis,
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    pub fn zero(g: GroundSet, basis: Basis) -> Self {
        Poly { g, basis, coeffs: vec![T::zero(); g.num_subsets()] }
    }

    /// `p_A` or `ε_A` depending on `basis`.
    pub fn basis_vector(g: GroundSet, basis: Basis, a: SubsetMask) -> Self {
        let mut p = Self::zero(g, basis);
        p.coeffs[a.index()] = T::one();
        p
    }

    pub fn monomial(g: GroundSet, a: SubsetMask) -> Self {
        Self::basis_vector(g, Basis::P, a)
    }

    /// The constant polynomial `1 = p_∅`.
    pub fn one(g: GroundSet) -> Self {
        Self::monomial(g, SubsetMask::EMPTY)
    }

    pub fn from_coeffs(g: GroundSet, basis: Basis, coeffs: Vec<T>) -> Result<Self> {
        if coeffs.len() != g.num_subsets() {
            return Err(GoaError::input(format!(
                "expected {} coefficients, got {}",
                g.num_subsets(),
                coeffs.len()
            )));
        }
        Ok(Poly { g, basis, coeffs })
    }

    /// `sum_{A in set} p_A` (or `ε_A`).
    pub fn indicator_sum<I: IntoIterator<Item = SubsetMask>>(g: GroundSet, basis: Basis, set: I) -> Self {
        let mut p = Self::zero(g, basis);
        for a in set {
            p.coeffs[a.index()] += T::one();
        }
        p
    }

    pub fn ground(&self) -> GroundSet {
        self.g
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [T] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn coeff(&self, a: SubsetMask) -> &T {
        &self.coeffs[a.index()]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(is_zero)
    }

    /// Nonzero terms as `(mask, coefficient)` in increasing mask order.
    pub fn terms(&self) -> impl Iterator<Item = (SubsetMask, &T)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !is_zero(*c))
            .map(|(i, c)| (SubsetMask(i as u32), c))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.g != other.g {
            return Err(GoaError::input(format!(
                "ground sets differ: n = {} vs n = {}",
                self.g.n(),
                other.g.n()
            )));
        }
        if self.basis != other.basis {
            return Err(GoaError::input(format!(
                "bases differ: {} vs {} (convert explicitly)",
                self.basis, other.basis
            )));
        }
        Ok(())
    }

    pub fn require_basis(&self, basis: Basis) -> Result<()> {
        if self.basis != basis {
            return Err(GoaError::input(format!(
                "polynomial is in basis {}, expected {basis}",
                self.basis
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (c, d) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *c += d.clone();
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (c, d) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *c -= d.clone();
        }
        Ok(out)
    }

    /// `self += alpha * other`.
    pub fn add_scaled(&mut self, alpha: &T, other: &Self) -> Result<()> {
        self.check_compatible(other)?;
        if is_zero(alpha) {
            return Ok(());
        }
        for (c, d) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !is_zero(d) {
                *c += alpha.clone() * d.clone();
            }
        }
        Ok(())
    }

    pub fn scale(&self, alpha: &T) -> Self {
        Poly {
            g: self.g,
            basis: self.basis,
            coeffs: self.coeffs.iter().map(|c| alpha.clone() * c.clone()).collect(),
        }
    }

    /// Product in the algebra. In the `P` basis this is the bilinear extension of
    /// `p_A · p_B = p_{A ∪ B}`; in the `EPS` basis it is coefficient-wise.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        match self.basis {
            Basis::Eps => Ok(Poly {
                g: self.g,
                basis: Basis::Eps,
                coeffs: self
                    .coeffs
                    .iter()
                    .zip(&other.coeffs)
                    .map(|(a, b)| a.clone() * b.clone())
                    .collect(),
            }),
            Basis::P => {
                // Union product: pointwise in the evaluation domain.
                let mut f = self.coeffs.clone();
                let mut h = other.coeffs.clone();
                zeta::subset_sum(&mut f);
                zeta::subset_sum(&mut h);
                for (x, y) in f.iter_mut().zip(h) {
                    *x *= y;
                }
                zeta::subset_mobius(&mut f);
                Ok(Poly { g: self.g, basis: Basis::P, coeffs: f })
            }
        }
    }

    /// Value at the subset `b`: linear extension of `p_A(B) = [A ⊆ B]` or
    /// `ε_A(B) = [A = B]`.
    pub fn evaluate(&self, b: SubsetMask) -> T {
        match self.basis {
            Basis::Eps => self.coeffs[b.index()].clone(),
            Basis::P => b
                .submasks()
                .fold(T::zero(), |acc, a| acc + self.coeffs[a.index()].clone()),
        }
    }

    /// Values at every subset, indexed by mask.
    pub fn evaluations(&self) -> Vec<T> {
        match self.basis {
            Basis::Eps => self.coeffs.clone(),
            Basis::P => {
                let mut f = self.coeffs.clone();
                zeta::subset_sum(&mut f);
                f
            }
        }
    }

    /// Re-expresses the polynomial in `target`.
    ///
    /// `EPS -> P` uses `ε_A = sum_{B ⊇ A} (-1)^{|B|-|A|} p_B`, and `P -> EPS`
    /// uses `p_A = sum_{B ⊇ A} ε_B`.
    pub fn change_basis(&self, target: Basis) -> Self {
        if self.basis == target {
            return self.clone();
        }
        let mut c = self.coeffs.clone();
        match target {
            Basis::Eps => zeta::subset_sum(&mut c),
            Basis::P => zeta::subset_mobius(&mut c),
        }
        Poly { g: self.g, basis: target, coeffs: c }
    }

    /// `θ(f) = sum_A f(A) ε_A`, the inverse of evaluation.
    pub fn from_function<F: FnMut(SubsetMask) -> T>(g: GroundSet, mut f: F) -> Self {
        Poly { g, basis: Basis::Eps, coeffs: g.subsets().map(&mut f).collect() }
    }

    /// Equality of the underlying algebra elements regardless of basis tags.
    pub fn same_element(&self, other: &Self) -> bool {
        if self.g != other.g {
            return false;
        }
        let other = other.change_basis(self.basis);
        self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a.approx_eq(b))
    }

    /// Canonical text form: `basis P|EPS`, then one `coeff * {subset}` line per
    /// nonzero term ordered by (size, mask).
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl<T: Scalar> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "basis {}", self.basis)?;
        let mut terms: Vec<_> = self.terms().collect();
        terms.sort_by_key(|(a, _)| (a.len(), *a));
        for (a, c) in terms {
            writeln!(f, "{c} * {{{a}}}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    type Q = BigRational;

    fn g(n: usize) -> GroundSet {
        GroundSet::new(n).unwrap()
    }

    fn set(e: &[usize]) -> SubsetMask {
        SubsetMask::from_elements(e.iter().copied())
    }

    fn q(v: i64) -> Q {
        Q::from_i64(v)
    }

    fn p(gs: GroundSet, terms: &[(i64, &[usize])]) -> Poly<Q> {
        let mut out = Poly::zero(gs, Basis::P);
        for (c, e) in terms {
            out.coeffs_mut()[set(e).index()] += q(*c);
        }
        out
    }

    /// O(4^n) bilinear expansion of the union product.
    fn naive_union_product(a: &Poly<Q>, b: &Poly<Q>) -> Poly<Q> {
        let mut out = Poly::zero(a.ground(), Basis::P);
        for (x, cx) in a.terms() {
            for (y, cy) in b.terms() {
                out.coeffs_mut()[x.union(y).index()] += cx.clone() * cy.clone();
            }
        }
        out
    }

    fn rational_poly(n: usize, basis: Basis) -> impl Strategy<Value = Poly<Q>> {
        proptest::collection::vec((-9i64..10, 1i64..5), 1usize << n).prop_map(move |v| {
            let coeffs = v.into_iter().map(|(a, b)| Q::from_ratio(a, b)).collect();
            Poly::from_coeffs(g(n), basis, coeffs).unwrap()
        })
    }

    #[test]
    fn multiply_examples() {
        let gs = g(3);
        let s = p(gs, &[(1, &[1]), (1, &[2])]);
        let sq = s.multiply(&s).unwrap();
        assert_eq!(sq, p(gs, &[(1, &[1]), (1, &[2]), (2, &[1, 2])]));

        let a = Poly::<Q>::monomial(gs, set(&[1]));
        let b = Poly::<Q>::monomial(gs, set(&[1, 2]));
        assert_eq!(a.multiply(&b).unwrap(), b);

        let e1 = Poly::<Q>::basis_vector(gs, Basis::Eps, set(&[1]));
        let e2 = Poly::<Q>::basis_vector(gs, Basis::Eps, set(&[2]));
        assert!(e1.multiply(&e2).unwrap().is_zero());
        assert_eq!(e1.multiply(&e1).unwrap(), e1);
    }

    #[test]
    fn mixed_inputs_are_rejected() {
        let a = Poly::<Q>::one(g(2));
        let b = Poly::<Q>::one(g(3));
        assert!(a.multiply(&b).is_err());
        let e = Poly::<Q>::basis_vector(g(2), Basis::Eps, SubsetMask::EMPTY);
        assert!(a.multiply(&e).is_err());
        assert!(a.add(&e).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let gs = g(3);
        assert_eq!(Poly::<Q>::monomial(gs, set(&[1, 2])).evaluate(set(&[1, 2, 3])), q(1));
        assert_eq!(Poly::<Q>::basis_vector(gs, Basis::Eps, set(&[1])).evaluate(set(&[1, 2])), q(0));
        assert_eq!(p(gs, &[(1, &[1]), (1, &[2])]).evaluate(set(&[2, 3])), q(1));
    }

    #[test]
    fn change_basis_examples() {
        let e = Poly::<Q>::basis_vector(g(1), Basis::Eps, SubsetMask::EMPTY).change_basis(Basis::P);
        assert_eq!(e, p(g(1), &[(1, &[]), (-1, &[1])]));

        let x1 = Poly::<Q>::monomial(g(2), set(&[1])).change_basis(Basis::Eps);
        let mut want = Poly::<Q>::zero(g(2), Basis::Eps);
        want.coeffs_mut()[set(&[1]).index()] = q(1);
        want.coeffs_mut()[set(&[1, 2]).index()] = q(1);
        assert_eq!(x1, want);
    }

    #[test]
    fn from_function_examples() {
        let gs = g(2);
        let all_ones = Poly::from_function(gs, |_| q(1));
        assert_eq!(all_ones.change_basis(Basis::P), Poly::one(gs));
        let ind = Poly::from_function(gs, |a| if a == set(&[1]) { q(1) } else { q(0) });
        assert_eq!(ind, Poly::basis_vector(gs, Basis::Eps, set(&[1])));
        assert!(Poly::from_function(gs, |_| q(0)).is_zero());
    }

    #[test]
    fn p_and_eps_products_agree_on_basis_vectors() {
        for n in 1..=5 {
            let gs = g(n);
            for a in gs.subsets() {
                for b in gs.subsets() {
                    let pa = Poly::<Q>::monomial(gs, a);
                    let pb = Poly::<Q>::monomial(gs, b);
                    let via_p = pa.multiply(&pb).unwrap();
                    let via_eps = pa
                        .change_basis(Basis::Eps)
                        .multiply(&pb.change_basis(Basis::Eps))
                        .unwrap()
                        .change_basis(Basis::P);
                    assert_eq!(via_p, via_eps);
                    assert_eq!(via_p, Poly::monomial(gs, a.union(b)));
                }
            }
        }
    }

    #[test]
    fn vanishing_everywhere_means_zero() {
        // Build p with a nonzero top coefficient and check some evaluation is nonzero.
        for n in 1..=5 {
            let gs = g(n);
            for top in gs.subsets() {
                let mut poly = Poly::<Q>::zero(gs, Basis::P);
                for a in top.submasks() {
                    poly.coeffs_mut()[a.index()] = q(a.len() as i64 - 2);
                }
                poly.coeffs_mut()[top.index()] = q(3);
                assert!(poly.evaluations().iter().any(|v| *v != q(0)));
            }
        }
    }

    #[test]
    fn text_format_orders_by_size_then_mask() {
        let gs = g(3);
        let poly = p(gs, &[(2, &[1, 2]), (1, &[3]), (-1, &[]), (1, &[1])]);
        assert_eq!(poly.to_text(), "basis P\n-1 * {-}\n1 * {1}\n1 * {3}\n2 * {1 2}\n");
    }

    #[test]
    fn generic_field_f64_matches_rational() {
        let gs = g(3);
        let a: Poly<f64> = Poly::from_coeffs(gs, Basis::P, (0..8).map(|i| i as f64 - 3.0).collect()).unwrap();
        let sq = a.multiply(&a).unwrap();
        let aq: Poly<Q> = Poly::from_coeffs(gs, Basis::P, (0..8).map(|i| q(i - 3)).collect()).unwrap();
        let sq_q = aq.multiply(&aq).unwrap();
        for (x, y) in sq.coeffs().iter().zip(sq_q.coeffs()) {
            assert_eq!(Q::from_i64(*x as i64), *y);
        }
    }

    proptest! {
        #[test]
        fn product_matches_naive_expansion(a in rational_poly(4, Basis::P), b in rational_poly(4, Basis::P)) {
            prop_assert_eq!(a.multiply(&b).unwrap(), naive_union_product(&a, &b));
        }

        #[test]
        fn evaluation_is_multiplicative(a in rational_poly(5, Basis::P), b in rational_poly(5, Basis::P)) {
            let ab = a.multiply(&b).unwrap();
            for s in g(5).subsets() {
                prop_assert_eq!(ab.evaluate(s), a.evaluate(s) * b.evaluate(s));
            }
        }

        #[test]
        fn theta_inverts_evaluation(a in rational_poly(6, Basis::P)) {
            let back = Poly::from_function(g(6), |s| a.evaluate(s));
            prop_assert!(back.same_element(&a));
            prop_assert_eq!(back.change_basis(Basis::P), a.clone());
        }

        #[test]
        fn basis_round_trip(a in rational_poly(6, Basis::Eps)) {
            prop_assert_eq!(a.change_basis(Basis::P).change_basis(Basis::Eps), a);
        }
    }
}
