//! Derivation, complementation, the down-set operator `l` and its powers, and
//! the idempotent-basis map `ε = C ∘ l^{-1} ∘ C`.

use crate::error::{GoaError, Result};
use crate::matrix::Matrix;
use crate::poly::{Basis, Poly};
use crate::scalar::{factorial, int_pow, Scalar};
use crate::subset::{GroundSet, SubsetMask};

use super::LinearMap;

/// `∂(p_A) = sum_{i in A} p_{A \ i}`.
#[derive(Debug, Clone, Copy)]
pub struct Derivation {
    g: GroundSet,
}

impl Derivation {
    pub fn new(g: GroundSet) -> Self {
        Derivation { g }
    }
}

impl<T: Scalar> LinearMap<T> for Derivation {
    fn ground(&self) -> GroundSet {
        self.g
    }

    fn image_of_basis(&self, a: SubsetMask) -> Poly<T> {
        let mut p = Poly::zero(self.g, Basis::P);
        for i in a.elements() {
            p.coeffs_mut()[a.without(i).index()] += T::one();
        }
        p
    }

    fn apply(&self, p: &Poly<T>) -> Result<Poly<T>> {
        p.require_basis(Basis::P)?;
        let mut out = Poly::zero(self.g, Basis::P);
        let dst = out.coeffs_mut();
        for (a, c) in p.terms() {
            for i in a.elements() {
                dst[a.without(i).index()] += c.clone();
            }
        }
        Ok(out)
    }
}

/// `C(p_A) = p_{Ω \ A}`.
#[derive(Debug, Clone, Copy)]
pub struct Complementation {
    g: GroundSet,
}

impl Complementation {
    pub fn new(g: GroundSet) -> Self {
        Complementation { g }
    }
}

impl<T: Scalar> LinearMap<T> for Complementation {
    fn ground(&self) -> GroundSet {
        self.g
    }

    fn image_of_basis(&self, a: SubsetMask) -> Poly<T> {
        Poly::monomial(self.g, self.g.complement(a))
    }

    fn apply(&self, p: &Poly<T>) -> Result<Poly<T>> {
        p.require_basis(Basis::P)?;
        let full = self.g.full().0 as usize;
        let src = p.coeffs();
        let coeffs = (0..src.len()).map(|b| src[b ^ full].clone()).collect();
        Poly::from_coeffs(self.g, Basis::P, coeffs)
    }
}

/// `l^m = sum_k m^k / k! ∂^k` for a nonzero integer `m`.
#[derive(Debug, Clone, Copy)]
pub struct EllPower {
    g: GroundSet,
    m: i64,
}

impl EllPower {
    pub fn new(g: GroundSet, m: i64) -> Result<Self> {
        if m == 0 {
            return Err(GoaError::input("power of l must be a nonzero integer"));
        }
        Ok(EllPower { g, m })
    }

    pub fn exponent(&self) -> i64 {
        self.m
    }
}

impl<T: Scalar> LinearMap<T> for EllPower {
    fn ground(&self) -> GroundSet {
        self.g
    }

    fn image_of_basis(&self, a: SubsetMask) -> Poly<T> {
        self.apply(&Poly::monomial(self.g, a)).expect("P-basis input")
    }

    fn apply(&self, p: &Poly<T>) -> Result<Poly<T>> {
        p.require_basis(Basis::P)?;
        let d = Derivation::new(self.g);
        let mut out = p.clone();
        let mut term = p.clone();
        for k in 1..=self.g.n() {
            term = d.apply(&term)?;
            if term.is_zero() {
                break;
            }
            let c = int_pow::<T>(self.m, k) / factorial::<T>(k);
            out.add_scaled(&c, &term)?;
        }
        Ok(out)
    }
}

/// `ε = C ∘ l^{-1} ∘ C`; maps `p_A` to the idempotent `ε_A` written in monomials.
#[derive(Debug, Clone, Copy)]
pub struct Epsilon {
    g: GroundSet,
}

impl Epsilon {
    pub fn new(g: GroundSet) -> Self {
        Epsilon { g }
    }
}

impl<T: Scalar> LinearMap<T> for Epsilon {
    fn ground(&self) -> GroundSet {
        self.g
    }

    fn image_of_basis(&self, a: SubsetMask) -> Poly<T> {
        self.apply(&Poly::monomial(self.g, a)).expect("P-basis input")
    }

    fn apply(&self, p: &Poly<T>) -> Result<Poly<T>> {
        let c = Complementation::new(self.g);
        let linv = EllPower::new(self.g, -1)?;
        c.apply(&linv.apply(&c.apply(p)?)?)
    }
}

/// `ε^{-1} = C ∘ l ∘ C`.
#[derive(Debug, Clone, Copy)]
pub struct EpsilonInverse {
    g: GroundSet,
}

impl EpsilonInverse {
    pub fn new(g: GroundSet) -> Self {
        EpsilonInverse { g }
    }
}

impl<T: Scalar> LinearMap<T> for EpsilonInverse {
    fn ground(&self) -> GroundSet {
        self.g
    }

    fn image_of_basis(&self, a: SubsetMask) -> Poly<T> {
        self.apply(&Poly::monomial(self.g, a)).expect("P-basis input")
    }

    fn apply(&self, p: &Poly<T>) -> Result<Poly<T>> {
        let c = Complementation::new(self.g);
        let l = EllPower::new(self.g, 1)?;
        c.apply(&l.apply(&c.apply(p)?)?)
    }
}

pub fn derivation<T: Scalar>(p: &Poly<T>) -> Result<Poly<T>> {
    Derivation::new(p.ground()).apply(p)
}

pub fn complementation<T: Scalar>(p: &Poly<T>) -> Result<Poly<T>> {
    Complementation::new(p.ground()).apply(p)
}

pub fn ell_power<T: Scalar>(m: i64, p: &Poly<T>) -> Result<Poly<T>> {
    EllPower::new(p.ground(), m)?.apply(p)
}

pub fn epsilon_map<T: Scalar>(p: &Poly<T>) -> Result<Poly<T>> {
    Epsilon::new(p.ground()).apply(p)
}

pub fn epsilon_inverse<T: Scalar>(p: &Poly<T>) -> Result<Poly<T>> {
    EpsilonInverse::new(p.ground()).apply(p)
}

/// The rationals `a_1..a_{n+1}` with `∂ = sum_r a_r l^r`, from the Vandermonde
/// system `sum_r a_r r^k = [k = 1]`, `k = 0..n`.
pub fn vandermonde_coeffs<T: Scalar>(g: GroundSet) -> Result<Vec<T>> {
    let n = g.n();
    let system = Matrix::from_fn(n + 1, n + 1, |k, r| int_pow::<T>(r as i64 + 1, k));
    let rhs: Vec<T> = (0..=n).map(|k| if k == 1 { T::one() } else { T::zero() }).collect();
    system.solve(&rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::OperatorMatrix;
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

    fn random_poly(n: usize) -> impl Strategy<Value = Poly<Q>> {
        proptest::collection::vec((-6i64..7, 1i64..4), 1usize << n).prop_map(move |v| {
            Poly::from_coeffs(g(n), Basis::P, v.into_iter().map(|(a, b)| Q::from_ratio(a, b)).collect()).unwrap()
        })
    }

    #[test]
    fn derivation_examples() {
        let gs = g(3);
        assert_eq!(derivation(&p(gs, &[(1, &[1, 2])])).unwrap(), p(gs, &[(1, &[1]), (1, &[2])]));
        assert!(derivation(&Poly::<Q>::one(gs)).unwrap().is_zero());
        assert_eq!(
            derivation(&p(gs, &[(1, &[1, 2, 3])])).unwrap(),
            p(gs, &[(1, &[1, 2]), (1, &[1, 3]), (1, &[2, 3])])
        );
        let eps = Poly::<Q>::basis_vector(gs, Basis::Eps, SubsetMask::EMPTY);
        assert!(derivation(&eps).is_err());
    }

    #[test]
    fn worked_table_for_the_two_cycle_orbit_algebra() {
        // ∂ and C on the basis {1, x1+x2, x3, x1x2, x1x3+x2x3, x1x2x3}.
        let gs = g(3);
        let rows: Vec<(Poly<Q>, Poly<Q>, Poly<Q>)> = vec![
            (p(gs, &[(1, &[])]), Poly::zero(gs, Basis::P), p(gs, &[(1, &[1, 2, 3])])),
            (p(gs, &[(1, &[1]), (1, &[2])]), p(gs, &[(2, &[])]), p(gs, &[(1, &[1, 3]), (1, &[2, 3])])),
            (p(gs, &[(1, &[3])]), p(gs, &[(1, &[])]), p(gs, &[(1, &[1, 2])])),
            (p(gs, &[(1, &[1, 2])]), p(gs, &[(1, &[1]), (1, &[2])]), p(gs, &[(1, &[3])])),
            (
                p(gs, &[(1, &[1, 3]), (1, &[2, 3])]),
                p(gs, &[(1, &[1]), (1, &[2]), (2, &[3])]),
                p(gs, &[(1, &[1]), (1, &[2])]),
            ),
            (
                p(gs, &[(1, &[1, 2, 3])]),
                p(gs, &[(1, &[1, 2]), (1, &[1, 3]), (1, &[2, 3])]),
                p(gs, &[(1, &[])]),
            ),
        ];
        for (src, d, c) in rows {
            assert_eq!(derivation(&src).unwrap(), d);
            assert_eq!(complementation(&src).unwrap(), c);
        }
    }

    #[test]
    fn complementation_examples() {
        let gs = g(3);
        assert_eq!(complementation(&Poly::<Q>::one(gs)).unwrap(), p(gs, &[(1, &[1, 2, 3])]));
        assert_eq!(
            complementation(&p(gs, &[(1, &[1]), (1, &[2])])).unwrap(),
            p(gs, &[(1, &[1, 3]), (1, &[2, 3])])
        );
    }

    #[test]
    fn ell_power_examples() {
        let gs = g(2);
        assert_eq!(
            ell_power(1, &p(gs, &[(1, &[1, 2])])).unwrap(),
            p(gs, &[(1, &[]), (1, &[1]), (1, &[2]), (1, &[1, 2])])
        );
        assert_eq!(ell_power(2, &p(gs, &[(1, &[1])])).unwrap(), p(gs, &[(1, &[1]), (2, &[])]));
        assert!(ell_power(0, &p(gs, &[(1, &[1])])).is_err());
    }

    #[test]
    fn ell_power_matches_closed_form() {
        // l^m(p_A) = sum_{B ⊆ A} m^{|A|-|B|} p_B
        let gs = g(5);
        for m in [-3i64, -1, 1, 2, 4] {
            let op = EllPower::new(gs, m).unwrap();
            for a in gs.subsets() {
                let mut want = Poly::<Q>::zero(gs, Basis::P);
                for b in a.submasks() {
                    want.coeffs_mut()[b.index()] = int_pow(m, a.len() - b.len());
                }
                assert_eq!(op.image_of_basis(a), want);
            }
        }
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon_map(&p(g(2), &[(1, &[1, 2])])).unwrap(), p(g(2), &[(1, &[1, 2])]));
        assert_eq!(epsilon_map(&Poly::<Q>::one(g(1))).unwrap(), p(g(1), &[(1, &[]), (-1, &[1])]));
    }

    #[test]
    fn epsilon_agrees_with_alternating_superset_formula() {
        for n in 1..=6 {
            let gs = g(n);
            for a in gs.subsets() {
                let via_ops = Epsilon::new(gs).image_of_basis(a);
                let via_basis: Poly<Q> = Poly::basis_vector(gs, Basis::Eps, a).change_basis(Basis::P);
                assert_eq!(via_ops, via_basis);
            }
        }
    }

    #[test]
    fn vandermonde_small_cases() {
        let a = vandermonde_coeffs::<Q>(g(1)).unwrap();
        assert_eq!(a, vec![q(-1), q(1)]);
        for n in 1..=8 {
            let a = vandermonde_coeffs::<Q>(g(n)).unwrap();
            assert_eq!(a.iter().cloned().fold(q(0), |x, y| x + y), q(0));
            let weighted = a.iter().enumerate().fold(q(0), |x, (r, y)| x + y.clone() * q(r as i64 + 1));
            assert_eq!(weighted, q(1));
        }
    }

    #[test]
    fn derivation_is_a_combination_of_powers_of_l() {
        for n in 1..=6 {
            let gs = g(n);
            let a = vandermonde_coeffs::<Q>(gs).unwrap();
            let mats: Vec<OperatorMatrix<Q>> = (1..=n + 1)
                .map(|r| EllPower::new(gs, r as i64).unwrap().to_matrix().unwrap())
                .collect();
            let terms: Vec<(Q, &OperatorMatrix<Q>)> = a.iter().cloned().zip(mats.iter()).collect();
            let combo = OperatorMatrix::linear_combination(gs, &terms);
            let d: OperatorMatrix<Q> = Derivation::new(gs).to_matrix().unwrap();
            assert!(combo.approx_eq(&d), "n = {n}");
        }
    }

    proptest! {
        #[test]
        fn l_inverse_round_trip(x in random_poly(5)) {
            prop_assert_eq!(ell_power(1, &ell_power(-1, &x).unwrap()).unwrap(), x.clone());
            prop_assert_eq!(epsilon_inverse(&epsilon_map(&x).unwrap()).unwrap(), x.clone());
            prop_assert_eq!(complementation(&complementation(&x).unwrap()).unwrap(), x);
        }

        #[test]
        fn maps_are_linear(x in random_poly(4), y in random_poly(4), s in -5i64..6) {
            let alpha = Q::from_i64(s);
            let mut comb = x.scale(&alpha);
            comb.add_scaled(&Q::from_i64(1), &y).unwrap();
            let d = Derivation::new(g(4));
            let mut want = d.apply(&x).unwrap().scale(&alpha);
            want.add_scaled(&Q::from_i64(1), &d.apply(&y).unwrap()).unwrap();
            prop_assert_eq!(d.apply(&comb).unwrap(), want);
        }
    }
}
