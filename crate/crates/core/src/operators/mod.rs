//! Linear operators on the multilinear algebra.
//!
//! Operators act on polynomials in the `P` basis. They are matrix-free
//! ([`LinearMap::image_of_basis`] / [`LinearMap::apply`]) and can be
//! materialized as an [`OperatorMatrix`] for `n <= 10`.

mod incidence;
mod lattice;
mod terwilliger;

pub use incidence::{
    com2_dimension_crossover, com2_dimension_report, enumerate_incidence_functions, incidence_count, realizes, verify_com2_decomposition,
    Com2Report, DimensionReport, IncidenceFunction, MuOperator,
};
pub use lattice::{
    complementation, derivation, ell_power, epsilon_inverse, epsilon_map, vandermonde_coeffs, Complementation,
    Derivation, EllPower, Epsilon, EpsilonInverse,
};
pub use terwilliger::{
    admissible_triples, derivcomp_coefficients, verify_terwilliger_generation, Eklr, TerwilligerReport,
};

use std::fmt;

use crate::error::Result;
use crate::poly::{Basis, Poly};
use crate::scalar::{is_zero, Scalar};
use crate::subset::{GroundSet, SubsetMask};

pub trait LinearMap<T: Scalar> {
    fn ground(&self) -> GroundSet;

    /// Image of the monomial `p_A`, in the `P` basis.
    fn image_of_basis(&self, a: SubsetMask) -> Poly<T>;

    /// Applies the map to a `P`-basis polynomial.
    fn apply(&self, p: &Poly<T>) -> Result<Poly<T>> {
        p.require_basis(Basis::P)?;
        let mut out = Poly::zero(self.ground(), Basis::P);
        for (a, c) in p.terms() {
            out.add_scaled(c, &self.image_of_basis(a))?;
        }
        Ok(out)
    }

    fn to_matrix(&self) -> Result<OperatorMatrix<T>> {
        let g = self.ground();
        g.require_matrix_size()?;
        Ok(OperatorMatrix::from_columns(
            g,
            g.subsets().map(|a| sparse_column(&self.image_of_basis(a))).collect(),
        ))
    }
}

fn sparse_column<T: Scalar>(p: &Poly<T>) -> Vec<(u32, T)> {
    p.terms().map(|(a, c)| (a.0, c.clone())).collect()
}

/// Operator matrix in the monomial basis, stored column-sparse: column `A`
/// holds the nonzero coefficients of the image of `p_A`.
#[derive(Clone, PartialEq)]
pub struct OperatorMatrix<T> {
    g: GroundSet,
    cols: Vec<Vec<(u32, T)>>,
}

impl<T: Scalar> OperatorMatrix<T> {
    pub fn from_columns(g: GroundSet, cols: Vec<Vec<(u32, T)>>) -> Self {
        debug_assert_eq!(cols.len(), g.num_subsets());
        OperatorMatrix { g, cols }
    }

    pub fn zero(g: GroundSet) -> Self {
        OperatorMatrix { g, cols: vec![Vec::new(); g.num_subsets()] }
    }

    pub fn identity(g: GroundSet) -> Self {
        OperatorMatrix { g, cols: (0..g.num_subsets() as u32).map(|i| vec![(i, T::one())]).collect() }
    }

    pub fn ground(&self) -> GroundSet {
        self.g
    }

    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, a: SubsetMask) -> &[(u32, T)] {
        &self.cols[a.index()]
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    /// Entry in row `b`, column `a`: the coefficient of `p_B` in the image of `p_A`.
    pub fn entry(&self, b: SubsetMask, a: SubsetMask) -> T {
        self.cols[a.index()]
            .binary_search_by_key(&b.0, |(r, _)| *r)
            .map(|i| self.cols[a.index()][i].1.clone())
            .unwrap_or_else(|_| T::zero())
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Self {
        let dim = self.dim();
        let mut scratch: Vec<T> = vec![T::zero(); dim];
        let mut touched: Vec<u32> = Vec::new();
        let mut mark = vec![false; dim];
        let cols = inner
            .cols
            .iter()
            .map(|col| {
                for (i, v) in col {
                    for (r, w) in &self.cols[*i as usize] {
                        let ri = *r as usize;
                        if !mark[ri] {
                            mark[ri] = true;
                            touched.push(*r);
                        }
                        scratch[ri] += v.clone() * w.clone();
                    }
                }
                touched.sort_unstable();
                let mut out = Vec::with_capacity(touched.len());
                for r in touched.drain(..) {
                    let ri = r as usize;
                    mark[ri] = false;
                    let val = std::mem::replace(&mut scratch[ri], T::zero());
                    if !is_zero(&val) {
                        out.push((r, val));
                    }
                }
                out
            })
            .collect();
        OperatorMatrix { g: self.g, cols }
    }

    /// `self^k` by repeated composition.
    pub fn power(&self, k: usize) -> Self {
        let mut acc = Self::identity(self.g);
        for _ in 0..k {
            acc = self.compose(&acc);
        }
        acc
    }

    /// `sum_i c_i M_i`.
    pub fn linear_combination(g: GroundSet, terms: &[(T, &Self)]) -> Self {
        let dim = g.num_subsets();
        let mut cols = Vec::with_capacity(dim);
        for j in 0..dim {
            let mut acc: Vec<(u32, T)> = Vec::new();
            for (c, m) in terms {
                if is_zero(c) {
                    continue;
                }
                acc = merge(&acc, &m.cols[j], c);
            }
            cols.push(acc);
        }
        OperatorMatrix { g, cols }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::linear_combination(self.g, &[(T::one(), self), (T::one(), other)])
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::linear_combination(self.g, &[(T::one(), self), (-T::one(), other)])
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::linear_combination(self.g, &[(c.clone(), self)])
    }

    pub fn transpose(&self) -> Self {
        let mut cols: Vec<Vec<(u32, T)>> = vec![Vec::new(); self.dim()];
        for (j, col) in self.cols.iter().enumerate() {
            for (i, v) in col {
                cols[*i as usize].push((j as u32, v.clone()));
            }
        }
        OperatorMatrix { g: self.g, cols }
    }

    /// Exact (or tolerance-aware for floats) matrix equality.
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.g == other.g && self.sub(other).is_zero()
    }

    /// First column where the two matrices differ.
    pub fn first_difference(&self, other: &Self) -> Option<SubsetMask> {
        let d = self.sub(other);
        d.cols.iter().position(|c| !c.is_empty()).map(|i| SubsetMask(i as u32))
    }

    /// Restricted to the columns of `k`-subsets, is the map injective?
    /// Decided by rank over the field.
    pub fn is_injective_on_size(&self, k: usize) -> bool {
        let cols = crate::subset::subsets_of_size(self.g.n(), k);
        let mut basis = crate::matrix::EchelonBasis::new(self.dim());
        cols.iter().all(|a| {
            let mut v = vec![T::zero(); self.dim()];
            for (r, x) in self.column(*a) {
                v[*r as usize] = x.clone();
            }
            basis.insert(&v)
        })
    }

    /// Rank of the block mapping `k`-subsets to `l`-subsets.
    pub fn block_rank(&self, k: usize, l: usize) -> usize {
        let rows = crate::subset::subsets_of_size(self.g.n(), l);
        let mut basis = crate::matrix::EchelonBasis::new(rows.len());
        for a in crate::subset::subsets_of_size(self.g.n(), k) {
            let v: Vec<T> = rows.iter().map(|b| self.entry(*b, a)).collect();
            basis.insert(&v);
        }
        basis.rank()
    }
}

fn merge<T: Scalar>(acc: &[(u32, T)], col: &[(u32, T)], c: &T) -> Vec<(u32, T)> {
    let mut out = Vec::with_capacity(acc.len() + col.len());
    let (mut i, mut j) = (0, 0);
    while i < acc.len() || j < col.len() {
        let take_left = j >= col.len() || (i < acc.len() && acc[i].0 < col[j].0);
        let take_right = i >= acc.len() || (j < col.len() && col[j].0 < acc[i].0);
        if take_left {
            out.push(acc[i].clone());
            i += 1;
        } else if take_right {
            out.push((col[j].0, c.clone() * col[j].1.clone()));
            j += 1;
        } else {
            let v = acc[i].1.clone() + c.clone() * col[j].1.clone();
            if !is_zero(&v) {
                out.push((acc[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl<T: Scalar> LinearMap<T> for OperatorMatrix<T> {
    fn ground(&self) -> GroundSet {
        self.g
    }

    fn image_of_basis(&self, a: SubsetMask) -> Poly<T> {
        let mut p = Poly::zero(self.g, Basis::P);
        for (r, v) in &self.cols[a.index()] {
            p.coeffs_mut()[*r as usize] = v.clone();
        }
        p
    }

    fn to_matrix(&self) -> Result<OperatorMatrix<T>> {
        Ok(self.clone())
    }
}

impl<T: Scalar> fmt::Debug for OperatorMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OperatorMatrix(n = {}, nnz = {})", self.g.n(), self.nnz())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn compose_matches_apply_twice() {
        let g = GroundSet::new(4).unwrap();
        let d = Derivation::new(g).to_matrix().unwrap();
        let c: OperatorMatrix<Q> = Complementation::new(g).to_matrix().unwrap();
        let dc = d.compose(&c);
        for a in g.subsets() {
            let direct = Derivation::new(g).apply(&Complementation::new(g).image_of_basis(a)).unwrap();
            assert_eq!(dc.image_of_basis(a), direct);
        }
        assert!(c.compose(&c).approx_eq(&OperatorMatrix::identity(g)));
        assert_eq!(dc.transpose().transpose(), dc);
    }
}
