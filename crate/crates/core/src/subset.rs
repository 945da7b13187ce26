//! Ground sets and subsets as bit masks.
//!
//! Element `i` of `{1..n}` is bit `i - 1`. Labels are 1-based everywhere a
//! subset is shown to a user.

use std::fmt;

use crate::error::{GoaError, Result};

/// Largest ground set supported by vector-level operations.
pub const MAX_VECTOR_N: usize = 20;
/// Largest ground set for which an operator matrix may be materialized.
pub const MAX_MATRIX_N: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundSet {
    n: usize,
}

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_VECTOR_N {
            return Err(GoaError::input(format!(
                "ground set size {n} outside 1..={MAX_VECTOR_N}"
            )));
        }
        Ok(GroundSet { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of subsets, `2^n`.
    pub fn num_subsets(&self) -> usize {
        1usize << self.n
    }

    pub fn full(&self) -> SubsetMask {
        SubsetMask(((1u64 << self.n) - 1) as u32)
    }

    pub fn contains(&self, a: SubsetMask) -> bool {
        (a.0 as u64) < (1u64 << self.n)
    }

    pub fn check(&self, a: SubsetMask) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(GoaError::input(format!("subset {a} not inside a ground set of size {}", self.n)))
        }
    }

    pub fn require_matrix_size(&self) -> Result<()> {
        if self.n > MAX_MATRIX_N {
            return Err(GoaError::input(format!(
                "operator matrices need n <= {MAX_MATRIX_N}, got {}",
                self.n
            )));
        }
        Ok(())
    }

    /// All subsets in increasing mask order.
    pub fn subsets(&self) -> impl Iterator<Item = SubsetMask> {
        (0..self.num_subsets() as u32).map(SubsetMask)
    }

    /// All `k`-subsets, in strictly increasing numeric order.
    pub fn enumerate_by_size(&self, k: usize) -> Result<Vec<SubsetMask>> {
        if k > self.n {
            return Err(GoaError::input(format!("size {k} exceeds n = {}", self.n)));
        }
        Ok(subsets_of_size(self.n, k))
    }

    pub fn complement(&self, a: SubsetMask) -> SubsetMask {
        SubsetMask(!a.0 & self.full().0)
    }
}

/// All `k`-subsets of an `n`-set without validation (Gosper's hack).
pub(crate) fn subsets_of_size(n: usize, k: usize) -> Vec<SubsetMask> {
    if k == 0 {
        return vec![SubsetMask::EMPTY];
    }
    if k > n {
        return Vec::new();
    }
    let limit = 1u64 << n;
    let mut out = Vec::new();
    let mut v: u64 = (1u64 << k) - 1;
    while v < limit {
        out.push(SubsetMask(v as u32));
        let t = v | (v - 1);
        v = (t + 1) | (((!t & (t + 1)) - 1) >> (v.trailing_zeros() + 1));
    }
    out
}

/// A subset of `{1..n}`; bit `i-1` set iff `i` is a member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SubsetMask(pub u32);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    /// Builds a mask from 1-based element labels.
    pub fn from_elements<I: IntoIterator<Item = usize>>(elems: I) -> Self {
        let mut bits = 0u32;
        for e in elems {
            debug_assert!((1..=32).contains(&e));
            bits |= 1 << (e - 1);
        }
        SubsetMask(bits)
    }

    pub fn bits(&self) -> u32 {
        self.0
    }

    pub fn index(&self) -> usize {
        self.0 as usize
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn contains(&self, elem: usize) -> bool {
        elem >= 1 && self.0 & (1 << (elem - 1)) != 0
    }

    pub fn is_subset_of(&self, other: SubsetMask) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 | other.0)
    }

    pub fn intersection(self, other: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 & other.0)
    }

    pub fn without(self, elem: usize) -> SubsetMask {
        SubsetMask(self.0 & !(1 << (elem - 1)))
    }

    pub fn with(self, elem: usize) -> SubsetMask {
        SubsetMask(self.0 | (1 << (elem - 1)))
    }

    /// 1-based members in increasing order.
    pub fn elements(&self) -> impl Iterator<Item = usize> + '_ {
        let bits = self.0;
        (0..32).filter(move |i| bits & (1 << i) != 0).map(|i| i + 1)
    }

    /// All subsets of `self`, including the empty set and `self`.
    pub fn submasks(&self) -> Submasks {
        Submasks { full: self.0, next: Some(self.0) }
    }

    /// Parses the space-separated 1-based syntax, or `-` for the empty set.
    pub fn parse(text: &str, g: GroundSet) -> Result<Self> {
        let text = text.trim();
        if text == "-" {
            return Ok(SubsetMask::EMPTY);
        }
        if text.is_empty() {
            return Err(GoaError::input("empty subset text (use `-` for the empty set)"));
        }
        let mut bits = 0u32;
        let mut last = 0usize;
        for tok in text.split_whitespace() {
            let e: usize = tok
                .parse()
                .map_err(|_| GoaError::input(format!("bad element `{tok}`")))?;
            if e == 0 || e > g.n() {
                return Err(GoaError::input(format!("element {e} outside 1..={}", g.n())));
            }
            if e <= last {
                return Err(GoaError::input(format!(
                    "elements must be strictly increasing, got {e} after {last}"
                )));
            }
            last = e;
            bits |= 1 << (e - 1);
        }
        Ok(SubsetMask(bits))
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "-");
        }
        let mut first = true;
        for e in self.elements() {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// Iterator over submasks in decreasing numeric order.
pub struct Submasks {
    full: u32,
    next: Option<u32>,
}

impl Iterator for Submasks {
    type Item = SubsetMask;

    fn next(&mut self) -> Option<SubsetMask> {
        let cur = self.next?;
        self.next = if cur == 0 { None } else { Some((cur - 1) & self.full) };
        Some(SubsetMask(cur))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::binomial;

    fn g(n: usize) -> GroundSet {
        GroundSet::new(n).unwrap()
    }

    fn set(e: &[usize]) -> SubsetMask {
        SubsetMask::from_elements(e.iter().copied())
    }

    #[test]
    fn enumerate_small_cases() {
        assert_eq!(g(3).enumerate_by_size(0).unwrap(), vec![SubsetMask::EMPTY]);
        assert_eq!(
            g(3).enumerate_by_size(2).unwrap(),
            vec![set(&[1, 2]), set(&[1, 3]), set(&[2, 3])]
        );
        assert_eq!(g(3).enumerate_by_size(3).unwrap(), vec![set(&[1, 2, 3])]);
        assert!(g(3).enumerate_by_size(4).is_err());
    }

    #[test]
    fn enumeration_counts_and_order() {
        for n in 1..=12 {
            for k in 0..=n {
                let v = g(n).enumerate_by_size(k).unwrap();
                assert_eq!(v.len() as u64, binomial(n as u64, k as u64));
                assert!(v.windows(2).all(|w| w[0] < w[1]));
                assert!(v.iter().all(|a| a.len() == k));
            }
        }
    }

    #[test]
    fn complement_examples() {
        assert_eq!(g(3).complement(set(&[3])), set(&[1, 2]));
        assert_eq!(g(3).complement(SubsetMask::EMPTY), set(&[1, 2, 3]));
        assert_eq!(g(3).complement(set(&[1, 2, 3])), SubsetMask::EMPTY);
    }

    #[test]
    fn complement_is_involution_exhaustively() {
        for n in 1..=12 {
            let gs = g(n);
            for a in gs.subsets() {
                let c = gs.complement(a);
                assert_eq!(gs.complement(c), a);
                assert_eq!(c.len(), n - a.len());
            }
        }
    }

    #[test]
    fn parse_and_display() {
        let gs = g(8);
        assert_eq!(SubsetMask::parse("1 3 5 7", gs).unwrap(), set(&[1, 3, 5, 7]));
        assert_eq!(SubsetMask::parse("-", gs).unwrap(), SubsetMask::EMPTY);
        assert_eq!(set(&[2, 4]).to_string(), "2 4");
        assert_eq!(SubsetMask::EMPTY.to_string(), "-");
        assert!(SubsetMask::parse("3 1", gs).is_err());
        assert!(SubsetMask::parse("9", gs).is_err());
        assert!(SubsetMask::parse("", gs).is_err());
        assert!(SubsetMask::parse("x", gs).is_err());
    }

    #[test]
    fn submasks_cover_powerset_of_mask() {
        let a = set(&[1, 3, 4]);
        let subs: Vec<_> = a.submasks().collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|s| s.is_subset_of(a)));
        assert!(GroundSet::new(0).is_err());
        assert!(GroundSet::new(21).is_err());
    }
}
