//! Partitions of the powerset of `{1..n}` into blocks.
//!
//! A [`Partition`] is always stored canonically: blocks ordered by
//! (cardinality of the smallest member, smallest member mask), members in
//! increasing mask order. Two partitions are equal iff they have the same
//! blocks.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{GoaError, Result};
use crate::poly::{Basis, Poly};
use crate::scalar::Scalar;
use crate::subset::{GroundSet, SubsetMask};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    members: Vec<SubsetMask>,
    size: Option<usize>,
    complement: Option<usize>,
}

impl Block {
    pub fn members(&self) -> &[SubsetMask] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Common cardinality of the members, if they share one.
    pub fn size(&self) -> Option<usize> {
        self.size
    }

    /// Index of the block formed by the complements, if that is a block.
    pub fn complement(&self) -> Option<usize> {
        self.complement
    }

    pub fn first(&self) -> SubsetMask {
        self.members[0]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    g: GroundSet,
    block_of: Vec<u32>,
    blocks: Vec<Block>,
}

impl Partition {
    /// Builds the partition whose classes are the level sets of `label`.
    pub fn from_labels<K: Ord>(g: GroundSet, mut label: impl FnMut(SubsetMask) -> K) -> Self {
        let mut classes: BTreeMap<K, Vec<SubsetMask>> = BTreeMap::new();
        for a in g.subsets() {
            classes.entry(label(a)).or_default().push(a);
        }
        Self::assemble(g, classes.into_values().collect())
    }

    /// Validates that `blocks` are nonempty, disjoint and cover every subset.
    pub fn from_blocks(g: GroundSet, blocks: Vec<Vec<SubsetMask>>) -> Result<Self> {
        let mut seen = vec![false; g.num_subsets()];
        for (i, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(GoaError::input(format!("block {} is empty", i + 1)));
            }
            for &a in block {
                g.check(a)?;
                if std::mem::replace(&mut seen[a.index()], true) {
                    return Err(GoaError::input(format!("subset {{{a}}} appears in more than one block")));
                }
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(GoaError::input(format!(
                "subset {{{}}} is not covered by any block",
                SubsetMask(missing as u32)
            )));
        }
        Ok(Self::assemble(g, blocks))
    }

    fn assemble(g: GroundSet, mut raw: Vec<Vec<SubsetMask>>) -> Self {
        for b in raw.iter_mut() {
            b.sort();
        }
        raw.sort_by_key(|b| (b[0].len(), b[0]));
        let mut block_of = vec![0u32; g.num_subsets()];
        for (i, b) in raw.iter().enumerate() {
            for a in b {
                block_of[a.index()] = i as u32;
            }
        }
        let blocks = raw
            .iter()
            .map(|members| {
                let k = members[0].len();
                let size = members.iter().all(|a| a.len() == k).then_some(k);
                let target = block_of[g.complement(members[0]).index()] as usize;
                let closed = raw[target].len() == members.len()
                    && members.iter().all(|a| block_of[g.complement(*a).index()] as usize == target);
                Block { members: members.clone(), size, complement: closed.then_some(target) }
            })
            .collect();
        Partition { g, block_of, blocks }
    }

    /// Every subset in its own block.
    pub fn singletons(g: GroundSet) -> Self {
        Self::from_labels(g, |a| a)
    }

    /// One block per cardinality: the orbits of the full symmetric group.
    pub fn by_cardinality(g: GroundSet) -> Self {
        Self::from_labels(g, |a| a.len())
    }

    pub fn ground(&self) -> GroundSet {
        self.g
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &Block {
        &self.blocks[i]
    }

    pub fn members(&self, i: usize) -> &[SubsetMask] {
        &self.blocks[i].members
    }

    pub fn block_of(&self, a: SubsetMask) -> usize {
        self.block_of[a.index()] as usize
    }

    /// The block cardinality `♯O_i`; for mixed blocks, that of the first member.
    pub fn cardinality(&self, i: usize) -> usize {
        self.blocks[i].members[0].len()
    }

    pub fn block_labels(&self) -> &[u32] {
        &self.block_of
    }

    /// Does every block of `self` lie inside a block of `coarser`?
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.g == coarser.g
            && self.blocks.iter().all(|b| {
                let target = coarser.block_of(b.members[0]);
                b.members.iter().all(|a| coarser.block_of(*a) == target)
            })
    }

    /// Replaces blocks `i` and `j` by their union. Also returns a warning when
    /// the two blocks have different cardinalities.
    pub fn merge_blocks(&self, i: usize, j: usize) -> Result<(Partition, Option<String>)> {
        if i == j {
            return Err(GoaError::input("cannot merge a block with itself"));
        }
        let s = self.num_blocks();
        if i >= s || j >= s {
            return Err(GoaError::input(format!("block index out of range (partition has {s} blocks)")));
        }
        let warning = (self.blocks[i].size != self.blocks[j].size || self.blocks[i].size.is_none())
            .then(|| format!("merged blocks {i} and {j} do not share a cardinality"));
        let mut raw: Vec<Vec<SubsetMask>> = Vec::with_capacity(s - 1);
        let mut merged = self.blocks[i].members.clone();
        merged.extend_from_slice(&self.blocks[j].members);
        raw.push(merged);
        for (k, b) in self.blocks.iter().enumerate() {
            if k != i && k != j {
                raw.push(b.members.clone());
            }
        }
        Ok((Self::assemble(self.g, raw), warning))
    }

    /// The common refinement of the level sets of the given polynomials:
    /// `A ~ B` iff `p(A) = p(B)` for every `p`.
    pub fn from_polys<T: Scalar>(polys: &[Poly<T>]) -> Result<Partition> {
        let first = polys.first().ok_or_else(|| GoaError::input("need at least one polynomial"))?;
        let g = first.ground();
        if polys.iter().any(|p| p.ground() != g) {
            return Err(GoaError::input("polynomials live on different ground sets"));
        }
        let evals: Vec<Vec<T>> = polys.iter().map(|p| p.evaluations()).collect();
        // Group by the evaluation vector; equality is exact so a linear scan suffices.
        let mut classes: Vec<(usize, Vec<SubsetMask>)> = Vec::new();
        for a in g.subsets() {
            let same = |b: usize| evals.iter().all(|e| e[a.index()] == e[b]);
            match classes.iter_mut().find(|(rep, _)| same(*rep)) {
                Some((_, members)) => members.push(a),
                None => classes.push((a.index(), vec![a])),
            }
        }
        Ok(Self::assemble(g, classes.into_iter().map(|(_, m)| m).collect()))
    }

    /// `p_O = sum_{A in O} p_A` in the `P` basis.
    pub fn block_poly<T: Scalar>(&self, i: usize) -> Poly<T> {
        Poly::indicator_sum(self.g, Basis::P, self.blocks[i].members.iter().copied())
    }

    /// Is `p` (any basis) a combination of the block polynomials? Tested by
    /// constancy of its `ε` coefficients on every block.
    pub fn spans<T: Scalar>(&self, p: &Poly<T>) -> bool {
        let eps = p.change_basis(Basis::Eps);
        self.blocks.iter().all(|b| {
            let c = eps.coeff(b.members[0]);
            b.members.iter().all(|a| eps.coeff(*a) == c)
        })
    }

    /// Coordinates of a `P`-basis element of the span on the block basis:
    /// the `P` coefficient read at each block's first member, after checking
    /// that it is constant on blocks.
    pub fn block_coordinates<T: Scalar>(&self, p: &Poly<T>) -> Option<Vec<T>> {
        if p.basis() != Basis::P {
            return self.block_coordinates(&p.change_basis(Basis::P));
        }
        let mut out = Vec::with_capacity(self.num_blocks());
        for b in &self.blocks {
            let c = p.coeff(b.members[0]);
            if b.members.iter().any(|a| p.coeff(*a) != c) {
                return None;
            }
            out.push(c.clone());
        }
        Some(out)
    }

    /// Parses the block file format (`n <int>` header, one block per line,
    /// members separated by `;`). Errors carry line numbers.
    pub fn parse(text: &str) -> Result<Partition> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let g = parse_header(&mut lines)?;
        let mut blocks = Vec::new();
        for (no, line) in lines {
            let block = line
                .split(';')
                .map(|m| SubsetMask::parse(m, g))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| GoaError::input(format!("line {no}: {}", strip_kind(&e))))?;
            blocks.push(block);
        }
        Self::from_blocks(g, blocks)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

pub(crate) fn parse_header<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>) -> Result<GroundSet> {
    let (no, header) = lines.next().ok_or_else(|| GoaError::input("empty file (expected `n <int>`)"))?;
    let n = header
        .strip_prefix('n')
        .and_then(|rest| rest.trim().parse::<usize>().ok())
        .ok_or_else(|| GoaError::input(format!("line {no}: expected `n <int>`, got `{header}`")))?;
    GroundSet::new(n).map_err(|e| GoaError::input(format!("line {no}: {}", strip_kind(&e))))
}

pub(crate) fn strip_kind(e: &GoaError) -> String {
    match e {
        GoaError::Input(m) | GoaError::Verification(m) => m.clone(),
        other => other.to_string(),
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {}", self.g.n())?;
        for b in &self.blocks {
            let parts: Vec<String> = b.members.iter().map(|a| a.to_string()).collect();
            writeln!(f, "{}", parts.join(" ; "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn g(n: usize) -> GroundSet {
        GroundSet::new(n).unwrap()
    }

    const EXAMPLE: &str = "n 3\n-\n1 ; 2\n3\n1 2\n1 3 ; 2 3\n1 2 3\n";

    #[test]
    fn parse_print_round_trip() {
        let p = Partition::parse(EXAMPLE).unwrap();
        assert_eq!(p.num_blocks(), 6);
        assert_eq!(p.to_text(), EXAMPLE);
        assert_eq!(Partition::parse(&p.to_text()).unwrap(), p);
        let q = Partition::parse("n 2\n-\n1 ; 2\n1 2\n").unwrap();
        assert_eq!(q.num_blocks(), 3);
    }

    #[test]
    fn parse_errors() {
        let missing = Partition::parse("n 2\n-\n1\n1 2\n").unwrap_err();
        assert!(missing.to_string().contains("{2}"), "{missing}");
        assert!(Partition::parse("n 2\n-\n1 ; 1\n2\n1 2\n").is_err());
        let bad = Partition::parse("n 2\n-\n1 ; 3\n").unwrap_err();
        assert!(bad.to_string().contains("line 3"), "{bad}");
        assert!(Partition::parse("m 2\n").is_err());
        assert!(Partition::parse("").is_err());
    }

    #[test]
    fn canonical_order_and_complements() {
        let p = Partition::parse("n 3\n1 2 3\n1 3 ; 2 3\n3\n2 ; 1\n-\n1 2\n").unwrap();
        assert_eq!(p.to_text(), EXAMPLE);
        assert_eq!(p.block(1).complement(), Some(4));
        assert_eq!(p.block(2).complement(), Some(3));
        assert_eq!(p.block(0).complement(), Some(5));
        assert!(p.blocks().iter().all(|b| b.size().is_some()));
    }

    #[test]
    fn merging() {
        let s = Partition::singletons(g(2));
        let (m, warn) = s.merge_blocks(1, 2).unwrap();
        assert!(warn.is_none());
        assert_eq!(m.num_blocks(), 3);
        assert_eq!(m.members(1), &[SubsetMask(1), SubsetMask(2)]);
        let (mixed, warn) = s.merge_blocks(0, 1).unwrap();
        assert!(warn.is_some());
        assert_eq!(mixed.block(0).size(), None);
        assert!(s.merge_blocks(1, 1).is_err());
        assert!(s.refines(&m) && !m.refines(&s));
    }

    #[test]
    fn partition_from_polynomials() {
        let gs = g(3);
        let x = |e: &[usize]| Poly::<Rational>::monomial(gs, SubsetMask::from_elements(e.iter().copied()));
        let polys = vec![
            Poly::one(gs),
            x(&[1]).add(&x(&[2])).unwrap(),
            x(&[3]),
            x(&[1, 2]),
            x(&[1, 3]).add(&x(&[2, 3])).unwrap(),
            x(&[1, 2, 3]),
        ];
        assert_eq!(Partition::from_polys(&polys).unwrap(), Partition::parse(EXAMPLE).unwrap());
        assert_eq!(Partition::from_polys(&[Poly::<Rational>::one(gs)]).unwrap().num_blocks(), 1);
        let eps: Vec<_> = gs.subsets().map(|a| Poly::<Rational>::basis_vector(gs, Basis::Eps, a)).collect();
        assert_eq!(Partition::from_polys(&eps).unwrap(), Partition::singletons(gs));
        assert!(Partition::from_polys::<Rational>(&[]).is_err());
    }

    #[test]
    fn span_membership() {
        let p = Partition::parse(EXAMPLE).unwrap();
        let v: Poly<Rational> = p.block_poly(1);
        assert!(p.spans(&v));
        assert_eq!(p.block_coordinates(&v).unwrap()[1], Rational::from_integer(1.into()));
        let x1 = Poly::<Rational>::monomial(p.ground(), SubsetMask(1));
        assert!(!p.spans(&x1));
        assert!(p.block_coordinates(&x1).is_none());
    }
}
