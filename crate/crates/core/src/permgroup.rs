//! Permutation groups on `{1..n}` given by generators, their action on
//! subsets, orbit partitions of the powerset and setwise stabilizers of
//! partitions.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{GoaError, Result};
use crate::partition::{parse_header, strip_kind, Partition};
use crate::subset::{GroundSet, SubsetMask};

pub const DEFAULT_ELEMENT_CAP: usize = 1_000_000;
/// Largest `n` for which orbit partitions of the powerset are computed.
pub const MAX_ORBIT_N: usize = 16;
/// Largest `n` for stabilizer searches.
pub const MAX_STABILIZER_N: usize = 10;

/// `images[i] = σ(i + 1)`, 1-based values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (1..=n as u8).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &v in &images {
            if v == 0 || v > n || std::mem::replace(&mut seen[v], true) {
                return Err(GoaError::input(format!("{images:?} is not a permutation of 1..={n}")));
            }
        }
        Ok(Permutation { images: images.into_iter().map(|v| v as u8).collect() })
    }

    /// Disjoint cycle notation such as `(1,2)(3,4)`; `()` is the identity.
    pub fn parse(text: &str, g: GroundSet) -> Result<Self> {
        let n = g.n();
        let mut images: Vec<usize> = (1..=n).collect();
        let mut used = vec![false; n + 1];
        let mut rest = text.trim();
        if rest.is_empty() {
            return Err(GoaError::input("empty permutation (use `()` for the identity)"));
        }
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| GoaError::input(format!("expected `(` in `{text}`")))?;
            let close = body.find(')').ok_or_else(|| GoaError::input(format!("unclosed cycle in `{text}`")))?;
            let inner = body[..close].trim();
            rest = body[close + 1..].trim_start();
            if inner.is_empty() {
                continue;
            }
            let mut cycle = Vec::new();
            for tok in inner.split(',') {
                let tok = tok.trim();
                let p: usize = tok
                    .parse()
                    .map_err(|_| GoaError::input(format!("bad point `{tok}` in `{text}`")))?;
                if p == 0 || p > n {
                    return Err(GoaError::input(format!("point {p} outside 1..={n}")));
                }
                if std::mem::replace(&mut used[p], true) {
                    return Err(GoaError::input(format!("point {p} repeated in `{text}`")));
                }
                cycle.push(p);
            }
            for (i, &p) in cycle.iter().enumerate() {
                images[p - 1] = cycle[(i + 1) % cycle.len()];
            }
        }
        Permutation::from_images(images)
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// `σ(i)` for 1-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&v| v as usize).collect()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation { images: other.images.iter().map(|&v| self.images[v as usize - 1]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.n()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v as usize - 1] = i as u8 + 1;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| v as usize == i + 1)
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|(i, &v)| v as usize == i + 1).count()
    }

    /// `{σ(i) : i in A}`.
    pub fn act_on_subset(&self, a: SubsetMask) -> SubsetMask {
        let mut out = 0u32;
        let mut bits = a.0;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            out |= 1 << (self.images[i] - 1);
            bits &= bits - 1;
        }
        SubsetMask(out)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n() + 1];
        let mut out = Vec::new();
        for start in 1..=self.n() {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut p = self.apply(start);
            while p != start {
                seen[p] = true;
                cycle.push(p);
                p = self.apply(p);
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|p| p.to_string()).collect();
            write!(f, "({})", parts.join(","))?;
        }
        Ok(())
    }
}

/// A finite permutation group with its full, sorted element list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermGroup {
    g: GroundSet,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
}

impl PermGroup {
    pub fn trivial(g: GroundSet) -> Self {
        PermGroup { g, generators: Vec::new(), elements: vec![Permutation::identity(g.n())] }
    }

    /// Breadth-first closure of the generators; fails with a resource error
    /// once more than `cap` elements have been found.
    pub fn close_generators(g: GroundSet, gens: Vec<Permutation>, cap: usize) -> Result<Self> {
        if cap == 0 {
            return Err(GoaError::input("element cap must be positive"));
        }
        if let Some(bad) = gens.iter().find(|p| p.n() != g.n()) {
            return Err(GoaError::input(format!("generator {bad} acts on {} points, expected {}", bad.n(), g.n())));
        }
        let id = Permutation::identity(g.n());
        let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
        let mut frontier = vec![id];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for x in &frontier {
                for s in &gens {
                    let y = s.compose(x);
                    if !seen.contains(&y) {
                        if seen.len() >= cap {
                            return Err(GoaError::Resource { what: "group closure".into(), reached: seen.len() });
                        }
                        seen.insert(y.clone());
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        let mut elements: Vec<Permutation> = seen.into_iter().collect();
        elements.sort();
        Ok(PermGroup { g, generators: gens, elements })
    }

    /// Wraps a set of permutations already known to form a group and picks a
    /// small generating set greedily.
    fn from_closed_elements(g: GroundSet, mut elements: Vec<Permutation>) -> Self {
        elements.sort();
        let mut gens: Vec<Permutation> = Vec::new();
        let mut span: BTreeSet<Permutation> = BTreeSet::from([Permutation::identity(g.n())]);
        for e in &elements {
            if span.contains(e) {
                continue;
            }
            gens.push(e.clone());
            let closed = PermGroup::close_generators(g, gens.clone(), elements.len()).expect("subgroup of a group");
            span = closed.elements.into_iter().collect();
            if span.len() == elements.len() {
                break;
            }
        }
        PermGroup { g, generators: gens, elements }
    }

    /// Group file: `n <int>` header then one generator per line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let g = parse_header(&mut lines)?;
        let mut gens = Vec::new();
        for (no, line) in lines {
            let p = Permutation::parse(line, g).map_err(|e| GoaError::input(format!("line {no}: {}", strip_kind(&e))))?;
            gens.push(p);
        }
        PermGroup::close_generators(g, gens, DEFAULT_ELEMENT_CAP)
    }

    pub fn ground(&self) -> GroundSet {
        self.g
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    /// Every non-identity element is fixed-point-free.
    pub fn is_free(&self) -> bool {
        self.elements.iter().all(|p| p.is_identity() || p.fixed_points() == 0)
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().all(|a| self.generators.iter().all(|b| a.compose(b) == b.compose(a)))
    }

    pub fn orbit_of(&self, a: SubsetMask) -> Vec<SubsetMask> {
        let set: BTreeSet<SubsetMask> = self.elements.iter().map(|p| p.act_on_subset(a)).collect();
        set.into_iter().collect()
    }

    /// Partition of all subsets into orbits, via union-find along generator edges.
    pub fn orbit_partition(&self) -> Result<Partition> {
        let n = self.g.n();
        if n > MAX_ORBIT_N {
            return Err(GoaError::input(format!("orbit partition needs n <= {MAX_ORBIT_N}, got {n}")));
        }
        let size = self.g.num_subsets();
        let mut parent: Vec<u32> = (0..size as u32).collect();
        fn find(parent: &mut [u32], mut x: u32) -> u32 {
            while parent[x as usize] != x {
                parent[x as usize] = parent[parent[x as usize] as usize];
                x = parent[x as usize];
            }
            x
        }
        for s in &self.generators {
            for a in 0..size as u32 {
                let b = s.act_on_subset(SubsetMask(a)).0;
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb) as usize] = ra.min(rb);
                }
            }
        }
        Ok(Partition::from_labels(self.g, |a| find(&mut parent, a.0)))
    }
}

impl fmt::Display for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {}", self.g.n())?;
        for s in &self.generators {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

/// All `σ` preserving every block of `p` setwise, by backtracking over
/// point images. A partial map on `{1..m}` is extended only if every subset
/// of `{1..m+1}` containing `m+1` is sent into its own block.
pub fn partition_stabilizer(p: &Partition) -> Result<PermGroup> {
    let g = p.ground();
    let n = g.n();
    if n > MAX_STABILIZER_N {
        return Err(GoaError::input(format!("stabilizer search needs n <= {MAX_STABILIZER_N}, got {n}")));
    }
    struct Search<'a> {
        p: &'a Partition,
        n: usize,
        map: Vec<usize>,
        used: Vec<bool>,
        img: Vec<u32>,
        found: Vec<Permutation>,
    }
    impl Search<'_> {
        fn extend(&mut self, m: usize) {
            if m == self.n {
                self.found.push(Permutation { images: self.map.iter().map(|&v| v as u8).collect() });
                return;
            }
            let low = 1usize << m;
            for v in 1..=self.n {
                if self.used[v] {
                    continue;
                }
                let bit = 1u32 << (v - 1);
                let consistent = (0..low).all(|s| {
                    let image = self.img[s] | bit;
                    self.img[low + s] = image;
                    self.p.block_of(SubsetMask((low + s) as u32)) == self.p.block_of(SubsetMask(image))
                });
                if consistent {
                    self.used[v] = true;
                    self.map.push(v);
                    self.extend(m + 1);
                    self.map.pop();
                    self.used[v] = false;
                }
            }
        }
    }
    let mut search = Search { p, n, map: Vec::new(), used: vec![false; n + 1], img: vec![0; g.num_subsets()], found: Vec::new() };
    search.extend(0);
    Ok(PermGroup::from_closed_elements(g, search.found))
}

/// The same group by scanning all `n!` permutations (`n <= 8`).
pub fn partition_stabilizer_exhaustive(p: &Partition) -> Result<PermGroup> {
    let g = p.ground();
    if g.n() > 8 {
        return Err(GoaError::input("exhaustive stabilizer scan needs n <= 8"));
    }
    let found = all_permutations(g.n())
        .into_iter()
        .filter(|s| g.subsets().all(|a| p.block_of(a) == p.block_of(s.act_on_subset(a))))
        .collect();
    Ok(PermGroup::from_closed_elements(g, found))
}

/// All permutations of `{1..n}` in lexicographic order of images.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut cur: Vec<u8> = (1..=n as u8).collect();
    let mut out = vec![Permutation { images: cur.clone() }];
    loop {
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("pivot exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(Permutation { images: cur.clone() });
    }
}

/// `P` is the orbit partition of some group iff it is the orbit partition of
/// its own stabilizer; the stabilizer is returned as witness.
pub fn is_orbit_partition(p: &Partition) -> Result<(bool, PermGroup)> {
    let h = partition_stabilizer(p)?;
    let orbits = h.orbit_partition()?;
    Ok((&orbits == p, h))
}

/// A random group with one to three generators, each a random permutation of
/// a random subset of the points, so intransitive and small groups are common.
pub fn random_group<R: Rng>(g: GroundSet, rng: &mut R) -> PermGroup {
    let n = g.n();
    let count = rng.gen_range(1..=3);
    let gens = (0..count)
        .map(|_| {
            let mut points: Vec<usize> = (1..=n).collect();
            points.shuffle(rng);
            let support = rng.gen_range(2..=n.max(2)).min(n);
            let moved = &points[..support];
            let mut shuffled = moved.to_vec();
            shuffled.shuffle(rng);
            let mut images: Vec<usize> = (1..=n).collect();
            for (from, to) in moved.iter().zip(&shuffled) {
                images[from - 1] = *to;
            }
            Permutation::from_images(images).expect("bijection")
        })
        .collect();
    PermGroup::close_generators(g, gens, DEFAULT_ELEMENT_CAP).expect("order at most n!")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn g(n: usize) -> GroundSet {
        GroundSet::new(n).unwrap()
    }

    fn perm(text: &str, n: usize) -> Permutation {
        Permutation::parse(text, g(n)).unwrap()
    }

    fn set(e: &[usize]) -> SubsetMask {
        SubsetMask::from_elements(e.iter().copied())
    }

    #[test]
    fn parsing_cycles() {
        assert_eq!(perm("(1,2)(3,4)", 4).images(), vec![2, 1, 4, 3]);
        assert!(perm("()", 3).is_identity());
        let s = perm("(1,3,2,4)(5,7,6,8)", 8);
        assert_eq!(s.images(), vec![3, 4, 2, 1, 7, 8, 6, 5]);
        assert_eq!(s.to_string(), "(1,3,2,4)(5,7,6,8)");
        assert!(Permutation::parse("(1,2,1)", g(3)).is_err());
        assert!(Permutation::parse("(1,9)", g(8)).is_err());
        assert!(Permutation::parse("(1,2", g(3)).is_err());
        assert!(Permutation::parse("1,2)", g(3)).is_err());
        assert!(Permutation::parse("(1)(1,2)", g(3)).is_err());
    }

    #[test]
    fn closure_orders() {
        let gs = g(6);
        let grp = PermGroup::close_generators(gs, vec![perm("(1,2)(3,4)", 6), perm("(1,2)(5,6)", 6)], 100).unwrap();
        assert_eq!(grp.order(), 4);
        assert!(grp.is_abelian());
        assert_eq!(PermGroup::close_generators(g(3), vec![], 10).unwrap().order(), 1);
        let t = PermGroup::close_generators(g(3), vec![perm("(1,2)", 3)], 10).unwrap();
        assert_eq!(t.elements(), &[Permutation::identity(3), perm("(1,2)", 3)]);
        let err = PermGroup::close_generators(g(5), vec![perm("(1,2)", 5), perm("(1,2,3,4,5)", 5)], 50).unwrap_err();
        assert!(matches!(err, GoaError::Resource { .. }));
    }

    #[test]
    fn subset_action() {
        assert_eq!(perm("(1,2)", 3).act_on_subset(set(&[1, 3])), set(&[2, 3]));
        assert_eq!(perm("(1,2)(3,4)", 4).act_on_subset(set(&[1, 4])), set(&[2, 3]));
        assert_eq!(Permutation::identity(4).act_on_subset(set(&[2, 4])), set(&[2, 4]));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let perms = all_permutations(5);
        for _ in 0..200 {
            let s = perms.choose(&mut rng).unwrap();
            let t = perms.choose(&mut rng).unwrap();
            let a = SubsetMask(rng.gen_range(0..32));
            assert_eq!(s.compose(t).act_on_subset(a), s.act_on_subset(t.act_on_subset(a)));
            assert_eq!(s.act_on_subset(a).len(), a.len());
        }
    }

    #[test]
    fn permutation_listing() {
        assert_eq!(all_permutations(4).len(), 24);
        let p = all_permutations(4);
        assert!(p.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn orbit_partitions() {
        let t = PermGroup::close_generators(g(3), vec![perm("(1,2)", 3)], 10).unwrap();
        let want = Partition::parse("n 3\n-\n1 ; 2\n3\n1 2\n1 3 ; 2 3\n1 2 3\n").unwrap();
        assert_eq!(t.orbit_partition().unwrap(), want);
        assert_eq!(PermGroup::trivial(g(4)).orbit_partition().unwrap().num_blocks(), 16);
        let sym = PermGroup::close_generators(g(3), vec![perm("(1,2)", 3), perm("(1,2,3)", 3)], 10).unwrap();
        assert_eq!(sym.orbit_partition().unwrap(), Partition::by_cardinality(g(3)));
    }

    #[test]
    fn orbit_sizes_divide_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let grp = random_group(g(6), &mut rng);
            let orbits = grp.orbit_partition().unwrap();
            for b in orbits.blocks() {
                assert_eq!(grp.order() % b.len(), 0);
                assert!(b.size().is_some());
                assert_eq!(grp.orbit_of(b.first()), b.members());
            }
        }
    }

    #[test]
    fn stabilizers() {
        let ex = Partition::parse("n 3\n-\n1 ; 2\n3\n1 2\n1 3 ; 2 3\n1 2 3\n").unwrap();
        let h = partition_stabilizer(&ex).unwrap();
        assert_eq!(h.order(), 2);
        assert!(h.contains(&perm("(1,2)", 3)));
        assert_eq!(partition_stabilizer(&Partition::by_cardinality(g(4))).unwrap().order(), 24);
        assert_eq!(partition_stabilizer(&Partition::singletons(g(4))).unwrap().order(), 1);
    }

    #[test]
    fn backtracking_matches_exhaustive_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 2..=6 {
            for _ in 0..6 {
                let grp = random_group(g(n), &mut rng);
                let orbits = grp.orbit_partition().unwrap();
                let fast = partition_stabilizer(&orbits).unwrap();
                let slow = partition_stabilizer_exhaustive(&orbits).unwrap();
                assert_eq!(fast.elements(), slow.elements());
                assert!(grp.elements().iter().all(|s| fast.contains(s)));
                assert!(fast.orbit_partition().unwrap().refines(&orbits));
                let (is_orbit, _) = is_orbit_partition(&orbits).unwrap();
                assert!(is_orbit);
            }
        }
    }

    #[test]
    fn generators_regenerate_stabilizer() {
        let h = partition_stabilizer(&Partition::by_cardinality(g(5))).unwrap();
        let again = PermGroup::close_generators(g(5), h.generators().to_vec(), 1000).unwrap();
        assert_eq!(again.elements(), h.elements());
    }

    #[test]
    fn group_file() {
        let grp = PermGroup::parse("# four points\nn 4\n(1,2)(3,4)\n\n(1,3)(2,4)\n").unwrap();
        assert_eq!(grp.order(), 4);
        assert!(grp.is_free());
        let err = PermGroup::parse("n 8\n(1,2)\n(1,9)\n").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        assert!(!PermGroup::parse("n 3\n(1,2)\n").unwrap().is_free());
    }
}
