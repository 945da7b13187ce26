//! Graphs and digraphs on `f` vertices as subsets of a ground set of
//! (ordered or unordered) vertex pairs, with brute-force isomorphism,
//! vertex-deleted decks and hypomorphy classes.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{GoaError, Result};
use crate::partition::Partition;
use crate::permgroup::{all_permutations, is_orbit_partition, PermGroup, Permutation, DEFAULT_ELEMENT_CAP};
use crate::srp::{verify_strongly_regular, SrpReport};
use crate::subset::{GroundSet, SubsetMask};

/// Edge `i` (1-based ground-set element `i + 1`) joins `edges[i].0 -> edges[i].1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeTable {
    pub f: usize,
    pub directed: bool,
    pub edges: Vec<(usize, usize)>,
}

impl EdgeTable {
    pub fn new(f: usize, directed: bool) -> Self {
        let mut edges = Vec::new();
        for u in 1..=f {
            for v in 1..=f {
                if u != v && (directed || u < v) {
                    edges.push((u, v));
                }
            }
        }
        EdgeTable { f, directed, edges }
    }

    pub fn n(&self) -> usize {
        self.edges.len()
    }

    pub fn index_of(&self, u: usize, v: usize) -> usize {
        let key = if self.directed || u < v { (u, v) } else { (v, u) };
        self.edges.iter().position(|e| *e == key).expect("edge in table")
    }

    /// Ground-set permutation induced by a vertex permutation.
    pub fn induced(&self, sigma: &Permutation) -> Permutation {
        let images = self.edges.iter().map(|&(u, v)| self.index_of(sigma.apply(u), sigma.apply(v)) + 1).collect();
        Permutation::from_images(images).expect("vertex permutations act bijectively on edges")
    }

    pub fn describe(&self, g: SubsetMask) -> String {
        let arrow = if self.directed { "->" } else { "-" };
        let parts: Vec<String> = g.elements().map(|e| {
            let (u, v) = self.edges[e - 1];
            format!("{u}{arrow}{v}")
        })
        .collect();
        if parts.is_empty() {
            "(no edges)".into()
        } else {
            parts.join(" ")
        }
    }
}

impl fmt::Display for EdgeTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrow = if self.directed { "->" } else { "-" };
        for (i, (u, v)) in self.edges.iter().enumerate() {
            writeln!(f, "  {}: {u}{arrow}{v}", i + 1)?;
        }
        Ok(())
    }
}

/// Brute-force isomorphism machinery for one vertex count.
struct Family {
    table: EdgeTable,
    induced: Vec<Permutation>,
}

impl Family {
    fn new(f: usize, directed: bool) -> Self {
        let table = EdgeTable::new(f, directed);
        let induced = all_permutations(f).iter().map(|s| table.induced(s)).collect();
        Family { table, induced }
    }

    /// Smallest mask in the isomorphism class.
    fn canonical(&self, g: SubsetMask) -> SubsetMask {
        self.induced.iter().map(|s| s.act_on_subset(g)).min().expect("nonempty group")
    }

    /// `G - v` on vertices `1..f-1`, relabelling vertices above `v` down by one.
    fn delete(&self, g: SubsetMask, v: usize, smaller: &EdgeTable) -> SubsetMask {
        let shift = |x: usize| if x > v { x - 1 } else { x };
        SubsetMask::from_elements(g.elements().filter_map(|e| {
            let (a, b) = self.table.edges[e - 1];
            (a != v && b != v).then(|| smaller.index_of(shift(a), shift(b)) + 1)
        }))
    }
}

/// Two hypomorphic graphs whose counts of subgraphs in one hypomorphy class differ.
#[derive(Debug, Clone)]
pub struct CountWitness {
    pub first: SubsetMask,
    pub second: SubsetMask,
    /// A member of the hypomorphy class being counted.
    pub class_rep: SubsetMask,
    pub first_count: usize,
    pub second_count: usize,
}

#[derive(Debug, Clone)]
pub struct HypomorphyReport {
    pub table: EdgeTable,
    pub graphs: usize,
    pub iso_classes: usize,
    pub hypomorphy_classes: usize,
    /// Hypomorphy classes holding more than one isomorphism class, as lists of
    /// canonical representatives.
    pub nontrivial: Vec<Vec<SubsetMask>>,
    pub witness: Option<CountWitness>,
    pub hypomorphy_partition: Partition,
    pub srp: SrpReport,
}

impl HypomorphyReport {
    pub fn kind(&self) -> &'static str {
        if self.table.directed {
            "digraph"
        } else {
            "graph"
        }
    }
}

/// Exhaustive hypomorphy analysis of all (di)graphs on `f` vertices.
pub fn hypomorphy_search(f: usize, directed: bool) -> Result<HypomorphyReport> {
    let ok = if directed { (2..=4).contains(&f) } else { (2..=5).contains(&f) };
    if !ok {
        return Err(GoaError::input(format!(
            "hypomorphy search supports f in 2..={} for {}",
            if directed { 4 } else { 5 },
            if directed { "digraphs" } else { "graphs" }
        )));
    }
    let fam = Family::new(f, directed);
    let small = Family::new(f - 1, directed);
    let g = GroundSet::new(fam.table.n())?;
    let canon: Vec<SubsetMask> = g.subsets().map(|x| fam.canonical(x)).collect();
    let decks: Vec<Vec<SubsetMask>> = g
        .subsets()
        .map(|x| {
            let mut d: Vec<SubsetMask> =
                (1..=f).map(|v| small.canonical(fam.delete(x, v, &small.table))).collect();
            d.sort();
            d
        })
        .collect();
    let hyp = Partition::from_labels(g, |x| decks[x.index()].clone());
    let iso_classes = canon.iter().collect::<std::collections::BTreeSet<_>>().len();

    let mut nontrivial = Vec::new();
    for b in hyp.blocks() {
        let mut reps: Vec<SubsetMask> = b.members().iter().map(|x| canon[x.index()]).collect();
        reps.sort();
        reps.dedup();
        if reps.len() > 1 {
            nontrivial.push(reps);
        }
    }

    let srp = verify_strongly_regular(&hyp);
    let witness = nontrivial.iter().find_map(|reps| count_witness(&hyp, reps[0], reps[1]));
    Ok(HypomorphyReport {
        table: fam.table,
        graphs: g.num_subsets(),
        iso_classes,
        hypomorphy_classes: hyp.num_blocks(),
        nontrivial,
        witness,
        hypomorphy_partition: hyp,
        srp,
    })
}

fn count_witness(hyp: &Partition, first: SubsetMask, second: SubsetMask) -> Option<CountWitness> {
    let counts = |x: SubsetMask| {
        let mut c: BTreeMap<usize, usize> = BTreeMap::new();
        for s in x.submasks() {
            *c.entry(hyp.block_of(s)).or_default() += 1;
        }
        c
    };
    let (c1, c2) = (counts(first), counts(second));
    (0..hyp.num_blocks()).find_map(|b| {
        let (x, y) = (c1.get(&b).copied().unwrap_or(0), c2.get(&b).copied().unwrap_or(0));
        (x != y).then(|| CountWitness { first, second, class_rep: hyp.members(b)[0], first_count: x, second_count: y })
    })
}

/// The vertex group acting on the pair ground set.
pub fn vertex_group(f: usize, directed: bool) -> Result<PermGroup> {
    let table = EdgeTable::new(f, directed);
    let g = GroundSet::new(table.n())?;
    let gens: Vec<Permutation> = if f < 2 {
        Vec::new()
    } else {
        let t = Permutation::parse("(1,2)", GroundSet::new(f)?)?;
        let c = Permutation::parse(&format!("({})", (1..=f).map(|i| i.to_string()).collect::<Vec<_>>().join(",")), GroundSet::new(f)?)?;
        vec![table.induced(&t), table.induced(&c)]
    };
    PermGroup::close_generators(g, gens, DEFAULT_ELEMENT_CAP)
}

/// Whether the hypomorphy partition is an orbit partition, with the order of
/// its stabilizer (ground sets up to 10 pairs).
pub fn hypomorphy_orbit_status(report: &HypomorphyReport) -> Result<(bool, usize)> {
    let (is_orbit, h) = is_orbit_partition(&report.hypomorphy_partition)?;
    Ok((is_orbit, h.order()))
}

/// `iv(F) · copies(F, G) = sum_v copies(F - w, G - v)` for every graph `F` with
/// an isolated vertex `w` and every `G` on `f` vertices. Copies are counted as
/// edge subsets isomorphic to the pattern on the same vertex set.
pub fn graph_kelly_lemma(f: usize, directed: bool) -> Result<bool> {
    if !(2..=4).contains(&f) {
        return Err(GoaError::input("graph Kelly lemma check supports f in 2..=4"));
    }
    let fam = Family::new(f, directed);
    let small = Family::new(f - 1, directed);
    let n = fam.table.n();
    let isolated = |x: SubsetMask, table: &EdgeTable, v: usize| {
        x.elements().all(|e| {
            let (a, b) = table.edges[e - 1];
            a != v && b != v
        })
    };
    for fm in 0..1u32 << n {
        let pattern = SubsetMask(fm);
        let iv = (1..=f).filter(|&v| isolated(pattern, &fam.table, v)).count();
        if iv == 0 || fam.canonical(pattern) != pattern {
            continue;
        }
        let w = (1..=f).find(|&v| isolated(pattern, &fam.table, v)).expect("isolated vertex");
        let reduced = small.canonical(fam.delete(pattern, w, &small.table));
        for gm in 0..1u32 << n {
            let g = SubsetMask(gm);
            let copies = g.submasks().filter(|s| fam.canonical(*s) == pattern).count();
            let rhs: usize = (1..=f)
                .map(|v| fam.delete(g, v, &small.table).submasks().filter(|s| small.canonical(*s) == reduced).count())
                .sum();
            if iv * copies != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_tables() {
        let t = EdgeTable::new(3, true);
        assert_eq!(t.n(), 6);
        assert_eq!(t.edges[0], (1, 2));
        assert_eq!(EdgeTable::new(5, false).n(), 10);
        let s = Permutation::parse("(1,2)", GroundSet::new(3).unwrap()).unwrap();
        let ind = t.induced(&s);
        // 1->2 becomes 2->1.
        assert_eq!(ind.apply(t.index_of(1, 2) + 1), t.index_of(2, 1) + 1);
    }

    #[test]
    fn iso_class_counts() {
        // Known counts: graphs on 4 vertices 11, on 5 vertices 34; digraphs on 3 vertices 16.
        assert_eq!(hypomorphy_search(4, false).unwrap().iso_classes, 11);
        assert_eq!(hypomorphy_search(5, false).unwrap().iso_classes, 34);
        assert_eq!(hypomorphy_search(3, true).unwrap().iso_classes, 16);
        assert_eq!(vertex_group(4, true).unwrap().order(), 24);
        let orbits = vertex_group(4, false).unwrap().orbit_partition().unwrap();
        assert_eq!(orbits.num_blocks(), 11);
    }

    #[test]
    fn graphs_are_reconstructible_at_small_order() {
        for f in 3..=5 {
            let rep = hypomorphy_search(f, false).unwrap();
            assert!(rep.nontrivial.is_empty(), "f = {f}");
            assert_eq!(rep.hypomorphy_classes, rep.iso_classes);
        }
        // On two vertices the edge and the non-edge share a deck.
        assert_eq!(hypomorphy_search(2, false).unwrap().nontrivial.len(), 1);
    }

    #[test]
    fn kelly_lemma_for_graphs() {
        for f in 2..=4 {
            assert!(graph_kelly_lemma(f, false).unwrap(), "f = {f}");
        }
        assert!(graph_kelly_lemma(3, true).unwrap());
    }

    #[test]
    fn digraphs_on_four_vertices() {
        let rep = hypomorphy_search(4, true).unwrap();
        assert_eq!(rep.graphs, 4096);
        assert_eq!(rep.iso_classes, 218);
        assert!(!rep.nontrivial.is_empty());
        let w = rep.witness.as_ref().expect("count witness");
        assert_ne!(w.first_count, w.second_count);
        assert_eq!(rep.hypomorphy_partition.block_of(w.first), rep.hypomorphy_partition.block_of(w.second));
        assert!(!rep.srp.downward_constant);

        // On three vertices hypomorphy is coarser than isomorphism but still
        // the orbit partition of a larger group.
        let three = hypomorphy_search(3, true).unwrap();
        assert!(!three.nontrivial.is_empty());
        assert!(three.srp.ok());
        assert_eq!(hypomorphy_orbit_status(&three).unwrap(), (true, 48));
    }
}
