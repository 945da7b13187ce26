//! A strongly regular partition on 8 points that is not the orbit partition
//! of any permutation group: two orbits of a group of order 16 merged.

use std::fmt;

use crate::error::{GoaError, Result};
use crate::partition::Partition;
use crate::permgroup::{is_orbit_partition, PermGroup, Permutation, DEFAULT_ELEMENT_CAP};
use crate::srp::{verify_goa_closure, verify_strongly_regular, ClosureReport, SrpReport};
use crate::subset::{GroundSet, SubsetMask};

pub const GENERATORS: [&str; 4] = ["(1,2)(3,4)", "(5,6)(7,8)", "(1,3,2,4)(5,7,6,8)", "(1,5)(2,6)(3,7)(4,8)"];

/// A way of writing a set as `X ∪ Y` with `X, Y` in one fixed orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub x: SubsetMask,
    pub y: SubsetMask,
    pub intersection: SubsetMask,
    /// Block of the intersection in the merged partition.
    pub intersection_block: usize,
}

#[derive(Debug, Clone)]
pub struct CounterexampleReport {
    pub group_order: usize,
    pub orbit_count: usize,
    pub a: SubsetMask,
    pub b: SubsetMask,
    pub merged_block: usize,
    pub srp: SrpReport,
    pub closure: ClosureReport,
    pub is_orbit_partition: bool,
    pub stabilizer_order: usize,
    /// The orbit of `{1,3,7}`.
    pub orbit: Vec<SubsetMask>,
    pub a_decompositions: Vec<Decomposition>,
    pub b_decompositions: Vec<Decomposition>,
}

impl CounterexampleReport {
    /// No intersection block arising for `A` arises for `B`.
    pub fn certificate_holds(&self) -> bool {
        !self.a_decompositions.is_empty()
            && !self.b_decompositions.is_empty()
            && self
                .a_decompositions
                .iter()
                .all(|da| self.b_decompositions.iter().all(|db| da.intersection_block != db.intersection_block))
    }

    pub fn ok(&self) -> bool {
        self.srp.ok() && self.closure.closed && !self.is_orbit_partition && self.certificate_holds()
    }

    pub fn verify(&self) -> Result<()> {
        if self.ok() {
            Ok(())
        } else {
            Err(GoaError::verification(format!(
                "counterexample: srp {}, closure {}, orbit partition {}, certificate {}",
                self.srp.ok(),
                self.closure.closed,
                self.is_orbit_partition,
                self.certificate_holds()
            )))
        }
    }
}

fn decompositions(p: &Partition, target: SubsetMask, orbit: &[SubsetMask]) -> Vec<Decomposition> {
    let mut out = Vec::new();
    for (i, &x) in orbit.iter().enumerate() {
        for &y in &orbit[i + 1..] {
            if x.union(y) == target {
                let inter = x.intersection(y);
                out.push(Decomposition { x, y, intersection: inter, intersection_block: p.block_of(inter) });
            }
        }
    }
    out
}

pub fn counterexample_group() -> Result<PermGroup> {
    let g = GroundSet::new(8)?;
    let gens = GENERATORS.iter().map(|t| Permutation::parse(t, g)).collect::<Result<Vec<_>>>()?;
    PermGroup::close_generators(g, gens, DEFAULT_ELEMENT_CAP)
}

pub fn build_counterexample() -> Result<(Partition, CounterexampleReport)> {
    let group = counterexample_group()?;
    let orbits = group.orbit_partition()?;
    let a = SubsetMask::from_elements([1, 3, 5, 7]);
    let b = SubsetMask::from_elements([1, 3, 5, 8]);
    let (ia, ib) = (orbits.block_of(a), orbits.block_of(b));
    if ia == ib {
        return Err(GoaError::verification("{1,3,5,7} and {1,3,5,8} already share an orbit"));
    }
    let (merged, _) = orbits.merge_blocks(ia, ib)?;
    let srp = verify_strongly_regular(&merged);
    let closure = verify_goa_closure(&merged);
    let (is_orbit, h) = is_orbit_partition(&merged)?;
    let orbit = group.orbit_of(SubsetMask::from_elements([1, 3, 7]));
    let report = CounterexampleReport {
        group_order: group.order(),
        orbit_count: orbits.num_blocks(),
        a,
        b,
        merged_block: merged.block_of(a),
        srp,
        closure,
        is_orbit_partition: is_orbit,
        stabilizer_order: h.order(),
        a_decompositions: decompositions(&merged, a, &orbit),
        b_decompositions: decompositions(&merged, b, &orbit),
        orbit,
    };
    Ok((merged, report))
}

impl fmt::Display for CounterexampleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "group-order: {}", self.group_order)?;
        writeln!(f, "orbits: {}", self.orbit_count)?;
        writeln!(f, "merged: {{{}}} + {{{}}} -> block {}", self.a, self.b, self.merged_block)?;
        writeln!(f, "strongly-regular: {}", self.srp.ok())?;
        writeln!(f, "goa-closure: {}", self.closure.closed)?;
        writeln!(f, "is-orbit-partition: {}", self.is_orbit_partition)?;
        writeln!(f, "stabilizer-order: {}", self.stabilizer_order)?;
        writeln!(f, "orbit-of-1-3-7: {}", self.orbit.len())?;
        for (name, ds) in [("A", &self.a_decompositions), ("B", &self.b_decompositions)] {
            writeln!(f, "decompositions-{name}: {}", ds.len())?;
            for d in ds.iter() {
                writeln!(
                    f,
                    "  {{{}}} = {{{}}} u {{{}}}, intersection {{{}}} in block {}",
                    d.x.union(d.y),
                    d.x,
                    d.y,
                    d.intersection,
                    d.intersection_block
                )?;
            }
        }
        writeln!(f, "certificate: {}", self.certificate_holds())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(e: &[usize]) -> SubsetMask {
        SubsetMask::from_elements(e.iter().copied())
    }

    #[test]
    fn merged_partition_is_strongly_regular_but_not_orbital() {
        let (p, rep) = build_counterexample().unwrap();
        assert!(rep.srp.ok(), "{:?}", rep.srp);
        assert!(rep.closure.closed, "{:?}", rep.closure);
        assert!(!rep.is_orbit_partition);
        assert_eq!(p.block_of(set(&[1, 3, 5, 7])), p.block_of(set(&[1, 3, 5, 8])));
        assert_eq!(rep.b_decompositions.len(), 1);
        let d = &rep.b_decompositions[0];
        assert_eq!(d.intersection, set(&[1, 8]));
        assert!(rep.a_decompositions.iter().any(|d| d.intersection == set(&[3, 7])
            && [d.x, d.y].contains(&set(&[1, 3, 7]))
            && [d.x, d.y].contains(&set(&[3, 5, 7]))));
        assert!(rep.certificate_holds());
        rep.verify().unwrap();
    }
}
