//! Exhaustive search for strongly regular partitions of the powerset.
//!
//! Levels are fixed in the order `0, 1, ...`; fixing level `k` also fixes
//! level `n - k` as its complement image. Subsets of a level are only grouped
//! with subsets having the same downward counts into the blocks already fixed
//! below, so the search runs over refinements of that signature partition.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use crate::error::{GoaError, Result};
use crate::partition::Partition;
use crate::srp::verify_strongly_regular;
use crate::subset::{subsets_of_size, GroundSet, SubsetMask};

const UNSET: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub struct Enumeration {
    pub partitions: Vec<Partition>,
    /// False when the time budget ran out before the search finished.
    pub complete: bool,
    /// Full candidate partitions that reached the final check.
    pub candidates: usize,
}

struct Search {
    g: GroundSet,
    n: usize,
    label: Vec<u32>,
    next_label: u32,
    found: Vec<Partition>,
    candidates: usize,
    deadline: Option<Instant>,
    timed_out: bool,
}

impl Search {
    /// Downward counts of `a` into the already labelled blocks of smaller sets.
    fn signature(&self, a: SubsetMask) -> Vec<(u32, u32)> {
        let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
        for b in a.submasks() {
            if b != a && self.label[b.index()] != UNSET {
                *counts.entry(self.label[b.index()]).or_default() += 1;
            }
        }
        counts.into_iter().collect()
    }

    /// Axiom 3 restricted to labelled sets: rows into labelled smaller blocks
    /// agree within every labelled block.
    fn consistent(&self) -> bool {
        let mut rows: BTreeMap<u32, Vec<(u32, u32)>> = BTreeMap::new();
        for a in self.g.subsets() {
            let l = self.label[a.index()];
            if l == UNSET {
                continue;
            }
            let sig = self.signature(a);
            match rows.get(&l) {
                Some(r) if *r != sig => return false,
                Some(_) => {}
                None => {
                    rows.insert(l, sig);
                }
            }
        }
        true
    }

    fn out_of_time(&mut self) -> bool {
        if let Some(d) = self.deadline {
            if Instant::now() > d {
                self.timed_out = true;
            }
        }
        self.timed_out
    }

    fn level(&mut self, k: usize) {
        if self.out_of_time() {
            return;
        }
        let n = self.n;
        if 2 * k > n {
            self.candidates += 1;
            let p = Partition::from_labels(self.g, |a| self.label[a.index()]);
            if verify_strongly_regular(&p).ok() {
                self.found.push(p);
            }
            return;
        }
        let members = subsets_of_size(n, k);
        let sigs: Vec<Vec<(u32, u32)>> = members.iter().map(|a| self.signature(*a)).collect();
        let mut blocks: Vec<(usize, Vec<SubsetMask>)> = Vec::new();
        self.assign(k, &members, &sigs, 0, &mut blocks);
    }

    /// Places `members[idx..]` into blocks of equal signature, then closes the level.
    fn assign(
        &mut self,
        k: usize,
        members: &[SubsetMask],
        sigs: &[Vec<(u32, u32)>],
        idx: usize,
        blocks: &mut Vec<(usize, Vec<SubsetMask>)>,
    ) {
        if self.timed_out {
            return;
        }
        if idx == members.len() {
            self.close_level(k, blocks);
            return;
        }
        let a = members[idx];
        for b in 0..blocks.len() {
            if sigs[blocks[b].0] == sigs[idx] {
                blocks[b].1.push(a);
                self.assign(k, members, sigs, idx + 1, blocks);
                blocks[b].1.pop();
            }
        }
        blocks.push((idx, vec![a]));
        self.assign(k, members, sigs, idx + 1, blocks);
        blocks.pop();
    }

    fn close_level(&mut self, k: usize, blocks: &[(usize, Vec<SubsetMask>)]) {
        let n = self.n;
        let full = self.g.full();
        let base = self.next_label;
        let mirror = 2 * k != n;
        let mut touched = Vec::new();
        for (i, (_, ms)) in blocks.iter().enumerate() {
            for &a in ms {
                self.label[a.index()] = base + i as u32;
                touched.push(a);
                if mirror {
                    let c = SubsetMask(full.0 & !a.0);
                    self.label[c.index()] = base + (blocks.len() + i) as u32;
                    touched.push(c);
                }
            }
        }
        let used = if mirror { 2 * blocks.len() } else { blocks.len() } as u32;
        self.next_label += used;
        let complement_ok = mirror || blocks.iter().all(|(_, ms)| {
            let target = self.label[(full.0 & !ms[0].0) as usize];
            let image_count = ms.iter().filter(|a| self.label[(full.0 & !a.0) as usize] == target).count();
            image_count == ms.len() && blocks[(target - base) as usize].1.len() == ms.len()
        });
        if complement_ok && self.consistent() {
            self.level(k + 1);
        }
        self.next_label -= used;
        for a in touched {
            self.label[a.index()] = UNSET;
        }
    }
}

/// All strongly regular partitions for `n <= 4`; `n = 5` runs against the
/// optional time budget and reports whether it finished.
pub fn enumerate_strongly_regular(g: GroundSet, budget: Option<Duration>) -> Result<Enumeration> {
    let n = g.n();
    if n > 5 {
        return Err(GoaError::input(format!("enumeration supports n <= 5, got {n}")));
    }
    let mut search = Search {
        g,
        n,
        label: vec![UNSET; g.num_subsets()],
        next_label: 0,
        found: Vec::new(),
        candidates: 0,
        deadline: budget.map(|b| Instant::now() + b),
        timed_out: false,
    };
    search.level(0);
    let mut partitions = search.found;
    partitions.sort_by_key(|p| p.to_text());
    Ok(Enumeration { partitions, complete: !search.timed_out, candidates: search.candidates })
}
