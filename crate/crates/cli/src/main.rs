//! `goa`: command-line front end for goa-core.
//!
//! Exit codes: 0 verified/true, 1 falsified/false, 2 input error, 3 resource
//! budget exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use goa_core::counterexample::build_counterexample;
use goa_core::enumerate::enumerate_strongly_regular;
use goa_core::graphs::{graph_kelly_lemma, hypomorphy_orbit_status, hypomorphy_search, HypomorphyReport};
use goa_core::identities::{run_identity_suite, suite_passed};
use goa_core::permgroup::{is_orbit_partition, partition_stabilizer};
use goa_core::reconstruction::{
    all_reconstruction_pairs, deck, intersection_difference, intersection_sum_rule, lovasz_check,
    lovasz_tight_instance, maynard_siemons_index, muller_check, reconstruction_pairs,
};
use goa_core::srp::mnukhin_check;
use goa_core::{
    coeff_matrix, verify_goa_closure, verify_strongly_regular, GoaError, GroundSet, Partition, PermGroup, Rational,
};

/// Seed used by randomized checks when `--seed` is not given.
const DEFAULT_SEED: u64 = 20240607;

#[derive(Parser)]
#[command(name = "goa", version, about = "Strongly regular partitions and generalised orbit algebras")]
struct Cli {
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Time budget in seconds for searches.
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the three axioms of a strongly regular partition.
    Verify {
        #[arg(long)]
        partition: PathBuf,
    },
    /// Print the coefficient matrix, or its M-th power with Mnukhin's relation.
    Coeff {
        #[arg(long)]
        partition: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        power: Option<i64>,
    },
    /// Decide whether a partition is the orbit partition of a group.
    IsOrbitAlgebra {
        #[arg(long)]
        partition: PathBuf,
    },
    /// List every strongly regular partition for n <= 5.
    EnumerateSrp {
        #[arg(long)]
        n: usize,
    },
    /// Rebuild the n = 8 partition that is strongly regular but not orbital.
    Counterexample,
    /// Orbit partition of a group on the subsets.
    Orbits {
        #[arg(long)]
        group: PathBuf,
    },
    /// The group preserving every block of a partition.
    Stabilizer {
        #[arg(long)]
        partition: PathBuf,
    },
    /// Run the operator identity suite.
    Identities {
        #[arg(long)]
        n: usize,
    },
    /// Reconstruction pairs with the Lovász and Müller checks.
    Recon {
        #[arg(long)]
        partition: PathBuf,
        #[arg(long)]
        size: Option<usize>,
    },
    /// The family of pairs meeting Müller's bound with equality.
    MullerTight {
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 0)]
        pad: usize,
    },
    /// Maynard–Siemons reconstruction index of a free action.
    FreeIndex {
        #[arg(long)]
        group: PathBuf,
    },
    /// Hypomorphy of small graphs and digraphs.
    DigraphDemo {
        #[arg(long)]
        vertices: usize,
    },
}

/// Outcome of a subcommand that ran to completion.
enum Verdict {
    Holds,
    Fails,
}

impl From<bool> for Verdict {
    fn from(b: bool) -> Self {
        if b {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }
}

fn read(path: &Path) -> goa_core::Result<String> {
    fs::read_to_string(path).map_err(|e| GoaError::input(format!("{}: {e}", path.display())))
}

fn load_partition(path: &Path) -> goa_core::Result<Partition> {
    Partition::parse(&read(path)?)
}

fn load_group(path: &Path) -> goa_core::Result<PermGroup> {
    PermGroup::parse(&read(path)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Verdict::Holds) => ExitCode::from(0),
        Ok(Verdict::Fails) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                GoaError::Input(_) => 2,
                GoaError::Verification(_) => 1,
                GoaError::Resource { .. } => 3,
            })
        }
    }
}

fn run(cli: Cli) -> goa_core::Result<Verdict> {
    let budget = cli.budget.map(Duration::from_secs);
    match cli.command {
        Command::Verify { partition } => verify(&load_partition(&partition)?),
        Command::Coeff { partition, power } => coeff(&load_partition(&partition)?, power),
        Command::IsOrbitAlgebra { partition } => is_orbit_algebra(&load_partition(&partition)?),
        Command::EnumerateSrp { n } => enumerate(n, budget),
        Command::Counterexample => counterexample(),
        Command::Orbits { group } => orbits(&load_group(&group)?),
        Command::Stabilizer { partition } => stabilizer(&load_partition(&partition)?),
        Command::Identities { n } => identities(n, cli.seed),
        Command::Recon { partition, size } => recon(&load_partition(&partition)?, size),
        Command::MullerTight { r, pad } => muller_tight(r, pad),
        Command::FreeIndex { group } => free_index(&load_group(&group)?),
        Command::DigraphDemo { vertices } => digraph_demo(vertices),
    }
}

fn verify(p: &Partition) -> goa_core::Result<Verdict> {
    let rep = verify_strongly_regular(p);
    println!("n: {}", p.ground().n());
    println!("blocks: {}", p.num_blocks());
    println!("size-homogeneous: {}", rep.size_homogeneous);
    println!("complement-closed: {}", rep.complement_closed);
    println!("downward-constant: {}", rep.downward_constant);
    if let Some(w) = rep.first_witness() {
        println!("witness: {w}");
    }
    println!("strongly-regular: {}", rep.ok());
    Ok(rep.ok().into())
}

/// Prints the axiom report and returns false when the partition is not
/// strongly regular.
fn require_srp(p: &Partition) -> bool {
    let rep = verify_strongly_regular(p);
    if !rep.ok() {
        println!("strongly-regular: false");
        if let Some(w) = rep.first_witness() {
            println!("witness: {w}");
        }
    }
    rep.ok()
}

fn coeff(p: &Partition, power: Option<i64>) -> goa_core::Result<Verdict> {
    if !require_srp(p) {
        return Ok(Verdict::Fails);
    }
    let m = coeff_matrix(p)?;
    match power {
        None => {
            println!("blocks: {}", m.size());
            print!("{m}");
            Ok(Verdict::Holds)
        }
        Some(k) => {
            let mk = m.to_matrix::<Rational>().pow(k)?;
            println!("power: {k}");
            print!("{mk}");
            let rep = mnukhin_check(&m, k)?;
            println!("mnukhin: {}", rep.holds);
            if let Some((i, j)) = rep.first_failure {
                println!("witness: entry ({i}, {j})");
            }
            Ok(rep.holds.into())
        }
    }
}

fn is_orbit_algebra(p: &Partition) -> goa_core::Result<Verdict> {
    let srp = verify_strongly_regular(p);
    println!("strongly-regular: {}", srp.ok());
    if !srp.ok() {
        if let Some(w) = srp.first_witness() {
            println!("witness: {w}");
        }
        println!("is-orbit-partition: false");
        return Ok(Verdict::Fails);
    }
    let closure = verify_goa_closure(p);
    println!("goa-closure: {}", closure.closed);
    let (is_orbit, h) = is_orbit_partition(p)?;
    println!("stabilizer-order: {}", h.order());
    println!("is-orbit-partition: {is_orbit}");
    Ok(is_orbit.into())
}

fn enumerate(n: usize, budget: Option<Duration>) -> goa_core::Result<Verdict> {
    let g = GroundSet::new(n)?;
    let res = enumerate_strongly_regular(g, budget)?;
    println!("n: {n}");
    println!("complete: {}", res.complete);
    println!("candidates: {}", res.candidates);
    println!("partitions: {}", res.partitions.len());
    let mut all_orbital = true;
    for (i, p) in res.partitions.iter().enumerate() {
        let orbital = if n <= 10 { is_orbit_partition(p)?.0 } else { false };
        all_orbital &= orbital;
        println!("partition {i}: blocks {}, orbit-partition {orbital}", p.num_blocks());
        for line in p.to_text().lines().skip(1) {
            println!("  {line}");
        }
    }
    println!("all-orbit-partitions: {all_orbital}");
    if !res.complete {
        return Err(GoaError::Resource { what: "enumeration time budget".into(), reached: res.candidates });
    }
    Ok(all_orbital.into())
}

fn counterexample() -> goa_core::Result<Verdict> {
    let (p, rep) = build_counterexample()?;
    print!("{rep}");
    println!("blocks: {}", p.num_blocks());
    Ok(rep.ok().into())
}

fn orbits(group: &PermGroup) -> goa_core::Result<Verdict> {
    let p = group.orbit_partition()?;
    println!("n: {}", group.ground().n());
    println!("order: {}", group.order());
    println!("orbits: {}", p.num_blocks());
    print!("{}", p.to_text());
    Ok(Verdict::Holds)
}

fn stabilizer(p: &Partition) -> goa_core::Result<Verdict> {
    let h = partition_stabilizer(p)?;
    println!("order: {}", h.order());
    println!("generators: {}", h.generators().len());
    for s in h.generators() {
        println!("  {s}");
    }
    let orbital = h.orbit_partition()? == *p;
    println!("orbits-equal-partition: {orbital}");
    Ok(Verdict::Holds)
}

fn identities(n: usize, seed: u64) -> goa_core::Result<Verdict> {
    let g = GroundSet::new(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let checks = run_identity_suite::<Rational, _>(g, &mut rng)?;
    println!("n: {n}");
    println!("seed: {seed}");
    for c in &checks {
        println!("{c}");
    }
    let ok = suite_passed(&checks);
    println!("all: {}", if ok { "PASS" } else { "FAIL" });
    Ok(ok.into())
}

fn recon(p: &Partition, size: Option<usize>) -> goa_core::Result<Verdict> {
    if !require_srp(p) {
        return Ok(Verdict::Fails);
    }
    let n = p.ground().n();
    let m = coeff_matrix(p)?;
    let pairs = match size {
        Some(k) if k > n => return Err(GoaError::input(format!("size {k} exceeds n = {n}"))),
        Some(k) => reconstruction_pairs(&m, k),
        None => all_reconstruction_pairs(&m, n),
    };
    println!("n: {n}");
    println!("blocks: {}", m.size());
    println!("pairs: {}", pairs.len());
    let mut muller_ok = true;
    for q in &pairs {
        let rep = muller_check(&m, q);
        muller_ok &= rep.holds();
        println!("pair: blocks {} and {} at size {}, deck {}", q.a, q.b, q.k, deck(&m, q.a));
        println!("  representatives: {{{}}} {{{}}}", p.members(q.a)[0], p.members(q.b)[0]);
        println!("  muller: {}", rep.holds());
        if !rep.unrestricted_failures.is_empty() {
            println!("  muller-unrestricted-failures: {:?}", rep.unrestricted_failures);
        }
    }
    let lov = lovasz_check(p, &m);
    println!("pairs-above-half: {}", lov.pairs_above_half.len());
    println!("ekk0-vanishes: {}", lov.ekk0_vanishes);
    println!("difference-identity: {}", lov.difference_identity_holds);
    println!("lovasz: {}", lov.holds());
    println!("muller: {muller_ok}");
    Ok((lov.holds() && muller_ok).into())
}

fn muller_tight(r: usize, pad: usize) -> goa_core::Result<Verdict> {
    let t = lovasz_tight_instance(r, pad)?;
    let pair = t.pair();
    println!("r: {r}");
    println!("pad: {pad}");
    println!("n: {}", t.partition.ground().n());
    println!("group-order: {}", t.group.order());
    println!("A: {{{}}}", t.a);
    println!("B: {{{}}}", t.b);
    println!("blocks: {} and {}", pair.a, pair.b);
    println!("same-deck: true");
    let pairs = reconstruction_pairs(&t.matrix, r);
    let found = pairs.iter().any(|q| (q.a, q.b) == (pair.a.min(pair.b), pair.a.max(pair.b)));
    println!("pair-at-size-r: {found}");
    let rep = muller_check(&t.matrix, &pair);
    let empty = t.partition.block_of(goa_core::SubsetMask(0));
    let mut tight = false;
    for b in &rep.bounds {
        let marker = if b.lhs == b.rhs { " (equality)" } else { "" };
        println!("bound: block {}: {} <= {}{marker}", b.j, b.lhs, b.rhs);
        tight |= b.j == empty && b.lhs == b.rhs;
    }
    println!("muller: {}", rep.holds());
    println!("equality-at-empty-block: {tight}");
    let sum_rule = intersection_sum_rule(&t.partition, &t.matrix, t.a, pair.a)?;
    let difference = intersection_difference(&t.partition, &t.matrix, &pair)?;
    println!("sum-rule: {sum_rule}");
    println!("difference-identity: {difference}");
    Ok((found && rep.holds() && tight && sum_rule && difference).into())
}

fn free_index(group: &PermGroup) -> goa_core::Result<Verdict> {
    let rep = maynard_siemons_index(group)?;
    println!("order: {}", rep.order);
    println!("free: true");
    println!("pair-sizes: {:?}", rep.pair_sizes);
    println!("index: {}", rep.index);
    println!("index-at-most-5: {}", rep.index <= 5);
    Ok((rep.index <= 5).into())
}

fn print_hypomorphy(rep: &HypomorphyReport) {
    let kind = rep.kind();
    println!("{kind}s: {}", rep.graphs);
    println!("{kind}-iso-classes: {}", rep.iso_classes);
    println!("{kind}-hypomorphy-classes: {}", rep.hypomorphy_classes);
    println!("{kind}-nontrivial-classes: {}", rep.nontrivial.len());
    for reps in &rep.nontrivial {
        let shown: Vec<String> = reps.iter().map(|x| format!("[{}]", rep.table.describe(*x))).collect();
        println!("  {}", shown.join(" ~ "));
    }
    println!("{kind}-hypomorphy-strongly-regular: {}", rep.srp.ok());
}

fn digraph_demo(f: usize) -> goa_core::Result<Verdict> {
    if !(2..=5).contains(&f) {
        return Err(GoaError::input(format!("--vertices must be in 2..=5, got {f}")));
    }
    println!("vertices: {f}");
    let mut ok = true;
    if f <= 4 {
        let di = hypomorphy_search(f, true)?;
        println!("digraph-edge-table:");
        print!("{}", di.table);
        print_hypomorphy(&di);
        if di.table.n() <= 10 {
            let (orbital, order) = hypomorphy_orbit_status(&di)?;
            println!("digraph-hypomorphy-orbit-partition: {orbital}");
            println!("digraph-hypomorphy-stabilizer-order: {order}");
        }
        match &di.witness {
            Some(w) => {
                println!("witness-first: {}", di.table.describe(w.first));
                println!("witness-second: {}", di.table.describe(w.second));
                println!("witness-class: {}", di.table.describe(w.class_rep));
                println!("witness-counts: {} vs {}", w.first_count, w.second_count);
            }
            None => println!("witness: none"),
        }
        if f == 4 {
            ok &= !di.nontrivial.is_empty() && di.witness.is_some();
        }
    }
    let gr = hypomorphy_search(f, false)?;
    print_hypomorphy(&gr);
    // Two vertices is the classical exception: the edge and the non-edge share a deck.
    if f >= 3 {
        ok &= gr.nontrivial.is_empty();
    }
    if f <= 4 {
        let kelly = graph_kelly_lemma(f, false)?;
        println!("graph-kelly-lemma: {kelly}");
        ok &= kelly;
    }
    println!("demo: {}", if ok { "PASS" } else { "FAIL" });
    Ok(ok.into())
}
