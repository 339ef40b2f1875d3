//! Constructions of prime-valent regular Cayley maps, the counting formula
//! for the dihedral family, and the exhaustive search that checks the
//! classification claims independently.
//!
//! The exhaustive search never consults the constructions: it enumerates
//! every inverse-closed generating set of the requested size with every
//! cyclic order, keeps the regular maps, and reduces them to isomorphism
//! class representatives. Verification then compares the two sides.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::arith::{crt, factorize, gcd, is_odd_prime, mod_pow};
use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;
use crate::graph;
use crate::groups::{FiniteGroup, GroupElement, GroupKind};
use crate::maps::{BalanceType, CayleyMap};
use crate::perms::{self, Permutation};

/// Largest arc count `|G| * p` the exhaustive search accepts.
pub const ARC_GUARD: usize = 400;

/// Largest rank for which all of `GL_r(2)` is enumerated.
pub const SEED_MAX_RANK: u32 = 4;

/// `(n, l, k)` with `k` the least positive integer such that
/// `1 + l + ... + l^(k-1) = 0 (mod n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Triple {
    pub n: u64,
    pub l: u64,
    pub k: u64,
}

impl Triple {
    pub fn new(n: u64, l: u64, k: u64) -> Result<Self> {
        if !(0 < l && l < n) {
            return Err(Error::InvalidArgument(format!("need 0 < l < n, got l={l}, n={n}")));
        }
        match smallest_k(n, l) {
            Some(found) if found == k => Ok(Self { n, l, k }),
            found => Err(Error::InvalidArgument(format!(
                "({n}, {l}, {k}) is not a triple: least k is {}",
                found.map_or("undefined".into(), |f| f.to_string())
            ))),
        }
    }
}

/// Least `k >= 1` with `1 + l + ... + l^(k-1) = 0 (mod n)`, searched up to
/// `n^2`: the pair `(partial sum, l^k) mod n` is eventually periodic with
/// period at most `n^2`.
pub fn smallest_k(n: u64, l: u64) -> Option<u64> {
    if n == 0 {
        return None;
    }
    // a prime dividing both keeps the sum at 1 modulo that prime
    if n > 1 && gcd(l % n, n) != 1 {
        return None;
    }
    let (mut sum, mut power) = (0u64, 1u64);
    for k in 1..=n.saturating_mul(n) {
        sum = (sum + power) % n;
        power = power * (l % n) % n;
        if sum == 0 {
            return Some(k);
        }
    }
    None
}

/// All `l` in `1..n` whose least `k` is `p`.
pub fn triples_for(n: u64, p: u64) -> Vec<u64> {
    (1..n).filter(|&l| smallest_k(n, l) == Some(p)).collect()
}

/// The closed-form count of `p`-valent regular Cayley maps on `D_n`:
/// with `n = p^a0 * prod p_i^a_i`, it is `(p-1)^t` when `a0 <= 1` and
/// `p | p_i - 1` for every other prime `p_i` (2 included), otherwise 0.
pub fn formula_count(n: u64, p: u64) -> u64 {
    let factors = factorize(n);
    let a0 = factors.iter().find(|&&(q, _)| q == p).map_or(0, |&(_, a)| a);
    let others: Vec<u64> = factors.iter().map(|&(q, _)| q).filter(|&q| q != p).collect();
    if a0 <= 1 && others.iter().all(|&q| (q - 1) % p == 0) {
        (p - 1).pow(others.len() as u32)
    } else {
        0
    }
}

/// Every `l` in `0 < l < n` assembled by CRT from local solutions:
/// `l = 1 (mod p)` when `p || n`, and for each other prime power `q^a || n`
/// the residues with `l^p = 1` and `l != 1 (mod q)`.
pub fn crt_lift_multipliers(n: u64, p: u64) -> Vec<u64> {
    let mut local: Vec<Vec<u64>> = Vec::new();
    let mut moduli = Vec::new();
    for (q, a) in factorize(n) {
        let m = q.pow(a);
        let residues: Vec<u64> = if q == p {
            if a == 1 { vec![1] } else { vec![] }
        } else {
            (0..m)
                .filter(|&x| mod_pow(x, p, m) == 1 && x % q != 1)
                .collect()
        };
        local.push(residues);
        moduli.push(m);
    }
    let mut out: Vec<u64> = local
        .into_iter()
        .multi_cartesian_product()
        .filter_map(|residues| crt(&residues, &moduli).map(|(x, _)| x))
        .collect();
    // an empty factor list yields one empty product
    if moduli.is_empty() {
        out = vec![0];
    }
    out.retain(|&l| 0 < l && l < n);
    out.sort_unstable();
    out
}

/// Exponents `0, 1, 1 + l, ..., 1 + l + ... + l^(p-2)` modulo `n`.
fn partial_sums(n: u64, l: u64, p: u64) -> Vec<u32> {
    let mut out = Vec::with_capacity(p as usize);
    let (mut sum, mut power) = (0u64, 1u64);
    for _ in 0..p {
        out.push(sum as u32);
        sum = (sum + power) % n;
        power = power * l % n;
    }
    out
}

/// The balanced map on `D_n` with `X = (b, ab, a^(l+1) b, ...)`, the
/// exponents being the partial geometric sums of `l`.
pub fn dihedral_balanced_map(n: u64, l: u64, p: u64) -> Result<CayleyMap> {
    Triple::new(n, l, p)?;
    let group = FiniteGroup::dihedral(n as u32)?;
    let xs = partial_sums(n, l, p)
        .into_iter()
        .map(|a| GroupElement::Dihedral { a, b: true })
        .collect();
    CayleyMap::new(group, xs)
}

/// The anti-balanced map on `Z_2p` with `X = (1, 3, ..., 2p - 1)`.
pub fn cyclic_antibalanced_map(p: u64) -> Result<CayleyMap> {
    if !is_odd_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not an odd prime")));
    }
    let group = FiniteGroup::cyclic(2 * p as u32)?;
    let xs = (0..p as u32).map(|i| GroupElement::Residue(2 * i + 1)).collect();
    CayleyMap::new(group, xs)
}

/// A matrix `A` of order `p` and a vector `x` whose orbit
/// `x, Ax, ..., A^(p-1) x` has `p` distinct members spanning `Z_2^r`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Seed {
    pub matrix: Gf2Matrix,
    pub x: u32,
}

impl Seed {
    pub fn orbit(&self) -> Vec<u32> {
        let mut out = vec![self.x];
        loop {
            let next = self.matrix.apply(*out.last().expect("nonempty"));
            if next == self.x {
                return out;
            }
            out.push(next);
        }
    }

    /// The balanced map with `q(A^i x) = A^(i+1) x`.
    pub fn to_map(&self) -> Result<CayleyMap> {
        let group = FiniteGroup::elem_abelian2(self.matrix.dim())?;
        let xs = self.orbit().into_iter().map(GroupElement::Bits).collect();
        CayleyMap::new(group, xs)
    }
}

/// Every seed in rank `r <= 4` for the prime `p`, by enumerating `GL_r(2)`.
pub fn elem_abelian_seeds(r: u32, p: u64) -> Result<Vec<Seed>> {
    if r == 0 || r > SEED_MAX_RANK {
        return Err(Error::SizeGuard {
            what: "seed matrix rank",
            size: r as usize,
            limit: SEED_MAX_RANK as usize,
        });
    }
    let mut out = Vec::new();
    for idx in 0..1u64 << (r * r) {
        let a = Gf2Matrix::from_index(r, idx);
        if a.order(p) != Some(p) {
            continue;
        }
        for x in 1..1u32 << r {
            let seed = Seed { matrix: a.clone(), x };
            let orbit = seed.orbit();
            if orbit.len() as u64 == p && crate::gf2::rank_of(orbit) == r {
                out.push(seed);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Every abelian group of order `2..=max_order`, one per isomorphism type,
/// given by invariant factors `d_1 | d_2 | ...`. Elementary abelian 2-groups
/// of rank at least two use the bit-vector encoding.
pub fn abelian_groups_up_to(max_order: u32) -> Vec<FiniteGroup> {
    fn chains(rest: u32, prev: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 1 {
            out.push(acc.clone());
            return;
        }
        // the next factor is a multiple of prev dividing rest, and what is
        // left must be a multiple of it again
        for d in (prev.max(2)..=rest).filter(|&d| d % prev == 0 && rest % d == 0) {
            let left = rest / d;
            if left == 1 || left % d == 0 {
                acc.push(d);
                chains(left, d, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    for order in 2..=max_order {
        let mut factor_lists = Vec::new();
        chains(order, 1, &mut Vec::new(), &mut factor_lists);
        for factors in factor_lists {
            let group = if factors.len() >= 2 && factors.iter().all(|&d| d == 2) {
                FiniteGroup::elem_abelian2(factors.len() as u32)
            } else {
                FiniteGroup::abelian(&factors)
            };
            out.push(group.expect("valid invariant factors"));
        }
    }
    out
}

/// How the per-set work of the exhaustive search is scheduled. Results are
/// identical either way. Without the `parallel` feature both run sequentially.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

fn run_all<T, R, F>(items: &[T], exec: Execution, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec == Execution::Parallel {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

fn check_arc_guard(group: &FiniteGroup, p: usize) -> Result<()> {
    let arcs = group.order().saturating_mul(p);
    if arcs > ARC_GUARD {
        return Err(Error::SizeGuard {
            what: "arc count |G|*p",
            size: arcs,
            limit: ARC_GUARD,
        });
    }
    Ok(())
}

/// Non-identity elements grouped into `{g, g^-1}` classes, each sorted by
/// rank, classes ordered by their smallest member.
fn inverse_classes(group: &FiniteGroup) -> Vec<Vec<GroupElement>> {
    let mut seen = vec![false; group.order()];
    let mut out = Vec::new();
    for g in group.elements() {
        let r = group.rank(&g);
        if seen[r] || g == group.identity() {
            continue;
        }
        let inv = group.inverse(&g);
        seen[r] = true;
        seen[group.rank(&inv)] = true;
        out.push(if inv == g { vec![g] } else { vec![g, inv] });
    }
    out
}

/// Every inverse-closed, identity-free generating set of size `p`, each
/// sorted by rank, in lexicographic order of ranks.
pub fn generating_sets(group: &FiniteGroup, p: usize) -> Result<Vec<Vec<GroupElement>>> {
    check_arc_guard(group, p)?;
    fn pick(
        classes: &[Vec<GroupElement>],
        start: usize,
        need: usize,
        acc: &mut Vec<GroupElement>,
        out: &mut Vec<Vec<GroupElement>>,
    ) {
        if need == 0 {
            out.push(acc.clone());
            return;
        }
        for i in start..classes.len() {
            let c = &classes[i];
            if c.len() <= need {
                acc.extend_from_slice(c);
                pick(classes, i + 1, need - c.len(), acc, out);
                acc.truncate(acc.len() - c.len());
            }
        }
    }
    let classes = inverse_classes(group);
    let mut raw = Vec::new();
    pick(&classes, 0, p, &mut Vec::new(), &mut raw);
    let mut out = Vec::new();
    for mut set in raw {
        set.sort_by_key(|g| group.rank(g));
        if group.generates(&set)? {
            out.push(set);
        }
    }
    out.sort_by_cached_key(|s| s.iter().map(|g| group.rank(g)).collect::<Vec<_>>());
    Ok(out)
}

/// Cyclic orders of a rank-sorted set with its smallest element first.
fn cyclic_orders(set: &[GroupElement]) -> impl Iterator<Item = Vec<GroupElement>> + '_ {
    let (first, rest) = set.split_first().expect("nonempty set");
    rest.iter().permutations(rest.len()).map(move |tail| {
        std::iter::once(*first).chain(tail.into_iter().copied()).collect()
    })
}

/// Every Cayley map of valency `p` on the group, one per generating set and
/// cyclic order up to rotation.
pub fn search_space(group: &FiniteGroup, p: usize) -> Result<Vec<CayleyMap>> {
    Ok(generating_sets(group, p)?
        .iter()
        .flat_map(|set| cyclic_orders(set).map(|xs| CayleyMap::new_trusted(group.clone(), xs)))
        .collect())
}

/// All regular maps in the search space, before identification up to
/// isomorphism, in search order.
pub fn regular_maps_with(group: &FiniteGroup, p: usize, exec: Execution) -> Result<Vec<CayleyMap>> {
    let sets = generating_sets(group, p)?;
    let per_set = run_all(&sets, exec, |set| {
        cyclic_orders(set)
            .map(|xs| CayleyMap::new_trusted(group.clone(), xs))
            .filter(CayleyMap::is_regular)
            .collect::<Vec<_>>()
    });
    Ok(per_set.into_iter().flatten().collect())
}

/// Isomorphism class representatives of the regular `p`-valent Cayley maps
/// on the group, sorted by `xs`. Within a class the representative is the
/// first map in `(genus, xs)` order.
pub fn exhaustive_regular_maps(group: &FiniteGroup, p: usize) -> Result<Vec<CayleyMap>> {
    exhaustive_regular_maps_with(group, p, Execution::default())
}

pub fn exhaustive_regular_maps_with(
    group: &FiniteGroup,
    p: usize,
    exec: Execution,
) -> Result<Vec<CayleyMap>> {
    let maps = regular_maps_with(group, p, exec)?;
    representatives(maps)
}

/// Reduces maps to isomorphism class representatives, single-threaded.
pub fn representatives(maps: Vec<CayleyMap>) -> Result<Vec<CayleyMap>> {
    let mut keyed = maps
        .into_iter()
        .map(|m| Ok(((m.faces_and_genus()?.genus, m.xs_ranks()), m)))
        .collect::<Result<Vec<_>>>()?;
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    let mut reps: Vec<(u32, CayleyMap)> = Vec::new();
    for ((genus, _), m) in keyed {
        if !reps.iter().any(|(g, r)| *g == genus && r.is_isomorphic(&m)) {
            reps.push((genus, m));
        }
    }
    let mut out: Vec<CayleyMap> = reps.into_iter().map(|(_, m)| m).collect();
    out.sort_by_cached_key(CayleyMap::xs_ranks);
    Ok(out)
}

/// Involutions of `1..p` fixing `p` whose group `H(kappa)` has order
/// dividing `p(p-1)`, the order of `AGL_1(p)`.
pub fn affine_type_involutions(p: usize) -> Result<Vec<Permutation>> {
    let bound = p * (p - 1);
    let mut out = Vec::new();
    for kappa in perms::involutions_fixing(p, &[p - 1]) {
        let h = perms::PermGroup::generate(vec![Permutation::rotation(p), kappa.clone()], Some(bound))?;
        if h.order().is_some_and(|o| bound % o == 0) {
            out.push(kappa);
        }
    }
    Ok(out)
}

/// Cutoff for monodromy enumeration in census rows of non-regular maps.
pub const MONODROMY_CUTOFF: usize = 20_000;

/// One row of a census or verification report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusEntry {
    pub group: String,
    pub n: u32,
    pub p: usize,
    pub xs: Vec<String>,
    pub regular: bool,
    pub balance: BalanceType,
    pub kappa: String,
    /// `None` when the monodromy group exceeds [`MONODROMY_CUTOFF`].
    pub mon_order: Option<usize>,
    pub genus: u32,
    /// `None` above the graph vertex guard.
    pub graph_aut_order: Option<u64>,
    pub class_id: usize,
}

impl CensusEntry {
    pub fn of(map: &CayleyMap, class_id: usize) -> Result<Self> {
        let regular = map.is_regular();
        let mon = if regular {
            map.monodromy_order()
        } else {
            map.monodromy_order_with_cutoff(MONODROMY_CUTOFF)
        };
        let graph_aut_order = match graph::graph_aut_order(map) {
            Ok(order) => Some(order),
            Err(Error::SizeGuard { .. }) => None,
            Err(e) => return Err(e),
        };
        Ok(Self {
            group: map.group().to_string(),
            n: map.group().parameter(),
            p: map.valency(),
            xs: map.xs_strings(),
            regular,
            balance: map.balance_type(),
            kappa: map.distribution_of_inverses().cycle_notation(),
            mon_order: (!mon.exceeded).then_some(mon.size),
            genus: map.faces_and_genus()?.genus,
            graph_aut_order,
            class_id,
        })
    }
}

/// A group family swept by parameter in a census.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `D_n` for `n = 1..=max`.
    Dihedral,
    /// `Dic_n` for `n = 2..=max`.
    Dicyclic,
    /// All abelian groups of order `2..=max`.
    Abelian,
    /// `Z_2^r` for `r = 1..=max`.
    Elem2,
}

impl Family {
    pub fn groups(self, max: u32) -> Result<Vec<FiniteGroup>> {
        match self {
            Family::Dihedral => (1..=max).map(FiniteGroup::dihedral).collect(),
            Family::Dicyclic => (2..=max).map(FiniteGroup::dicyclic).collect(),
            Family::Abelian => Ok(abelian_groups_up_to(max)),
            Family::Elem2 => (1..=max).map(FiniteGroup::elem_abelian2).collect(),
        }
    }
}

/// Census rows for every isomorphism class of regular `p`-valent Cayley
/// maps over the family, class ids numbered in output order.
pub fn census(family: Family, p: usize, max: u32, exec: Execution) -> Result<Vec<CensusEntry>> {
    let groups = family.groups(max)?;
    for g in &groups {
        check_arc_guard(g, p)?;
    }
    let mut out = Vec::new();
    for g in &groups {
        for m in exhaustive_regular_maps_with(g, p, exec)? {
            out.push(CensusEntry::of(&m, out.len())?);
        }
    }
    Ok(out)
}

/// The claims the exhaustive search can check, keyed by their ids.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Claim {
    /// Abelian groups: balanced or anti-balanced, matching the
    /// anti-balanced map on `Z_2p` or a seed map on `Z_2^r`.
    Abelian,
    /// Dihedral groups: exactly the maps built from triples.
    Dihedral,
    /// Dicyclic groups: no regular maps.
    Dicyclic,
    /// Dihedral groups: no anti-balanced regular map.
    DihedralAntiBalanced,
    /// Dicyclic groups: no balanced regular map of odd valency.
    DicyclicBalancedEven,
    /// Formula count, triple count and CRT lift count agree.
    DihedralCount,
    /// Every regular map has identity or reflection distribution of inverses.
    KappaDichotomy,
}

impl Claim {
    pub const ALL: [Claim; 7] = [
        Claim::Abelian,
        Claim::Dihedral,
        Claim::Dicyclic,
        Claim::DihedralAntiBalanced,
        Claim::DicyclicBalancedEven,
        Claim::DihedralCount,
        Claim::KappaDichotomy,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Claim::Abelian => "1.1",
            Claim::Dihedral => "1.2",
            Claim::Dicyclic => "1.3",
            Claim::DihedralAntiBalanced => "2.6",
            Claim::DicyclicBalancedEven => "2.7-consequence",
            Claim::DihedralCount => "3.4",
            Claim::KappaDichotomy => "L3.2",
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Claim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Claim::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| Error::Parse(format!("unknown claim id {s:?}")))
    }
}

/// Search bounds: the primes to test and the family parameter bound (the
/// group order for abelian groups, `n` otherwise).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub primes: Vec<u64>,
    pub n_max: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub claim: String,
    pub passed: bool,
    /// Number of groups, maps or integers examined.
    pub checked: usize,
    pub counterexamples: Vec<CensusEntry>,
    pub notes: Vec<String>,
}

impl Report {
    fn new(claim: Claim) -> Self {
        Self {
            claim: claim.id().to_string(),
            passed: true,
            checked: 0,
            counterexamples: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn fail_map(&mut self, map: &CayleyMap, note: String) -> Result<()> {
        self.passed = false;
        let id = self.counterexamples.len();
        self.counterexamples.push(CensusEntry::of(map, id)?);
        self.notes.push(note);
        Ok(())
    }

    fn fail_note(&mut self, note: String) {
        self.passed = false;
        self.notes.push(note);
    }
}

/// Oracle output on `D_n` against the maps built from triples.
#[derive(Clone, Debug)]
pub struct DihedralComparison {
    pub oracle: Vec<CayleyMap>,
    pub constructed: Vec<CayleyMap>,
    /// Oracle classes matching no construction.
    pub unexplained: Vec<CayleyMap>,
    /// Constructions the oracle did not find.
    pub missing: Vec<CayleyMap>,
}

impl DihedralComparison {
    pub fn agrees(&self) -> bool {
        self.unexplained.is_empty() && self.missing.is_empty()
    }
}

pub fn compare_dihedral(n: u32, p: u64, exec: Execution) -> Result<DihedralComparison> {
    let group = FiniteGroup::dihedral(n)?;
    let oracle = exhaustive_regular_maps_with(&group, p as usize, exec)?;
    let constructed = triples_for(n as u64, p)
        .into_iter()
        .map(|l| dihedral_balanced_map(n as u64, l, p))
        .collect::<Result<Vec<_>>>()?;
    let unexplained = oracle
        .iter()
        .filter(|m| !constructed.iter().any(|c| c.is_isomorphic(m)))
        .cloned()
        .collect();
    let missing = constructed
        .iter()
        .filter(|c| !oracle.iter().any(|m| m.is_isomorphic(c)))
        .cloned()
        .collect();
    Ok(DihedralComparison {
        oracle,
        constructed,
        unexplained,
        missing,
    })
}

fn check_primes(bounds: &Bounds) -> Result<()> {
    match bounds.primes.iter().find(|&&p| !is_odd_prime(p)) {
        Some(p) => Err(Error::InvalidArgument(format!("{p} is not an odd prime"))),
        None => Ok(()),
    }
}

/// Rejects bounds the searches behind a claim would refuse, before any
/// search starts.
pub fn check_claim_bounds(claim: Claim, bounds: &Bounds) -> Result<()> {
    check_primes(bounds)?;
    let families: &[Family] = match claim {
        Claim::Abelian => &[Family::Abelian],
        Claim::Dihedral | Claim::DihedralAntiBalanced => &[Family::Dihedral],
        Claim::Dicyclic | Claim::DicyclicBalancedEven => &[Family::Dicyclic],
        Claim::KappaDichotomy => &[Family::Abelian, Family::Dihedral, Family::Dicyclic],
        Claim::DihedralCount => &[],
    };
    for &family in families {
        for g in family.groups(bounds.n_max)? {
            for &p in &bounds.primes {
                check_arc_guard(&g, p as usize)?;
            }
            if let (Claim::Abelian, GroupKind::ElemAbelian2(r)) = (claim, g.kind()) {
                if *r > SEED_MAX_RANK {
                    return Err(Error::SizeGuard {
                        what: "seed matrix rank",
                        size: *r as usize,
                        limit: SEED_MAX_RANK as usize,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Checks one claim over the bounds and lists every counterexample.
pub fn verify_claim(claim: Claim, bounds: &Bounds, exec: Execution) -> Result<Report> {
    check_claim_bounds(claim, bounds)?;
    let mut report = Report::new(claim);
    let family_maps = |family: Family, p: u64| -> Result<Vec<CayleyMap>> {
        let mut out = Vec::new();
        for g in family.groups(bounds.n_max)? {
            out.extend(exhaustive_regular_maps_with(&g, p as usize, exec)?);
        }
        Ok(out)
    };
    for &p in &bounds.primes {
        match claim {
            Claim::Abelian => {
                let anti = cyclic_antibalanced_map(p)?;
                for m in family_maps(Family::Abelian, p)? {
                    report.checked += 1;
                    match m.balance_type() {
                        BalanceType::AntiBalanced if m.is_isomorphic(&anti) => {}
                        BalanceType::AntiBalanced => {
                            report.fail_map(&m, format!("{m}: anti-balanced but not {anti}"))?
                        }
                        BalanceType::Balanced => {
                            if !matches_seed_map(&m, p)? {
                                report.fail_map(&m, format!("{m}: balanced, matches no seed map"))?;
                            }
                        }
                        other => report.fail_map(&m, format!("{m}: balance type {other}"))?,
                    }
                }
            }
            Claim::Dihedral => {
                for n in 1..=bounds.n_max {
                    report.checked += 1;
                    let cmp = compare_dihedral(n, p, exec)?;
                    for m in &cmp.unexplained {
                        report.fail_map(m, format!("{m}: regular, not built from a triple"))?;
                    }
                    for m in &cmp.missing {
                        report.fail_map(m, format!("{m}: built from a triple, not found"))?;
                    }
                }
            }
            Claim::Dicyclic => {
                for m in family_maps(Family::Dicyclic, p)? {
                    report.fail_map(&m, format!("{m}: regular map on a dicyclic group"))?;
                }
                report.checked += bounds.n_max.saturating_sub(1) as usize;
            }
            Claim::DihedralAntiBalanced => {
                for m in family_maps(Family::Dihedral, p)? {
                    report.checked += 1;
                    if m.balance_type() == BalanceType::AntiBalanced {
                        report.fail_map(&m, format!("{m}: regular and anti-balanced"))?;
                    }
                }
            }
            Claim::DicyclicBalancedEven => {
                for m in family_maps(Family::Dicyclic, p)? {
                    report.checked += 1;
                    if m.balance_type() == BalanceType::Balanced {
                        report.fail_map(&m, format!("{m}: regular, balanced, odd valency"))?;
                    }
                }
            }
            Claim::DihedralCount => {
                for n in 1..=bounds.n_max as u64 {
                    report.checked += 1;
                    let formula = formula_count(n, p);
                    let triples = triples_for(n, p);
                    let lifted = crt_lift_multipliers(n, p);
                    if formula != triples.len() as u64 || triples != lifted {
                        report.fail_note(format!(
                            "n={n}, p={p}: formula {formula}, triples {triples:?}, CRT lift {lifted:?}"
                        ));
                    }
                }
            }
            Claim::KappaDichotomy => {
                let reflection = perms::reflection_fixing_last(p as usize);
                for family in [Family::Abelian, Family::Dihedral, Family::Dicyclic] {
                    for m in family_maps(family, p)? {
                        report.checked += 1;
                        let kappa = m.canonical_base_rotation()?.distribution_of_inverses();
                        if !(kappa.is_identity() || kappa.permutation() == &reflection) {
                            report.fail_map(&m, format!("{m}: kappa {}", kappa.cycle_notation()))?;
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Whether a map is isomorphic to some seed map of the same arc count.
fn matches_seed_map(map: &CayleyMap, p: u64) -> Result<bool> {
    let GroupKind::ElemAbelian2(r) = *map.group().kind() else {
        return Ok(false);
    };
    if r > SEED_MAX_RANK {
        return Err(Error::SizeGuard {
            what: "seed matrix rank",
            size: r as usize,
            limit: SEED_MAX_RANK as usize,
        });
    }
    for seed in elem_abelian_seeds(r, p)? {
        if seed.to_map()?.is_isomorphic(map) {
            return Ok(true);
        }
    }
    Ok(false)
}
