//! Cayley maps `CM(G, X, q)` as combinatorial maps `(D; R, L)`.
//!
//! The rotation `q = (x_1 x_2 ... x_k)` is given by the order of `xs`. An arc
//! `(g, g x_i)` is identified with `(g, i)`; arcs are numbered
//! `rank(g) * k + (i - 1)`, which fixes the permutation degrees. With that
//! numbering
//!
//! * `R(g, i) = (g, i + 1 mod k)`,
//! * `L(g, i) = (g x_i, kappa(i))`, where `x_i^-1 = x_kappa(i)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, GeneratingSetError, Result};
use crate::groups::{FiniteGroup, GroupAutomorphism, GroupElement};
use crate::perms::{self, ClosureSize, Permutation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyMap {
    group: FiniteGroup,
    xs: Vec<GroupElement>,
    /// 0-based distribution of inverses.
    kappa: Vec<u32>,
    /// `right[rank(g) * k + i] = rank(g * x_i)`.
    right: Vec<u32>,
}

/// The arc `(vertex, vertex * x_index)`, `index` 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Arc {
    pub vertex: GroupElement,
    pub index: usize,
}

/// The distribution of inverses as an involution on `{1..k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kappa {
    perm: Permutation,
}

impl Kappa {
    pub fn permutation(&self) -> &Permutation {
        &self.perm
    }

    pub fn is_identity(&self) -> bool {
        self.perm.is_identity()
    }

    pub fn has_fixed_point(&self) -> bool {
        !self.perm.fixed_points().is_empty()
    }

    /// 1-based fixed points.
    pub fn fixed_points(&self) -> Vec<usize> {
        self.perm.fixed_points().into_iter().map(|p| p + 1).collect()
    }

    /// Whether this is `(k)(1 k-1)(2 k-2)...`.
    pub fn is_reflection_fixing_last(&self) -> bool {
        self.perm == perms::reflection_fixing_last(self.perm.degree())
    }

    /// Cycle notation with fixed points written out, e.g. `(1 3)(2)`.
    pub fn cycle_notation(&self) -> String {
        let mut cycles = self.perm.to_cycles();
        cycles.extend(self.perm.fixed_points().into_iter().map(|p| vec![p as u32 + 1]));
        cycles.sort_by_key(|c| c[0]);
        cycles
            .iter()
            .map(|c| {
                let parts: Vec<String> = c.iter().map(u32::to_string).collect();
                format!("({})", parts.join(" "))
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BalanceType {
    Balanced,
    AntiBalanced,
    TBalanced(u32),
    NotTBalanced,
}

impl fmt::Display for BalanceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BalanceType::Balanced => write!(f, "Balanced"),
            BalanceType::AntiBalanced => write!(f, "AntiBalanced"),
            BalanceType::TBalanced(t) => write!(f, "TBalanced({t})"),
            BalanceType::NotTBalanced => write!(f, "NotTBalanced"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceStructure {
    pub faces: usize,
    pub genus: u32,
    /// Sorted face lengths.
    pub face_sizes: Vec<usize>,
}

impl CayleyMap {
    /// Validates `X` (at least three elements, unit-free, no repeats,
    /// inverse-closed, generating) and builds the map.
    pub fn new(group: FiniteGroup, xs: Vec<GroupElement>) -> Result<Self> {
        for x in &xs {
            group.check(x)?;
        }
        let k = xs.len();
        if k < 3 {
            return Err(GeneratingSetError::TooFew(k).into());
        }
        let id = group.identity();
        if xs.contains(&id) {
            return Err(GeneratingSetError::ContainsIdentity.into());
        }
        for (i, x) in xs.iter().enumerate() {
            if xs[..i].contains(x) {
                return Err(GeneratingSetError::Duplicate(group.format_element(x)).into());
            }
        }
        let mut kappa = Vec::with_capacity(k);
        for x in &xs {
            let inv = group.inverse(x);
            match xs.iter().position(|y| *y == inv) {
                Some(j) => kappa.push(j as u32),
                None => {
                    return Err(
                        GeneratingSetError::NotInverseClosed(group.format_element(x)).into(),
                    )
                }
            }
        }
        let span = group.closure(&xs)?.len();
        if span != group.order() {
            return Err(GeneratingSetError::DoesNotGenerate(span).into());
        }
        Ok(Self::assemble(group, xs, kappa))
    }

    /// Skips validation; `xs` must already satisfy every condition of [`Self::new`].
    pub(crate) fn new_trusted(group: FiniteGroup, xs: Vec<GroupElement>) -> Self {
        let kappa = xs
            .iter()
            .map(|x| {
                let inv = group.inverse(x);
                xs.iter().position(|y| *y == inv).expect("inverse-closed") as u32
            })
            .collect();
        Self::assemble(group, xs, kappa)
    }

    fn assemble(group: FiniteGroup, xs: Vec<GroupElement>, kappa: Vec<u32>) -> Self {
        let mut right = Vec::with_capacity(group.order() * xs.len());
        for g in group.elements() {
            for x in &xs {
                right.push(group.rank(&group.op(&g, x)) as u32);
            }
        }
        Self {
            group,
            xs,
            kappa,
            right,
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn xs(&self) -> &[GroupElement] {
        &self.xs
    }

    /// Ranks of `x_1..x_k`, the key for lexicographic comparisons.
    pub fn xs_ranks(&self) -> Vec<usize> {
        self.xs.iter().map(|x| self.group.rank(x)).collect()
    }

    pub fn xs_strings(&self) -> Vec<String> {
        self.xs.iter().map(|x| self.group.format_element(x)).collect()
    }

    pub fn valency(&self) -> usize {
        self.xs.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.group.order()
    }

    pub fn num_arcs(&self) -> usize {
        self.group.order() * self.xs.len()
    }

    pub fn num_edges(&self) -> usize {
        self.num_arcs() / 2
    }

    pub fn arc_id(&self, arc: &Arc) -> Result<usize> {
        self.group.check(&arc.vertex)?;
        if arc.index == 0 || arc.index > self.valency() {
            return Err(Error::InvalidArgument(format!(
                "arc index {} outside 1..={}",
                arc.index,
                self.valency()
            )));
        }
        Ok(self.group.rank(&arc.vertex) * self.valency() + arc.index - 1)
    }

    pub fn arc(&self, id: usize) -> Arc {
        let k = self.valency();
        Arc {
            vertex: self.group.element(id / k),
            index: id % k + 1,
        }
    }

    #[inline]
    pub(crate) fn r_of(&self, id: usize) -> usize {
        let k = self.valency();
        id - id % k + (id % k + 1) % k
    }

    #[inline]
    pub(crate) fn l_of(&self, id: usize) -> usize {
        let k = self.valency();
        self.right[id] as usize * k + self.kappa[id % k] as usize
    }

    /// Head vertex rank of an arc.
    #[inline]
    pub(crate) fn head(&self, id: usize) -> usize {
        self.right[id] as usize
    }

    pub fn step_r(&self, arc: &Arc) -> Result<Arc> {
        Ok(self.arc(self.r_of(self.arc_id(arc)?)))
    }

    pub fn step_l(&self, arc: &Arc) -> Result<Arc> {
        Ok(self.arc(self.l_of(self.arc_id(arc)?)))
    }

    pub fn rotation_perm(&self) -> Permutation {
        Permutation::from_images_unchecked(
            (0..self.num_arcs()).map(|e| self.r_of(e) as u32).collect(),
        )
    }

    pub fn reversal_perm(&self) -> Permutation {
        Permutation::from_images_unchecked(
            (0..self.num_arcs()).map(|e| self.l_of(e) as u32).collect(),
        )
    }

    /// Left translation `L_g` acting on arcs by `(h, i) -> (gh, i)`.
    pub fn left_translation(&self, g: &GroupElement) -> Result<Permutation> {
        self.group.check(g)?;
        let k = self.valency();
        let images = (0..self.num_arcs())
            .map(|e| {
                let h = self.group.element(e / k);
                (self.group.rank(&self.group.op(g, &h)) * k + e % k) as u32
            })
            .collect();
        Ok(Permutation::from_images_unchecked(images))
    }

    pub fn distribution_of_inverses(&self) -> Kappa {
        Kappa {
            perm: Permutation::from_images_unchecked(self.kappa.clone()),
        }
    }

    /// The same map with `q` written from `x_{s+1}`: `xs' = (x_{s+1}, ..., x_s)`.
    pub fn rotated(&self, s: usize) -> Self {
        let k = self.valency();
        let xs = (0..k).map(|i| self.xs[(i + s) % k]).collect();
        Self::new_trusted(self.group.clone(), xs)
    }

    /// Relabels `q` cyclically so that `kappa(k) = k`, choosing the
    /// lexicographically smallest `xs` among the eligible relabelings.
    pub fn canonical_base_rotation(&self) -> Result<Self> {
        let k = self.valency();
        (0..k)
            .filter(|&s| {
                let last = (s + k - 1) % k;
                self.kappa[last] as usize == last
            })
            .map(|s| self.rotated(s))
            .min_by_key(|m| m.xs_ranks())
            .ok_or_else(|| {
                Error::NotApplicable("distribution of inverses has no fixed point".into())
            })
    }

    /// Order of `Mon(M) = <R, L>`, enumerated up to `|D| + 1` elements.
    pub fn monodromy_order(&self) -> ClosureSize {
        self.monodromy_order_with_cutoff(self.num_arcs() + 1)
    }

    pub fn monodromy_order_with_cutoff(&self, cutoff: usize) -> ClosureSize {
        perms::closure_with_cutoff(&[self.rotation_perm(), self.reversal_perm()], cutoff)
            .expect("R and L share the arc set")
    }

    /// Whether `Mon(M)` acts regularly on the arcs.
    pub fn is_regular(&self) -> bool {
        perms::acts_regularly(
            &[self.rotation_perm(), self.reversal_perm()],
            self.num_arcs(),
        )
        .expect("R and L share the arc set")
    }

    /// Whether some map automorphism fixes the identity vertex and rotates its
    /// arcs by one step. An independent regularity test: the left
    /// translations already act transitively on vertices.
    pub fn has_vertex_rotation_automorphism(&self) -> bool {
        let e = 0;
        propagate(self, self, e, self.r_of(e)).is_some()
    }

    /// Smallest `t` in `1..k` with `q(x)^-1 = q^t(x^-1)` for all `x`, i.e.
    /// `kappa(i + 1) = kappa(i) + t (mod k)` for every index.
    pub fn balance_type(&self) -> BalanceType {
        let k = self.valency();
        let kappa = |i: usize| self.kappa[i % k] as usize;
        let t = (kappa(1) + k - kappa(0)) % k;
        let holds = t != 0 && (0..k).all(|i| kappa(i + 1) == (kappa(i) + t) % k);
        match (holds, t) {
            (false, _) => BalanceType::NotTBalanced,
            (true, 1) => BalanceType::Balanced,
            (true, t) if t == k - 1 => BalanceType::AntiBalanced,
            (true, t) => BalanceType::TBalanced(t as u32),
        }
    }

    /// An automorphism of `G` whose restriction to `X` is `q`, if any.
    pub fn rotation_automorphism(&self) -> Option<GroupAutomorphism> {
        let k = self.valency();
        let assignment: Vec<_> = (0..k).map(|i| (self.xs[i], self.xs[(i + 1) % k])).collect();
        self.group
            .automorphism_extending(&assignment)
            .expect("X lies in the group")
    }

    /// Regular-and-balanced test through the existence of a group
    /// automorphism extending `q`.
    pub fn balanced_regular_via_aut(&self) -> bool {
        self.rotation_automorphism().is_some()
    }

    /// An arc bijection `phi` with `phi R1 = R2 phi` and `phi L1 = L2 phi`.
    pub fn find_isomorphism(&self, other: &CayleyMap) -> Option<Vec<u32>> {
        if self.num_arcs() != other.num_arcs() || self.valency() != other.valency() {
            return None;
        }
        (0..other.num_arcs()).find_map(|f| propagate(self, other, 0, f))
    }

    pub fn is_isomorphic(&self, other: &CayleyMap) -> bool {
        self.find_isomorphism(other).is_some()
    }

    /// Faces are the orbits of `R L`; the genus follows from
    /// `V - E + F = 2 - 2g`.
    pub fn faces_and_genus(&self) -> Result<FaceStructure> {
        let n = self.num_arcs();
        let mut seen = vec![false; n];
        let mut face_sizes = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut e = start;
            while !seen[e] {
                seen[e] = true;
                len += 1;
                e = self.r_of(self.l_of(e));
            }
            face_sizes.push(len);
        }
        face_sizes.sort_unstable();
        let faces = face_sizes.len();
        let twice_genus = 2 + self.num_edges() as i64 - self.num_vertices() as i64 - faces as i64;
        if twice_genus < 0 || twice_genus % 2 != 0 {
            return Err(Error::Invariant(format!(
                "Euler characteristic gives 2g = {twice_genus}"
            )));
        }
        Ok(FaceStructure {
            faces,
            genus: (twice_genus / 2) as u32,
            face_sizes,
        })
    }

    /// Neighbour lists of the underlying simple graph on vertex ranks.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let k = self.valency();
        (0..self.num_vertices())
            .map(|v| (0..k).map(|i| self.head(v * k + i)).collect())
            .collect()
    }
}

/// Seeds `phi(e) = f` and extends `phi` along `R` and `L`, failing on any
/// inconsistency. Both maps are connected, so a consistent extension is
/// defined everywhere.
fn propagate(m1: &CayleyMap, m2: &CayleyMap, e: usize, f: usize) -> Option<Vec<u32>> {
    const UNSET: u32 = u32::MAX;
    let n = m1.num_arcs();
    let mut phi = vec![UNSET; n];
    let mut used = vec![false; n];
    phi[e] = f as u32;
    used[f] = true;
    let mut stack = vec![e];
    while let Some(x) = stack.pop() {
        let y = phi[x] as usize;
        for (x2, y2) in [(m1.r_of(x), m2.r_of(y)), (m1.l_of(x), m2.l_of(y))] {
            if phi[x2] == UNSET {
                if used[y2] {
                    return None;
                }
                phi[x2] = y2 as u32;
                used[y2] = true;
                stack.push(x2);
            } else if phi[x2] as usize != y2 {
                return None;
            }
        }
    }
    phi.iter().all(|&p| p != UNSET).then_some(phi)
}

impl fmt::Display for CayleyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CM({}, ({}))", self.group, self.xs_strings().join(" "))
    }
}
