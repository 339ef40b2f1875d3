//! Permutations of finite point sets and BFS group closure with a cutoff.
//!
//! Points are stored 0-based; cycle notation (`from_cycles`, `to_cycles`,
//! `Display`) is 1-based so that `(1 2 ... k)` reads as usual.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Self {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from its 0-based image list.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            match seen.get_mut(i as usize) {
                Some(s) if !*s => *s = true,
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "{images:?} is not a bijection"
                    )))
                }
            }
        }
        Ok(Self { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Self::from_images(images.clone()).is_ok());
        Self { images }
    }

    /// The full cycle `(1 2 ... k)`.
    pub fn rotation(k: usize) -> Self {
        Self {
            images: (0..k as u32).map(|i| (i + 1) % k as u32).collect(),
        }
    }

    /// Disjoint cycles in 1-based notation; omitted points are fixed.
    pub fn from_cycles(degree: usize, cycles: &[Vec<u32>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut used = vec![false; degree];
        for cycle in cycles {
            for (pos, &point) in cycle.iter().enumerate() {
                if point == 0 || point as usize > degree {
                    return Err(Error::InvalidArgument(format!(
                        "point {point} outside 1..={degree}"
                    )));
                }
                let p = point as usize - 1;
                if used[p] {
                    return Err(Error::InvalidArgument(format!(
                        "point {point} appears in more than one cycle"
                    )));
                }
                used[p] = true;
                images[p] = cycle[(pos + 1) % cycle.len()] - 1;
            }
        }
        Ok(Self { images })
    }

    /// Non-trivial cycles in 1-based notation, each starting at its smallest
    /// point, ordered by that point.
    pub fn to_cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p as u32 + 1);
                p = self.images[p] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Sorted lengths of all cycles, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lengths: Vec<usize> = self.to_cycles().iter().map(Vec::len).collect();
        lengths.extend(std::iter::repeat(1).take(self.fixed_points().len()));
        lengths.sort_unstable();
        lengths
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// 0-based image.
    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.degree() != other.degree() {
            return Err(Error::InvalidArgument(format!(
                "degree mismatch: {} vs {}",
                self.degree(),
                other.degree()
            )));
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Self) -> Self {
        Self {
            images: other.images.iter().map(|&i| self.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Self { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    pub fn is_involution(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &j)| self.images[j as usize] as usize == i)
    }

    /// 0-based fixed points.
    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.degree()).filter(|&i| self.apply(i) == i).collect()
    }

    /// Orbits of the cyclic group generated by `self`, each sorted.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        orbits(std::slice::from_ref(self), self.degree())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.to_cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(u32::to_string).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

/// Orbits of `<gens>` on `0..degree`, in order of their smallest point.
pub fn orbits(gens: &[Permutation], degree: usize) -> Vec<Vec<usize>> {
    let mut seen = vec![false; degree];
    let mut out = Vec::new();
    for start in 0..degree {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(p) = queue.pop_front() {
            for g in gens {
                let q = g.apply(p);
                if !seen[q] {
                    seen[q] = true;
                    orbit.push(q);
                    queue.push_back(q);
                }
            }
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

pub fn is_transitive(gens: &[Permutation], degree: usize) -> bool {
    degree == 0 || orbits(gens, degree).len() == 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosureSize {
    /// Exact order when `exceeded` is false, otherwise `cutoff + 1`.
    pub size: usize,
    pub exceeded: bool,
}

fn check_degrees(gens: &[Permutation]) -> Result<usize> {
    let degree = gens.first().map_or(0, Permutation::degree);
    if gens.iter().any(|g| g.degree() != degree) {
        return Err(Error::InvalidArgument(
            "generators have different degrees".into(),
        ));
    }
    Ok(degree)
}

/// BFS over products `g * s` starting from the identity. Returns the elements
/// found, stopping as soon as more than `cutoff` are known.
fn bfs_closure(gens: &[Permutation], degree: usize, cutoff: usize) -> (Vec<Permutation>, bool) {
    let id = Permutation::identity(degree);
    let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
    let mut elements = vec![id];
    let mut head = 0;
    while head < elements.len() {
        let g = elements[head].clone();
        head += 1;
        for s in gens {
            let h = s.compose_unchecked(&g);
            if seen.insert(h.clone()) {
                elements.push(h);
                if elements.len() > cutoff {
                    return (elements, true);
                }
            }
        }
    }
    (elements, false)
}

/// Order of `<gens>` if it is at most `cutoff`.
pub fn closure_with_cutoff(gens: &[Permutation], cutoff: usize) -> Result<ClosureSize> {
    if cutoff == 0 {
        return Err(Error::InvalidArgument("cutoff must be >= 1".into()));
    }
    let degree = check_degrees(gens)?;
    let (elements, exceeded) = bfs_closure(gens, degree, cutoff);
    Ok(ClosureSize {
        size: elements.len(),
        exceeded,
    })
}

/// Whether `<gens>` is transitive on `0..degree` with order exactly `degree`.
pub fn acts_regularly(gens: &[Permutation], degree: usize) -> Result<bool> {
    let d = check_degrees(gens)?;
    if !gens.is_empty() && d != degree {
        return Err(Error::InvalidArgument(format!(
            "generators act on {d} points, expected {degree}"
        )));
    }
    if !is_transitive(gens, degree) {
        return Ok(false);
    }
    let c = closure_with_cutoff(gens, degree + 1)?;
    Ok(!c.exceeded && c.size == degree)
}

/// A permutation group with its elements enumerated once at construction.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    exceeded: bool,
}

impl PermGroup {
    /// Enumerates `<gens>`; with a cutoff, enumeration stops past `cutoff`
    /// elements and the group is flagged as exceeded.
    pub fn generate(gens: Vec<Permutation>, cutoff: Option<usize>) -> Result<Self> {
        let degree = check_degrees(&gens)?;
        let (elements, exceeded) = bfs_closure(&gens, degree, cutoff.unwrap_or(usize::MAX));
        Ok(Self {
            degree,
            generators: gens,
            elements,
            exceeded,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// Exact order, or `None` if the cutoff was exceeded.
    pub fn order(&self) -> Option<usize> {
        (!self.exceeded).then_some(self.elements.len())
    }

    pub fn exceeded(&self) -> bool {
        self.exceeded
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.contains(p)
    }

    pub fn is_transitive(&self) -> bool {
        is_transitive(&self.generators, self.degree)
    }

    /// Size of the stabilizer of a 0-based point, counted over the elements.
    pub fn stabilizer_order(&self, point: usize) -> usize {
        self.elements.iter().filter(|g| g.apply(point) == point).count()
    }
}

/// `H(kappa) = <(1 2 ... k), kappa>`, fully enumerated.
pub fn h_kappa(k: usize, kappa: &Permutation) -> Result<PermGroup> {
    if kappa.degree() != k {
        return Err(Error::InvalidArgument(format!(
            "kappa has degree {}, expected {k}",
            kappa.degree()
        )));
    }
    if !kappa.is_involution() {
        return Err(Error::InvalidArgument(format!("{kappa} is not an involution")));
    }
    PermGroup::generate(vec![Permutation::rotation(k), kappa.clone()], None)
}

/// All involutions (identity included) of `0..degree` fixing every point in
/// `fixed` (0-based), in lexicographic order of their image arrays.
pub fn involutions_fixing(degree: usize, fixed: &[usize]) -> Vec<Permutation> {
    fn rec(images: &mut Vec<u32>, free: &mut Vec<usize>, out: &mut Vec<Permutation>) {
        let Some(&first) = free.first() else {
            out.push(Permutation {
                images: images.clone(),
            });
            return;
        };
        // first is fixed
        free.remove(0);
        rec(images, free, out);
        // or swapped with a later free point
        for idx in 0..free.len() {
            let partner = free.remove(idx);
            images[first] = partner as u32;
            images[partner] = first as u32;
            rec(images, free, out);
            images[first] = first as u32;
            images[partner] = partner as u32;
            free.insert(idx, partner);
        }
        free.insert(0, first);
    }
    let mut images: Vec<u32> = (0..degree as u32).collect();
    let mut free: Vec<usize> = (0..degree).filter(|p| !fixed.contains(p)).collect();
    let mut out = Vec::new();
    rec(&mut images, &mut free, &mut out);
    out.sort();
    out
}

/// `(p)(1 p-1)(2 p-2)...`: the involution `i -> p - i` on `1..p-1`, fixing `p`.
pub fn reflection_fixing_last(p: usize) -> Permutation {
    Permutation {
        images: (0..p as u32)
            .map(|i| if i as usize == p - 1 { i } else { p as u32 - 2 - i })
            .collect(),
    }
}
