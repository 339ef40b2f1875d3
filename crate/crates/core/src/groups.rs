//! Exact arithmetic in cyclic, elementary abelian 2-, dihedral and dicyclic
//! groups, plus finite abelian direct products used by the abelian census.
//!
//! Dihedral and dicyclic elements are kept in the normal form `a^i b^e`
//! (`e` in {0, 1}) and multiplied in closed form on the exponents:
//!
//! * `D_n = <a, b | a^n = b^2 = (ab)^2 = 1>`, order `2n`;
//! * `Dic_n = <a, b | a^2n = 1, b^2 = a^n, b^-1 a b = a^-1>`, order `4n`.
//!
//! Every element has a rank in `0..|G|` which fixes the global element order
//! used for lexicographic comparisons and for permutation degrees.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::gf2::{self, Gf2Matrix};

/// Largest rank for which automorphisms of `Z_2^r` are found by enumerating
/// all bit-matrices.
pub const MATRIX_SEARCH_MAX_RANK: u32 = 4;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupKind {
    Cyclic(u32),
    ElemAbelian2(u32),
    Dihedral(u32),
    Dicyclic(u32),
    /// `Z_{m_1} x ... x Z_{m_s}` with `s >= 2` and every `m_i >= 2`.
    Abelian(Vec<u32>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteGroup {
    kind: GroupKind,
    order: usize,
}

/// An element in canonical normal form. Which variant is valid depends on the
/// group kind; residues are always reduced.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Residue(u32),
    Bits(u32),
    /// `a^a b^b` in `D_n`.
    Dihedral { a: u32, b: bool },
    /// `a^a b^b` in `Dic_n`.
    Dicyclic { a: u32, b: bool },
    /// Mixed-radix packing of the coordinates of an abelian product,
    /// first factor most significant.
    Vector(u32),
}

impl FiniteGroup {
    pub fn cyclic(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("Z_n needs n >= 1".into()));
        }
        Ok(Self {
            kind: GroupKind::Cyclic(n),
            order: n as usize,
        })
    }

    pub fn elem_abelian2(r: u32) -> Result<Self> {
        if r == 0 || r > gf2::MAX_RANK {
            return Err(Error::InvalidArgument(format!(
                "Z_2^r needs 1 <= r <= {}",
                gf2::MAX_RANK
            )));
        }
        Ok(Self {
            kind: GroupKind::ElemAbelian2(r),
            order: 1 << r,
        })
    }

    pub fn dihedral(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("D_n needs n >= 1".into()));
        }
        Ok(Self {
            kind: GroupKind::Dihedral(n),
            order: 2 * n as usize,
        })
    }

    /// `Dic_1` is cyclic of order 4 and is rejected so that `b^2 = a^n != 1`.
    pub fn dicyclic(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument("Dic_n needs n >= 2".into()));
        }
        Ok(Self {
            kind: GroupKind::Dicyclic(n),
            order: 4 * n as usize,
        })
    }

    /// Direct product of cyclic groups. A single factor gives `Z_n`; the
    /// empty product is the trivial group `Z_1`.
    pub fn abelian(factors: &[u32]) -> Result<Self> {
        if factors.iter().any(|&m| m < 2) {
            return Err(Error::InvalidArgument(
                "abelian product factors must be >= 2".into(),
            ));
        }
        match factors {
            [] => Self::cyclic(1),
            [n] => Self::cyclic(*n),
            _ => {
                let order = factors
                    .iter()
                    .try_fold(1usize, |acc, &m| acc.checked_mul(m as usize))
                    .filter(|&o| o <= u32::MAX as usize)
                    .ok_or_else(|| Error::InvalidArgument("abelian product too large".into()))?;
                Ok(Self {
                    kind: GroupKind::Abelian(factors.to_vec()),
                    order,
                })
            }
        }
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// The `n` of `Z_n`, `D_n`, `Dic_n`, the rank `r` of `Z_2^r`, or the
    /// order of an abelian product.
    pub fn parameter(&self) -> u32 {
        match &self.kind {
            GroupKind::Cyclic(n)
            | GroupKind::ElemAbelian2(n)
            | GroupKind::Dihedral(n)
            | GroupKind::Dicyclic(n) => *n,
            GroupKind::Abelian(_) => self.order as u32,
        }
    }

    pub fn is_abelian(&self) -> bool {
        match self.kind {
            GroupKind::Cyclic(_) | GroupKind::ElemAbelian2(_) | GroupKind::Abelian(_) => true,
            GroupKind::Dihedral(n) => n <= 2,
            GroupKind::Dicyclic(_) => false,
        }
    }

    pub fn identity(&self) -> GroupElement {
        match self.kind {
            GroupKind::Cyclic(_) => GroupElement::Residue(0),
            GroupKind::ElemAbelian2(_) => GroupElement::Bits(0),
            GroupKind::Dihedral(_) => GroupElement::Dihedral { a: 0, b: false },
            GroupKind::Dicyclic(_) => GroupElement::Dicyclic { a: 0, b: false },
            GroupKind::Abelian(_) => GroupElement::Vector(0),
        }
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        match (&self.kind, *g) {
            (GroupKind::Cyclic(n), GroupElement::Residue(i)) => i < *n,
            (GroupKind::ElemAbelian2(r), GroupElement::Bits(v)) => v >> r == 0,
            (GroupKind::Dihedral(n), GroupElement::Dihedral { a, .. }) => a < *n,
            (GroupKind::Dicyclic(n), GroupElement::Dicyclic { a, .. }) => a < 2 * n,
            (GroupKind::Abelian(_), GroupElement::Vector(v)) => (v as usize) < self.order,
            _ => false,
        }
    }

    pub fn check(&self, g: &GroupElement) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::ForeignElement {
                element: format!("{g:?}"),
                group: self.to_string(),
            })
        }
    }

    /// Position of `g` in the global element order.
    pub fn rank(&self, g: &GroupElement) -> usize {
        debug_assert!(self.contains(g));
        match (&self.kind, *g) {
            (GroupKind::Dihedral(n), GroupElement::Dihedral { a, b }) => {
                (b as usize) * (*n as usize) + a as usize
            }
            (GroupKind::Dicyclic(n), GroupElement::Dicyclic { a, b }) => {
                (b as usize) * 2 * (*n as usize) + a as usize
            }
            (_, GroupElement::Residue(i) | GroupElement::Bits(i) | GroupElement::Vector(i)) => {
                i as usize
            }
            _ => unreachable!("rank of foreign element"),
        }
    }

    pub fn element(&self, rank: usize) -> GroupElement {
        debug_assert!(rank < self.order);
        let r = rank as u32;
        match self.kind {
            GroupKind::Cyclic(_) => GroupElement::Residue(r),
            GroupKind::ElemAbelian2(_) => GroupElement::Bits(r),
            GroupKind::Dihedral(n) => GroupElement::Dihedral {
                a: r % n,
                b: r >= n,
            },
            GroupKind::Dicyclic(n) => GroupElement::Dicyclic {
                a: r % (2 * n),
                b: r >= 2 * n,
            },
            GroupKind::Abelian(_) => GroupElement::Vector(r),
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(|r| self.element(r))
    }

    /// Checked product.
    pub fn mul(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.op(g, h))
    }

    /// Checked inverse.
    pub fn inv(&self, g: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        Ok(self.inverse(g))
    }

    /// Product of two elements already known to belong to the group.
    pub fn op(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        debug_assert!(self.contains(g) && self.contains(h));
        match (&self.kind, *g, *h) {
            (GroupKind::Cyclic(n), GroupElement::Residue(i), GroupElement::Residue(j)) => {
                GroupElement::Residue(((i as u64 + j as u64) % *n as u64) as u32)
            }
            (GroupKind::ElemAbelian2(_), GroupElement::Bits(u), GroupElement::Bits(v)) => {
                GroupElement::Bits(u ^ v)
            }
            (
                GroupKind::Dihedral(n),
                GroupElement::Dihedral { a: i, b: e },
                GroupElement::Dihedral { a: k, b: d },
            ) => {
                // a^i b^e a^k b^d = a^(i + (-1)^e k) b^(e + d)
                let k = if e { (n - k) % n } else { k };
                GroupElement::Dihedral {
                    a: ((i as u64 + k as u64) % *n as u64) as u32,
                    b: e ^ d,
                }
            }
            (
                GroupKind::Dicyclic(n),
                GroupElement::Dicyclic { a: i, b: e },
                GroupElement::Dicyclic { a: k, b: d },
            ) => {
                // as dihedral on exponents mod 2n, with b^2 = a^n
                let m = 2 * n;
                let k = if e { (m - k) % m } else { k };
                let extra = if e && d { *n } else { 0 };
                GroupElement::Dicyclic {
                    a: ((i as u64 + k as u64 + extra as u64) % m as u64) as u32,
                    b: e ^ d,
                }
            }
            (GroupKind::Abelian(factors), GroupElement::Vector(u), GroupElement::Vector(v)) => {
                let mut cu = unpack(factors, u);
                let cv = unpack(factors, v);
                for ((x, y), m) in cu.iter_mut().zip(cv).zip(factors) {
                    *x = (*x + y) % m;
                }
                GroupElement::Vector(pack(factors, &cu))
            }
            _ => unreachable!("product of foreign elements"),
        }
    }

    pub fn inverse(&self, g: &GroupElement) -> GroupElement {
        debug_assert!(self.contains(g));
        match (&self.kind, *g) {
            (GroupKind::Cyclic(n), GroupElement::Residue(i)) => GroupElement::Residue((n - i) % n),
            (GroupKind::ElemAbelian2(_), GroupElement::Bits(_)) => *g,
            (GroupKind::Dihedral(n), GroupElement::Dihedral { a, b }) => {
                if b {
                    *g
                } else {
                    GroupElement::Dihedral {
                        a: (n - a) % n,
                        b,
                    }
                }
            }
            (GroupKind::Dicyclic(n), GroupElement::Dicyclic { a, b }) => {
                let m = 2 * n;
                if b {
                    // (a^i b)^-1 = a^(i+n) b
                    GroupElement::Dicyclic { a: (a + n) % m, b }
                } else {
                    GroupElement::Dicyclic { a: (m - a) % m, b }
                }
            }
            (GroupKind::Abelian(factors), GroupElement::Vector(v)) => {
                let mut c = unpack(factors, v);
                for (x, m) in c.iter_mut().zip(factors) {
                    *x = (m - *x) % m;
                }
                GroupElement::Vector(pack(factors, &c))
            }
            _ => unreachable!("inverse of foreign element"),
        }
    }

    pub fn pow(&self, g: &GroupElement, e: u64) -> GroupElement {
        let mut acc = self.identity();
        let mut base = *g;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.op(&acc, &base);
            }
            base = self.op(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn order_of(&self, g: &GroupElement) -> Result<usize> {
        self.check(g)?;
        let id = self.identity();
        let mut x = *g;
        let mut m = 1;
        while x != id {
            x = self.op(&x, g);
            m += 1;
        }
        Ok(m)
    }

    /// The subgroup generated by `gens`, sorted by rank. BFS over right
    /// multiplication; an empty generating set gives the trivial subgroup.
    pub fn closure(&self, gens: &[GroupElement]) -> Result<Vec<GroupElement>> {
        for g in gens {
            self.check(g)?;
        }
        let mut seen = vec![false; self.order];
        let id = self.identity();
        seen[self.rank(&id)] = true;
        let mut queue = VecDeque::from([id]);
        while let Some(g) = queue.pop_front() {
            for s in gens {
                let h = self.op(&g, s);
                let r = self.rank(&h);
                if !seen[r] {
                    seen[r] = true;
                    queue.push_back(h);
                }
            }
        }
        Ok(seen
            .iter()
            .enumerate()
            .filter(|(_, &s)| s)
            .map(|(r, _)| self.element(r))
            .collect())
    }

    pub fn generates(&self, gens: &[GroupElement]) -> Result<bool> {
        Ok(self.closure(gens)?.len() == self.order)
    }

    pub fn involutions(&self) -> Vec<GroupElement> {
        let id = self.identity();
        self.elements()
            .filter(|g| *g != id && self.op(g, g) == id)
            .collect()
    }

    /// A generating set chosen greedily in rank order.
    pub fn standard_generators(&self) -> Vec<GroupElement> {
        match self.kind {
            GroupKind::Dihedral(n) if n >= 2 => vec![
                GroupElement::Dihedral { a: 1, b: false },
                GroupElement::Dihedral { a: 0, b: true },
            ],
            GroupKind::Dicyclic(_) => vec![
                GroupElement::Dicyclic { a: 1, b: false },
                GroupElement::Dicyclic { a: 0, b: true },
            ],
            _ => {
                let mut gens: Vec<GroupElement> = Vec::new();
                let mut span = vec![self.identity()];
                for g in self.elements() {
                    if span.len() == self.order {
                        break;
                    }
                    if !span.contains(&g) {
                        gens.push(g);
                        span = self.closure(&gens).expect("own elements");
                    }
                }
                gens
            }
        }
    }

    pub fn format_element(&self, g: &GroupElement) -> String {
        match (&self.kind, *g) {
            (GroupKind::Cyclic(_), GroupElement::Residue(i)) => i.to_string(),
            (GroupKind::ElemAbelian2(r), GroupElement::Bits(v)) => {
                (0..*r).map(|i| if v >> i & 1 == 1 { '1' } else { '0' }).collect()
            }
            (_, GroupElement::Dihedral { a, b } | GroupElement::Dicyclic { a, b }) => {
                match (a, b) {
                    (0, false) => "1".into(),
                    (0, true) => "b".into(),
                    (a, false) => format!("a^{a}"),
                    (a, true) => format!("a^{a}*b"),
                }
            }
            (GroupKind::Abelian(factors), GroupElement::Vector(v)) => unpack(factors, v)
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(":"),
            _ => format!("{g:?}"),
        }
    }

    /// Parses an element in the syntax produced by [`Self::format_element`]:
    /// integers for `Z_n`, bit-strings like `101` for `Z_2^r`, `1`, `a`,
    /// `a^i`, `b`, `a*b`, `a^i*b` for dihedral and dicyclic groups, and
    /// colon-separated coordinates like `1:3` for abelian products.
    pub fn parse_element(&self, s: &str) -> Result<GroupElement> {
        let s = s.trim();
        let bad = || Error::Parse(format!("`{s}` is not an element of {self}"));
        let g = match &self.kind {
            GroupKind::Cyclic(n) => {
                let i: u32 = s.parse().map_err(|_| bad())?;
                if i >= *n {
                    return Err(bad());
                }
                GroupElement::Residue(i)
            }
            GroupKind::ElemAbelian2(r) => {
                if s.len() != *r as usize {
                    return Err(bad());
                }
                let mut v = 0;
                for (i, c) in s.chars().enumerate() {
                    match c {
                        '0' => {}
                        '1' => v |= 1 << i,
                        _ => return Err(bad()),
                    }
                }
                GroupElement::Bits(v)
            }
            GroupKind::Dihedral(n) | GroupKind::Dicyclic(n) => {
                let modulus = match self.kind {
                    GroupKind::Dihedral(_) => *n,
                    _ => 2 * n,
                };
                let (a, b) = parse_normal_form(s).ok_or_else(bad)?;
                if a >= modulus as u64 {
                    return Err(bad());
                }
                let a = a as u32;
                match self.kind {
                    GroupKind::Dihedral(_) => GroupElement::Dihedral { a, b },
                    _ => GroupElement::Dicyclic { a, b },
                }
            }
            GroupKind::Abelian(factors) => {
                let coords: Vec<u32> = s
                    .split(':')
                    .map(|c| c.trim().parse::<u32>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| bad())?;
                if coords.len() != factors.len() || coords.iter().zip(factors).any(|(c, m)| c >= m)
                {
                    return Err(bad());
                }
                GroupElement::Vector(pack(factors, &coords))
            }
        };
        Ok(g)
    }

    /// Validates an automorphism descriptor against this group.
    pub fn check_automorphism(&self, phi: &GroupAutomorphism) -> Result<()> {
        let fail = |why: String| Err(Error::InvalidArgument(why));
        match (&self.kind, phi) {
            (GroupKind::Cyclic(n), GroupAutomorphism::Unit(u)) => {
                if gcd(*u as u64, *n as u64) != 1 {
                    return fail(format!("{u} is not a unit mod {n}"));
                }
            }
            (GroupKind::ElemAbelian2(r), GroupAutomorphism::Matrix(m)) => {
                if m.dim() != *r || !m.is_invertible() {
                    return fail(format!("matrix {m} is not in GL_{r}(2)"));
                }
            }
            (GroupKind::Dihedral(n), GroupAutomorphism::Sigma { i, .. }) => {
                if gcd(*i as u64, *n as u64) != 1 {
                    return fail(format!("sigma needs gcd(i, n) = 1, got i = {i}, n = {n}"));
                }
            }
            (GroupKind::Dicyclic(n), GroupAutomorphism::Alpha { i, .. }) => {
                if gcd(*i as u64, 2 * *n as u64) != 1 {
                    return fail(format!(
                        "alpha needs gcd(i, 2n) = 1, got i = {i}, 2n = {}",
                        2 * n
                    ));
                }
            }
            (_, GroupAutomorphism::Table(images)) => {
                if images.len() != self.order {
                    return fail("automorphism table has the wrong length".into());
                }
                let mut hit = vec![false; self.order];
                for &r in images {
                    match hit.get_mut(r as usize) {
                        Some(h) if !*h => *h = true,
                        _ => return fail("automorphism table is not a bijection".into()),
                    }
                }
            }
            _ => return fail(format!("automorphism {phi} does not apply to {self}")),
        }
        Ok(())
    }

    pub fn apply_aut(&self, phi: &GroupAutomorphism, g: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        self.check_automorphism(phi)?;
        Ok(self.apply_unchecked(phi, g))
    }

    fn apply_unchecked(&self, phi: &GroupAutomorphism, g: &GroupElement) -> GroupElement {
        match (&self.kind, phi, *g) {
            (GroupKind::Cyclic(n), GroupAutomorphism::Unit(u), GroupElement::Residue(i)) => {
                GroupElement::Residue(((*u as u64 * i as u64) % *n as u64) as u32)
            }
            (GroupKind::ElemAbelian2(_), GroupAutomorphism::Matrix(m), GroupElement::Bits(v)) => {
                GroupElement::Bits(m.apply(v))
            }
            // a^e b^d  ->  a^(ie + jd) b^d
            (
                GroupKind::Dihedral(n),
                GroupAutomorphism::Sigma { i, j },
                GroupElement::Dihedral { a, b },
            ) => GroupElement::Dihedral {
                a: ((*i as u64 * a as u64 + if b { *j as u64 } else { 0 }) % *n as u64) as u32,
                b,
            },
            (
                GroupKind::Dicyclic(n),
                GroupAutomorphism::Alpha { i, j },
                GroupElement::Dicyclic { a, b },
            ) => GroupElement::Dicyclic {
                a: ((*i as u64 * a as u64 + if b { *j as u64 } else { 0 }) % (2 * *n as u64))
                    as u32,
                b,
            },
            (_, GroupAutomorphism::Table(images), g) => {
                self.element(images[self.rank(&g)] as usize)
            }
            _ => unreachable!("automorphism checked against group"),
        }
    }

    /// Finds an automorphism `phi` with `phi(x) = y` for every pair, searching
    /// the parametrized family for the group kind: units for `Z_n`,
    /// `sigma_{i,j}` for `D_n`, `alpha_{i,j}` for `Dic_n`, all of `GL_r(2)` for
    /// `Z_2^r` with `r <= 4`. Where the parametrized family is not the whole
    /// automorphism group (`D_1`, `D_2`, `Dic_2`) or no family is tabulated
    /// (abelian products, `Z_2^r` with `r > 4`) the search extends images of
    /// generators instead.
    pub fn automorphism_extending(
        &self,
        assignment: &[(GroupElement, GroupElement)],
    ) -> Result<Option<GroupAutomorphism>> {
        for (i, (x, y)) in assignment.iter().enumerate() {
            self.check(x)?;
            self.check(y)?;
            if assignment[..i].iter().any(|(x2, _)| x2 == x) {
                return Err(Error::InvalidArgument(format!(
                    "{} assigned twice",
                    self.format_element(x)
                )));
            }
        }
        let satisfies = |phi: &GroupAutomorphism| {
            assignment
                .iter()
                .all(|(x, y)| self.apply_unchecked(phi, x) == *y)
        };
        let found = match self.kind {
            GroupKind::Cyclic(n) => (1..=n)
                .filter(|&u| gcd(u as u64, n as u64) == 1)
                .map(|u| GroupAutomorphism::Unit(u % n.max(1)))
                .find(|phi| satisfies(phi)),
            GroupKind::ElemAbelian2(r) if r <= MATRIX_SEARCH_MAX_RANK => (0..1u64 << (r * r))
                .map(|idx| Gf2Matrix::from_index(r, idx))
                .filter(|m| m.is_invertible())
                .map(GroupAutomorphism::Matrix)
                .find(|phi| satisfies(phi)),
            GroupKind::Dihedral(n) if n >= 3 => sigma_family(n)
                .map(|(i, j)| GroupAutomorphism::Sigma { i, j })
                .find(|phi| satisfies(phi)),
            GroupKind::Dicyclic(n) if n >= 3 => sigma_family(2 * n)
                .map(|(i, j)| GroupAutomorphism::Alpha { i, j })
                .find(|phi| satisfies(phi)),
            _ => self.extend_by_generators(assignment)?,
        };
        Ok(found)
    }

    /// Generic route: a homomorphism is determined by the images of a
    /// generating set, so when the assigned elements generate the group the
    /// assignment is extended along the Cayley graph and checked for
    /// consistency and bijectivity. Otherwise images of the standard
    /// generators are enumerated. Works for every kind.
    pub fn extend_by_generators(
        &self,
        assignment: &[(GroupElement, GroupElement)],
    ) -> Result<Option<GroupAutomorphism>> {
        let domain: Vec<GroupElement> = assignment.iter().map(|(x, _)| *x).collect();
        if self.generates(&domain)? {
            let images: Vec<GroupElement> = assignment.iter().map(|(_, y)| *y).collect();
            return Ok(self.extend_homomorphism(&domain, &images));
        }
        let gens = self.standard_generators();
        let orders: Vec<usize> = gens
            .iter()
            .map(|g| self.order_of(g))
            .collect::<Result<_>>()?;
        let by_order: Vec<Vec<GroupElement>> = orders
            .iter()
            .map(|&o| {
                self.elements()
                    .filter(|h| self.order_of(h).ok() == Some(o))
                    .collect()
            })
            .collect();
        let mut choice = vec![0usize; gens.len()];
        if by_order.iter().any(|c| c.is_empty()) {
            return Ok(None);
        }
        loop {
            let images: Vec<GroupElement> = choice
                .iter()
                .zip(&by_order)
                .map(|(&c, cands)| cands[c])
                .collect();
            if let Some(phi) = self.extend_homomorphism(&gens, &images) {
                if assignment
                    .iter()
                    .all(|(x, y)| self.apply_unchecked(&phi, x) == *y)
                {
                    return Ok(Some(phi));
                }
            }
            // odometer step
            let mut pos = 0;
            loop {
                if pos == choice.len() {
                    return Ok(None);
                }
                choice[pos] += 1;
                if choice[pos] < by_order[pos].len() {
                    break;
                }
                choice[pos] = 0;
                pos += 1;
            }
        }
    }

    /// Extends `gens[i] -> images[i]` to an automorphism if the generators
    /// span the group and the extension is a well-defined bijection.
    fn extend_homomorphism(
        &self,
        gens: &[GroupElement],
        images: &[GroupElement],
    ) -> Option<GroupAutomorphism> {
        let unset = u32::MAX;
        let mut table = vec![unset; self.order];
        let id = self.identity();
        table[self.rank(&id)] = self.rank(&id) as u32;
        let mut queue = VecDeque::from([id]);
        while let Some(g) = queue.pop_front() {
            let fg = self.element(table[self.rank(&g)] as usize);
            for (x, y) in gens.iter().zip(images) {
                let gx = self.op(&g, x);
                let want = self.rank(&self.op(&fg, y)) as u32;
                let slot = &mut table[self.rank(&gx)];
                if *slot == unset {
                    *slot = want;
                    queue.push_back(gx);
                } else if *slot != want {
                    return None;
                }
            }
        }
        let mut hit = vec![false; self.order];
        for &r in &table {
            if r == unset || hit[r as usize] {
                return None;
            }
            hit[r as usize] = true;
        }
        Some(GroupAutomorphism::Table(table))
    }

    /// Every automorphism of the group, as rank tables. Exponential in the
    /// number of standard generators; intended for small groups.
    pub fn all_automorphisms(&self) -> Vec<GroupAutomorphism> {
        let gens = self.standard_generators();
        let candidates: Vec<Vec<GroupElement>> = gens
            .iter()
            .map(|g| {
                let o = self.order_of(g).expect("own element");
                self.elements()
                    .filter(|h| self.order_of(h).ok() == Some(o))
                    .collect()
            })
            .collect();
        let mut out = Vec::new();
        let mut images = Vec::with_capacity(gens.len());
        self.collect_automorphisms(&gens, &candidates, &mut images, &mut out);
        out
    }

    fn collect_automorphisms(
        &self,
        gens: &[GroupElement],
        candidates: &[Vec<GroupElement>],
        images: &mut Vec<GroupElement>,
        out: &mut Vec<GroupAutomorphism>,
    ) {
        let depth = images.len();
        if depth == gens.len() {
            if let Some(phi) = self.extend_homomorphism(gens, images) {
                out.push(phi);
            }
            return;
        }
        for &c in &candidates[depth] {
            images.push(c);
            self.collect_automorphisms(gens, candidates, images, out);
            images.pop();
        }
    }
}

/// Pairs `(i, j)` with `1 <= i <= m`, `gcd(i, m) = 1`, `0 <= j < m`.
fn sigma_family(m: u32) -> impl Iterator<Item = (u32, u32)> {
    (1..=m)
        .filter(move |&i| gcd(i as u64, m as u64) == 1)
        .flat_map(move |i| (0..m).map(move |j| (i, j)))
}

fn unpack(factors: &[u32], mut v: u32) -> Vec<u32> {
    let mut coords = vec![0; factors.len()];
    for (c, m) in coords.iter_mut().zip(factors).rev() {
        *c = v % m;
        v /= m;
    }
    coords
}

fn pack(factors: &[u32], coords: &[u32]) -> u32 {
    coords
        .iter()
        .zip(factors)
        .fold(0, |acc, (c, m)| acc * m + c)
}

/// Parses `1`, `e`, `a`, `a^i`, `b`, `a*b`, `a^i*b` into `(i, has_b)`.
fn parse_normal_form(s: &str) -> Option<(u64, bool)> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s == "1" || s == "e" {
        return Some((0, false));
    }
    let (rot, b) = match s.strip_suffix("b") {
        Some(rest) => match rest.strip_suffix('*') {
            Some(r) => (r.to_string(), true),
            None if rest.is_empty() => (String::new(), true),
            None => return None,
        },
        None => (s.clone(), false),
    };
    if rot.is_empty() {
        return Some((0, b));
    }
    let exp = match rot.strip_prefix('a')? {
        "" => 1,
        e => e.strip_prefix('^')?.parse().ok()?,
    };
    Some((exp, b))
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            GroupKind::Cyclic(n) => write!(f, "Z{n}"),
            GroupKind::ElemAbelian2(r) => write!(f, "Z2^{r}"),
            GroupKind::Dihedral(n) => write!(f, "D{n}"),
            GroupKind::Dicyclic(n) => write!(f, "Dic{n}"),
            GroupKind::Abelian(factors) => {
                let parts: Vec<String> = factors.iter().map(|m| format!("Z{m}")).collect();
                write!(f, "{}", parts.join("x"))
            }
        }
    }
}

impl FromStr for FiniteGroup {
    type Err = Error;

    /// Accepts `Z6`, `Z2^3`, `D7`, `Dic3`, `Z2xZ4`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("unknown group `{s}`"));
        let num = |t: &str| t.parse::<u32>().map_err(|_| bad());
        if let Some(rest) = s.strip_prefix("Dic") {
            return Self::dicyclic(num(rest)?);
        }
        if let Some(rest) = s.strip_prefix('D') {
            return Self::dihedral(num(rest)?);
        }
        if let Some(rank) = s.strip_prefix("Z2^") {
            return Self::elem_abelian2(num(rank)?);
        }
        if s.contains('x') {
            let factors = s
                .split('x')
                .map(|t| t.strip_prefix('Z').ok_or_else(bad).and_then(num))
                .collect::<Result<Vec<_>>>()?;
            if factors.len() < 2 {
                return Err(bad());
            }
            return Self::abelian(&factors);
        }
        if let Some(rest) = s.strip_prefix('Z') {
            return Self::cyclic(num(rest)?);
        }
        Err(bad())
    }
}

/// An automorphism in the parametrization natural to its group kind.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupAutomorphism {
    /// `x -> u x` on `Z_n`.
    Unit(u32),
    /// `x -> A x` on `Z_2^r`.
    Matrix(Gf2Matrix),
    /// `sigma_{i,j}` on `D_n`: `a -> a^i`, `b -> a^j b`.
    Sigma { i: u32, j: u32 },
    /// `alpha_{i,j}` on `Dic_n`: `a -> a^i`, `b -> a^j b`.
    Alpha { i: u32, j: u32 },
    /// Images by rank; produced by the generator-extension search.
    Table(Vec<u32>),
}

impl fmt::Display for GroupAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupAutomorphism::Unit(u) => write!(f, "x->{u}x"),
            GroupAutomorphism::Matrix(m) => write!(f, "x->{m}x"),
            GroupAutomorphism::Sigma { i, j } => write!(f, "sigma_{{{i},{j}}}"),
            GroupAutomorphism::Alpha { i, j } => write!(f, "alpha_{{{i},{j}}}"),
            GroupAutomorphism::Table(t) => write!(f, "table{t:?}"),
        }
    }
}

pub fn elem_abelian2_aut_order(r: u32) -> u64 {
    gf2::general_linear_order(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(n: u32) -> FiniteGroup {
        FiniteGroup::dihedral(n).unwrap()
    }
    fn dic(n: u32) -> FiniteGroup {
        FiniteGroup::dicyclic(n).unwrap()
    }
    fn z(n: u32) -> FiniteGroup {
        FiniteGroup::cyclic(n).unwrap()
    }
    fn el(g: &FiniteGroup, s: &str) -> GroupElement {
        g.parse_element(s).unwrap()
    }

    /// Multiplication table built by rewriting words in `a`, `b` with the
    /// dihedral relations only (`b a = a^-1 b`, `a^n = 1`, `b^2 = 1`),
    /// independent of the closed-form exponent rule.
    fn dihedral_by_rewriting(n: u32, x: (u32, bool), y: (u32, bool)) -> (u32, bool) {
        let mut word: Vec<char> = Vec::new();
        for (a, b) in [x, y] {
            word.extend(std::iter::repeat('a').take(a as usize));
            if b {
                word.push('b');
            }
        }
        loop {
            let s: String = word.iter().collect();
            let next = if let Some(p) = s.find("ba") {
                // ba -> a^(n-1) b
                let mut w = s[..p].to_string();
                w.push_str(&"a".repeat(n as usize - 1));
                w.push('b');
                w.push_str(&s[p + 2..]);
                w
            } else if let Some(p) = s.find("bb") {
                format!("{}{}", &s[..p], &s[p + 2..])
            } else {
                break;
            };
            word = next.chars().collect();
        }
        let a = word.iter().filter(|&&c| c == 'a').count() as u32 % n;
        (a, word.last() == Some(&'b'))
    }

    #[test]
    fn dihedral_product_matches_rewriting() {
        for n in 1..=7 {
            let g = d(n);
            for x in g.elements() {
                for y in g.elements() {
                    let (GroupElement::Dihedral { a: i, b: e }, GroupElement::Dihedral { a: k, b: f }) =
                        (x, y)
                    else {
                        unreachable!()
                    };
                    let (a, b) = dihedral_by_rewriting(n, (i, e), (k, f));
                    assert_eq!(g.op(&x, &y), GroupElement::Dihedral { a, b });
                }
            }
        }
    }

    #[test]
    fn mul_examples() {
        let d5 = d(5);
        let ab = el(&d5, "a*b");
        assert_eq!(d5.mul(&ab, &ab).unwrap(), d5.identity());
        assert_eq!(
            d5.mul(&el(&d5, "a^2*b"), &el(&d5, "a^3")).unwrap(),
            el(&d5, "a^4*b")
        );
        let dic2 = dic(2);
        let b = el(&dic2, "b");
        assert_eq!(dic2.mul(&b, &b).unwrap(), el(&dic2, "a^2"));
    }

    #[test]
    fn mul_rejects_foreign_elements() {
        let d5 = d(5);
        assert!(d5.mul(&GroupElement::Residue(1), &d5.identity()).is_err());
        assert!(d5
            .mul(&GroupElement::Dihedral { a: 5, b: false }, &d5.identity())
            .is_err());
    }

    #[test]
    fn inverse_examples() {
        let d7 = d(7);
        assert_eq!(d7.inv(&el(&d7, "a^3*b")).unwrap(), el(&d7, "a^3*b"));
        assert_eq!(z(6).inv(&GroupElement::Residue(1)).unwrap(), GroupElement::Residue(5));
        let dic3 = dic(3);
        let b = el(&dic3, "b");
        // scan for the element whose product with b is the identity
        let scanned = dic3
            .elements()
            .find(|h| dic3.op(&b, h) == dic3.identity())
            .unwrap();
        assert_eq!(scanned, el(&dic3, "a^3*b"));
        assert_eq!(dic3.inv(&b).unwrap(), scanned);
    }

    #[test]
    fn order_examples() {
        let d7 = d(7);
        assert_eq!(d7.order_of(&el(&d7, "a")).unwrap(), 7);
        let dic4 = dic(4);
        assert_eq!(dic4.order_of(&el(&dic4, "b")).unwrap(), 4);
        let e3 = FiniteGroup::elem_abelian2(3).unwrap();
        for g in e3.elements().skip(1) {
            assert_eq!(e3.order_of(&g).unwrap(), 2);
        }
    }

    #[test]
    fn closure_examples() {
        let d6 = d(6);
        assert!(d6.generates(&[el(&d6, "b"), el(&d6, "a*b")]).unwrap());
        let sub = d6.closure(&[el(&d6, "a^2"), el(&d6, "b")]).unwrap();
        assert_eq!(sub.len(), 6);
        assert!(!d6.generates(&[el(&d6, "a^2"), el(&d6, "b")]).unwrap());
        let z6 = z(6);
        assert!(z6
            .generates(&[GroupElement::Residue(1), GroupElement::Residue(3), GroupElement::Residue(5)])
            .unwrap());
        assert_eq!(z6.closure(&[]).unwrap(), vec![z6.identity()]);
    }

    #[test]
    fn involution_examples() {
        let d4 = d(4);
        let inv: Vec<String> = d4.involutions().iter().map(|g| d4.format_element(g)).collect();
        assert_eq!(inv, ["a^2", "b", "a^1*b", "a^2*b", "a^3*b"]);
        let dic3 = dic(3);
        assert_eq!(dic3.involutions(), vec![el(&dic3, "a^3")]);
        assert_eq!(FiniteGroup::elem_abelian2(2).unwrap().involutions().len(), 3);
    }

    #[test]
    fn involution_counts_by_family() {
        for n in 1..=12 {
            let g = d(n);
            let expected = n as usize + usize::from(n % 2 == 0);
            assert_eq!(g.involutions().len(), expected, "D{n}");
        }
        for n in 2..=12 {
            let g = dic(n);
            assert_eq!(g.involutions(), vec![GroupElement::Dicyclic { a: n, b: false }]);
        }
    }

    fn all_small_groups() -> Vec<FiniteGroup> {
        let mut gs = Vec::new();
        for n in 1..=24 {
            if n <= 48 {
                gs.push(z(n));
            }
            if 2 * n <= 48 {
                gs.push(d(n));
            }
            if n >= 2 && 4 * n <= 48 {
                gs.push(dic(n));
            }
        }
        for r in 1..=5 {
            gs.push(FiniteGroup::elem_abelian2(r).unwrap());
        }
        for f in [[2u32, 4], [3, 3], [2, 6], [4, 4], [2, 8]] {
            gs.push(FiniteGroup::abelian(&f).unwrap());
        }
        gs
    }

    #[test]
    fn group_axioms_exhaustive() {
        for g in all_small_groups() {
            let id = g.identity();
            let elems: Vec<_> = g.elements().collect();
            assert_eq!(elems.len(), g.order());
            for x in &elems {
                assert_eq!(g.rank(x), elems.iter().position(|e| e == x).unwrap());
                assert_eq!(g.op(x, &id), *x);
                assert_eq!(g.op(&id, x), *x);
                assert_eq!(g.op(x, &g.inverse(x)), id, "{g}");
                assert_eq!(g.order() % g.order_of(x).unwrap(), 0);
            }
            for x in &elems {
                for y in &elems {
                    let xy = g.op(x, y);
                    assert!(g.contains(&xy));
                    for w in &elems {
                        assert_eq!(g.op(&xy, w), g.op(x, &g.op(y, w)), "{g}");
                    }
                }
            }
        }
    }

    #[test]
    fn family_orders() {
        assert_eq!(z(7).order(), 7);
        assert_eq!(FiniteGroup::elem_abelian2(3).unwrap().order(), 8);
        assert_eq!(d(7).order(), 14);
        assert_eq!(dic(3).order(), 12);
        assert!(FiniteGroup::dicyclic(1).is_err());
        assert!(FiniteGroup::dihedral(0).is_err());
        assert!(FiniteGroup::elem_abelian2(0).is_err());
    }

    #[test]
    fn sigma_and_alpha_are_homomorphisms() {
        for n in 1..=12u32 {
            let g = d(n);
            for (i, j) in sigma_family(n) {
                let phi = GroupAutomorphism::Sigma { i, j };
                check_automorphism_law(&g, &phi);
            }
        }
        for n in 2..=12u32 {
            let g = dic(n);
            for (i, j) in sigma_family(2 * n) {
                let phi = GroupAutomorphism::Alpha { i, j };
                check_automorphism_law(&g, &phi);
            }
        }
    }

    fn check_automorphism_law(g: &FiniteGroup, phi: &GroupAutomorphism) {
        let mut hit = vec![false; g.order()];
        for x in g.elements() {
            let fx = g.apply_aut(phi, &x).unwrap();
            hit[g.rank(&fx)] = true;
            for y in g.elements() {
                assert_eq!(
                    g.apply_aut(phi, &g.op(&x, &y)).unwrap(),
                    g.op(&fx, &g.apply_aut(phi, &y).unwrap()),
                    "{g} {phi}"
                );
            }
        }
        assert!(hit.iter().all(|&h| h), "{phi} not bijective on {g}");
    }

    #[test]
    fn apply_aut_examples() {
        let d5 = d(5);
        let s = GroupAutomorphism::Sigma { i: 2, j: 1 };
        assert_eq!(d5.apply_aut(&s, &el(&d5, "a")).unwrap(), el(&d5, "a^2"));
        assert_eq!(d5.apply_aut(&s, &el(&d5, "b")).unwrap(), el(&d5, "a*b"));
        let id = GroupAutomorphism::Sigma { i: 1, j: 0 };
        for x in d5.elements() {
            assert_eq!(d5.apply_aut(&id, &x).unwrap(), x);
        }
        let dic2 = dic(2);
        let alpha = GroupAutomorphism::Alpha { i: 3, j: 0 };
        assert_eq!(dic2.apply_aut(&alpha, &el(&dic2, "a")).unwrap(), el(&dic2, "a^3"));
        assert_eq!(dic2.apply_aut(&alpha, &el(&dic2, "b")).unwrap(), el(&dic2, "b"));
        check_automorphism_law(&dic2, &alpha);
        // gcd violation
        assert!(d(6)
            .apply_aut(&GroupAutomorphism::Sigma { i: 2, j: 0 }, &d(6).identity())
            .is_err());
        assert!(dic(3)
            .apply_aut(&GroupAutomorphism::Alpha { i: 3, j: 0 }, &dic(3).identity())
            .is_err());
    }

    #[test]
    fn extension_examples() {
        let d7 = d(7);
        let phi = d7
            .automorphism_extending(&[(el(&d7, "b"), el(&d7, "a*b")), (el(&d7, "a*b"), el(&d7, "a^3*b"))])
            .unwrap();
        assert_eq!(phi, Some(GroupAutomorphism::Sigma { i: 2, j: 1 }));
        let z6 = z(6);
        assert_eq!(
            z6.automorphism_extending(&[(GroupElement::Residue(1), GroupElement::Residue(1))])
                .unwrap(),
            Some(GroupAutomorphism::Unit(1))
        );
        let z4 = z(4);
        assert_eq!(
            z4.automorphism_extending(&[(GroupElement::Residue(1), GroupElement::Residue(2))])
                .unwrap(),
            None
        );
    }

    #[test]
    fn degenerate_families_use_generic_search() {
        // D_2 is the Klein four-group: Aut = S_3 contains a 3-cycle on the
        // involutions, which no sigma_{i,j} realizes.
        let d2 = d(2);
        let (a, b, ab) = (el(&d2, "a"), el(&d2, "b"), el(&d2, "a*b"));
        let phi = d2
            .automorphism_extending(&[(a, b), (b, ab), (ab, a)])
            .unwrap()
            .expect("Klein four-group has an order-3 automorphism");
        for (x, y) in [(a, b), (b, ab), (ab, a)] {
            assert_eq!(d2.apply_aut(&phi, &x).unwrap(), y);
        }
        assert_eq!(d2.all_automorphisms().len(), 6);
        assert_eq!(dic(2).all_automorphisms().len(), 24);
    }

    #[test]
    fn automorphism_group_orders() {
        for r in 1..=4 {
            let g = FiniteGroup::elem_abelian2(r).unwrap();
            if r <= 3 {
                assert_eq!(g.all_automorphisms().len() as u64, elem_abelian2_aut_order(r));
            }
        }
        assert_eq!(elem_abelian2_aut_order(4), 20160);
        for n in 3..=10u32 {
            let phi_n = (1..=n).filter(|&i| gcd(i as u64, n as u64) == 1).count();
            assert_eq!(d(n).all_automorphisms().len(), n as usize * phi_n, "D{n}");
        }
        for n in 3..=6u32 {
            let phi_2n = (1..=2 * n).filter(|&i| gcd(i as u64, 2 * n as u64) == 1).count();
            assert_eq!(dic(n).all_automorphisms().len(), 2 * n as usize * phi_2n, "Dic{n}");
        }
    }

    #[test]
    fn parametrized_and_generic_extension_agree() {
        for g in [d(5), d(6), d(7), dic(3), dic(4), z(10), FiniteGroup::elem_abelian2(3).unwrap()] {
            let elems: Vec<_> = g.elements().collect();
            let gens = g.standard_generators();
            for (idx, &y0) in elems.iter().enumerate().step_by(3) {
                for &y1 in elems.iter().skip(idx % 5).step_by(4) {
                    let mut assignment = vec![(gens[0], y0)];
                    if gens.len() > 1 {
                        assignment.push((gens[1], y1));
                    }
                    let fast = g.automorphism_extending(&assignment).unwrap();
                    let slow = g.extend_by_generators(&assignment).unwrap();
                    assert_eq!(fast.is_some(), slow.is_some(), "{g} {assignment:?}");
                    if let Some(phi) = fast {
                        for (x, y) in &assignment {
                            assert_eq!(g.apply_aut(&phi, x).unwrap(), *y);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn element_syntax_roundtrip() {
        for g in all_small_groups() {
            for x in g.elements() {
                let s = g.format_element(&x);
                assert_eq!(g.parse_element(&s).unwrap(), x, "{g} {s}");
            }
        }
        let d7 = d(7);
        assert_eq!(el(&d7, "a"), el(&d7, "a^1"));
        assert_eq!(el(&d7, "a*b"), el(&d7, "a^1*b"));
        assert!(d7.parse_element("a^7").is_err());
        assert!(d7.parse_element("c").is_err());
        assert!(z(6).parse_element("6").is_err());
    }

    #[test]
    fn group_names_roundtrip() {
        for name in ["Z6", "Z2^3", "D7", "Dic3", "Z2xZ4", "Z2xZ2xZ2"] {
            let g: FiniteGroup = name.parse().unwrap();
            assert_eq!(g.to_string(), name);
        }
        assert!("Q8".parse::<FiniteGroup>().is_err());
        assert!("Dic1".parse::<FiniteGroup>().is_err());
    }
}
