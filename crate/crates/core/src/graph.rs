//! The underlying simple graph of a Cayley map and its automorphisms.
//!
//! Automorphisms are enumerated by backtracking over vertices in BFS order.
//! Each vertex may only go to a vertex with the same degree and distance
//! profile, and every partial assignment must preserve distances to the
//! vertices already placed; since adjacency is distance one, a complete
//! assignment is an automorphism.

use std::collections::VecDeque;
use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::maps::CayleyMap;

/// Largest vertex count accepted by the automorphism probes.
pub const VERTEX_GUARD: usize = 64;

const UNREACHABLE: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub struct SimpleGraph {
    adj: Vec<Vec<usize>>,
}

impl SimpleGraph {
    /// Builds a graph from neighbour lists; duplicate entries are merged.
    pub fn new(mut adj: Vec<Vec<usize>>) -> Self {
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Self { adj }
    }

    pub fn from_map(map: &CayleyMap) -> Self {
        Self::new(map.adjacency())
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    fn bfs_distances(&self, source: usize) -> Vec<u32> {
        let mut dist = vec![UNREACHABLE; self.num_vertices()];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == UNREACHABLE {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn distance_matrix(&self) -> Vec<Vec<u32>> {
        (0..self.num_vertices()).map(|v| self.bfs_distances(v)).collect()
    }

    /// Two-colouring if the graph is bipartite.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let n = self.num_vertices();
        let mut colour: Vec<Option<bool>> = vec![None; n];
        for start in 0..n {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                let c = colour[u].expect("coloured on push");
                for &w in &self.adj[u] {
                    match colour[w] {
                        None => {
                            colour[w] = Some(!c);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == c => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(colour.into_iter().map(|c| c.expect("all coloured")).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    /// Whether the graph is `K_{m,m}` for some `m`.
    pub fn is_balanced_complete_bipartite(&self) -> Option<usize> {
        let sides = self.bipartition()?;
        let left = sides.iter().filter(|&&s| s).count();
        let right = sides.len() - left;
        let complete = (0..self.num_vertices()).all(|v| {
            let other = if sides[v] { right } else { left };
            self.adj[v].len() == other && self.adj[v].iter().all(|&w| sides[w] != sides[v])
        });
        (complete && left == right).then_some(left)
    }

    /// Length of a shortest cycle, `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let n = self.num_vertices();
        let mut best: Option<usize> = None;
        for s in 0..n {
            let mut dist = vec![UNREACHABLE; n];
            let mut parent = vec![usize::MAX; n];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if dist[w] == UNREACHABLE {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        let len = (dist[u] + dist[w] + 1) as usize;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    fn guard(&self) -> Result<()> {
        if self.num_vertices() > VERTEX_GUARD {
            return Err(Error::SizeGuard {
                what: "graph vertex count",
                size: self.num_vertices(),
                limit: VERTEX_GUARD,
            });
        }
        Ok(())
    }

    /// Calls `visit` with every automorphism (as a vertex image array) until
    /// it breaks.
    pub fn for_each_automorphism<F>(&self, mut visit: F) -> Result<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        self.guard()?;
        let n = self.num_vertices();
        if n == 0 {
            let _ = visit(&[]);
            return Ok(());
        }
        let dist = self.distance_matrix();
        // vertex invariant: degree plus how many vertices sit at each distance
        let signature: Vec<(usize, Vec<u32>)> = (0..n)
            .map(|v| {
                let mut d = dist[v].clone();
                d.sort_unstable();
                (self.adj[v].len(), d)
            })
            .collect();

        let mut order = Vec::with_capacity(n);
        let mut parent = vec![None; n];
        let mut placed = vec![false; n];
        for root in 0..n {
            if placed[root] {
                continue;
            }
            placed[root] = true;
            order.push(root);
            let mut head = order.len() - 1;
            while head < order.len() {
                let u = order[head];
                head += 1;
                for &w in &self.adj[u] {
                    if !placed[w] {
                        placed[w] = true;
                        parent[w] = Some(u);
                        order.push(w);
                    }
                }
            }
        }

        let search = Search {
            graph: self,
            dist: &dist,
            signature: &signature,
            order: &order,
            parent: &parent,
        };
        let mut image = vec![usize::MAX; n];
        let mut used = vec![false; n];
        let _ = search.extend(0, &mut image, &mut used, &mut visit);
        Ok(())
    }

    pub fn automorphism_order(&self) -> Result<u64> {
        let mut count = 0u64;
        self.for_each_automorphism(|_| {
            count += 1;
            ControlFlow::Continue(())
        })?;
        Ok(count)
    }
}

struct Search<'a> {
    graph: &'a SimpleGraph,
    dist: &'a [Vec<u32>],
    signature: &'a [(usize, Vec<u32>)],
    order: &'a [usize],
    parent: &'a [Option<usize>],
}

impl Search<'_> {
    fn extend<F>(
        &self,
        depth: usize,
        image: &mut [usize],
        used: &mut [bool],
        visit: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if depth == self.order.len() {
            return visit(image);
        }
        let v = self.order[depth];
        let candidates: Vec<usize> = match self.parent[v] {
            Some(u) => self.graph.adj[image[u]].clone(),
            None => (0..self.graph.num_vertices()).collect(),
        };
        for c in candidates {
            if used[c] || self.signature[c] != self.signature[v] {
                continue;
            }
            let consistent = self.order[..depth]
                .iter()
                .all(|&w| self.dist[v][w] == self.dist[c][image[w]]);
            if !consistent {
                continue;
            }
            image[v] = c;
            used[c] = true;
            let flow = self.extend(depth + 1, image, used, visit);
            used[c] = false;
            image[v] = usize::MAX;
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// Order of the automorphism group of the graph and its action on arcs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphSymmetry {
    pub order: u64,
    pub arc_transitive: bool,
    /// Arc-transitive with trivial arc stabilizers.
    pub one_regular: bool,
}

pub fn graph_symmetry(map: &CayleyMap) -> Result<GraphSymmetry> {
    let graph = SimpleGraph::from_map(map);
    let n = graph.num_vertices();
    let base = (0, graph.neighbors(0)[0]);
    let mut arc_images = vec![false; n * n];
    let mut order = 0u64;
    graph.for_each_automorphism(|phi| {
        order += 1;
        arc_images[phi[base.0] * n + phi[base.1]] = true;
        ControlFlow::Continue(())
    })?;
    let arcs = 2 * graph.num_edges();
    let arc_transitive = arc_images.iter().filter(|&&b| b).count() == arcs;
    Ok(GraphSymmetry {
        order,
        arc_transitive,
        one_regular: arc_transitive && order == arcs as u64,
    })
}

pub fn graph_aut_order(map: &CayleyMap) -> Result<u64> {
    SimpleGraph::from_map(map).automorphism_order()
}

pub fn is_one_regular(map: &CayleyMap) -> Result<bool> {
    Ok(graph_symmetry(map)?.one_regular)
}

/// Whether the left translations form a normal subgroup of the graph's
/// automorphism group: every conjugate `alpha L_g alpha^-1`, with `g` running
/// over `X`, must again be a left translation.
pub fn is_normal_cayley(map: &CayleyMap) -> Result<bool> {
    let group = map.group();
    let graph = SimpleGraph::from_map(map);
    let n = graph.num_vertices();
    let elements: Vec<_> = group.elements().collect();
    // left[g][v] = rank(x_g * v) for the generators
    let left: Vec<Vec<usize>> = map
        .xs()
        .iter()
        .map(|g| elements.iter().map(|v| group.rank(&group.op(g, v))).collect())
        .collect();
    let id = group.rank(&group.identity());
    let mut normal = true;
    let mut inverse = vec![0usize; n];
    graph.for_each_automorphism(|alpha| {
        for (v, &a) in alpha.iter().enumerate() {
            inverse[a] = v;
        }
        for lg in &left {
            let conj = |v: usize| alpha[lg[inverse[v]]];
            let h = elements[conj(id)];
            let translation =
                (0..n).all(|v| conj(v) == group.rank(&group.op(&h, &elements[v])));
            if !translation {
                normal = false;
                return ControlFlow::Break(());
            }
        }
        ControlFlow::Continue(())
    })?;
    Ok(normal)
}
