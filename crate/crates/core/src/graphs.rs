//! Graph invariants feeding the Stanley–Reisner bounds: clique number,
//! shortest hole, treewidth and chordality.
//!
//! Vertex sets are `u64` bitmasks, so graphs are limited to 64 vertices.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 64;
/// Largest graph handled by the exact treewidth dynamic program.
pub const EXACT_TREEWIDTH_CAP: usize = 20;
/// Upper limit on the number of maximal cliques enumerated.
pub const MAX_CLIQUES: usize = 100_000;

/// A simple undirected graph on vertices `0..vertex_count`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GraphSpec {
    vertex_count: usize,
    edges: BTreeSet<(usize, usize)>,
    adj: Vec<u64>,
}

impl GraphSpec {
    /// Rejects loops, repeated edges and out-of-range endpoints.
    pub fn new(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if vertex_count > MAX_VERTICES {
            return Err(Error::TooLarge {
                what: format!("graph with {vertex_count} vertices"),
                limit: MAX_VERTICES,
            });
        }
        let mut set = BTreeSet::new();
        let mut adj = vec![0u64; vertex_count];
        for &(a, b) in edges {
            if a >= vertex_count || b >= vertex_count {
                return Err(Error::InvalidInput(format!(
                    "edge ({a}, {b}) has an endpoint outside 0..{vertex_count}"
                )));
            }
            if a == b {
                return Err(Error::InvalidInput(format!("loop at vertex {a}")));
            }
            if !set.insert((a.min(b), a.max(b))) {
                return Err(Error::InvalidInput(format!("repeated edge ({a}, {b})")));
            }
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        Ok(Self { vertex_count, edges: set, adj })
    }

    pub fn cycle(len: usize) -> Self {
        let edges: Vec<_> = (0..len).map(|i| (i, (i + 1) % len)).collect();
        Self::new(len, &edges).expect("cycle is simple")
    }

    pub fn path(len: usize) -> Self {
        let edges: Vec<_> = (1..len).map(|i| (i - 1, i)).collect();
        Self::new(len, &edges).expect("path is simple")
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Self::new(n, &edges).expect("complete graph is simple")
    }

    /// Outer 5-cycle 0..5, inner pentagram 5..10, spokes i -- i+5.
    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
            edges.push((i, i + 5));
        }
        Self::new(10, &edges).expect("Petersen graph is simple")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a] >> b & 1 == 1
    }

    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    fn all(&self) -> u64 {
        if self.vertex_count == 64 {
            u64::MAX
        } else {
            (1u64 << self.vertex_count) - 1
        }
    }

    /// `true` when every pair of vertices in `mask` is adjacent.
    pub fn is_clique(&self, mask: u64) -> bool {
        bits(mask).all(|v| mask & !(1 << v) & !self.adj[v] == 0)
    }

    /// The graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let edges: Vec<_> = self.edges().map(|(a, b)| (perm[a], perm[b])).collect();
        Self::new(self.vertex_count, &edges).expect("relabeling preserves simplicity")
    }

    pub fn without_edge(&self, a: usize, b: usize) -> Self {
        let key = (a.min(b), a.max(b));
        let edges: Vec<_> = self.edges().filter(|&e| e != key).collect();
        Self::new(self.vertex_count, &edges).expect("subgraph is simple")
    }
}

/// Iterates over the set bits of a mask in increasing order.
pub fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(v)
        }
    })
}

/// Size of a largest clique, by branch and bound with a greedy colouring
/// bound.
pub fn clique_number(g: &GraphSpec) -> usize {
    let mut best = 0;
    expand_clique(g, 0, g.all(), &mut best);
    best
}

fn expand_clique(g: &GraphSpec, size: usize, mut cand: u64, best: &mut usize) {
    if cand == 0 {
        *best = (*best).max(size);
        return;
    }
    // colour classes: greedily peel independent sets off the candidates
    let mut order = Vec::new();
    let mut uncoloured = cand;
    let mut colour = 0;
    while uncoloured != 0 {
        colour += 1;
        let mut avail = uncoloured;
        while avail != 0 {
            let v = avail.trailing_zeros() as usize;
            avail &= !(1 << v) & !g.adj[v];
            uncoloured &= !(1 << v);
            order.push((v, colour));
        }
    }
    for &(v, c) in order.iter().rev() {
        if size + c <= *best {
            return;
        }
        expand_clique(g, size + 1, cand & g.adj[v], best);
        cand &= !(1 << v);
    }
}

/// All maximal cliques as bitmasks (Bron–Kerbosch with pivoting), sorted.
pub fn maximal_cliques(g: &GraphSpec) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    bron_kerbosch(g, 0, g.all(), 0, &mut out)?;
    out.sort_unstable();
    Ok(out)
}

fn bron_kerbosch(g: &GraphSpec, r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>) -> Result<()> {
    if p == 0 && x == 0 {
        if out.len() == MAX_CLIQUES {
            return Err(Error::TooLarge { what: "maximal clique count".into(), limit: MAX_CLIQUES });
        }
        out.push(r);
        return Ok(());
    }
    let pivot = bits(p | x)
        .max_by_key(|&u| (p & g.adj[u]).count_ones())
        .expect("p | x is nonempty");
    for v in bits(p & !g.adj[pivot]) {
        bron_kerbosch(g, r | 1 << v, p & g.adj[v], x & g.adj[v], out)?;
        p &= !(1 << v);
        x |= 1 << v;
    }
    Ok(())
}

/// Length of a shortest induced cycle of length at least four, or `None`
/// when the graph is chordal.
pub fn min_induced_cycle(g: &GraphSpec) -> Option<usize> {
    let mut best = usize::MAX;
    for s in 0..g.vertex_count {
        let mut path = vec![s];
        extend_hole(g, &mut path, 1 << s, &mut best);
    }
    (best != usize::MAX).then_some(best)
}

/// Grows induced paths whose smallest vertex is `path[0]`.
fn extend_hole(g: &GraphSpec, path: &mut Vec<usize>, on_path: u64, best: &mut usize) {
    let s = path[0];
    let k = path.len() - 1;
    let last = path[k];
    // vertices v_1 .. v_{k-1}; a new vertex must avoid all of them
    let interior = on_path & !(1 << s) & !(1 << last);
    let interior_nbrs = bits(interior).fold(0u64, |acc, v| acc | g.adj[v]);
    for w in bits(g.adj[last] & !on_path) {
        if w < s || interior_nbrs >> w & 1 == 1 {
            continue;
        }
        if k >= 1 && g.has_edge(w, s) {
            if k >= 2 {
                *best = (*best).min(k + 2);
            }
            continue;
        }
        // any cycle through this longer path has length at least k + 3
        if k + 3 >= *best {
            continue;
        }
        path.push(w);
        extend_hole(g, path, on_path | 1 << w, best);
        path.pop();
    }
}

/// Chordality test: lexicographic BFS followed by a perfect elimination
/// ordering check.
pub fn is_chordal(g: &GraphSpec) -> bool {
    let order = lex_bfs(g);
    // the reverse of a LexBFS order is a PEO iff the graph is chordal
    let n = g.vertex_count;
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    for &v in &order {
        // neighbours visited before v come later in the elimination order
        let earlier: Vec<usize> = bits(g.adj[v]).filter(|&u| pos[u] < pos[v]).collect();
        if let Some(&parent) = earlier.iter().max_by_key(|&&u| pos[u]) {
            for &u in &earlier {
                if u != parent && !g.has_edge(u, parent) {
                    return false;
                }
            }
        }
    }
    true
}

fn lex_bfs(g: &GraphSpec) -> Vec<usize> {
    let n = g.vertex_count;
    let mut labels: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for step in 0..n {
        let v = (0..n)
            .filter(|&v| !visited[v])
            .max_by(|&a, &b| labels[a].cmp(&labels[b]).then(b.cmp(&a)))
            .expect("unvisited vertex remains");
        visited[v] = true;
        order.push(v);
        for u in bits(g.adj[v]) {
            if !visited[u] {
                labels[u].push(n - step);
            }
        }
    }
    order
}

/// Exact treewidth by dynamic programming over vertex subsets.
pub fn treewidth(g: &GraphSpec) -> Result<usize> {
    let n = g.vertex_count;
    if n > EXACT_TREEWIDTH_CAP {
        return Err(Error::TooLarge {
            what: format!("exact treewidth on {n} vertices (use treewidth_upper_bound)"),
            limit: EXACT_TREEWIDTH_CAP,
        });
    }
    if n == 0 {
        return Ok(0);
    }
    // tw[S]: best width of an elimination prefix consisting of S,
    // where eliminating v after S costs |Q(S, v)|
    let size = 1usize << n;
    let mut tw = vec![u8::MAX; size];
    tw[0] = 0;
    for s in 0..size as u64 {
        let cur = tw[s as usize];
        if cur == u8::MAX {
            continue;
        }
        for v in bits(!s & g.all()) {
            let q = q_set(g, s, v).count_ones() as u8;
            let next = (s | 1 << v) as usize;
            let val = cur.max(q);
            if val < tw[next] {
                tw[next] = val;
            }
        }
    }
    Ok(tw[size - 1] as usize)
}

/// Vertices outside `s ∪ {v}` reachable from `v` through `s`.
fn q_set(g: &GraphSpec, s: u64, v: usize) -> u64 {
    let mut comp = 1u64 << v;
    let mut frontier = comp;
    loop {
        let nbrs = bits(frontier).fold(0u64, |acc, u| acc | g.adj[u]);
        frontier = nbrs & s & !comp;
        if frontier == 0 {
            break;
        }
        comp |= frontier;
    }
    let boundary = bits(comp).fold(0u64, |acc, u| acc | g.adj[u]);
    boundary & !comp & !s
}

/// Min-degree elimination heuristic; an upper bound on the treewidth.
pub fn treewidth_upper_bound(g: &GraphSpec) -> usize {
    let mut adj = g.adj.clone();
    let mut alive = g.all();
    let mut width = 0;
    while alive != 0 {
        let v = bits(alive).min_by_key(|&v| ((adj[v] & alive).count_ones(), v)).expect("alive");
        let nb = adj[v] & alive;
        width = width.max(nb.count_ones() as usize);
        for u in bits(nb) {
            adj[u] |= nb & !(1 << u);
        }
        alive &= !(1 << v);
    }
    width
}
