//! Connected simple graphs up to isomorphism, by canonical augmentation.
//!
//! Trees on `n` vertices seed the search. A connected graph with more than
//! `n - 1` edges has a non-bridge edge, and deleting one leaves a connected
//! parent, so every class is reached by adding edges to connected graphs.
//! Each class is emitted exactly once: a child `G + uv` is kept only when
//! `uv` lies in the automorphism orbit of the child's canonical deletion edge,
//! and each parent adds one representative per orbit of non-edges.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::canon::{analyze, Analysis};
use crate::graph::{mask_connected, serialize_graph, Graph};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisSpec {
    pub n: usize,
    pub e: usize,
    /// 1 means unrestricted for connected graphs on two or more vertices.
    pub min_valency: usize,
}

impl BasisSpec {
    pub fn new(n: usize, e: usize, min_valency: usize) -> Option<Self> {
        (n >= 1 && e <= n * (n - 1) / 2 && min_valency >= 1).then_some(BasisSpec {
            n,
            e,
            min_valency,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisReport {
    pub total: usize,
    pub zero: usize,
    /// Canonical nonzero graphs sorted by their serialized form.
    pub nonzero_basis: Vec<Graph>,
}

impl BasisReport {
    /// One `1 ; <edges>` line per basis graph.
    pub fn dump(&self) -> String {
        let one = Rational::from_integer(1.into());
        self.nonzero_basis
            .iter()
            .map(|g| serialize_graph(&one, g) + "\n")
            .collect()
    }
}

pub fn enumerate_basis(spec: BasisSpec) -> BasisReport {
    let level = generate(spec);
    let total = level.len();
    let mut nonzero_basis: Vec<Graph> = level
        .into_iter()
        .filter(|node| !node.zero)
        .map(|node| node.graph)
        .collect();
    let zero = total - nonzero_basis.len();
    sort_basis(&mut nonzero_basis);
    BasisReport {
        total,
        zero,
        nonzero_basis,
    }
}

/// `(total, zero)` without keeping the basis.
pub fn enumerate_counts_only(spec: BasisSpec) -> (usize, usize) {
    let level = generate(spec);
    let zero = level.iter().filter(|node| node.zero).count();
    (level.len(), zero)
}

/// Every connected graph in the bi-grading, canonical form, sorted.
pub fn connected_graphs(n: usize, e: usize) -> Vec<Graph> {
    let Some(spec) = BasisSpec::new(n, e, 1) else {
        return Vec::new();
    };
    let mut graphs: Vec<Graph> = generate(spec).into_iter().map(|node| node.graph).collect();
    sort_basis(&mut graphs);
    graphs
}

pub(crate) fn sort_basis(graphs: &mut [Graph]) {
    graphs.sort_by_cached_key(|g| g.edge_field());
}

struct Node {
    graph: Graph,
    zero: bool,
    automorphisms: Vec<Vec<u8>>,
}

impl Node {
    /// Automorphisms are conjugated into the canonical labeling.
    fn from_analysis(a: Analysis) -> Node {
        let pos = a.positions();
        let automorphisms = a
            .automorphisms
            .iter()
            .map(|sigma| {
                a.order
                    .iter()
                    .map(|&v| pos[sigma[v as usize] as usize])
                    .collect()
            })
            .collect();
        Node {
            graph: a.canonical,
            zero: a.zero,
            automorphisms,
        }
    }
}

fn generate(spec: BasisSpec) -> Vec<Node> {
    let BasisSpec { n, e, min_valency } = spec;
    if n == 1 {
        return if e == 0 {
            vec![Node::from_analysis(analyze(&Graph::vertex()))]
        } else {
            Vec::new()
        };
    }
    if e + 1 < n || e > n * (n - 1) / 2 {
        return Vec::new();
    }
    let feasible = |g: &Graph| {
        let deficit: usize = g
            .valencies()
            .iter()
            .map(|&d| min_valency.saturating_sub(d))
            .sum();
        deficit <= 2 * (e - g.edge_count())
    };
    let mut level: Vec<Node> = trees(n)
        .into_iter()
        .filter(|t| feasible(&t.graph))
        .collect();
    for _ in n - 1..e {
        let mut next: Vec<Node> = level
            .par_iter()
            .flat_map_iter(augment)
            .filter(|child| feasible(&child.graph))
            .collect();
        next.sort_by(|a, b| a.graph.cmp(&b.graph));
        level = next;
    }
    level
}

/// Trees on `n ≥ 2` vertices by leaf addition, deduplicated by canonical form.
fn trees(n: usize) -> Vec<Node> {
    let mut current: Vec<Graph> = vec![Graph::edge()];
    for size in 2..n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for t in &current {
            for v in 1..=size as u32 {
                let mut edges: Vec<(u32, u32)> = t.edges().iter().map(|e| (e.0, e.1)).collect();
                edges.push((v, size as u32 + 1));
                let grown = Graph::new(size + 1, edges).expect("valid tree");
                let canonical = analyze(&grown).canonical;
                if seen.insert(canonical.clone()) {
                    next.push(canonical);
                }
            }
        }
        next.sort();
        current = next;
    }
    current
        .into_iter()
        .map(|g| Node::from_analysis(analyze(&g)))
        .collect()
}

/// Children of `node` accepted by the canonical-deletion rule.
fn augment(node: &Node) -> Vec<Node> {
    let g = &node.graph;
    let n = g.vertex_count();
    let adj = g.adjacency();
    // orbits of non-edges under Aut(g)
    let pair_index = |a: usize, b: usize| a * n + b;
    let mut parent: Vec<usize> = (0..n * n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let non_edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|&(a, b)| adj[a] >> b & 1 == 0)
        .collect();
    for sigma in node.automorphisms.iter().skip(1) {
        for &(a, b) in &non_edges {
            let (x, y) = (sigma[a] as usize, sigma[b] as usize);
            let (x, y) = (x.min(y), x.max(y));
            let r1 = find(&mut parent, pair_index(a, b));
            let r2 = find(&mut parent, pair_index(x, y));
            if r1 != r2 {
                parent[r1.max(r2)] = r1.min(r2);
            }
        }
    }
    let mut children = Vec::new();
    for &(a, b) in &non_edges {
        if find(&mut parent, pair_index(a, b)) != pair_index(a, b) {
            continue;
        }
        let mut child_adj = adj.clone();
        child_adj[a] |= 1 << b;
        child_adj[b] |= 1 << a;
        let new_key = edge_invariant(&child_adj, a, b);
        let bridges = bridges(&child_adj);
        let best_key = all_edges(&child_adj)
            .filter(|&(x, y)| !bridges.contains(&(x, y)))
            .map(|(x, y)| edge_invariant(&child_adj, x, y))
            .max()
            .expect("new edge is never a bridge");
        if new_key < best_key {
            continue;
        }
        let child = g.with_edge(a as u32 + 1, b as u32 + 1).expect("non-edge");
        let analysis = analyze(&child);
        let pos = analysis.positions();
        // canonical deletion edge: best invariant, then largest canonical pair
        let deletion = all_edges(&child_adj)
            .filter(|&(x, y)| {
                !bridges.contains(&(x, y)) && edge_invariant(&child_adj, x, y) == best_key
            })
            .max_by_key(|&(x, y)| {
                let (p, q) = (pos[x], pos[y]);
                (p.min(q), p.max(q))
            })
            .expect("candidate exists");
        let same_orbit = analysis.automorphisms.iter().any(|sigma| {
            let (x, y) = (sigma[a] as usize, sigma[b] as usize);
            (x.min(y), x.max(y)) == deletion
        });
        if same_orbit {
            children.push(Node::from_analysis(analysis));
        }
    }
    children
}

fn all_edges(adj: &[u64]) -> impl Iterator<Item = (usize, usize)> + '_ {
    (0..adj.len()).flat_map(move |a| {
        let mut higher = adj[a] >> a >> 1;
        let mut out = Vec::new();
        while higher != 0 {
            let k = higher.trailing_zeros() as usize;
            higher &= higher - 1;
            out.push((a, a + 1 + k));
        }
        out
    })
}

/// Isomorphism-invariant key of an edge, used to cut most children before
/// the canonical labeling is computed.
fn edge_invariant(adj: &[u64], a: usize, b: usize) -> (u32, u32, u32) {
    let (da, db) = (adj[a].count_ones(), adj[b].count_ones());
    let common = (adj[a] & adj[b]).count_ones();
    (da.max(db), da.min(db), common)
}

fn bridges(adj: &[u64]) -> HashSet<(usize, usize)> {
    let n = adj.len();
    let all = crate::graph::full_mask(n);
    all_edges(adj)
        .filter(|&(a, b)| {
            let mut cut = adj.to_vec();
            cut[a] &= !(1 << b);
            cut[b] &= !(1 << a);
            !mask_connected(&cut, all)
        })
        .collect()
}
