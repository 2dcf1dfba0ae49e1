//! Canonical labeling with wedge-sign tracking.
//!
//! The labeling is found by individualization and refinement: the vertex set
//! is refined to an equitable ordered partition, then every vertex of the
//! first non-singleton cell is individualized in turn. Every discrete leaf
//! yields a relabeling; the leaf with the largest adjacency certificate is
//! canonical, and all leaves sharing that certificate differ from it by an
//! automorphism. Since the whole tree is explored, the automorphism group is
//! listed in full.
//!
//! A graph is a *zero graph* when some automorphism permutes its edges oddly.

use std::cmp::Ordering;

use crate::graph::{Edge, Graph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_parity(odd: bool) -> Self {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn to_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_parity(self.is_minus() != rhs.is_minus())
    }
}

/// `Canonical { graph, sign }` means `input = sign * graph` in the graph complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CanonicalResult {
    Zero,
    Canonical { graph: Graph, sign: Sign },
}

impl CanonicalResult {
    pub fn is_zero(&self) -> bool {
        matches!(self, CanonicalResult::Zero)
    }
}

/// Everything the search learns about one graph.
#[derive(Clone, Debug)]
pub struct Analysis {
    /// Canonical relabeling of the input, edges sorted by `(lo, hi)`.
    pub canonical: Graph,
    /// `input = sign * canonical`, meaningful only when `zero` is false.
    pub sign: Sign,
    pub zero: bool,
    /// `order[i]` is the 0-based input vertex placed at canonical position `i`.
    pub order: Vec<u8>,
    /// Every automorphism as a 0-based vertex map; the identity comes first.
    pub automorphisms: Vec<Vec<u8>>,
}

impl Analysis {
    /// 0-based canonical position of each input vertex.
    pub fn positions(&self) -> Vec<u8> {
        let mut pos = vec![0u8; self.order.len()];
        for (i, &v) in self.order.iter().enumerate() {
            pos[v as usize] = i as u8;
        }
        pos
    }
}

pub fn canonicalize(graph: &Graph) -> CanonicalResult {
    let a = analyze(graph);
    if a.zero {
        CanonicalResult::Zero
    } else {
        CanonicalResult::Canonical {
            graph: a.canonical,
            sign: a.sign,
        }
    }
}

pub fn analyze(graph: &Graph) -> Analysis {
    let adj = graph.adjacency();
    let (order, automorphisms) = Search::run(&adj);
    let mut pos = vec![0u32; order.len()];
    for (i, &v) in order.iter().enumerate() {
        pos[v as usize] = i as u32 + 1;
    }
    let relabeled: Vec<(u32, u32)> = graph
        .edges()
        .iter()
        .map(|e| {
            let (a, b) = (pos[e.0 as usize - 1], pos[e.1 as usize - 1]);
            (a.min(b), a.max(b))
        })
        .collect();
    // position of each input edge in the sorted canonical order
    let mut sorted: Vec<(u32, u32)> = relabeled.clone();
    sorted.sort_unstable();
    let target: Vec<usize> = relabeled
        .iter()
        .map(|k| sorted.binary_search(k).expect("edge present"))
        .collect();
    let sign = Sign::from_parity(permutation_is_odd(&target));
    let zero = automorphisms
        .iter()
        .skip(1)
        .any(|sigma| edge_permutation_is_odd(graph, sigma));
    let canonical = Graph::from_parts(
        graph.vertex_count(),
        sorted.into_iter().map(|(a, b)| Edge(a, b)).collect(),
    );
    Analysis {
        canonical,
        sign,
        zero,
        order,
        automorphisms,
    }
}

/// Parity of the edge permutation induced by a vertex automorphism.
pub(crate) fn edge_permutation_is_odd(graph: &Graph, sigma: &[u8]) -> bool {
    let n = graph.vertex_count();
    let mut index = vec![u16::MAX; n * n];
    for (k, e) in graph.edges().iter().enumerate() {
        let (a, b) = (e.0 as usize - 1, e.1 as usize - 1);
        index[a * n + b] = k as u16;
        index[b * n + a] = k as u16;
    }
    let image: Vec<usize> = graph
        .edges()
        .iter()
        .map(|e| {
            let a = sigma[e.0 as usize - 1] as usize;
            let b = sigma[e.1 as usize - 1] as usize;
            let k = index[a * n + b];
            debug_assert!(k != u16::MAX, "not an automorphism");
            k as usize
        })
        .collect();
    permutation_is_odd(&image)
}

/// Parity of a permutation given in one-line notation.
pub fn permutation_is_odd(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut transpositions = 0usize;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        transpositions += len - 1;
    }
    transpositions % 2 == 1
}

#[derive(Clone)]
struct Partition {
    elems: Vec<u8>,
    /// `(start, end)` ranges into `elems`, in order.
    cells: Vec<(u8, u8)>,
}

impl Partition {
    fn is_discrete(&self) -> bool {
        self.cells.len() == self.elems.len()
    }

    fn cell_mask(&self, (s, e): (u8, u8)) -> u64 {
        self.elems[s as usize..e as usize]
            .iter()
            .fold(0, |m, &v| m | 1 << v)
    }

    /// Refines to the coarsest equitable partition below the current one,
    /// splitting against every mask in `queue` and each fragment produced.
    fn refine(&mut self, adj: &[u64], mut queue: Vec<u64>) {
        let mut head = 0;
        let mut counts = [0u8; 64];
        while head < queue.len() && !self.is_discrete() {
            let splitter = queue[head];
            head += 1;
            let mut ci = 0;
            while ci < self.cells.len() {
                let (s, e) = self.cells[ci];
                let (s, e) = (s as usize, e as usize);
                if e - s == 1 {
                    ci += 1;
                    continue;
                }
                let mut uniform = true;
                for k in s..e {
                    counts[k] = (adj[self.elems[k] as usize] & splitter).count_ones() as u8;
                    uniform &= counts[k] == counts[s];
                }
                if uniform {
                    ci += 1;
                    continue;
                }
                let mut pairs: Vec<(u8, u8)> = (s..e).map(|k| (counts[k], self.elems[k])).collect();
                pairs.sort_by_key(|p| p.0);
                let mut fragments = Vec::new();
                let mut start = s;
                for (k, &(c, v)) in pairs.iter().enumerate() {
                    self.elems[s + k] = v;
                    if k > 0 && c != pairs[k - 1].0 {
                        fragments.push((start as u8, (s + k) as u8));
                        start = s + k;
                    }
                }
                fragments.push((start as u8, e as u8));
                for &f in &fragments {
                    queue.push(self.cell_mask(f));
                }
                let added = fragments.len();
                self.cells.splice(ci..ci + 1, fragments);
                ci += added;
            }
        }
    }

    fn individualize(&self, cell: usize, vertex: u8) -> Partition {
        let mut next = self.clone();
        let (s, e) = next.cells[cell];
        let at = next.elems[s as usize..e as usize]
            .iter()
            .position(|&v| v == vertex)
            .expect("vertex in cell")
            + s as usize;
        next.elems.swap(s as usize, at);
        next.cells.splice(cell..cell + 1, [(s, s + 1), (s + 1, e)]);
        next
    }
}

struct Search<'a> {
    adj: &'a [u64],
    best_cert: Vec<u64>,
    best_leaves: Vec<Vec<u8>>,
}

impl<'a> Search<'a> {
    /// Returns the canonical order and the automorphism list.
    fn run(adj: &'a [u64]) -> (Vec<u8>, Vec<Vec<u8>>) {
        let n = adj.len();
        let mut root = Partition {
            elems: (0..n as u8).collect(),
            cells: vec![(0, n as u8)],
        };
        let all = crate::graph::full_mask(n);
        root.refine(adj, vec![all]);
        let mut search = Search {
            adj,
            best_cert: Vec::new(),
            best_leaves: Vec::new(),
        };
        search.descend(&root);
        let best = search.best_leaves[0].clone();
        let automorphisms = search
            .best_leaves
            .iter()
            .map(|leaf| {
                let mut sigma = vec![0u8; n];
                for (i, &v) in best.iter().enumerate() {
                    sigma[v as usize] = leaf[i];
                }
                sigma
            })
            .collect();
        (best, automorphisms)
    }

    fn descend(&mut self, part: &Partition) {
        if part.is_discrete() {
            self.leaf(&part.elems);
            return;
        }
        let cell = part
            .cells
            .iter()
            .position(|&(s, e)| e - s > 1)
            .expect("non-discrete partition");
        let (s, e) = part.cells[cell];
        let members: Vec<u8> = part.elems[s as usize..e as usize].to_vec();
        for v in members {
            let mut child = part.individualize(cell, v);
            child.refine(self.adj, vec![1u64 << v]);
            self.descend(&child);
        }
    }

    fn leaf(&mut self, order: &[u8]) {
        let n = order.len();
        let mut pos = [0u8; 64];
        for (i, &v) in order.iter().enumerate() {
            pos[v as usize] = i as u8;
        }
        let cert: Vec<u64> = order
            .iter()
            .map(|&v| {
                let mut row = 0u64;
                let mut nb = self.adj[v as usize];
                while nb != 0 {
                    let u = nb.trailing_zeros() as usize;
                    nb &= nb - 1;
                    row |= 1 << pos[u];
                }
                row
            })
            .collect();
        debug_assert_eq!(cert.len(), n);
        match cert.cmp(&self.best_cert) {
            Ordering::Greater => {
                self.best_cert = cert;
                self.best_leaves.clear();
                self.best_leaves.push(order.to_vec());
            }
            Ordering::Equal => self.best_leaves.push(order.to_vec()),
            Ordering::Less => {}
        }
    }
}

/// Zero-graph test by direct backtracking over adjacency-preserving vertex
/// maps, independent of the refinement search above.
pub fn is_zero(graph: &Graph) -> bool {
    let n = graph.vertex_count();
    let adj = graph.adjacency();
    let deg = graph.valencies();
    // breadth-first order keeps the partial maps tightly constrained
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    for root in 0..n {
        if placed[root] {
            continue;
        }
        placed[root] = true;
        order.push(root);
        let mut head = order.len() - 1;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for (u, seen) in placed.iter_mut().enumerate() {
                if adj[v] >> u & 1 == 1 && !*seen {
                    *seen = true;
                    order.push(u);
                }
            }
        }
    }
    let mut map = vec![u8::MAX; n];
    let mut used = vec![false; n];
    extend_automorphism(graph, &adj, &deg, &order, 0, &mut map, &mut used)
}

fn extend_automorphism(
    graph: &Graph,
    adj: &[u64],
    deg: &[usize],
    order: &[usize],
    depth: usize,
    map: &mut [u8],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return edge_permutation_is_odd(graph, map);
    }
    let v = order[depth];
    for w in 0..order.len() {
        if used[w] || deg[w] != deg[v] {
            continue;
        }
        let consistent = order[..depth].iter().all(|&u| {
            let image = map[u] as usize;
            (adj[v] >> u & 1) == (adj[w] >> image & 1)
        });
        if !consistent {
            continue;
        }
        map[v] = w as u8;
        used[w] = true;
        if extend_automorphism(graph, adj, deg, order, depth + 1, map, used) {
            return true;
        }
        used[w] = false;
        map[v] = u8::MAX;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_edge_field;

    fn g(field: &str) -> Graph {
        parse_edge_field(field).unwrap()
    }

    #[test]
    fn path_is_zero() {
        let path = g("12 23");
        assert!(is_zero(&path));
        assert!(canonicalize(&path).is_zero());
    }

    #[test]
    fn four_wheel_is_zero_tetrahedron_is_not() {
        let w4 = g("12 13 14 15 23 25 34 45");
        assert!(is_zero(&w4));
        assert_eq!(canonicalize(&w4), CanonicalResult::Zero);
        let tetra = g("12 13 14 23 24 34");
        assert!(!is_zero(&tetra));
        assert!(!canonicalize(&tetra).is_zero());
    }

    #[test]
    fn edge_swap_flips_sign() {
        let a = g("12 13 14 23 24 34");
        let b = g("13 12 14 23 24 34");
        let (
            CanonicalResult::Canonical {
                graph: ga,
                sign: sa,
            },
            CanonicalResult::Canonical {
                graph: gb,
                sign: sb,
            },
        ) = (canonicalize(&a), canonicalize(&b))
        else {
            panic!("tetrahedron is nonzero");
        };
        assert_eq!(ga, gb);
        assert_ne!(sa, sb);
    }

    #[test]
    fn tetrahedron_automorphism_group_is_s4() {
        let a = analyze(&g("12 13 14 23 24 34"));
        assert_eq!(a.automorphisms.len(), 24);
        assert_eq!(a.automorphisms[0], vec![0, 1, 2, 3]);
    }

    #[test]
    fn parity() {
        assert!(!permutation_is_odd(&[0, 1, 2]));
        assert!(permutation_is_odd(&[1, 0, 2]));
        assert!(!permutation_is_odd(&[1, 2, 0]));
        assert!(permutation_is_odd(&[3, 2, 1, 0, 5, 4]));
    }

    #[test]
    fn triangle_is_zero() {
        // the reflection swaps two edges
        assert!(is_zero(&g("12 23 13")));
        assert!(canonicalize(&g("12 23 13")).is_zero());
    }

    #[test]
    fn sign_multiplication() {
        assert_eq!(Sign::Minus * Sign::Minus, Sign::Plus);
        assert_eq!(Sign::Plus * Sign::Minus, Sign::Minus);
    }
}
