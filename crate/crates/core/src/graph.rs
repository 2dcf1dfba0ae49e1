//! Edge-ordered simple graphs and the graph-sum text format.
//!
//! A [`Graph`] is a vertex count plus an ordered list of edges. The position
//! of an edge in that list is its wedge index: swapping two edges negates the
//! graph as an element of the graph complex.
//!
//! Text format, one term per line:
//!
//! ```text
//! # comment
//! 5/2 ; 12 23 34 41 45 15 56 36 26 13
//! 1 ; v1
//! -3 ; 1-10 2-10 1-2
//! ```
//!
//! Edge tokens are either two digits `ij` or `i-j` for arbitrary labels.
//! `v<k>` raises the vertex count to `k`.

use std::fmt;

use crate::error::{GraphError, ParseError};
use crate::rational::{format_rational, parse_rational, Rational};

/// Adjacency sets are `u64` bitmasks, which caps the vertex count.
pub const MAX_VERTICES: usize = 64;

/// An edge between two 1-based vertex labels. The endpoint order is kept only
/// so that serialization reproduces the input verbatim.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge(pub u32, pub u32);

impl Edge {
    pub fn lo(self) -> u32 {
        self.0.min(self.1)
    }

    pub fn hi(self) -> u32 {
        self.0.max(self.1)
    }

    pub fn touches(self, v: u32) -> bool {
        self.0 == v || self.1 == v
    }

    /// The endpoint opposite to `v`.
    pub fn other(self, v: u32) -> u32 {
        if self.0 == v {
            self.1
        } else {
            self.0
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
}

impl Graph {
    pub fn new<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        if n == 0 {
            return Err(GraphError::NoVertices);
        }
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices {
                n,
                max: MAX_VERTICES,
            });
        }
        let edges: Vec<Edge> = edges.into_iter().map(|(a, b)| Edge(a, b)).collect();
        let mut seen = vec![0u64; n];
        for e in &edges {
            for label in [e.0, e.1] {
                if label == 0 {
                    return Err(GraphError::ZeroLabel);
                }
                if label as usize > n {
                    return Err(GraphError::LabelOutOfRange { label, n });
                }
            }
            if e.0 == e.1 {
                return Err(GraphError::Tadpole(e.0));
            }
            let (a, b) = (e.lo() as usize - 1, e.hi() as usize - 1);
            if seen[a] >> b & 1 == 1 {
                return Err(GraphError::DuplicateEdge(e.lo(), e.hi()));
            }
            seen[a] |= 1 << b;
        }
        Ok(Graph { n, edges })
    }

    /// The one-vertex graph with no edges.
    pub fn vertex() -> Self {
        Graph {
            n: 1,
            edges: Vec::new(),
        }
    }

    /// The single edge on two vertices.
    pub fn edge() -> Self {
        Graph {
            n: 2,
            edges: vec![Edge(1, 2)],
        }
    }

    /// Smallest graph containing the edges, `n` = largest label.
    pub fn from_edges<I>(edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let edges: Vec<(u32, u32)> = edges.into_iter().collect();
        let n = edges.iter().map(|&(a, b)| a.max(b)).max().unwrap_or(0) as usize;
        Graph::new(n, edges)
    }

    /// Unchecked constructor for internally produced graphs.
    pub(crate) fn from_parts(n: usize, edges: Vec<Edge>) -> Self {
        debug_assert!(Graph::new(n, edges.iter().map(|e| (e.0, e.1))).is_ok());
        Graph { n, edges }
    }

    /// Rim cycle `1..k` followed by the spokes to the axis `k + 1`.
    ///
    /// Edge order: `12 23 .. (k-1)k k1`, then `1(k+1) .. k(k+1)`.
    pub fn wheel(k: usize) -> Result<Self, GraphError> {
        if k < 3 {
            return Err(GraphError::WheelTooSmall(k));
        }
        let k32 = k as u32;
        let rim = (1..=k32).map(|i| (i, if i == k32 { 1 } else { i + 1 }));
        let spokes = (1..=k32).map(|i| (i, k32 + 1));
        Graph::new(k + 1, rim.chain(spokes))
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Number of edges at `v`, `None` when the label is out of range.
    pub fn valency(&self, v: u32) -> Option<usize> {
        if v == 0 || v as usize > self.n {
            return None;
        }
        Some(self.edges.iter().filter(|e| e.touches(v)).count())
    }

    /// Valencies indexed by `label - 1`.
    pub fn valencies(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            deg[e.0 as usize - 1] += 1;
            deg[e.1 as usize - 1] += 1;
        }
        deg
    }

    pub fn min_valency(&self) -> usize {
        self.valencies().into_iter().min().unwrap_or(0)
    }

    /// Neighbour bitmasks, 0-based.
    pub fn adjacency(&self) -> Vec<u64> {
        let mut adj = vec![0u64; self.n];
        for e in &self.edges {
            let (a, b) = (e.0 as usize - 1, e.1 as usize - 1);
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        let adj = self.adjacency();
        mask_connected(&adj, full_mask(self.n))
    }

    /// Applies a vertex relabeling `v -> map[v - 1]` while keeping edge positions.
    pub fn relabel(&self, map: &[u32]) -> Self {
        assert_eq!(map.len(), self.n);
        let edges = self
            .edges
            .iter()
            .map(|e| Edge(map[e.0 as usize - 1], map[e.1 as usize - 1]))
            .collect();
        Graph::from_parts(self.n, edges)
    }

    /// Reorders edges: position `i` of the result holds edge `order[i]` of `self`.
    pub fn reorder_edges(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.edges.len());
        let edges = order.iter().map(|&i| self.edges[i]).collect();
        Graph::from_parts(self.n, edges)
    }

    /// Same graph with an extra edge appended last.
    pub fn with_edge(&self, a: u32, b: u32) -> Result<Self, GraphError> {
        Graph::new(
            self.n,
            self.edges
                .iter()
                .map(|e| (e.0, e.1))
                .chain(std::iter::once((a, b))),
        )
    }

    /// Edge field of the text format, e.g. `12 13 23` or `v1`.
    pub fn edge_field(&self) -> String {
        let mut tokens: Vec<String> = self
            .edges
            .iter()
            .map(|e| {
                if e.0 <= 9 && e.1 <= 9 {
                    format!("{}{}", e.0, e.1)
                } else {
                    format!("{}-{}", e.0, e.1)
                }
            })
            .collect();
        let max_label = self.edges.iter().map(|e| e.hi()).max().unwrap_or(0) as usize;
        if self.n > max_label {
            tokens.push(format!("v{}", self.n));
        }
        tokens.join(" ")
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.edge_field())
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Whether the vertices in `mask` induce a connected subgraph.
pub(crate) fn mask_connected(adj: &[u64], mask: u64) -> bool {
    if mask == 0 {
        return true;
    }
    let mut seen = mask & mask.wrapping_neg();
    let mut frontier = seen;
    while frontier != 0 {
        let mut next = 0;
        let mut f = frontier;
        while f != 0 {
            let v = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= adj[v] & mask;
        }
        frontier = next & !seen;
        seen |= next;
    }
    seen == mask
}

/// One term of the text format: `<coeff> ; <edges>`.
pub fn serialize_graph(coeff: &Rational, graph: &Graph) -> String {
    format!("{} ; {}", format_rational(coeff), graph.edge_field())
}

/// Parses a single term line.
pub fn parse_graph(text: &str) -> Result<(Rational, Graph), ParseError> {
    let (coeff, edges) = text.split_once(';').ok_or(ParseError::MissingSeparator)?;
    let coeff = parse_rational(coeff.trim())?;
    let graph = parse_edge_field(edges)?;
    Ok((coeff, graph))
}

/// Parses the edge field (everything after `;`).
pub fn parse_edge_field(field: &str) -> Result<Graph, ParseError> {
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut declared = 0usize;
    let mut seen = std::collections::HashSet::new();
    for token in field.split_whitespace() {
        if let Some(count) = token.strip_prefix('v') {
            declared = parse_label(count, token)? as usize;
            continue;
        }
        let (a, b) = parse_edge_token(token)?;
        if a == b {
            return Err(ParseError::Tadpole {
                token: token.to_string(),
            });
        }
        if !seen.insert((a.min(b), a.max(b))) {
            return Err(ParseError::DuplicateEdge {
                token: token.to_string(),
            });
        }
        edges.push((a, b));
    }
    let max_label = edges.iter().map(|&(a, b)| a.max(b)).max().unwrap_or(0) as usize;
    let n = declared.max(max_label);
    if n == 0 {
        return Err(ParseError::NoVertices);
    }
    Graph::new(n, edges).map_err(ParseError::Graph)
}

fn parse_edge_token(token: &str) -> Result<(u32, u32), ParseError> {
    let malformed = || ParseError::MalformedToken {
        token: token.to_string(),
    };
    let (a, b) = match token.split_once('-') {
        Some((a, b)) => (parse_label(a, token)?, parse_label(b, token)?),
        None => {
            let bytes = token.as_bytes();
            if bytes.len() != 2 || !bytes.iter().all(u8::is_ascii_digit) {
                return Err(malformed());
            }
            let a = u32::from(bytes[0] - b'0');
            let b = u32::from(bytes[1] - b'0');
            if a == 0 || b == 0 {
                return Err(ParseError::ZeroLabel {
                    token: token.to_string(),
                });
            }
            (a, b)
        }
    };
    Ok((a, b))
}

fn parse_label(text: &str, token: &str) -> Result<u32, ParseError> {
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseError::MalformedToken {
            token: token.to_string(),
        });
    }
    let value: u32 = text.parse().map_err(|_| ParseError::MalformedToken {
        token: token.to_string(),
    })?;
    if value == 0 {
        return Err(ParseError::ZeroLabel {
            token: token.to_string(),
        });
    }
    Ok(value)
}

/// Parses a whole graph-sum document into raw terms, in file order.
pub fn parse_sum_text(text: &str) -> Result<Vec<(Rational, Graph)>, ParseError> {
    let mut terms = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        if line.trim().is_empty() {
            continue;
        }
        let term = parse_graph(line).map_err(|e| ParseError::AtLine {
            line: idx + 1,
            source: Box::new(e),
        })?;
        terms.push(term);
    }
    Ok(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{integer, ratio};

    #[test]
    fn parses_tetrahedron() {
        let (c, g) = parse_graph("1 ; 12 13 14 23 24 34").unwrap();
        assert_eq!(c, integer(1));
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.edges()[0], Edge(1, 2));
        assert_eq!(g.edges()[5], Edge(3, 4));
    }

    #[test]
    fn prism_keeps_token_order() {
        let text = "5/2 ; 12 23 34 41 45 15 56 36 26 13";
        let (c, g) = parse_graph(text).unwrap();
        assert_eq!(c, ratio(5, 2));
        assert_eq!(g.edges()[3], Edge(4, 1));
        assert_eq!(serialize_graph(&c, &g), text);
    }

    #[test]
    fn single_vertex() {
        let (c, g) = parse_graph("1 ; v1").unwrap();
        assert_eq!(c, integer(1));
        assert_eq!(g, Graph::vertex());
        assert_eq!(serialize_graph(&c, &g), "1 ; v1");
        assert_eq!(g.valency(1), Some(0));
    }

    #[test]
    fn long_labels_and_isolated_vertices() {
        let (_, g) = parse_graph("-3 ; 1-10 2-10 12 v12").unwrap();
        assert_eq!(g.vertex_count(), 12);
        assert_eq!(g.edge_field(), "1-10 2-10 12 v12");
    }

    #[test]
    fn distinct_parse_errors() {
        assert!(matches!(
            parse_graph("1 ; 12 22"),
            Err(ParseError::Tadpole { token }) if token == "22"
        ));
        assert!(matches!(
            parse_graph("1 ; 12 21"),
            Err(ParseError::DuplicateEdge { token }) if token == "21"
        ));
        assert!(matches!(
            parse_graph("1 ; 10"),
            Err(ParseError::ZeroLabel { token }) if token == "10"
        ));
        assert!(matches!(
            parse_graph("1 ; 123"),
            Err(ParseError::MalformedToken { token }) if token == "123"
        ));
        assert!(matches!(
            parse_graph("1 ; 1-x"),
            Err(ParseError::MalformedToken { .. })
        ));
        assert!(matches!(
            parse_graph("1 12"),
            Err(ParseError::MissingSeparator)
        ));
        assert!(matches!(
            parse_graph("x ; 12"),
            Err(ParseError::MalformedCoefficient { .. })
        ));
        assert!(matches!(parse_graph("1 ; "), Err(ParseError::NoVertices)));
    }

    #[test]
    fn sum_text_skips_comments_and_reports_lines() {
        let text = "# header\n\n1 ; 12 # trailing\n-1/2 ; 12 23\n";
        let terms = parse_sum_text(text).unwrap();
        assert_eq!(terms.len(), 2);
        let err = parse_sum_text("1 ; 12\n1 ; 11\n").unwrap_err();
        assert!(matches!(err, ParseError::AtLine { line: 2, .. }));
    }

    #[test]
    fn valencies() {
        let (_, tetra) = parse_graph("1 ; 12 13 14 23 24 34").unwrap();
        assert!((1..=4).all(|v| tetra.valency(v) == Some(3)));
        assert_eq!(tetra.valency(5), None);
        assert_eq!(tetra.valency(0), None);
        let w5 = Graph::wheel(5).unwrap();
        assert_eq!(w5.valency(6), Some(5));
        assert_eq!(w5.valency(1), Some(3));
    }

    #[test]
    fn wheels() {
        assert_eq!(Graph::wheel(2), Err(GraphError::WheelTooSmall(2)));
        let w5 = Graph::wheel(5).unwrap();
        assert_eq!((w5.vertex_count(), w5.edge_count()), (6, 10));
        assert_eq!(w5.edge_field(), "12 23 34 45 51 16 26 36 46 56");
        let w7 = Graph::wheel(7).unwrap();
        assert_eq!((w7.vertex_count(), w7.edge_count()), (8, 14));
        assert!(w7.is_connected());
    }

    #[test]
    fn construction_checks() {
        assert_eq!(Graph::new(0, []), Err(GraphError::NoVertices));
        assert_eq!(
            Graph::new(3, [(1, 4)]),
            Err(GraphError::LabelOutOfRange { label: 4, n: 3 })
        );
        assert_eq!(
            Graph::new(3, [(1, 2), (2, 1)]),
            Err(GraphError::DuplicateEdge(1, 2))
        );
        assert_eq!(Graph::new(3, [(2, 2)]), Err(GraphError::Tadpole(2)));
        assert!(Graph::new(65, []).is_err());
        assert!(!Graph::new(4, [(1, 2), (3, 4)]).unwrap().is_connected());
    }
}
