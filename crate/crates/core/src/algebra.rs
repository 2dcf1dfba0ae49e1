//! Insertion, graded bracket and differential on edge-ordered graphs.
//!
//! Sign convention: in every term of `g1 ∘ g2` the edges of the inserted
//! graph `g1` come first, followed by the edges of `g2` in their own order.
//! With `d = [•–•, ·]` the new edge therefore always leads the ordering, and
//! `d(•) = -(•–•)`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::canon::{canonicalize, CanonicalResult};
use crate::error::{AlgebraError, ParseError};
use crate::graph::{parse_sum_text, serialize_graph, Edge, Graph};
use crate::rational::Rational;

/// A raw, unreduced term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: Rational,
    pub graph: Graph,
}

impl Term {
    pub fn new(coeff: Rational, graph: Graph) -> Self {
        Term { coeff, graph }
    }

    pub fn unit(graph: Graph) -> Self {
        Term::new(Rational::one(), graph)
    }
}

/// A reduced linear combination: canonical nonzero graphs with nonzero
/// coefficients. Keys may span several bi-gradings.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GraphSum {
    terms: BTreeMap<Graph, Rational>,
}

impl GraphSum {
    pub fn new() -> Self {
        GraphSum::default()
    }

    /// The sum holding a single graph with coefficient 1 (after reduction).
    pub fn single(graph: Graph) -> Self {
        reduce(vec![Term::unit(graph)])
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Graph, &Rational)> {
        self.terms.iter()
    }

    pub fn graphs(&self) -> impl Iterator<Item = &Graph> {
        self.terms.keys()
    }

    /// Coefficient of an arbitrary (not necessarily canonical) graph,
    /// accounting for its sign relative to the stored representative.
    pub fn coefficient(&self, graph: &Graph) -> Rational {
        match canonicalize(graph) {
            CanonicalResult::Zero => Rational::zero(),
            CanonicalResult::Canonical { graph, sign } => self
                .terms
                .get(&graph)
                .map(|c| c * Rational::from_integer(BigInt::from(sign.to_i64())))
                .unwrap_or_else(Rational::zero),
        }
    }

    pub fn add(&self, other: &GraphSum) -> GraphSum {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &GraphSum) {
        for (g, c) in &other.terms {
            self.accumulate(g.clone(), c.clone());
        }
    }

    pub fn scale(&self, factor: &Rational) -> GraphSum {
        if factor.is_zero() {
            return GraphSum::new();
        }
        GraphSum {
            terms: self
                .terms
                .iter()
                .map(|(g, c)| (g.clone(), c * factor))
                .collect(),
        }
    }

    /// `(vertices, edges)` shared by every key, `None` if empty or mixed.
    pub fn bigrading(&self) -> Option<(usize, usize)> {
        let mut keys = self.terms.keys();
        let first = keys.next()?;
        let grading = (first.vertex_count(), first.edge_count());
        keys.all(|g| (g.vertex_count(), g.edge_count()) == grading)
            .then_some(grading)
    }

    /// Graph-sum text, one line per term in key order.
    pub fn to_text(&self) -> String {
        self.terms
            .iter()
            .map(|(g, c)| serialize_graph(c, g) + "\n")
            .collect()
    }

    /// Parses and reduces a graph-sum document.
    pub fn from_text(text: &str) -> Result<GraphSum, ParseError> {
        let terms = parse_sum_text(text)?
            .into_iter()
            .map(|(c, g)| Term::new(c, g))
            .collect();
        Ok(reduce(terms))
    }

    fn accumulate(&mut self, canonical: Graph, coeff: Rational) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(canonical) {
            Entry::Vacant(slot) => {
                if !coeff.is_zero() {
                    slot.insert(coeff);
                }
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += coeff;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub(crate) fn from_integer_counts(counts: HashMap<Graph, i64>) -> GraphSum {
        GraphSum {
            terms: counts
                .into_iter()
                .filter(|(_, c)| *c != 0)
                .map(|(g, c)| (g, Rational::from_integer(BigInt::from(c))))
                .collect(),
        }
    }
}

impl<'a> IntoIterator for &'a GraphSum {
    type Item = (&'a Graph, &'a Rational);
    type IntoIter = std::collections::btree_map::Iter<'a, Graph, Rational>;

    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

/// All terms of `inserted ∘ host`: each vertex `v` of `host` is replaced by
/// a copy of `inserted`, and the edges at `v` are re-attached to the copy in
/// every possible way.
///
/// Labels: host vertices before `v` keep theirs, the copy takes
/// `v..v + n1 - 1`, later host vertices shift up by `n1 - 1`.
pub fn insert(inserted: &Graph, host: &Graph) -> Result<Vec<Term>, AlgebraError> {
    let mut out = Vec::new();
    for_each_insertion(inserted, host, |g| out.push(Term::unit(g)))?;
    Ok(out)
}

fn for_each_insertion<F>(inserted: &Graph, host: &Graph, mut emit: F) -> Result<(), AlgebraError>
where
    F: FnMut(Graph),
{
    if !inserted.is_connected() || !host.is_connected() {
        return Err(AlgebraError::Disconnected);
    }
    let n1 = inserted.vertex_count() as u32;
    let n2 = host.vertex_count() as u32;
    let n = (n1 + n2 - 1) as usize;
    for v in 1..=n2 {
        let shift_host = |u: u32| if u < v { u } else { u + n1 - 1 };
        let incident: Vec<usize> = host
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, e)| e.touches(v))
            .map(|(k, _)| k)
            .collect();
        let block: Vec<Edge> = inserted
            .edges()
            .iter()
            .map(|e| Edge(e.0 + v - 1, e.1 + v - 1))
            .collect();
        // odometer over attachments: incident edge i -> inserted vertex digits[i] + 1
        let mut digits = vec![0u32; incident.len()];
        loop {
            let mut edges = block.clone();
            let mut slot = 0;
            for (k, e) in host.edges().iter().enumerate() {
                if slot < incident.len() && incident[slot] == k {
                    let target = digits[slot] + v;
                    slot += 1;
                    if e.0 == v {
                        edges.push(Edge(target, shift_host(e.1)));
                    } else {
                        edges.push(Edge(shift_host(e.0), target));
                    }
                } else {
                    edges.push(Edge(shift_host(e.0), shift_host(e.1)));
                }
            }
            emit(Graph::from_parts(n, edges));
            let mut i = 0;
            loop {
                if i == digits.len() {
                    break;
                }
                digits[i] += 1;
                if digits[i] < n1 {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            if i == digits.len() {
                break;
            }
        }
    }
    Ok(())
}

fn bracket_sign(g1: &Graph, g2: &Graph) -> i64 {
    // -(-1)^{E1 E2}
    if (g1.edge_count() * g2.edge_count()).is_multiple_of(2) {
        -1
    } else {
        1
    }
}

/// `[g1, g2] = g1 ∘ g2 - (-1)^{#E(g1)·#E(g2)} g2 ∘ g1`, unreduced.
pub fn bracket(g1: &Graph, g2: &Graph) -> Result<Vec<Term>, AlgebraError> {
    let mut out = insert(g1, g2)?;
    let factor = Rational::from_integer(BigInt::from(bracket_sign(g1, g2)));
    out.extend(
        insert(g2, g1)?
            .into_iter()
            .map(|t| Term::new(factor.clone(), t.graph)),
    );
    Ok(out)
}

/// Canonicalizes every term, drops zero graphs and collects like terms.
pub fn reduce(terms: Vec<Term>) -> GraphSum {
    let mut acc: HashMap<Graph, Rational> = HashMap::new();
    for term in terms {
        if term.coeff.is_zero() {
            continue;
        }
        if let CanonicalResult::Canonical { graph, sign } = canonicalize(&term.graph) {
            let c = if sign.is_minus() {
                -term.coeff
            } else {
                term.coeff
            };
            *acc.entry(graph).or_insert_with(Rational::zero) += c;
        }
    }
    GraphSum {
        terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
    }
}

/// Reduced `[g1, g2]` with unit coefficients, accumulated in machine integers.
pub fn bracket_reduced(g1: &Graph, g2: &Graph) -> Result<GraphSum, AlgebraError> {
    let mut counts: HashMap<Graph, i64> = HashMap::new();
    let mut tally = |g: Graph, weight: i64| {
        if let CanonicalResult::Canonical { graph, sign } = canonicalize(&g) {
            *counts.entry(graph).or_insert(0) += weight * sign.to_i64();
        }
    };
    for_each_insertion(g1, g2, |g| tally(g, 1))?;
    let s = bracket_sign(g1, g2);
    for_each_insertion(g2, g1, |g| tally(g, s))?;
    Ok(GraphSum::from_integer_counts(counts))
}

/// Differential of one graph, `d(g) = [•–•, g]`, reduced.
pub fn differential_of_graph(g: &Graph) -> Result<GraphSum, AlgebraError> {
    bracket_reduced(&Graph::edge(), g)
}

/// Linear extension of the differential to reduced sums.
pub fn differential(sum: &GraphSum) -> Result<GraphSum, AlgebraError> {
    let parts: Vec<GraphSum> = sum
        .terms
        .par_iter()
        .map(|(g, c)| differential_of_graph(g).map(|d| d.scale(c)))
        .collect::<Result<_, _>>()?;
    Ok(merge(parts))
}

/// Bilinear extension of the bracket to reduced sums.
pub fn bracket_sums(a: &GraphSum, b: &GraphSum) -> Result<GraphSum, AlgebraError> {
    let pairs: Vec<(&Graph, &Rational, &Graph, &Rational)> = a
        .iter()
        .flat_map(|(g1, c1)| b.iter().map(move |(g2, c2)| (g1, c1, g2, c2)))
        .collect();
    let parts: Vec<GraphSum> = pairs
        .par_iter()
        .map(|(g1, c1, g2, c2)| bracket_reduced(g1, g2).map(|s| s.scale(&(*c1 * *c2))))
        .collect::<Result<_, _>>()?;
    Ok(merge(parts))
}

fn merge(parts: Vec<GraphSum>) -> GraphSum {
    parts.into_iter().fold(GraphSum::new(), |mut acc, p| {
        acc.add_assign(&p);
        acc
    })
}
