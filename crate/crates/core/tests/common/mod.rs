#![allow(dead_code)]

//! Exhaustive checks shared by the property suite and the acceptance runner.
//! Each returns `Err` with a description of the first counterexample.

use graph_complex::algebra::{bracket_reduced, bracket_sums, differential, GraphSum};
use graph_complex::canon::{canonicalize, permutation_is_odd, CanonicalResult};
use graph_complex::catalog::{gamma3, gamma5, gamma7, gamma7_terms, gamma7_text};
use graph_complex::enumerate::{connected_graphs, enumerate_basis, BasisSpec};
use graph_complex::graph::{parse_graph, parse_sum_text, serialize_graph, Graph};
use graph_complex::rational::{integer, Rational};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

pub type Check = Result<String, String>;

pub fn g(field: &str) -> Graph {
    graph_complex::graph::parse_edge_field(field).expect("test graph parses")
}

/// All connected graphs with at most `max_n` vertices, canonical forms.
pub fn all_connected(max_n: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let max_e = n * (n - 1) / 2;
        for e in n.saturating_sub(1)..=max_e {
            out.extend(connected_graphs(n, e));
        }
    }
    out
}

pub fn nonzero_connected(max_n: usize) -> Vec<Graph> {
    all_connected(max_n)
        .into_iter()
        .filter(|g| !canonicalize(g).is_zero())
        .collect()
}

fn sign_of_product(a: usize, b: usize) -> Rational {
    integer(if (a * b).is_multiple_of(2) { 1 } else { -1 })
}

pub fn d_squared(max_n: usize) -> Check {
    let graphs = nonzero_connected(max_n);
    for gr in &graphs {
        let dd = differential(&differential(&GraphSum::single(gr.clone())).unwrap()).unwrap();
        if !dd.is_empty() {
            return Err(format!("d^2({}) has {} terms", gr.edge_field(), dd.len()));
        }
    }
    Ok(format!("{} graphs", graphs.len()))
}

/// `[a, b] + (-1)^{|a||b|} [b, a] = 0` on raw graphs, zero graphs included.
pub fn antisymmetry(max_n: usize) -> Check {
    let graphs = all_connected(max_n);
    let mut pairs = 0;
    for (i, a) in graphs.iter().enumerate() {
        for b in &graphs[i..] {
            let ab = bracket_reduced(a, b).unwrap();
            let ba = bracket_reduced(b, a).unwrap();
            let s = ab.add(&ba.scale(&sign_of_product(a.edge_count(), b.edge_count())));
            if !s.is_empty() {
                return Err(format!("[{a}, {b}] is not graded antisymmetric"));
            }
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs"))
}

/// Graded Jacobi, `Σ_cyc (-1)^{|a||c|} [a, [b, c]] = 0`.
pub fn jacobi(max_n: usize) -> Check {
    let graphs = all_connected(max_n);
    let singles: Vec<GraphSum> = graphs.iter().map(|x| GraphSum::single(x.clone())).collect();
    let mut triples = 0;
    for (ia, a) in graphs.iter().enumerate() {
        for (ib, b) in graphs.iter().enumerate() {
            for (ic, c) in graphs.iter().enumerate() {
                let term = |x: usize, y: &Graph, z: &Graph, ex: usize, ez: usize| {
                    let inner = bracket_reduced(y, z).unwrap();
                    bracket_sums(&singles[x], &inner)
                        .unwrap()
                        .scale(&sign_of_product(ex, ez))
                };
                let (ea, eb, ec) = (a.edge_count(), b.edge_count(), c.edge_count());
                let total = term(ia, b, c, ea, ec)
                    .add(&term(ib, c, a, eb, ea))
                    .add(&term(ic, a, b, ec, eb));
                if !total.is_empty() {
                    return Err(format!("Jacobi fails on ({a}, {b}, {c})"));
                }
                triples += 1;
            }
        }
    }
    Ok(format!("{triples} triples"))
}

/// For inputs with all valencies at least 3, no term of `d` has a vertex of
/// valency below 3.
pub fn handshake(max_n: usize) -> Check {
    let mut checked = 0;
    for n in 4..=max_n {
        for e in n..=n * (n - 1) / 2 {
            let Some(spec) = BasisSpec::new(n, e, 3) else {
                continue;
            };
            for gr in enumerate_basis(spec).nonzero_basis {
                let d = differential(&GraphSum::single(gr.clone())).unwrap();
                if let Some((bad, _)) = d.iter().find(|(h, _)| h.min_valency() < 3) {
                    return Err(format!("d({gr}) contains {bad}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} graphs"))
}

/// Random vertex relabelings and edge reorders leave the canonical form
/// fixed and change the sign by the parity of the edge reorder.
pub fn relabel_signs(max_n: usize, trials: usize, seed: u64) -> Check {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut graphs = Vec::new();
    for n in 2..=max_n {
        if let Some(spec) = BasisSpec::new(n, 2 * n - 2, 1) {
            graphs.extend(enumerate_basis(spec).nonzero_basis);
        }
    }
    graphs.extend(all_connected(5.min(max_n)));
    for gr in &graphs {
        let reference = canonicalize(gr);
        let n = gr.vertex_count();
        for _ in 0..trials {
            let mut map: Vec<u32> = (1..=n as u32).collect();
            map.shuffle(&mut rng);
            let mut order: Vec<usize> = (0..gr.edge_count()).collect();
            order.shuffle(&mut rng);
            let h = gr.relabel(&map).reorder_edges(&order);
            let odd = permutation_is_odd(&order);
            let ok = match (&reference, canonicalize(&h)) {
                (CanonicalResult::Zero, CanonicalResult::Zero) => true,
                (
                    CanonicalResult::Canonical {
                        graph: g0,
                        sign: s0,
                    },
                    CanonicalResult::Canonical {
                        graph: g1,
                        sign: s1,
                    },
                ) => *g0 == g1 && s1.is_minus() == (s0.is_minus() != odd),
                _ => false,
            };
            if !ok {
                return Err(format!("{gr} relabeled to {h} disagrees"));
            }
        }
    }
    Ok(format!("{} graphs x {trials}", graphs.len()))
}

/// Serialize then parse is the identity on embedded and enumerated data, and
/// the heptagon data re-serializes byte for byte.
pub fn round_trip(max_n: usize) -> Check {
    let mut count = 0;
    let mut data: Vec<(Rational, Graph)> = Vec::new();
    for sum in [gamma3(), gamma5(), gamma7()] {
        data.extend(sum.iter().map(|(gr, c)| (c.clone(), gr.clone())));
    }
    data.extend(gamma7_terms());
    data.extend(all_connected(max_n).into_iter().map(|gr| (integer(1), gr)));
    for (c, gr) in &data {
        let line = serialize_graph(c, gr);
        let back = parse_graph(&line).map_err(|e| format!("{line}: {e}"))?;
        if back != (c.clone(), gr.clone()) {
            return Err(format!("{line} does not round-trip"));
        }
        count += 1;
    }
    let text: String = gamma7_terms()
        .iter()
        .map(|(c, gr)| serialize_graph(c, gr) + "\n")
        .collect();
    if text != gamma7_text() {
        return Err("heptagon data does not re-serialize verbatim".into());
    }
    if parse_sum_text(&text).unwrap().len() != 46 {
        return Err("heptagon data lost terms".into());
    }
    Ok(format!("{count} terms"))
}
