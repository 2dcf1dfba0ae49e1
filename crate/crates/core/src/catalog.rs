//! Embedded wheel cocycles and the cohomology-count pipeline.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{bracket_sums, differential, differential_of_graph, GraphSum};
use crate::canon::{canonicalize, CanonicalResult};
use crate::enumerate::{enumerate_basis, enumerate_counts_only, BasisReport, BasisSpec};
use crate::error::{CatalogError, ParseError};
use crate::graph::{parse_sum_text, Graph};
use crate::linalg::{nullity, rank, solve_kernel, RankMode, SparseRationalMatrix};
use crate::rational::Rational;

const GAMMA3_TEXT: &str = "1 ; 12 13 14 23 24 34\n";
const GAMMA5_TEXT: &str = "1 ; 12 23 34 45 51 16 26 36 46 56\n\
                           5/2 ; 12 23 34 41 45 15 56 36 26 13\n";
const GAMMA7_TEXT: &str = include_str!("../data/gamma7.txt");

/// The tetrahedron.
pub fn gamma3() -> GraphSum {
    GraphSum::from_text(GAMMA3_TEXT).expect("embedded data parses")
}

/// Pentagon wheel plus 5/2 times the triangular prism.
pub fn gamma5() -> GraphSum {
    GraphSum::from_text(GAMMA5_TEXT).expect("embedded data parses")
}

/// The 46-term heptagon-wheel cocycle.
pub fn gamma7() -> GraphSum {
    GraphSum::from_text(GAMMA7_TEXT).expect("embedded data parses")
}

/// The heptagon-wheel terms as stored, before reduction.
pub fn gamma7_terms() -> Vec<(Rational, Graph)> {
    parse_sum_text(GAMMA7_TEXT).expect("embedded data parses")
}

pub fn gamma7_text() -> &'static str {
    GAMMA7_TEXT
}

/// Looks up an embedded cocycle by name.
pub fn named_cocycle(name: &str) -> Option<GraphSum> {
    match name {
        "gamma3" => Some(gamma3()),
        "gamma5" => Some(gamma5()),
        "gamma7" => Some(gamma7()),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleVerdict {
    pub is_cocycle: bool,
    pub residual: GraphSum,
}

pub fn verify_cocycle(sum: &GraphSum) -> Result<CocycleVerdict, CatalogError> {
    let residual = differential(sum)?;
    Ok(CocycleVerdict {
        is_cocycle: residual.is_empty(),
        residual,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketVerdict {
    pub bracket: GraphSum,
    pub nonzero: bool,
    pub is_cocycle: bool,
    /// `(vertices, edges)` if every term shares one bi-grading.
    pub bigrading: Option<(usize, usize)>,
}

/// `[γ3, γ5]` and whether it is a nonzero cocycle.
pub fn bracket_cocycle_check() -> Result<BracketVerdict, CatalogError> {
    let bracket = bracket_sums(&gamma3(), &gamma5())?;
    let verdict = verify_cocycle(&bracket)?;
    Ok(BracketVerdict {
        nonzero: !bracket.is_empty(),
        is_cocycle: verdict.is_cocycle,
        bigrading: bracket.bigrading(),
        bracket,
    })
}

/// Differential matrix of a basis: one column per basis graph, one row per
/// distinct canonical graph reached, rows sorted.
pub fn differential_matrix(
    basis: &[Graph],
) -> Result<(SparseRationalMatrix, Vec<Graph>), CatalogError> {
    let images = images(basis)?;
    let mut rows: Vec<Graph> = images
        .iter()
        .flat_map(|d| d.graphs().cloned())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    rows.sort();
    let index: HashMap<&Graph, usize> = rows.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let matrix = assemble(&images, rows.len(), |g| index.get(g).copied());
    Ok((matrix, rows))
}

/// Differential matrix with a prescribed row basis; fails if an image leaves it.
pub fn differential_matrix_into(
    basis: &[Graph],
    rows: &[Graph],
) -> Result<SparseRationalMatrix, CatalogError> {
    let images = images(basis)?;
    let index: HashMap<&Graph, usize> = rows.iter().enumerate().map(|(i, g)| (g, i)).collect();
    if let Some(missing) = images
        .iter()
        .flat_map(|d| d.graphs())
        .find(|g| !index.contains_key(g))
    {
        return Err(CatalogError::NotInBasis(missing.edge_field()));
    }
    Ok(assemble(&images, rows.len(), |g| index.get(g).copied()))
}

fn images(basis: &[Graph]) -> Result<Vec<GraphSum>, CatalogError> {
    Ok(basis
        .par_iter()
        .map(differential_of_graph)
        .collect::<Result<Vec<_>, _>>()?)
}

fn assemble(
    images: &[GraphSum],
    rows: usize,
    row_of: impl Fn(&Graph) -> Option<usize>,
) -> SparseRationalMatrix {
    let columns = images
        .iter()
        .map(|d| {
            d.iter()
                .map(|(g, c)| (row_of(g).expect("row present"), c.clone()))
                .collect()
        })
        .collect();
    SparseRationalMatrix::from_columns(rows, columns)
}

/// Coordinates of a reduced sum in a basis of canonical graphs.
pub fn coordinates(sum: &GraphSum, basis: &[Graph]) -> Result<Vec<Rational>, CatalogError> {
    let index: HashMap<&Graph, usize> = basis.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let mut out = vec![Rational::zero(); basis.len()];
    for (g, c) in sum {
        let i = *index
            .get(g)
            .ok_or_else(|| CatalogError::NotInBasis(g.edge_field()))?;
        out[i] = c.clone();
    }
    Ok(out)
}

/// Column index and canonical-coordinate value that give `graph` (in its own
/// edge order) the coefficient `value`.
pub fn basis_constraint(
    graph: &Graph,
    value: &Rational,
    basis: &[Graph],
) -> Result<(usize, Rational), CatalogError> {
    match canonicalize(graph) {
        CanonicalResult::Zero => Err(CatalogError::NotInBasis(graph.edge_field())),
        CanonicalResult::Canonical { graph: canon, sign } => {
            let col = basis
                .iter()
                .position(|g| *g == canon)
                .ok_or_else(|| CatalogError::NotInBasis(graph.edge_field()))?;
            let v = if sign.is_minus() {
                -value
            } else {
                value.clone()
            };
            Ok((col, v))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveReport {
    pub basis: Vec<Graph>,
    pub solution: GraphSum,
    pub nullity: usize,
    pub free_parameter_count: usize,
}

/// Particular cocycle at `(n, e)` with the given graphs pinned to the given
/// coefficients; the remaining free parameters are zero.
pub fn solve_cocycle(
    n: usize,
    e: usize,
    fixed: &[(Graph, Rational)],
) -> Result<SolveReport, CatalogError> {
    let spec = BasisSpec::new(n, e, 1).ok_or(CatalogError::UnsupportedDegree(n))?;
    let basis = enumerate_basis(spec).nonzero_basis;
    let (matrix, _) = differential_matrix(&basis)?;
    let mut constraints = BTreeMap::new();
    for (g, v) in fixed {
        let (col, value) = basis_constraint(g, v, &basis)?;
        constraints.insert(col, value);
    }
    let sol = solve_kernel(&matrix, &constraints)?;
    let terms = basis
        .iter()
        .zip(&sol.particular)
        .filter(|(_, c)| !c.is_zero())
        .map(|(g, c)| (g.clone(), c.clone()));
    let mut solution = GraphSum::new();
    for (g, c) in terms {
        solution.add_assign(&GraphSum::single(g).scale(&c));
    }
    Ok(SolveReport {
        basis,
        solution,
        nullity: sol.nullity,
        free_parameter_count: sol.free_parameter_count,
    })
}

/// Whether `sum`, homogeneous at `(n, e)`, is `d` of something at `(n-1, e-1)`.
pub fn is_coboundary(sum: &GraphSum, n: usize, e: usize) -> Result<bool, CatalogError> {
    let target =
        enumerate_basis(BasisSpec::new(n, e, 1).ok_or(CatalogError::UnsupportedDegree(n))?)
            .nonzero_basis;
    let source = match BasisSpec::new(n - 1, e - 1, 1) {
        Some(spec) => enumerate_basis(spec).nonzero_basis,
        None => Vec::new(),
    };
    let d = differential_matrix_into(&source, &target)?;
    let column: Vec<(usize, Rational)> = coordinates(sum, &target)?
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .collect();
    let augmented = d.hstack(&SparseRationalMatrix::from_columns(
        target.len(),
        vec![column],
    ));
    Ok(rank(&augmented, RankMode::Exact)? == rank(&d, RankMode::Exact)?)
}

/// One row of the dimension tables at bi-grading `(n, 2n - 2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionReport {
    pub n: usize,
    pub e: usize,
    pub min_valency: usize,
    pub total_graphs: usize,
    pub zero_graphs: usize,
    pub nonzero: usize,
    /// Graphs at `(n - 1, 2n - 3)`, all and zero.
    pub sub_total: usize,
    pub sub_zero: usize,
    pub n_ker: usize,
    pub n_delta: usize,
    pub n_0: usize,
    pub n_im: usize,
    pub dim_h: i64,
}

pub fn cohomology_report(
    n: usize,
    min_valency: usize,
    mode: RankMode,
    allow_big: bool,
) -> Result<DimensionReport, CatalogError> {
    if !(4..=9).contains(&n) {
        return Err(CatalogError::UnsupportedDegree(n));
    }
    if n == 9 && min_valency < 3 {
        if !allow_big {
            return Err(CatalogError::ResourceGate {
                n,
                what: "min valency 1",
            });
        }
        if mode == RankMode::Exact {
            return Err(CatalogError::ResourceGate {
                n,
                what: "exact rank",
            });
        }
    }
    let e = 2 * n - 2;
    let top = enumerate_basis(BasisSpec::new(n, e, min_valency).expect("valid spec"));
    let (d_top, _) = differential_matrix(&top.nonzero_basis)?;
    let n_ker = nullity(&d_top, mode)?;
    drop(d_top);
    let sub = match BasisSpec::new(n - 1, e - 1, min_valency) {
        Some(spec) => enumerate_basis(spec),
        None => BasisReport {
            total: 0,
            zero: 0,
            nonzero_basis: Vec::new(),
        },
    };
    let n_delta = sub.nonzero_basis.len();
    let (d_sub, _) = differential_matrix(&sub.nonzero_basis)?;
    let n_0 = nullity(&d_sub, mode)?;
    let n_im = n_delta - n_0;
    Ok(DimensionReport {
        n,
        e,
        min_valency,
        total_graphs: top.total,
        zero_graphs: top.zero,
        nonzero: top.nonzero_basis.len(),
        sub_total: sub.total,
        sub_zero: sub.zero,
        n_ker,
        n_delta,
        n_0,
        n_im,
        dim_h: n_ker as i64 - n_im as i64,
    })
}

/// `(total, zero)` at `(n, 2n - 2)` without building any matrix.
pub fn count_row(n: usize, min_valency: usize) -> Option<(usize, usize)> {
    BasisSpec::new(n, 2 * n - 2, min_valency).map(enumerate_counts_only)
}

/// Aligned text table, one line per report.
pub fn format_table(reports: &[DimensionReport]) -> String {
    let header = [
        "n", "e", "total", "zero", "nonzero", "N_ker", "sub", "sub_zero", "N_delta", "N_0", "N_im",
        "dim_H",
    ];
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            [
                r.n as i64,
                r.e as i64,
                r.total_graphs as i64,
                r.zero_graphs as i64,
                r.nonzero as i64,
                r.n_ker as i64,
                r.sub_total as i64,
                r.sub_zero as i64,
                r.n_delta as i64,
                r.n_0 as i64,
                r.n_im as i64,
                r.dim_h,
            ]
            .iter()
            .map(i64::to_string)
            .collect()
        })
        .collect();
    let widths: Vec<usize> = (0..header.len())
        .map(|i| {
            rows.iter()
                .map(|r| r[i].len())
                .chain([header[i].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    let line = |cells: Vec<&str>, out: &mut String| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        let _ = writeln!(out, "{}", padded.join("  "));
    };
    line(header.to_vec(), &mut out);
    for r in &rows {
        line(r.iter().map(String::as_str).collect(), &mut out);
    }
    out
}

/// Parses a `EDGES=COEFF` constraint, e.g. `12 23 31=1`.
pub fn parse_constraint(text: &str) -> Result<(Graph, Rational), ParseError> {
    let (edges, coeff) = text.rsplit_once('=').ok_or(ParseError::MissingSeparator)?;
    let (c, g) = crate::graph::parse_graph(&format!("{} ; {}", coeff.trim(), edges.trim()))?;
    Ok((g, c))
}
