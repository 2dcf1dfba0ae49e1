//! Acceptance runner: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Set `GC_SKIP_BIG=1` to limit criterion 4 to its counts.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use graph_complex::algebra::{bracket_reduced, differential_of_graph, GraphSum};
use graph_complex::catalog::{
    bracket_cocycle_check, cohomology_report, count_row, gamma3, gamma5, gamma7, gamma7_terms,
    is_coboundary, solve_cocycle, verify_cocycle, DimensionReport,
};
use graph_complex::graph::{parse_edge_field, Graph};
use graph_complex::linalg::RankMode;
use graph_complex::rational::{integer, ratio};

type Outcome = Result<String, String>;
type Criterion = (usize, &'static str, fn() -> Outcome);

/// (n, total, zero, nonzero, n_ker, sub_total, sub_zero, n_delta, n_0, n_im, dim_h)
type Row = (
    usize,
    usize,
    usize,
    usize,
    usize,
    usize,
    usize,
    usize,
    usize,
    usize,
    i64,
);

const TABLE_2: [Row; 6] = [
    (4, 1, 0, 1, 1, 0, 0, 0, 0, 0, 1),
    (5, 2, 2, 0, 0, 0, 0, 0, 0, 0, 0),
    (6, 14, 8, 6, 1, 1, 1, 0, 0, 0, 1),
    (7, 126, 78, 48, 1, 9, 8, 1, 0, 1, 0),
    (8, 1579, 605, 974, 36, 95, 60, 35, 0, 35, 1),
    (9, 26631, 7557, 19074, 883, 1515, 602, 913, 31, 882, 1),
];

const TABLE_3: [Row; 6] = [
    (4, 1, 0, 1, 1, 0, 0, 0, 0, 0, 1),
    (5, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0),
    (6, 4, 2, 2, 1, 1, 1, 0, 0, 0, 1),
    (7, 18, 12, 6, 1, 5, 4, 1, 0, 1, 0),
    (8, 136, 61, 75, 11, 30, 20, 10, 0, 10, 1),
    (9, 1377, 498, 879, 164, 309, 130, 179, 16, 163, 1),
];

fn as_row(r: &DimensionReport) -> Row {
    (
        r.n,
        r.total_graphs,
        r.zero_graphs,
        r.nonzero,
        r.n_ker,
        r.sub_total,
        r.sub_zero,
        r.n_delta,
        r.n_0,
        r.n_im,
        r.dim_h,
    )
}

fn closed_within(name: &str, sum: &GraphSum, limit: Duration) -> Outcome {
    let start = Instant::now();
    let verdict = verify_cocycle(sum).map_err(|e| e.to_string())?;
    let took = start.elapsed();
    if !verdict.is_cocycle {
        return Err(format!("d({name}) has {} terms", verdict.residual.len()));
    }
    if took > limit {
        return Err(format!("d({name}) took {took:?}, limit {limit:?}"));
    }
    Ok(format!("d({name}) = 0 in {took:.2?}"))
}

fn criterion_1() -> Outcome {
    let terms = gamma7_terms().len();
    if terms != 46 {
        return Err(format!("embedded heptagon data has {terms} terms"));
    }
    let a = closed_within("gamma3", &gamma3(), Duration::from_millis(100))?;
    let b = closed_within("gamma5", &gamma5(), Duration::from_secs(1))?;
    let c = closed_within("gamma7", &gamma7(), Duration::from_secs(60))?;
    Ok(format!("{a}; {b}; {c}"))
}

fn table(rows: &[Row], min_valency: usize, allow_big: bool) -> Outcome {
    let start = Instant::now();
    for expected in rows {
        let report = cohomology_report(expected.0, min_valency, RankMode::default(), allow_big)
            .map_err(|e| e.to_string())?;
        let got = as_row(&report);
        if got != *expected {
            return Err(format!(
                "n = {}: got {got:?}, expected {expected:?}",
                expected.0
            ));
        }
    }
    Ok(format!(
        "n = {}..={} match in {:.1?}",
        rows[0].0,
        rows[rows.len() - 1].0,
        start.elapsed()
    ))
}

fn criterion_2() -> Outcome {
    let exact = cohomology_report(8, 1, RankMode::Exact, false).map_err(|e| e.to_string())?;
    if as_row(&exact) != TABLE_2[4] {
        return Err(format!("exact rank at n = 8 gives {:?}", as_row(&exact)));
    }
    table(&TABLE_2[..5], 1, false).map(|s| s + ", n = 8 also in exact mode")
}

fn criterion_3() -> Outcome {
    table(&TABLE_3, 3, false)
}

fn criterion_4() -> Outcome {
    let (total, zero) = count_row(9, 1).ok_or("invalid bi-grading")?;
    if (total, zero) != (26631, 7557) {
        return Err(format!("counts at (9, 16): total {total}, zero {zero}"));
    }
    if std::env::var("GC_SKIP_BIG").is_ok_and(|v| v == "1") {
        return Ok("counts 26631/7557 match; full row skipped (GC_SKIP_BIG=1)".into());
    }
    table(&TABLE_2[5..], 1, true).map(|s| format!("counts 26631/7557 match; modular row {s}"))
}

fn criterion_5() -> Outcome {
    let five = solve_cocycle(6, 10, &[(Graph::wheel(5).unwrap(), integer(1))])
        .map_err(|e| e.to_string())?;
    let prism = parse_edge_field("12 23 34 41 45 15 56 36 26 13").unwrap();
    let prism_coeff = five.solution.coefficient(&prism);
    if prism_coeff != ratio(5, 2) || five.free_parameter_count != 0 {
        return Err(format!(
            "(6,10): prism coefficient {prism_coeff}, {} free parameters",
            five.free_parameter_count
        ));
    }
    let seven = solve_cocycle(8, 14, &[(Graph::wheel(7).unwrap(), integer(1))])
        .map_err(|e| e.to_string())?;
    if seven.free_parameter_count != 35 {
        return Err(format!(
            "(8,14): {} free parameters",
            seven.free_parameter_count
        ));
    }
    let difference = seven.solution.add(&gamma7().scale(&integer(-1)));
    if !is_coboundary(&difference, 8, 14).map_err(|e| e.to_string())? {
        return Err("(8,14) solution minus gamma7 is not in im d".into());
    }
    Ok(format!(
        "prism 5/2 with 0 free; (8,14) has 35 free, difference ({} terms) lies in im d",
        difference.len()
    ))
}

fn criterion_6() -> Outcome {
    let parts = [
        ("d^2 = 0, n <= 6", common::d_squared(6)),
        ("antisymmetry, n <= 5", common::antisymmetry(5)),
        ("Jacobi, n <= 4", common::jacobi(4)),
        ("handshake, n <= 7", common::handshake(7)),
        (
            "relabeling x1000, n <= 7",
            common::relabel_signs(7, 1000, 0xacce),
        ),
        ("round trip", common::round_trip(6)),
    ];
    let mut notes = Vec::new();
    for (name, result) in parts {
        match result {
            Ok(detail) => notes.push(format!("{name} ({detail})")),
            Err(msg) => return Err(format!("{name}: {msg}")),
        }
    }
    Ok(notes.join("; "))
}

fn criterion_7() -> Outcome {
    let d_vertex = differential_of_graph(&Graph::vertex()).map_err(|e| e.to_string())?;
    let minus_edge = GraphSum::single(Graph::edge()).scale(&integer(-1));
    if d_vertex != minus_edge {
        return Err(format!("d(vertex) = {}", d_vertex.to_text().trim()));
    }
    let ee = bracket_reduced(&Graph::edge(), &Graph::edge()).map_err(|e| e.to_string())?;
    if !ee.is_empty() {
        return Err(format!("[edge, edge] has {} terms", ee.len()));
    }
    Ok("d(vertex) = -edge; [edge, edge] = 0".into())
}

fn criterion_8() -> Outcome {
    let v = bracket_cocycle_check().map_err(|e| e.to_string())?;
    match (v.nonzero, v.is_cocycle, v.bigrading) {
        (true, true, Some((9, 16))) => Ok(format!(
            "{} terms, closed, bi-grading (9, 16)",
            v.bracket.len()
        )),
        other => Err(format!("nonzero/closed/bi-grading = {other:?}")),
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (1, "wheel cocycles are closed", criterion_1),
        (
            2,
            "dimension table, no valency floor, n = 4..8",
            criterion_2,
        ),
        (3, "dimension table, valency >= 3, n = 4..9", criterion_3),
        (4, "dimension table, no valency floor, n = 9", criterion_4),
        (5, "constrained solves at (6,10) and (8,14)", criterion_5),
        (6, "exhaustive property suites", criterion_6),
        (7, "sign convention pin", criterion_7),
        (8, "[gamma3, gamma5] is a nonzero cocycle", criterion_8),
    ];
    let mut failed = 0;
    for (id, title, run) in criteria {
        match run() {
            Ok(detail) => println!("criterion {id} PASS: {title}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id} FAIL: {title}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
