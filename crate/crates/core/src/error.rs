use thiserror::Error;

/// Structural violations when building a [`Graph`](crate::Graph).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("a graph needs at least one vertex")]
    NoVertices,
    #[error("at most {max} vertices are supported, got {n}")]
    TooManyVertices { n: usize, max: usize },
    #[error("vertex labels start at 1")]
    ZeroLabel,
    #[error("label {label} exceeds the vertex count {n}")]
    LabelOutOfRange { label: u32, n: usize },
    #[error("edge {0}-{0} is a tadpole")]
    Tadpole(u32),
    #[error("edge {0}-{1} occurs twice")]
    DuplicateEdge(u32, u32),
    #[error("wheel needs at least 3 rim vertices, got {0}")]
    WheelTooSmall(usize),
}

/// Errors from the graph-sum text format. Each variant names the offending token.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("missing ';' between coefficient and edges")]
    MissingSeparator,
    #[error("malformed coefficient `{token}`")]
    MalformedCoefficient { token: String },
    #[error("malformed edge token `{token}`")]
    MalformedToken { token: String },
    #[error("tadpole edge `{token}`")]
    Tadpole { token: String },
    #[error("duplicate edge `{token}`")]
    DuplicateEdge { token: String },
    #[error("vertex label 0 in `{token}`")]
    ZeroLabel { token: String },
    #[error("term has no vertices")]
    NoVertices,
    #[error("graph too large: {0}")]
    Graph(GraphError),
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<ParseError>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("insertion requires connected graphs")]
    Disconnected,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("modulus {0} is not a prime below 2^63")]
    BadModulus(u64),
    #[error("prime {prime} divides the denominator of entry ({row}, {col})")]
    PrimeDividesDenominator { prime: u64, row: usize, col: usize },
    #[error("column {col} out of range for a matrix with {cols} columns")]
    ColumnOutOfRange { col: usize, cols: usize },
    #[error("the constrained system has no solution")]
    Inconsistent,
    #[error("malformed matrix dump: {0}")]
    MalformedDump(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("bi-grading (n = {0}) is outside the supported range 4..=9")]
    UnsupportedDegree(usize),
    #[error("n = {n} with {what} is gated behind the explicit big-run opt-in")]
    ResourceGate { n: usize, what: &'static str },
    #[error("graph {0} is not in the basis")]
    NotInBasis(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}
