use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field order must be at least 1")]
    ZeroFieldOrder,
    #[error("operands live in different fields (orders {0} and {1})")]
    MixedFields(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("unknown component token `{0}`")]
    UnknownToken(String),
    #[error("token `{token}` needs a root of unity absent from Q(zeta_{order})")]
    MissingRoot { token: String, order: u32 },

    #[error("malformed label at byte {0}")]
    MalformedLabel(usize),
    #[error("vertex `{label}` appears twice in edge {edge}")]
    DuplicateVertex { label: String, edge: usize },
    #[error("edges {0} and {1} contain the same vertex set")]
    DuplicateEdge(usize, usize),
    #[error("edge list is not terminated by `.`")]
    Unterminated,
    #[error("empty edge at position {0}")]
    EmptyEdge(usize),
    #[error("MMP condition violated by edge pair(s) {0:?}")]
    MmpViolation(Vec<(usize, usize)>),
    #[error("coordinatization references unknown label `{0}`")]
    UnknownLabel(String),
    #[error("coordinatization block: {0}")]
    BadCoordinates(String),
    #[error("vertex {0} is out of range")]
    VertexOutOfRange(u32),
    #[error("vertex `{0}` lies in no edge")]
    IsolatedVertex(String),
    #[error("label `{0}` names two vertices")]
    DuplicateLabel(String),
    #[error("input ends inside the coordinatization block")]
    UnexpectedEnd,
    #[error("unexpected input at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("vertex {0} needs label prefix depth {1}, above the cap {2}")]
    PrefixDepth(usize, usize, usize),
    #[error("hypergraph has no edges")]
    NoEdges,

    #[error("dimension must be at least 2, got {0}")]
    BadDimension(usize),
    #[error("component set is empty")]
    NoComponents,
    #[error("component set has no nonzero element")]
    NoNonzeroComponent,
    #[error("vector dimensions differ ({0} vs {1})")]
    DimensionMismatch(usize, usize),

    #[error("hypergraph carries no coordinatization")]
    MissingCoordinatization,
    #[error("no ray given for vertex `{0}`")]
    MissingRay(String),

    #[error("edge index {0} out of range ({1} edges)")]
    EdgeOutOfRange(usize, usize),
    #[error("input hypergraph is not a KS set")]
    NotKs,
}

pub type Result<T> = std::result::Result<T, Error>;
