//! Error type shared across the engine.

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while loading documents or scoring services.
///
/// Variants are grouped so front ends can map them onto coarse exit codes:
/// syntax and validation problems ([`Error::Parse`], [`Error::Ontology`],
/// [`Error::Invalid`]), lookup failures ([`Error::UnresolvedTerm`],
/// [`Error::UnknownNode`], [`Error::NoVersionWithLabel`]), and I/O.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed line in an ontology, profile, requirements, or gold document.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Ontology document parsed but failed structural validation.
    #[error("ontology: {0}")]
    Ontology(String),

    /// Term did not match any node id or alias after normalization.
    #[error("unresolved term `{0}`")]
    UnresolvedTerm(String),

    /// Node id not present in the graph.
    #[error("unknown node `{0}`")]
    UnknownNode(String),

    /// Concept has no version child carrying the requested label.
    #[error("concept `{concept}` has no version with label {label}")]
    NoVersionWithLabel { concept: String, label: u32 },

    /// Node is not a version node but a version operation was requested.
    #[error("node `{0}` is not a version node")]
    NotAVersion(String),

    /// Attribute pairs a concept value with a numeric value.
    #[error("attribute `{0}`: cannot compare concept and numeric values")]
    TypeMismatch(String),

    /// Numeric comparison requested without a span to normalize against.
    #[error("attribute `{0}`: no numeric span available")]
    MissingSpan(String),

    /// No numeric data from which to derive a span.
    #[error("attribute `{0}`: no registered numeric values")]
    EmptySpan(String),

    /// Effective weights sum to zero, leaving the aggregate undefined.
    #[error("weights for query `{0}` sum to zero")]
    ZeroWeight(String),

    /// Gold judgments carry no entry for a query under evaluation.
    #[error("no gold judgments for query `{0}`")]
    MissingGold(String),

    /// Value outside its domain (non-finite number, zero label, bad config).
    #[error("{0}")]
    Invalid(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::Invalid(message.into())
    }
}
