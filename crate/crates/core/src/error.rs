use std::fmt;

/// Errors raised by clustering, estimation, simulation and file I/O.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("duplicate mention id `{0}`")]
    DuplicateMention(String),

    #[error("empty cluster id for mention `{0}`")]
    EmptyClusterId(String),

    #[error("clusterings are defined on different mention sets ({} offending ids: {})", .0.total, .0)]
    UniverseMismatch(MismatchReport),

    #[error("unknown mention `{0}`")]
    UnknownMention(String),

    #[error("prediction has no predicted links (|P| = 0)")]
    NoPredictedLinks,

    #[error("ground truth has no matching pairs (|T| = 0)")]
    NoTrueLinks,

    #[error("ratio estimation needs at least 2 samples, got {0}")]
    InsufficientSample(usize),

    #[error("degenerate ratio: {0}")]
    DegenerateRatio(String),

    #[error("invalid sampling design: {0}")]
    InvalidDesign(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("pair count overflow")]
    Overflow,

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Variant name, stable across releases.
    pub fn kind(&self) -> &'static str {
        match self {
            Self::DuplicateMention(_) => "DuplicateMention",
            Self::EmptyClusterId(_) => "EmptyClusterId",
            Self::UniverseMismatch(_) => "UniverseMismatch",
            Self::UnknownMention(_) => "UnknownMention",
            Self::NoPredictedLinks => "NoPredictedLinks",
            Self::NoTrueLinks => "NoTrueLinks",
            Self::InsufficientSample(_) => "InsufficientSample",
            Self::DegenerateRatio(_) => "DegenerateRatio",
            Self::InvalidDesign(_) => "InvalidDesign",
            Self::InvalidInput(_) => "InvalidInput",
            Self::Schema(_) => "SchemaError",
            Self::Overflow => "Overflow",
            Self::Parse { .. } => "ParseError",
            Self::Io(_) => "IoError",
        }
    }
}

/// Ids present in only one of two clusterings, capped for display.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MismatchReport {
    pub total: usize,
    pub sample: Vec<String>,
}

impl MismatchReport {
    pub const MAX_LISTED: usize = 20;
}

impl fmt::Display for MismatchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.sample.join(", "))?;
        if self.total > self.sample.len() {
            write!(f, ", ... ({} more)", self.total - self.sample.len())?;
        }
        Ok(())
    }
}
