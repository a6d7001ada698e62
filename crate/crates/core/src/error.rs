use std::path::PathBuf;

use crate::scene::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed scene file: {0}")]
    Parse(String),

    #[error("scene file is incomplete: {0}")]
    MissingField(String),

    #[error("invalid scene: {0}")]
    Validation(ValidationReport),

    #[error("no interaction probabilities for pedestrian pair ({0}, {1})")]
    MissingPairProbs(String, String),

    #[error("no environment probability for pedestrian {0}")]
    MissingEnvProb(String),

    #[error("interaction probabilities {probs:?} do not form a distribution")]
    InvalidSimplex { probs: [f64; 3] },

    #[error("scene has no ground truth for pedestrian {0}")]
    MissingGroundTruth(String),

    #[error("frame {index} out of range for a sequence of {len} boxes")]
    FrameOutOfRange { index: usize, len: usize },

    #[error("sequence lengths differ: {0} vs {1}")]
    SequenceLengthMismatch(usize, usize),

    #[error("label configuration has {found} entries, graph has {expected} pedestrians")]
    LabelLength { expected: usize, found: usize },

    #[error("{n} pedestrians exceeds the enumeration cap of {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("invalid configuration: {0}")]
    Config(String),
}
