use thiserror::Error;

/// Errors raised by the algebra, graph and counting layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("the zero element has no Iwasawa invariants")]
    ZeroElement,
    #[error("input does not have augmentation zero")]
    NotAugmentationZero,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("graph is disconnected")]
    DisconnectedGraph,
    #[error("derived graph at level {level} is disconnected")]
    DisconnectedTower { level: u32 },
    #[error("Laplacian determinant is zero")]
    SingularLaplacian,
    #[error("unsupported graph shape: {0}")]
    UnsupportedShape(String),
    #[error("kappa sequence has no stable tail: {0}")]
    InconsistentTail(String),
    #[error("no nonnegative integral fit: {0}")]
    NonIntegralFit(String),
    #[error("invalid target: {0}")]
    InvalidTarget(String),
    #[error("repair failed: {0}")]
    RepairFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("graph file: {0}")]
    Schema(String),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error("certification failed: {0}")]
    CertificationFailed(String),
    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
