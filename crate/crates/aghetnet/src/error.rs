use thiserror::Error;

/// Errors surfaced by the simulator library.
#[derive(Debug, Error)]
pub enum Error {
    /// A numeric parameter is outside its documented range.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// Scenario configuration is inconsistent (missing/duplicate tiers,
    /// out-of-range ICIC values, absent seed, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// A link has zero horizontal/3D distance where the path-loss model
    /// is singular.
    #[error("degenerate distance: {0}")]
    DegenerateDistance(String),

    /// Air-to-ground elevation angle is zero or negative.
    #[error("undefined elevation: {0}")]
    UndefinedElevation(String),

    /// A base-station tier required for nearest-cell resolution is empty.
    #[error("tier missing: no {0} nodes in layout")]
    TierMissing(&'static str),

    /// A (BS tier, UE tier) pairing with no defined path-loss class.
    #[error("link classification error: {0}")]
    Classification(String),

    /// Internal invariant violated (e.g. a scheduled UE maps to a cell
    /// whose load counter is zero).
    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
