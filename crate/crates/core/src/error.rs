use thiserror::Error;

use crate::flips::SiteId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("states or sections refer to different reference families")]
    FamilyMismatch,

    #[error("norm formula applies to elementary strings only, got {terms} terms")]
    NotElementary { terms: usize },

    #[error("{what} = {requested} exceeds the limit {limit}")]
    TooLarge {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("site {site} lies outside the truncation 1..={sites}")]
    SiteOutOfRange { site: SiteId, sites: usize },

    #[error("fermion index must be at least 1")]
    InvalidFermionIndex,

    #[error("groupoid elements are not composable")]
    NotComposable,

    #[error("points `{0}` and `{1}` lie in different orbits")]
    NotEquivalent(String, String),

    #[error("truncation basis is not closed under the operator")]
    BasisNotClosed,

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
