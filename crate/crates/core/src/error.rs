use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid poset description: {0}")]
    InvalidSpec(String),

    #[error("order is not antisymmetric: {0} and {1} lie on a cycle")]
    Cycle(String, String),

    #[error("missing bound: {0}")]
    NoBound(String),

    #[error("frame law fails: sigma({subset:?}) /\\ {element} differs from the join of the meets")]
    NotDistributive { subset: Vec<String>, element: String },

    #[error("algebra has {0} elements; at most 64 are supported")]
    TooLarge(usize),

    #[error("unknown element name `{0}`")]
    UnknownElement(String),

    #[error("{what}: search space of {size} exceeds the guard of {limit}")]
    SizeGuard { what: String, size: u128, limit: u64 },

    #[error("map is not an atom: {0}")]
    NotAtom(String),

    #[error("postulate of materialism required: {0}")]
    PostulateRequired(String),

    #[error("family is not pairwise compatible: `{0}` and `{1}`")]
    NotCompatible(String, String),

    #[error("`{0}` is not below `{1}`")]
    NotBelow(String, String),

    #[error("basis violates {condition}: {witness}")]
    BasisInvalid { condition: String, witness: String },

    #[error("invalid topology: {0}")]
    TopologyInvalid(String),

    #[error("invalid presheaf: {0}")]
    InvalidPresheaf(String),

    #[error("not a sheaf: {0}")]
    NotASheaf(String),

    #[error("not a subobject: {0}")]
    NotSubobject(String),

    #[error("invalid T-set: {0}")]
    InvalidTSet(String),

    #[error("objects live over different algebras")]
    AlgebraMismatch,

    #[error("{0}")]
    Input(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Upper bound on the size of a brute-force search space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limit(pub u64);

impl Default for Limit {
    fn default() -> Self {
        Limit(1_000_000)
    }
}

impl Limit {
    pub(crate) fn check(self, what: &str, size: u128) -> Result<()> {
        if size > self.0 as u128 {
            Err(Error::SizeGuard {
                what: what.to_string(),
                size,
                limit: self.0,
            })
        } else {
            Ok(())
        }
    }
}

/// `base^exp` saturating at `u128::MAX`.
pub(crate) fn pow_saturating(base: usize, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}
