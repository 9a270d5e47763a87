use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("instance of size {n} exceeds the enumeration cap of {cap}")]
    SizeCap { n: usize, cap: usize },

    #[error("no perfect partition possible (odd sum)")]
    OddSum,

    #[error("all tank volumes are zero")]
    ZeroTankVolumes,
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
