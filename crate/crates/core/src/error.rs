use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("input word is not freely reduced: {0}")]
    NotReduced(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("letter over generator {0} lies outside the alphabet")]
    OutsideAlphabet(u32),
    #[error("factor has torsion (invariant factors {0:?}); use the torsion adaptation")]
    Torsion(Vec<String>),
    #[error("class-3 normal form supports rank at most 3, got {0}")]
    RankTooLarge(usize),
    #[error("a finite permutation image is required")]
    MissingImage,
    #[error("relator {0} does not map to the identity permutation")]
    RelatorNotInKernel(usize),
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
