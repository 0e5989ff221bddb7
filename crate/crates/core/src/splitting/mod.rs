//! Split Hodge and twistor structures and their equivalences with mixed ones.

pub mod hom_ext;
pub mod mhs_shs;
pub mod pairing;
pub mod shs;
pub mod sts;

pub use mhs_shs::{mhs_to_shs, mhs_to_shs_with_splitting, MhsSplitting};
pub use pairing::{integral_pairing, Endpoints};
pub use shs::{Frep, LeibnizWitness, ShsObject};
pub use sts::StsObject;

use serde::{Deserialize, Serialize};

use crate::exact::{ExactError, Matrix};

/// One typed component `β^{ab}` (or `β^{mn}` for twistor objects) of a map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub a: u32,
    pub b: u32,
    pub matrix: Matrix,
}
use crate::hodge::HodgeError;

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, thiserror::Error)]
pub enum SplittingError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Hodge(#[from] HodgeError),
    #[error("component ({a},{b}) has the wrong shape")]
    Shape { a: u32, b: u32 },
    #[error("component ({a},{b}) does not have the required type")]
    WrongType { a: u32, b: u32 },
    #[error("component ({a},{b}) is not conjugate to component ({b},{a})")]
    NotReal { a: u32, b: u32 },
    #[error("component ({m},{n}) is not real")]
    NotRealTwistor { m: u32, n: u32 },
    #[error("component ({m},{n}) does not lower weight by {m}+{n}+2")]
    WrongWeight { m: u32, n: u32 },
    #[error("operator is not unipotent")]
    NotUnipotent,
    #[error("conj(d) is not the inverse of d")]
    ConjNotInverse,
    #[error("log d has a component of type ({r},{s}) outside r, s < 0")]
    BadComponent { r: i64, s: i64 },
    #[error("linear system at weight drop {stage} is inconsistent")]
    Inconsistent { stage: i64 },
    #[error("splitting is not unique at weight drop {stage}")]
    NotUnique { stage: i64 },
    #[error("splitting subspaces do not complement the weight filtration at weight {weight}")]
    BadSplitting { weight: i64 },
    #[error("objects live in different categories or shapes")]
    Mismatch,
}
