//! Weight-graded DGAs and their homotopy invariants: the free Lie model `G`,
//! the groups `π_n = H_{n−1} G`, Thom–Whitney totalization, the `E₂`-page
//! algebra of an open variety and the deformation cone.

pub mod defcone;
pub mod dga;
pub mod gysin;
pub mod lie;
pub mod quillen;
pub mod thom_whitney;

pub use defcone::{deformation_cone, DeformationCone, LieAlgebra};
pub use dga::{Dga, DgaSpec};
pub use gysin::{e2_builder, E2Algebra, GysinInput, WeightConvention};
pub use quillen::{pi_n, quillen_g, whitehead, LiePresentation, PiReport};
pub use thom_whitney::{thom_whitney, Cosimplicial, CosimplicialSpec, ThReport, ThomWhitney};

use crate::exact::ExactError;

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, thiserror::Error)]
pub enum HomotopyError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("malformed input: {0}")]
    Shape(String),
    #[error("d∘d ≠ 0 on basis element {index}")]
    NotComplex { index: usize },
    #[error("product is not associative on ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("product is not graded-commutative on ({0}, {1})")]
    NotCommutative(usize, usize),
    #[error("Leibniz rule fails on ({0}, {1})")]
    Leibniz(usize, usize),
    #[error("product ({0}, {1}) does not land in the sum of the degrees")]
    ProductDegree(usize, usize),
    #[error("unit law fails on basis element {index}")]
    Unit { index: usize },
    #[error("product ({0}, {1}) does not add weights")]
    ProductWeight(usize, usize),
    #[error("differential does not shift the weight of basis element {index} by the declared amount")]
    DifferentialWeight { index: usize },
    #[error("degree-0 part is not the ground field")]
    NotConnected,
    #[error("bracket-length cap {cap} is too small")]
    CapTooSmall { cap: usize },
    #[error("no sign convention makes the differential square to zero")]
    NoSignConvention,
    #[error("cosimplicial identity {identity} fails at level {level}")]
    Cosimplicial { identity: String, level: usize },
    #[error("structure map {map} at level {level} is not a DGA map")]
    NotDgaMap { map: String, level: usize },
    #[error("bracket not antisymmetric on ({0}, {1})")]
    NotAntisymmetric(usize, usize),
    #[error("Gysin input: {0}")]
    Gysin(String),
    #[error("families are not closed under the product within the form-degree cap")]
    NotClosed,
}
