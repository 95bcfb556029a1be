use num_bigint::BigInt;
use thiserror::Error;

use crate::lattice::ClassVector;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("gram matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("lattice is not even: diagonal entry {index} is {value}")]
    OddLattice { index: usize, value: BigInt },

    #[error("gram matrix is degenerate")]
    Degenerate,

    #[error("signature is ({positive}, {negative}), expected (1, rank - 1)")]
    WrongSignature { positive: usize, negative: usize },

    #[error("ample class has non-positive square {norm}")]
    NonPositiveAmple { norm: BigInt },

    #[error("ample class lies on the wall of root {root}")]
    AmpleOnWall { root: ClassVector },

    #[error("{vector} is not a root: square is {norm}, expected -2")]
    NotARoot { vector: ClassVector, norm: BigInt },

    #[error("matrix does not preserve the gram form")]
    NotAnIsometry,

    #[error("isometry does not preserve the chamber of the ample class")]
    NotNefPreserving,

    #[error("zero vector has no primitive ray")]
    ZeroVector,

    #[error("enumeration slice carries a degenerate form")]
    UnboundedQuery,

    #[error("{vector} is not in the closure of the positive cone")]
    OutsidePositiveCone { vector: ClassVector },

    #[error("isometry swaps the two components of the positive cone")]
    OppositeCone,

    #[error("{p} is not an odd prime")]
    BadPrime { p: u64 },

    #[error("subspace basis is linearly dependent mod p")]
    DegenerateBasis,

    #[error("degree bound {bound} exhausted before the domain stabilized")]
    BoundExhausted { bound: BigInt },

    #[error("{point} was reduced outside the fundamental domain")]
    CoverageFailure { point: ClassVector },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
