// Copyright 2026 the flatgeo Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse exact coordinate {0:?}")]
pub struct ParseExactError(pub String);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed surface document: {0}")]
    MalformedDocument(String),
    #[error("edge {a:?} and edge {b:?} are not glued by a translation")]
    GluingNotTranslation { a: (usize, usize), b: (usize, usize) },
    #[error("surface has {classes} singular vertex classes")]
    MultipleSingularities { classes: usize },
    #[error("vertex class with total angle 2π is a removable point; remove it from the presentation")]
    RegularVertexClass,
    #[error("systole must be positive")]
    NonPositiveSystole,
    #[error("polygon {0} is not strictly convex and counter-clockwise")]
    NonConvexPolygon(usize),
    #[error("unknown surface {0:?}")]
    UnknownSurface(String),
    #[error("origami commutator has {cycles} non-trivial cycles (need exactly one)")]
    OrigamiHasMultipleSingularities { cycles: usize },
    #[error("search limit of {limit} exceeded")]
    LimitExceeded { limit: u64 },
    #[error("band-ordering search space {size} exceeds limit {limit}")]
    BudgetExceeded { size: u128, limit: u128 },
    #[error("arc is not simple")]
    NotSimple,
    #[error("decomposition has {m} pieces; at least 4 are needed")]
    TooFewPieces { m: usize },
    #[error("no hyperbolic model is registered for this surface: {0}")]
    NoCatalogue(String),
    #[error("group element is not hyperbolic (|trace| = {trace})")]
    EllipticOrParabolic { trace: f64 },
    #[error("numerically unstable predicate: {0}")]
    NumericallyUnstable(String),
    #[error("word is a proper power ({power}); enable multiplicity handling")]
    NonPrimitive { power: usize },
    #[error("interpolation construction failed: {0}")]
    ConstructionFailed(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
