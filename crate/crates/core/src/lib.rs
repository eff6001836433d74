// Copyright 2026 the flatgeo Authors
// SPDX-License-Identifier: Apache-2.0

//! Closed geodesics and simple arcs through the cone point of a flat
//! translation surface: saddle-connection enumeration, geodesic words,
//! self-intersection numbers, simple-arc decompositions and counting tables,
//! with a hyperbolic reference model for cross-checking.

pub mod bounds;
pub mod crossing;
pub mod error;
pub mod exact;
pub mod flatsurf;
pub mod geodesy;
pub mod hyperoracle;
pub mod length;
pub mod saddle;
pub mod smoothing;
pub mod surface_file;

pub use error::{Error, Result};
pub use exact::{ExactCoord, Rational, Vec2};
pub use flatsurf::{builtin_surface, load_surface, FlatSurface};
