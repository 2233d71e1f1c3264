//! Slice regular functions on the quaternion unit ball: truncated power
//! series, regular compositions, Hardy-space norms of composition operators
//! and Möbius dynamics.

pub mod compose;
pub mod error;
pub mod hardy;
pub mod io;
pub mod moebius;
pub mod quaternion;
pub mod random;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use quaternion::{decompose, sample_sphere, ImaginaryUnit, Quaternion, SliceCoords, SliceUnit};
pub use series::{
    abs_series, extend, regular_conjugate, representation_formula, shift, split, split_canonical,
    star, star_reciprocal, star_truncated, symmetrize, Series, SliceSplit,
};
