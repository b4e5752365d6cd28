//! Exact arithmetic and verification routines for maximal Kakeya bounds over
//! Z/NZ and over finite fields.
//!
//! Everything is generic over the exact [`Ring`] / [`Field`] traits; the
//! aliases below name the instantiations used in practice.

pub mod bounds;
pub mod decoding;
pub mod error;
pub mod ffmax;
pub mod field;
pub mod geometry;
pub mod interval;
pub mod matrices;
pub mod polymethod;
pub mod polyquot;
pub mod projective;
pub mod ring;
pub mod unipoly;

pub use error::{Error, Result};
pub use ffmax::{FqField, Gf};
pub use field::{Field, Fp, Ring};
pub use matrices::{CycloMatrix, FpMatrix, IntPolyMatrix, Matrix, TruncMatrix};
pub use polyquot::{CycloCtx, CycloRat, CycloZPoly, TruncPoly};

pub type Rational = num_rational::BigRational;
pub type RatPoly = unipoly::UniPoly<Rational>;
pub type FpPoly = unipoly::UniPoly<Fp>;
pub type IntPoly = unipoly::UniPoly<num_bigint::BigInt>;
pub type FpMultiPoly = polymethod::MultiPoly<Fp>;
pub type GfMultiPoly = polymethod::MultiPoly<Gf>;
pub type RatMultiPoly = polymethod::MultiPoly<Rational>;
pub type CycloMultiPoly = polymethod::MultiPoly<CycloRat>;
pub type RatMatrix = Matrix<Rational>;
pub type GfMatrix = Matrix<Gf>;
