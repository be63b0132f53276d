pub mod certify;
pub mod cli;
pub mod curves;
pub mod error;
pub mod fields;
pub mod multipoly;
pub mod parse;
pub mod poly;
pub mod scalar;
pub mod search;
pub mod selftest;
pub mod valuations;

pub use error::{Error, Result};
pub use fields::{FieldSpec, Fq, GaloisField};
pub use multipoly::MPoly;
pub use poly::{Factorization, FqPoly, Poly};
