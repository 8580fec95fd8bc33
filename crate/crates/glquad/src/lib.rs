//! Exact computational commutative algebra for quadrics in matrix
//! variables x[s,t]: sparse polynomials over QQ and GF(p), Buchberger
//! Groebner bases, Hilbert series and Krull dimension, Koszul-complex
//! graded Betti numbers and regularity, strength and collective
//! strength of quadrics, and the GL-stable quadric ideal family with
//! its g(n) sweep.

pub mod cli;
pub mod error;
pub mod family;
pub mod field;
pub mod groebner;
pub mod koszul;
pub mod linalg;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod quotient;
pub mod report;
pub mod strength;

pub use error::{Error, Result};
