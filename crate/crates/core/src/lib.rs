//! Multiplication of polynomials over GF(2) with a generalized Gao–Mateer
//! additive Fourier transform over the tower fields GF(2^(2^L)).
//!
//! * [`poly`]: packed GF(2)[x] polynomials with schoolbook and Karatsuba products.
//! * [`tower`]: tower fields with a Cantor basis and the index ordering `ϖ_i`.
//! * [`fft`]: evaluation, remaindering, interpolation, reconstruction and
//!   field-polynomial multiplication, all with operation counters.
//! * [`sma`]: the GF(2)[x] multiplier built on top of the field transform.
//! * [`bounds`], [`selftest`], [`bench`]: cost formulas, invariant suites and
//!   the benchmark harness used by the command-line tool.

pub mod bench;
pub mod bounds;
mod error;
pub mod fft;
mod linalg;
pub mod poly;
pub mod selftest;
pub mod sma;
pub mod tower;

pub use error::{Error, Result};
pub use fft::{FieldPoly, OpCountReport};
pub use poly::{BitPoly, Degree};
pub use sma::{multiply_sma, SmaConfig};
pub use tower::{build_tower, FieldElement, MulStrategy, TowerField};
