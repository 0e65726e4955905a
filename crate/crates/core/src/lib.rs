//! Explicit depth-zero Lubin-Tate theory at desk scale.
//!
//! The crate is organised bottom-up:
//!
//! - [`coeff`]: finite fields, truncated Witt rings, bounded-denominator
//!   p-adics and exact cyclotomic numbers.
//! - [`series`]: sparse multivariate power series truncated by weighted degree.
//! - [`formal`]: Lubin-Tate formal modules and the universal deformation in
//!   Drinfeld normal form, built from logarithms.
//! - [`depth0`]: the series `P_a`, the local equation `P`, blow-up charts and
//!   the special fibre of the level-`p` deformation space.
//! - [`dl`]: the Deligne-Lusztig variety `prod (a.x) = 1` as an enumerable object.
//! - [`chars`]: exact character theory of `GL_n(F_q)` and the cuspidal
//!   correspondence `theta -> pi_theta`.
//! - [`cli`]: report assembly used by the `lubin-tate` binary.

pub mod chars;
mod check;
pub mod cli;
pub mod coeff;
pub mod depth0;
pub mod dl;
mod error;
pub mod formal;
pub mod series;

pub use check::{all_passed, Check};
pub use error::{Error, Result};
