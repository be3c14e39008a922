//! Exact arithmetic: rationals, multivariate polynomials and normalized
//! rational functions over the fixed variable set `a, b1, b2, c, x, y, n`.

mod affine;
mod parse;
mod poly;
mod rat;
mod ratf;
mod var;

pub use affine::Affine;
pub use parse::parse_ratf;
pub use poly::{Monomial, Poly};
pub(crate) use rat::is_nonpositive_integer;
pub use rat::{parse_rat, rat, rat_to_string, Rat};
pub use ratf::RatF;
pub use var::{Var, NVARS};
