//! Exact arithmetic: rationals, quadratic-extension elements, multivariate
//! polynomials and rational functions in canonical form.

pub mod gcd;
pub mod poly;
pub mod quad;
pub mod rational;
pub mod ratfunc;
pub mod var;

pub use gcd::poly_gcd;
pub use poly::{Coeff, Monomial, MultiPoly, QPoly, QuadPoly};
pub use quad::{quad_conjugate, QuadElem, Radicand};
pub use rational::{common_denominator, is_square, isqrt_exact, rat_arith, RatOp, Rational};
pub use ratfunc::{ratfunc_substitute, QRatFunc, QuadRatFunc, RatFunc};
pub use var::Var;
