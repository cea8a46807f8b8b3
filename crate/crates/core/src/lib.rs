//! Moufang loops of exponent 3 whose commutative center is not normal.
//!
//! - [`gf3`]: polynomials over the field with three elements.
//! - [`loop_core`]: the finite-loop contract and generic algorithms
//!   (centers, nucleus, inner mappings, normality, quotients).
//! - [`poly_loop`]: the polynomial Moufang loop of order `3^11` on `F_3^11`,
//!   with a symbolic identity checker.
//! - [`burnside`]: power-commutator presentations of the free Burnside groups
//!   `B(3, r)` for `r = 2, 3`.
//! - [`triplication`]: the triplication `M(G, 3)` of a group of exponent 3.

pub mod burnside;
pub mod gf3;
pub mod loop_core;
pub mod poly_loop;
pub mod triplication;
