//! Arbitrary-precision reals and the special functions used by the
//! forward solvers and the series engine.

mod bigreal;
mod special;

pub use bigreal::{BigReal, Precision};
pub use special::{
    factorial_gamma_table, gamma_half_integer, mod_sph_bessel_pair, sph_bessel_pair,
    BesselFamily, BesselOrders,
};

pub use rug::Float;
