//! Numerical study of the surface Riesz potential with kernel |x-y|^{-1/2} on
//! polygonal boundaries.
//!
//! The crate provides:
//! - polygonal boundary geometry with corner frames and smooth disk covers
//!   ([`geometry`]);
//! - the corner kernel 𝔎_α, its expansion coefficients and cutoff splitting
//!   ([`kernel`]);
//! - a Mellin transform engine on logarithmic grids with Parseval, inversion
//!   and weighted-norm diagnostics ([`mellin`]);
//! - the Mellin symbol of the corner kernel: strip evaluation, meromorphic
//!   continuation, poles/residues, line profiles and sup moduli ([`symbol`]);
//! - fractional Sobolev norms (Slobodeckii, tilde, Mellin-characterised) and
//!   Galerkin Gram matrices with a discrete continuity-modulus estimator
//!   ([`sobolev`]);
//! - the boundary operator, its localisations, corner transfer map and the
//!   half-line corner operators with direct and Mellin-diagonal application
//!   paths ([`riesz`]).

pub mod bump;
pub mod error;
pub mod geometry;
pub mod kernel;
pub mod mellin;
pub mod quad;
pub mod riesz;
pub mod sobolev;
pub mod special;
pub mod symbol;

pub use error::{Error, Result};
