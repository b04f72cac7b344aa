//! Lie algebra machinery for colored networks of coupled cells: network
//! specifications, the algebra of color-preserving self-maps, adapted
//! coordinate frames, block forms of Jacobi operators and basic structure
//! theory of the resulting matrix Lie algebras.

pub mod blockform;
pub mod exact;
pub mod frames;
pub mod liealg;
pub mod netspec;
pub mod sigma;
