//! Exact rational polynomial algebra for locally nilpotent derivations,
//! polynomial automorphisms of affine space and a Danielewski-type surface.

pub mod automorphisms;
pub mod danielewski;
pub mod derivations;
pub mod dualgraph;
pub mod polyring;
mod textfmt;

pub use automorphisms::{compose, comorphism_product, MapError, PolyAuto, PolyMap};
pub use derivations::{Derivation, DerivationError, NilpotencyCertificate};
pub use dualgraph::WeightedCurveGraph;
pub use polyring::{LaurentPoly, Monomial, MultiPoly, PolyError, Rational, VarSet};
pub use textfmt::ScriptError;
