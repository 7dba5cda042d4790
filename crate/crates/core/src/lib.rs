//! Exact computations around Markov triples and pin-ellipsoid embeddings
//! into the complex projective plane: branch sequences, Wahl chains and
//! their intersection theory, embedding staircases, almost toric triangles
//! and the combinatorial blow-up calculus of broken rulings.

pub mod atf;
pub mod error;
pub mod exact;
pub mod hj;
pub mod intersection;
pub mod markov;
pub mod regulation;
pub mod staircase;

pub use error::{Error, Result};
pub use exact::{LatticeVector, Rational, RationalPoint};
