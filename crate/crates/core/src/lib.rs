//! Exact computation of k-leaky (r+1)-completed-cycles double Hurwitz
//! numbers through operator commutation on the semi-infinite wedge.

pub mod error;
pub mod acceptance;
pub mod chambers;
pub mod cutjoin;
pub mod fock;
pub mod hurwitz;
pub mod oracle;
pub mod partition;
pub mod rational;
pub mod series;

pub use error::{HurwitzError, Result};
pub use partition::Partition;
pub use rational::Rational;
