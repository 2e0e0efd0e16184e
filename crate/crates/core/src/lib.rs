//! Exact verification kernel for the odd `h`-deformation of `GL(1|1)`.

pub mod calculus;
pub mod dsl;
pub mod error;
pub mod harness;
pub mod hopf;
pub mod presentations;
pub mod report;
pub mod scalars;
pub mod superalg;
pub mod tensorspace;

pub use error::{AlgebraError, Result};
pub use scalars::{Poly, QRational};
pub use superalg::{Alphabet, Element, Gen, Parity, RewriteSystem, Rule};
