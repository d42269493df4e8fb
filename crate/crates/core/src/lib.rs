//! Simulation engine for squeezed instantaneous noise-based logic (INBL).
//!
//! Logic values are carried by random telegraph waves: each noise-bit has a
//! high reference (a ±1 wave) and a low reference fixed to the constant 1.
//! An `M`-bit string is the sample-wise product of its high bits' references
//! (a hyperspace vector); a set of strings is the sum of their vectors (a
//! superposition). NOT, XOR and XNOR are sample-wise products and therefore
//! act on every member of a superposition in a single step.
//!
//! [`symbolic`] mirrors all of this exactly over bitmasks and is used to
//! check the signal engine.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod format;
pub mod gates;
pub mod hyperspace;
pub mod reference;
pub mod symbolic;
pub mod trace;

pub use error::{InblError, Result, MAX_NOISE_BITS};
pub use hyperspace::BitString;
pub use reference::ReferenceSystem;
pub use symbolic::{GateKind, ProductTerm, SymbolicSuperposition};
pub use trace::Trace;
