//! Finite abelian groups with `ℚ/ℤ`-type coefficients, their 2-cocycles and
//! alternating pairings, Heisenberg-type central extensions, recognition of
//! class-2 nilpotent groups, and projective representations.

pub mod cocycles;
pub mod error;
pub mod fab;
pub mod grouprec;
pub mod heisenberg;
pub mod pairings;
pub mod projrep;
pub mod text;

pub use cocycles::{CochainFunction, Cocycle};
pub use error::{Error, Result, Stage};
pub use fab::{Coeff, CoeffContext, Elem, FinAbGroup, Qz};
pub use grouprec::FiniteGroup;
pub use heisenberg::{HElem, HeisenbergGroup};
pub use pairings::{Pairing, SymplecticPairing};
