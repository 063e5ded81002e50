//! Model checking for epistemic logics with awareness.
//!
//! Three model classes are supported: Kripke lattice models ([`klm`]),
//! HMS unawareness models ([`hms`]) and Fagin-Halpern awareness structures
//! ([`fh`]). The [`transforms`] module converts between them and
//! [`verify`] checks that the conversions preserve satisfaction and that
//! the axiom systems are sound over finite model corpora.

pub mod error;
pub mod fh;
pub mod fixtures;
pub mod formula;
pub mod hms;
pub mod io;
pub mod klm;
pub mod kripke;
pub mod random;
pub mod semantics;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
pub use fh::{AwarenessSet, FhModel};
pub use formula::{enumerate_formulas, parse, Agent, Atom, AtomSet, Formula, FormulaTable, LanguageTag};
pub use hms::{Event, HmsModel, UnawarenessFrame};
pub use klm::{AwarenessAssignment, KripkeLatticeModel, PointwiseAwarenessMap};
pub use kripke::{KripkeModel, RestrictedModel, WorldId};
pub use semantics::ThreeValued;
