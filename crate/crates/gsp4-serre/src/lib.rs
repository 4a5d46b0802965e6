//! Mod-p weight calculus for GSp4 local Galois representations over Q_p.
//!
//! The modules build on each other bottom-up: tame inertia characters, the
//! weight lattice and its alcoves, symbolic local representations, closed-form
//! Galois cohomology bookkeeping, crystalline-lift planning, and finally the
//! Serre weight sets and the batch front end.

pub mod charlattice;
pub mod cli;
pub mod galcoh;
pub mod lifts;
pub mod localrep;
pub mod serre;
pub mod weights;

pub use charlattice::{InertiaCharacter, Prime, Unramified};
pub use localrep::{ExtensionFlag, LocalRepresentation, RepType};
pub use weights::{Alcove, HighestWeight};
