//! Exact arithmetic for epipelagic representations of p-adic classical groups.
//!
//! The crate computes endoscopic lifts (cuspidal supports on the general
//! linear side) and L-packets from stratum data, and checks every closed form
//! it uses against brute-force sums over finite fields.

pub mod cli;
pub mod error;
pub mod hecke;
pub mod lift;
pub mod monomial;
pub mod packets;
pub mod quad_forms;
pub mod residue_field;
pub mod square_classes;
pub mod strata;
pub mod verify;

pub use error::{Error, Result, Violation};
pub use residue_field::{CyclotomicInt, Elt, GaussUnit, ResidueField};
