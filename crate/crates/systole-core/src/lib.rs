//! Exact cohomological toolkit for systolic and scalar-curvature bounds.
//!
//! Everything here is `no_std` with `alloc`; IO and the command line live in the
//! companion `systole-cli` crate.
#![no_std]
extern crate alloc;

pub mod catalog;
pub mod char_classes;
pub mod cone;
pub mod graded_ring;
pub mod index;
pub mod lattice;
pub mod num;
pub mod pi_scaled;
pub mod pushforward;
pub mod upoly;
