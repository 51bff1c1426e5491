//! Fixed point and periodic point theory for endomorphisms of finitely
//! generated free groups, viewed as selfmaps of a bouquet of circles.
//!
//! The crate is `no_std` and only needs an allocator.

#![no_std]

extern crate alloc;

pub mod count;
pub mod density;
pub mod dynamics;
pub mod endo;
pub mod periodic;
pub mod remnant;
pub mod wagner;
pub mod word;

pub use endo::Endomorphism;
pub use remnant::{has_remnant, in_rk, in_sl, remnant_decomposition, RemnantDecomposition};
pub use wagner::{lefschetz_number, nielsen_number, w_count, WagnerAnalysis, WagnerError};
pub use word::{Letter, Sign, Word, WordError};
