//! Exact mod-2 computations with unstable modules over the Steenrod algebra
//! and over the polynomial algebra `H = F2[t1..tr]`.
//!
//! Everything here is graded, finite in each degree, and truncated at a
//! caller-chosen top degree `N`.  All arithmetic is exact over F2; there are
//! no floats and no randomness in any code path, so every function is
//! deterministic: the same inputs produce the same outputs, bit for bit.
//!
//! The crate is organised bottom-up:
//!
//! * [`f2lin`] — dense bit-packed F2 linear algebra (rank, kernels, spans).
//! * [`steenrod`] — the mod-2 Steenrod algebra in the admissible basis:
//!   Adem rewriting, free unstable modules `F(m)`, Brown–Gitler modules
//!   `J(n)`, and finite unstable modules given by explicit matrices.
//! * [`hv`] — the unstable algebra `H = F2[t1..tr]` with its Steenrod
//!   action, Dickson top classes, Euler classes, and factorisation into
//!   linear forms.
//! * [`umod`] — finitely presented unstable `H`-modules over the Steenrod
//!   algebra: realisation degree by degree, structural predicates
//!   (nilpotent / reduced / nil-closed / free over `H`), submodules,
//!   quotients, and bounded isomorphism search.
//! * [`functors`] — the functors of Smith theory: the quotient `E/H̃·E`,
//!   `Tor_1^H(F2, E)`, localisation away from `t`, the fixed-point functor
//!   `Fix`, and the four-term sequence relating them.
//! * [`classify`] — classification of modules whose quotient `E/H̃·E` is a
//!   suspension of F2 or the second Brown–Gitler module, Gysin-sequence
//!   models for Euler classes of representations, and a small catalog of
//!   named modules used throughout the test suite.
//!
//! The crate is `no_std` (with `alloc`); parsing of multi-line module files,
//! report formatting and the command-line driver live in the companion crate.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod classify;
pub mod f2lin;
pub mod functors;
pub mod hv;
pub mod steenrod;
pub mod umod;
