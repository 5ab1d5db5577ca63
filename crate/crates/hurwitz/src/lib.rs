//! A toolkit for finding and certifying Hurwitz (2,3,7)-generating triples
//! in exceptional groups of Lie type over small finite fields.
//!
//! The crate is organized bottom-up:
//!
//! * [`ffla`] — dense linear algebra over GF(q), q = p^n ≤ 2^16, plus exact
//!   element-order and Jordan-form computations.
//! * [`rootsys`] — root systems, Chevalley structure constants obtained from
//!   a single integral construction of the E8 lattice algebra, weight
//!   systems, and toral fixed-space enumeration.
//! * [`chevgrp`] — integral representation data for the minimal and adjoint
//!   modules of the exceptional families, reduced mod p to explicit matrix
//!   generators over GF(q).
//! * [`meataxe`] — spinning, irreducibility certification, and splitting of
//!   modules given by matrix generators.
//! * [`classdata`] — encoded invariants (fixed-space dimensions, traces,
//!   Jordan data) of the conjugacy classes of elements of order 2, 3 and 7
//!   that the search targets.
//! * [`scott`] — the dimension-inequality engine deciding which class
//!   triples are admissible for (2,3,7)-generation over each field.
//! * [`search`] — the randomized hunt for witness triples, certification of
//!   generation, and self-contained verification of stored witnesses.

pub mod util;
pub mod ffla;
pub mod rootsys;
pub mod chevgrp;
pub mod meataxe;
pub mod classdata;
pub mod scott;
pub mod search;
