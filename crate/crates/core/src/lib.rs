//! Finite von Neumann regular rings, characteristic sets of presented regular
//! rings, and a Grothendieck-topology engine for finite sites.
//!
//! The crate is organised bottom-up:
//!
//! - [`polyfield`]: polynomials over `Z` and `Z/p`, irreducibles, finite fields.
//! - [`regring`]: finite regular rings as products of finite fields.
//! - [`charpres`]: characteristic sets and type sets of one-generator presentations.
//! - [`siteeng`]: finite categories, sieves, topologies, Heyting negation,
//!   De Morgan and Boolean tests, dense topologies and the DeMorganization.
//! - [`fieldsite`]: truncations of the site of finite regular rings and the
//!   checks run on them.
//!
//! Interchangeable algorithms (irreducibility tests, decomposition routes,
//! topology constructions) are registered by name in a [`registry::Registry`].

pub mod charpres;
pub mod fieldsite;
pub mod polyfield;
pub mod registry;
pub mod regring;
pub mod siteeng;

mod bitset;

pub use bitset::BitSet;
