//! Finite categories, sieves and Grothendieck topologies.
//!
//! A site is a finite category whose sieves on `d` are sets of morphisms with
//! codomain `d`, closed under precomposition. Covering families of a
//! topology on a finite category form a filter on each object, so a
//! [`Topology`] is stored as its least cover per object.

mod category;
mod enumerate;
mod heyting;
mod ore;
mod sheaf;
mod strategy;
mod topology;

use thiserror::Error;

pub use category::{CategoryDesc, FinCategory, MorphismDesc};
pub use enumerate::{for_each_category, for_each_with_matrix, hom_matrices};
pub use heyting::{
    demorganization, dense_topology, heyting_neg, intermediate_topologies, is_boolean,
    is_demorgan, is_dense_over, ClosedLattice, DeMorganReport,
};
pub use ore::{atomic_on_site, atomic_topology, ore_check, OreReport};
pub use sheaf::{is_sheaf, Presheaf, PresheafDesc};
pub use strategy::{topology_constructions, TopologyConstruction};
pub use topology::{rigidity_check, RigidityReport, Topology, TopologyDesc};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SiteError {
    #[error("object `{0}` has no identity morphism")]
    MissingIdentity(String),
    #[error("composition is not associative at ({h}∘{g})∘{f}")]
    NonAssociative { h: String, g: String, f: String },
    #[error("morphism `{0}` refers to an unknown object or morphism")]
    DanglingMorphism(String),
    #[error("composite {g}∘{f} is missing from the table")]
    MissingComposite { g: String, f: String },
    #[error("composite {g}∘{f} has the wrong source or target")]
    BadComposite { g: String, f: String },
    #[error("duplicate object or morphism name")]
    Duplicate,
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("generator `{morphism}` does not have codomain `{object}`")]
    InvalidGenerator { morphism: String, object: String },
    #[error("first topology is not contained in the second")]
    NotARefinement,
    #[error("all nonempty sieves do not form a topology: pulling back {sieve} along {along} gives the empty sieve")]
    NotAtomicizable { sieve: String, along: String },
    #[error("maximal dense De Morgan topology is not unique ({0} candidates)")]
    AmbiguousMaximum(usize),
    #[error("invalid presheaf: {0}")]
    InvalidPresheaf(String),
    #[error("internal error: {0}")]
    InternalError(String),
    #[error("topology file: {0}")]
    InvalidTopology(String),
}
