//! Finitely generated abelian groups, their morphisms, and exhaustive
//! deciders for Rickart-type properties.

pub mod arith;
pub mod classify;
pub mod error;
pub mod expr;
pub(crate) mod finite;
pub mod group;
pub mod harness;
pub mod hom;
pub mod matrix;
pub mod options;
pub mod rickart;
pub mod ring;
pub(crate) mod serde_int;
pub mod snf;

pub use error::{Error, Result};
pub use group::{
    direct_sum, direct_sum_all, enumerate_groups, group_from_presentation, groups_of_order, order,
    Cardinality, FgAbGroup, GroupElement, Presentation,
};
pub use hom::{
    coimage, cokernel, compose, enumerate_homs, factorize, hom_group, image, kernel, quotient,
    HomGroupDescription, HomSpace, Morphism, Subobject,
};
pub use matrix::IntegerMatrix;
pub use options::Options;
pub use snf::{smith_normal_form, SnfDecomposition};
