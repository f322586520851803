use thiserror::Error;

use crate::monoid::ElementId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("transformation degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("image {image} of point {point} is out of range for degree {degree}")]
    InvalidImage { point: usize, image: usize, degree: usize },

    #[error("at least one generator is required")]
    NoGenerators,

    #[error("closure exceeded the cap of {cap} elements ({partial} elements discovered)")]
    CapExceeded { cap: usize, partial: usize },

    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),

    #[error("element {element} violates the identity axiom")]
    IdentityAxiom { element: usize },

    #[error("multiplication is not associative: ({x}*{y})*{z} != {x}*({y}*{z})")]
    NotAssociative { x: usize, y: usize, z: usize },

    #[error("generators reach only {reached} of {size} elements")]
    NotGenerating { reached: usize, size: usize },

    #[error("element id {0} is out of range")]
    InvalidElement(usize),

    #[error("unknown generator in word: {0:?}")]
    UnknownGenerator(String),

    #[error("monoid is not R-trivial: {x} <= {y} and {y} <= {x}")]
    NotRTrivial { x: ElementId, y: ElementId },

    #[error("algebra elements belong to different monoids")]
    MonoidMismatch,

    #[error("powers did not stabilize within {cap} steps")]
    NonStabilizing { cap: usize },

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),

    #[error("invalid monoid spec: field `{field}`: {reason}")]
    Spec { field: String, reason: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
