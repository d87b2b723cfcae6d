//! Finite groups acting self-similarly on k-graphs.

mod action;
mod cycline;
mod group;

pub use action::{validate_action, ActionError, PseudoFreeness, SelfSimilarGraph};
pub use cycline::{CyclineEnumeration, CyclineTriple, TriplesVerdict};
pub use group::{FiniteGroup, GroupElem, GroupError};

#[cfg(test)]
pub(crate) use action::fixtures;
