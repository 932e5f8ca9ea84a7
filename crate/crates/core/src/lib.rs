//! Tight triangulations of closed 3-manifolds: simplicial complexes, exact
//! homology over Q and GF(p), tightness deciders, stacked-sphere machinery
//! and handle-addition constructions.

pub mod builtin;
pub mod complex;
pub mod constructions;
pub mod error;
pub mod homology;
pub mod iso;
pub mod linalg;
pub mod manifold;
pub mod stackedness;
pub mod tightness;

use serde::Serialize;

pub use complex::{Complex, FVector, Face, Graph, VertexId};
pub use error::{Error, Result};
pub use linalg::{FMatrix, FieldSpec, Scalar};

/// A decision together with an optional witness explaining a failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict<W> {
    pub holds: bool,
    pub witness: Option<W>,
}

impl<W> Verdict<W> {
    pub fn pass() -> Self {
        Verdict { holds: true, witness: None }
    }

    pub fn fail(witness: W) -> Self {
        Verdict { holds: false, witness: Some(witness) }
    }
}
