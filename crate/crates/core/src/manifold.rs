//! Closed-manifold recognition in dimensions up to three via vertex links.

use serde::Serialize;

use crate::complex::{Complex, Face, VertexId};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ManifoldDefect {
    /// Offending vertex, edge or facet.
    pub face: Vec<VertexId>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ManifoldReport {
    pub holds: bool,
    pub dim: usize,
    pub defect: Option<ManifoldDefect>,
}

impl ManifoldReport {
    fn pass(dim: usize) -> Self {
        ManifoldReport { holds: true, dim, defect: None }
    }

    fn fail(dim: usize, face: &[VertexId], reason: impl Into<String>) -> Self {
        ManifoldReport {
            holds: false,
            dim,
            defect: Some(ManifoldDefect { face: face.to_vec(), reason: reason.into() }),
        }
    }
}

/// Decide whether `x` triangulates a closed manifold (not necessarily connected).
///
/// Every vertex link must be a triangulated sphere of one dimension less:
/// a pair of points for curves, a single cycle for surfaces, and a connected
/// closed surface of Euler characteristic 2 for 3-manifolds.
pub fn verify_closed_manifold(x: &Complex) -> Result<ManifoldReport> {
    let d = x.dim().ok_or_else(|| Error::Malformed("empty complex".into()))?;
    if d > 3 {
        return Err(Error::UnsupportedDimension(d));
    }
    if let Some(f) = x.facets().iter().find(|f| f.dim() != d) {
        return Ok(ManifoldReport::fail(d, f.vertices(), format!("facet of dimension {} in a {d}-complex", f.dim())));
    }
    for &v in x.vertices() {
        let link = x.link(v)?;
        let defect = match d {
            0 => None,
            1 => (link.faces(0).len() != 2).then(|| format!("vertex lies on {} edges", link.faces(0).len())),
            2 => cycle_defect(&link).map(|r| format!("link is not a cycle: {r}")),
            _ => sphere2_defect(&link).map(|(_, r)| format!("link is not a 2-sphere: {r}")),
        };
        if let Some(reason) = defect {
            return Ok(ManifoldReport::fail(d, &[v], reason));
        }
    }
    Ok(ManifoldReport::pass(d))
}

/// Require a closed manifold of dimension `d`.
pub(crate) fn require_closed(x: &Complex, d: usize) -> Result<()> {
    match verify_closed_manifold(x) {
        Ok(r) if r.holds && r.dim == d => Ok(()),
        Ok(r) if !r.holds => {
            let why = r.defect.map(|f| format!("{:?}: {}", f.face, f.reason)).unwrap_or_default();
            Err(Error::not_manifold(d, why))
        }
        Ok(r) => Err(Error::not_manifold(d, format!("complex has dimension {}", r.dim))),
        Err(Error::UnsupportedDimension(k)) => Err(Error::not_manifold(d, format!("complex has dimension {k}"))),
        Err(e) => Err(e),
    }
}

fn cycle_defect(l: &Complex) -> Option<String> {
    if l.dim() != Some(1) || !l.is_pure() {
        return Some("not a pure 1-dimensional complex".into());
    }
    let g = l.graph();
    if let Some(i) = (0..g.len()).find(|&i| g.degree(i) != 2) {
        return Some(format!("vertex {} has degree {}", g.label(i), g.degree(i)));
    }
    if !l.is_connected() {
        return Some("disconnected".into());
    }
    None
}

/// Why `l` fails to be a triangulated 2-sphere, with the offending face.
pub(crate) fn sphere2_defect(l: &Complex) -> Option<(Face, String)> {
    let anywhere = || l.facets().first().cloned().unwrap_or_else(|| Face::from_sorted(vec![0]));
    if l.dim() != Some(2) || !l.is_pure() {
        return Some((anywhere(), "not a pure 2-dimensional complex".into()));
    }
    for e in l.faces(1) {
        let n = l.facets().iter().filter(|t| e.is_subset_of(t)).count();
        if n != 2 {
            return Some((e.clone(), format!("edge {e} lies in {n} triangles")));
        }
    }
    for &v in l.vertices() {
        if let Some(r) = cycle_defect(&l.link(v).expect("vertex present")) {
            return Some((Face::from_sorted(vec![v]), format!("vertex {v}: {r}")));
        }
    }
    if !l.is_connected() {
        return Some((anywhere(), "disconnected".into()));
    }
    let chi = l.euler_characteristic();
    if chi != 2 {
        return Some((anywhere(), format!("Euler characteristic {chi}")));
    }
    None
}

pub fn is_2_sphere(l: &Complex) -> bool {
    sphere2_defect(l).is_none()
}
