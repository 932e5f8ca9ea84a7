use serde::Serialize;

use crate::complex::{Complex, Face, VertexId};
use crate::error::{Error, Result};
use crate::manifold::require_closed;
use crate::Verdict;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StackedSphereReport {
    pub holds: bool,
    pub dim: usize,
    /// Vertices removed by reverse bistellar 0-moves, in order.
    pub removals: Vec<VertexId>,
    /// Facets left when no further move applies and the rest is not a
    /// simplex boundary.
    pub remainder: Option<Vec<Vec<VertexId>>>,
}

/// Recognise a stacked `d`-sphere (`d` in {2, 3}) by repeatedly removing the
/// lowest vertex whose link is a simplex boundary, provided the facet that
/// replaces its star is not already a face.
pub fn is_stacked_sphere(s: &Complex, d: usize) -> Result<StackedSphereReport> {
    if !(2..=3).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    require_closed(s, d)?;
    let mut x = s.clone();
    let mut removals = Vec::new();
    while x.num_vertices() > d + 2 {
        let Some((v, lid)) = removable(&x, d) else {
            break;
        };
        removals.push(v);
        let keep = x.facets().iter().filter(|f| !f.contains(v)).cloned();
        x = Complex::from_faces(keep.chain(std::iter::once(lid)));
    }
    let base = x.num_vertices() == d + 2 && x == Complex::simplex_boundary(x.vertices().iter().copied())?;
    Ok(StackedSphereReport { holds: base, dim: d, removals, remainder: (!base).then(|| x.facet_lists()) })
}

fn removable(x: &Complex, d: usize) -> Option<(VertexId, Face)> {
    x.vertices().iter().find_map(|&v| {
        let star = x.star_facets(v);
        if star.len() != d + 1 {
            return None;
        }
        // in a closed d-manifold a link with d + 1 facets is the boundary of a d-simplex
        let lid = Face::new(
            star.iter()
                .flat_map(|f| f.vertices().iter().copied())
                .filter(|&u| u != v)
                .collect::<std::collections::BTreeSet<_>>(),
        )
        .expect("nonempty link");
        (lid.len() == d + 1 && !x.contains_face(&lid)).then_some((v, lid))
    })
}

/// Is every vertex link of the closed 3-manifold `m` a stacked 2-sphere? The
/// first vertex whose link is not is the witness.
pub fn is_locally_stacked(m: &Complex) -> Result<Verdict<VertexId>> {
    require_closed(m, 3)?;
    for &v in m.vertices() {
        if !is_stacked_sphere(&m.link(v)?, 2)?.holds {
            return Ok(Verdict::fail(v));
        }
    }
    Ok(Verdict::pass())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;

    #[test]
    fn simplex_boundaries_are_base_cases() {
        let r = is_stacked_sphere(&builtin::boundary_simplex(4), 3).unwrap();
        assert!(r.holds);
        assert!(r.removals.is_empty());
        assert!(is_stacked_sphere(&builtin::boundary_simplex(3), 2).unwrap().holds);
    }

    #[test]
    fn icosahedron_is_not_stacked() {
        let r = is_stacked_sphere(&builtin::icosahedron(), 2).unwrap();
        assert!(!r.holds);
        assert!(r.removals.is_empty());
        assert_eq!(r.remainder.unwrap().len(), 20);
    }

    #[test]
    fn wrong_dimension() {
        assert!(matches!(is_stacked_sphere(&builtin::boundary_simplex(4), 2), Err(Error::NotClosedManifold { .. })));
        assert!(matches!(is_stacked_sphere(&builtin::boundary_simplex(4), 4), Err(Error::UnsupportedDimension(4))));
    }

    #[test]
    fn triple_sum_of_simplex_boundaries() {
        let t = builtin::boundary_simplex(4);
        let s = Face::new(0..4).unwrap();
        let x = t.connected_sum(&t, &s, &s, &[(0, 0), (1, 1), (2, 2), (3, 3)]).unwrap();
        let f = x.facets().last().unwrap().clone();
        let phi: Vec<_> = (0..4).zip(f.vertices().iter().copied()).collect();
        let y = x.connected_sum(&t, &f, &s, &phi).unwrap();
        assert_eq!(y.f_vector().0, vec![7, 18, 22, 11]);
        let r = is_stacked_sphere(&y, 3).unwrap();
        assert!(r.holds);
        assert_eq!(r.removals.len(), 2);
    }

    #[test]
    fn octahedron_is_not_stacked() {
        let octa = Complex::from_facets([
            [0, 2, 4],
            [0, 2, 5],
            [0, 3, 4],
            [0, 3, 5],
            [1, 2, 4],
            [1, 2, 5],
            [1, 3, 4],
            [1, 3, 5],
        ])
        .unwrap();
        assert!(!is_stacked_sphere(&octa, 2).unwrap().holds);
    }

    #[test]
    fn local_stackedness() {
        assert!(is_locally_stacked(&builtin::boundary_simplex(4)).unwrap().holds);
        assert!(is_locally_stacked(&builtin::icosahedron()).is_err());
    }
}
