use std::collections::BTreeMap;

use serde::Serialize;

use crate::builtin;
use crate::complex::{Complex, Face, VertexId};
use crate::error::{Error, Result};
use crate::iso::is_isomorphic;
use crate::manifold::sphere2_defect;

use super::cycles::mod3_obstruction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Summand {
    T,
    I,
}

/// Splitting along an empty triangle. `sides` are the vertex sets of the two
/// pieces, each including the triangle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cut {
    pub triangle: [VertexId; 3],
    pub sides: [Vec<VertexId>; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Leaf {
    pub kind: Summand,
    pub facets: Vec<Vec<VertexId>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SummandList {
    pub t: usize,
    pub i: usize,
    pub cuts: Vec<Cut>,
    pub leaves: Vec<Leaf>,
}

impl SummandList {
    pub fn multiset(&self) -> BTreeMap<Summand, usize> {
        [(Summand::T, self.t), (Summand::I, self.i)].into_iter().filter(|&(_, n)| n > 0).collect()
    }

    /// Glue the leaves back together: every cut triangle appears in exactly
    /// two leaves and is dropped.
    pub fn reassemble(&self) -> Result<Complex> {
        let mut count: BTreeMap<&[VertexId], usize> = BTreeMap::new();
        for leaf in &self.leaves {
            for f in &leaf.facets {
                *count.entry(f.as_slice()).or_default() += 1;
            }
        }
        Complex::from_facets(count.into_iter().filter(|&(_, n)| n == 1).map(|(f, _)| f))
    }
}

/// Write a 2-sphere without chordless cycles of length `1 mod 3` as a
/// connected sum of tetrahedron and icosahedron boundaries.
pub fn decompose_ti(s: &Complex) -> Result<SummandList> {
    if let Some((face, reason)) = sphere2_defect(s) {
        return Err(Error::not_manifold(2, format!("not a 2-sphere at {face}: {reason}")));
    }
    let obstruction = mod3_obstruction(s);
    if let Some(w) = obstruction.witness {
        return Err(Error::ForbiddenCycle { len: w.len, cycle: w.cycle });
    }
    let mut out = SummandList { t: 0, i: 0, cuts: Vec::new(), leaves: Vec::new() };
    let (tetra, ico) = (builtin::boundary_simplex(3), builtin::icosahedron());
    let mut stack = vec![s.clone()];
    while let Some(x) = stack.pop() {
        match empty_triangle(&x) {
            Some(t) => {
                let [a, b] = split(&x, t)?;
                out.cuts.push(Cut { triangle: t, sides: [a.vertices().to_vec(), b.vertices().to_vec()] });
                // keep the lower side on top so leaves come out in a stable order
                stack.push(b);
                stack.push(a);
            }
            None => {
                let kind = if is_isomorphic(&x, &tetra).is_some() {
                    Summand::T
                } else if is_isomorphic(&x, &ico).is_some() {
                    Summand::I
                } else {
                    return Err(Error::HypothesisViolated(format!(
                        "prime piece with f-vector {} is neither the tetrahedron nor the icosahedron",
                        x.f_vector()
                    )));
                };
                match kind {
                    Summand::T => out.t += 1,
                    Summand::I => out.i += 1,
                }
                out.leaves.push(Leaf { kind, facets: x.facet_lists() });
            }
        }
    }
    Ok(out)
}

/// Lexicographically first 3-cycle of the graph that is not a face.
fn empty_triangle(x: &Complex) -> Option<[VertexId; 3]> {
    let g = x.graph();
    for a in 0..g.len() {
        for &b in g.neighbours(a).iter().filter(|&&b| b > a) {
            for &c in g.neighbours(b).iter().filter(|&&c| c > b) {
                let t = [g.label(a), g.label(b), g.label(c)];
                if g.adjacent(a, c) && !x.contains(&t) {
                    return Some(t);
                }
            }
        }
    }
    None
}

/// Cut a 2-sphere along the empty triangle `t`: the triangles fall into two
/// classes when adjacency across the three cut edges is forbidden.
fn split(x: &Complex, t: [VertexId; 3]) -> Result<[Complex; 2]> {
    let facets = x.facets();
    let cut_edges = [[t[0], t[1]], [t[0], t[2]], [t[1], t[2]]];
    let mut by_edge: BTreeMap<Face, Vec<usize>> = BTreeMap::new();
    for (i, f) in facets.iter().enumerate() {
        for e in f.boundary() {
            by_edge.entry(e).or_default().push(i);
        }
    }
    let mut side = vec![usize::MAX; facets.len()];
    let mut classes = 0;
    for start in 0..facets.len() {
        if side[start] != usize::MAX {
            continue;
        }
        side[start] = classes;
        let mut todo = vec![start];
        while let Some(i) = todo.pop() {
            for e in facets[i].boundary() {
                if cut_edges.iter().any(|c| c == e.vertices()) {
                    continue;
                }
                for &j in &by_edge[&e] {
                    if side[j] == usize::MAX {
                        side[j] = classes;
                        todo.push(j);
                    }
                }
            }
        }
        classes += 1;
    }
    if classes != 2 {
        return Err(Error::HypothesisViolated(format!("cutting along {t:?} leaves {classes} pieces")));
    }
    let piece = |k: usize| {
        Complex::from_facets(
            facets
                .iter()
                .zip(&side)
                .filter(|(_, &s)| s == k)
                .map(|(f, _)| f.vertices().to_vec())
                .chain(std::iter::once(t.to_vec())),
        )
    };
    Ok([piece(0)?, piece(1)?])
}
