use rayon::prelude::*;
use serde::Serialize;

use crate::builtin;
use crate::complex::{Complex, Graph, VertexId};
use crate::error::{Error, Result};
use crate::Verdict;

/// A chordless cycle, listed from its smallest vertex towards the smaller of
/// that vertex's two cycle neighbours.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CycleWitness {
    pub cycle: Vec<VertexId>,
    pub len: usize,
    pub residue: usize,
}

impl CycleWitness {
    fn new(cycle: Vec<VertexId>) -> Self {
        let len = cycle.len();
        CycleWitness { cycle, len, residue: len % 3 }
    }
}

/// All chordless cycles of the 1-skeleton of `g` with at most `max_len`
/// vertices, each once up to rotation and reflection, sorted by length and
/// then lexicographically.
pub fn induced_cycles(g: &Complex, max_len: usize) -> Vec<CycleWitness> {
    let graph = g.graph();
    let mut out: Vec<CycleWitness> = (0..graph.len())
        .into_par_iter()
        .flat_map_iter(|s| {
            let mut found = Vec::new();
            let mut path = vec![s];
            extend(&graph, max_len, &mut path, &mut found);
            found.into_iter().map(|c: Vec<usize>| CycleWitness::new(c.iter().map(|&i| graph.label(i)).collect()))
        })
        .collect();
    out.sort_by(|a, b| a.len.cmp(&b.len).then_with(|| a.cycle.cmp(&b.cycle)));
    out
}

/// Grow the induced path `path` (all vertices above `path[0]`) and record
/// every way of closing it into a chordless cycle.
fn extend(g: &Graph, max_len: usize, path: &mut Vec<usize>, found: &mut Vec<Vec<usize>>) {
    let s = path[0];
    let last = *path.last().expect("nonempty path");
    for &w in g.neighbours(last) {
        if w <= s || path.contains(&w) {
            continue;
        }
        // interior vertices other than the start and the current end
        if path.len() > 2 && path[1..path.len() - 1].iter().any(|&u| g.adjacent(u, w)) {
            continue;
        }
        if path.len() >= 2 && g.adjacent(s, w) {
            if path[1] < w && path.len() < max_len {
                let mut c = path.clone();
                c.push(w);
                found.push(c);
            }
            continue;
        }
        // w must still be able to close later: one more vertex at least
        if path.len() + 2 > max_len {
            continue;
        }
        path.push(w);
        extend(g, max_len, path, found);
        path.pop();
    }
}

/// Does the 1-skeleton avoid chordless cycles of length `1 mod 3`? The first
/// such cycle (shortest, then lexicographic) is the witness.
pub fn mod3_obstruction(s: &Complex) -> Verdict<CycleWitness> {
    match induced_cycles(s, s.num_vertices()).into_iter().find(|c| c.residue == 1) {
        Some(c) => Verdict::fail(c),
        None => Verdict::pass(),
    }
}

fn check_cycle(x: &Complex, c: &[VertexId], len: usize) -> Result<()> {
    if c.len() != len {
        return Err(Error::NotACycle(format!("{c:?} does not have {len} vertices")));
    }
    let mut sorted = c.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != len {
        return Err(Error::NotACycle(format!("{c:?} repeats a vertex")));
    }
    for i in 0..len {
        let (a, b) = (c[i], c[(i + 1) % len]);
        if !x.contains(&[a.min(b), a.max(b)]) {
            return Err(Error::NotACycle(format!("{{{a},{b}}} is not an edge")));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacetDiff {
    /// Faces of the expected band absent from the induced subcomplex.
    pub missing: Vec<Vec<VertexId>>,
    /// Facets of the induced subcomplex that the band does not have.
    pub extra: Vec<Vec<VertexId>>,
}

/// Is `X[V(C)]` exactly the 5-vertex Möbius band whose boundary is the
/// 5-cycle `c` (given in cyclic order)?
pub fn verify_moebius(x: &Complex, c: &[VertexId]) -> Result<Verdict<FacetDiff>> {
    check_cycle(x, c, 5)?;
    let induced = x.induced(c)?;
    let band = builtin::moebius_on(c);
    if induced == band {
        return Ok(Verdict::pass());
    }
    let missing = band.facets().iter().filter(|f| !induced.contains_face(f)).map(|f| f.vertices().to_vec()).collect();
    let extra = induced.facets().iter().filter(|f| !band.contains_face(f)).map(|f| f.vertices().to_vec()).collect();
    Ok(Verdict::fail(FacetDiff { missing, extra }))
}

/// Does the 3-cycle `c` bound a triangle of `x`?
pub fn triangle_bound_check(x: &Complex, c: &[VertexId]) -> Result<Verdict<Vec<VertexId>>> {
    check_cycle(x, c, 3)?;
    let mut t = c.to_vec();
    t.sort_unstable();
    Ok(if x.contains(&t) { Verdict::pass() } else { Verdict::fail(t) })
}
