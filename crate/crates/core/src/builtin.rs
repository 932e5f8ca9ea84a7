//! Named complexes addressable as `builtin:<name>`.

use crate::complex::{Complex, Face, VertexId};
use crate::error::{Error, Result};

/// Boundary of the `n`-simplex on vertices `0..=n`.
pub fn boundary_simplex(n: usize) -> Complex {
    Complex::simplex_boundary(0..=n as VertexId).expect("n >= 1")
}

/// Boundary of the icosahedron. Labels `0..=5` are the unprimed vertices of
/// the standard listing and `6..=11` stand for `0'..5'`.
pub fn icosahedron() -> Complex {
    const P: u32 = 6;
    let triangles: [[u32; 3]; 20] = [
        [0, 1, 2],
        [0, 1, 5],
        [0, 2, 3],
        [0, 3, 4],
        [0, 4, 5],
        [1, 2, 4 + P],
        [1, 5, 3 + P],
        [1, 3 + P, 4 + P],
        [2, 3, 5 + P],
        [2, 4 + P, 5 + P],
        [3, 4, 1 + P],
        [3, 1 + P, 5 + P],
        [4, 5, 2 + P],
        [4, 1 + P, 2 + P],
        [5, 2 + P, 3 + P],
        [P, 1 + P, 2 + P],
        [P, 1 + P, 5 + P],
        [P, 2 + P, 3 + P],
        [P, 3 + P, 4 + P],
        [P, 4 + P, 5 + P],
    ];
    Complex::from_facets(triangles).expect("valid triangles")
}

/// The 5-vertex Möbius band: triangles `{x} ∪ e_x` where `e_x` is the edge of
/// the boundary cycle `0-1-2-3-4` opposite to `x`.
pub fn moebius_5() -> Complex {
    moebius_on(&[0, 1, 2, 3, 4])
}

/// Möbius band whose boundary is the 5-cycle `c`, in cyclic order.
pub fn moebius_on(c: &[VertexId]) -> Complex {
    assert_eq!(c.len(), 5);
    Complex::from_facets((0..5).map(|i| [c[i], c[(i + 2) % 5], c[(i + 3) % 5]])).expect("distinct labels")
}

/// The 6-vertex real projective plane: the Möbius band coned off at vertex 5.
pub fn rp2_6() -> Complex {
    let c = [0, 1, 2, 3, 4];
    let mut facets: Vec<[VertexId; 3]> = (0..5).map(|i| [c[i], c[(i + 2) % 5], c[(i + 3) % 5]]).collect();
    facets.extend((0..5).map(|i| [5, c[i], c[(i + 1) % 5]]));
    Complex::from_facets(facets).expect("valid triangles")
}

pub fn cycle(n: usize) -> Complex {
    let labels: Vec<VertexId> = (0..n as VertexId).collect();
    cycle_on(&labels)
}

/// The cycle through `labels` in the given order.
pub fn cycle_on(labels: &[VertexId]) -> Complex {
    let n = labels.len();
    assert!(n >= 3);
    Complex::from_facets((0..n).map(|i| [labels[i], labels[(i + 1) % n]])).expect("distinct labels")
}

pub fn complete(n: usize) -> Complex {
    if n == 1 {
        return Complex::from_faces([Face::from_sorted(vec![0])]);
    }
    let mut edges = Vec::new();
    for a in 0..n as VertexId {
        for b in a + 1..n as VertexId {
            edges.push([a, b]);
        }
    }
    Complex::from_facets(edges).expect("valid edges")
}

/// `K_{m,n}` with sides `0..m` and `m..m+n`.
pub fn complete_bipartite(m: usize, n: usize) -> Complex {
    let mut edges = Vec::new();
    for a in 0..m as VertexId {
        for b in m as VertexId..(m + n) as VertexId {
            edges.push([a, b]);
        }
    }
    Complex::from_facets(edges).expect("valid edges")
}

/// Resolve a builtin name such as `icosahedron`, `cycle:7` or `complete-bipartite:3,3`.
pub fn by_name(name: &str) -> Result<Complex> {
    let (head, arg) = match name.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (name, None),
    };
    let num = |s: &str| -> Result<usize> {
        s.trim().parse::<usize>().map_err(|_| Error::Malformed(format!("bad number {s:?} in builtin:{name}")))
    };
    let c = match (head, arg) {
        ("boundary-delta3", None) => boundary_simplex(3),
        ("boundary-delta4", None) => boundary_simplex(4),
        ("icosahedron", None) => icosahedron(),
        ("rp2-6", None) => rp2_6(),
        ("moebius-5", None) => moebius_5(),
        ("cycle", Some(a)) => {
            let n = num(a)?;
            if n < 3 {
                return Err(Error::Malformed("cycle needs at least 3 vertices".into()));
            }
            cycle(n)
        }
        ("complete", Some(a)) => {
            let n = num(a)?;
            if n == 0 {
                return Err(Error::Malformed("complete graph needs a vertex".into()));
            }
            complete(n)
        }
        ("complete-bipartite", Some(a)) => {
            let (m, n) =
                a.split_once(',').ok_or_else(|| Error::Malformed(format!("expected m,n in builtin:{name}")))?;
            let (m, n) = (num(m)?, num(n)?);
            if m == 0 || n == 0 {
                return Err(Error::Malformed("complete bipartite sides must be nonempty".into()));
            }
            complete_bipartite(m, n)
        }
        _ => return Err(Error::Malformed(format!("unknown builtin {name:?}"))),
    };
    Ok(c)
}

pub const NAMES: &[&str] = &[
    "boundary-delta3",
    "boundary-delta4",
    "icosahedron",
    "rp2-6",
    "moebius-5",
    "cycle:<n>",
    "complete:<n>",
    "complete-bipartite:<m>,<n>",
];
