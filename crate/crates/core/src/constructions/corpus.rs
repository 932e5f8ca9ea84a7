//! Generators for test corpora: classical small complexes, random 2-spheres
//! and a mixed family of closed 3-manifolds on at most twelve vertices.

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::builtin;
use crate::complex::{Complex, Face, VertexId};
use crate::error::{Error, Result};
use crate::stackedness::Summand;

use super::{
    admissible_handles, handle_addition, stacked_sphere, stacked_sphere_from_steps, stacked_sphere_with_steps,
    subdivide_facet, Certificate, HandleStep, Seed, StackStep,
};

/// The 7-vertex torus: triangles `{i, i+1, i+3}` and `{i, i+2, i+3}` mod 7.
pub fn torus_7() -> Complex {
    Complex::from_facets((0..7u32).flat_map(|i| [[i, (i + 1) % 7, (i + 3) % 7], [i, (i + 2) % 7, (i + 3) % 7]]))
        .expect("valid triangles")
}

/// Boundary of the cyclic `d`-polytope on `n` vertices, by Gale's evenness
/// condition.
pub fn cyclic_polytope_boundary(n: usize, d: usize) -> Result<Complex> {
    if d < 2 || n <= d {
        return Err(Error::Malformed(format!("cyclic polytope C({n},{d}) needs 2 <= d < n")));
    }
    let facets: Vec<Vec<VertexId>> = (0..n as VertexId)
        .combinations(d)
        .filter(|s| {
            (0..n as VertexId)
                .filter(|v| !s.contains(v))
                .tuple_combinations()
                .all(|(i, j)| s.iter().filter(|&&v| i < v && v < j).count() % 2 == 0)
        })
        .collect();
    Complex::from_facets(facets)
}

pub fn suspension(x: &Complex) -> Complex {
    let top = x.vertices().last().map_or(0, |v| v + 1);
    Complex::from_faces(x.facets().iter().flat_map(|f| [f.with(top), f.with(top + 1)]))
}

/// The join of `x` with a copy of `y` relabelled above the vertices of `x`.
pub fn join(x: &Complex, y: &Complex) -> Complex {
    let shift = x.vertices().last().map_or(0, |v| v + 1);
    let ys: Vec<Vec<VertexId>> = y.facets().iter().map(|f| f.vertices().iter().map(|v| v + shift).collect()).collect();
    Complex::from_facets(x.facets().iter().flat_map(|f| ys.iter().map(move |g| [f.vertices(), g.as_slice()].concat())))
        .expect("disjoint labels")
}

/// Connected sum of the listed tetrahedron and icosahedron boundaries, each
/// glued onto a random facet of what has been built so far along a random
/// bijection.
pub fn random_ti_sum<R: Rng>(summands: &[Summand], rng: &mut R) -> Result<Complex> {
    let piece = |s: Summand| match s {
        Summand::T => builtin::boundary_simplex(3),
        Summand::I => builtin::icosahedron(),
    };
    let (first, rest) = summands.split_first().ok_or_else(|| Error::Malformed("no summands".into()))?;
    let mut x = piece(*first);
    for &s in rest {
        let y = piece(s);
        let fx = x.facets().choose(rng).expect("nonempty").clone();
        let fy = y.facets().choose(rng).expect("nonempty").clone();
        let mut image = fx.vertices().to_vec();
        image.shuffle(rng);
        let phi: Vec<_> = fy.vertices().iter().copied().zip(image).collect();
        x = x.connected_sum(&y, &fx, &fy, &phi)?;
    }
    Ok(x)
}

/// Flip the edge `{a, b}` of a 2-sphere: its two triangles `abc`, `abd` are
/// replaced by `acd`, `bcd`. `None` when `cd` is already an edge or the edge
/// is not flippable.
pub fn flip_edge(x: &Complex, a: VertexId, b: VertexId) -> Option<Complex> {
    let e = Face::new([a, b]).ok()?;
    let tris: Vec<&Face> = x.facets().iter().filter(|f| e.is_subset_of(f)).collect();
    if tris.len() != 2 {
        return None;
    }
    let c = *tris[0].vertices().iter().find(|&&v| v != a && v != b)?;
    let d = *tris[1].vertices().iter().find(|&&v| v != a && v != b)?;
    if x.contains(&[c.min(d), c.max(d)]) {
        return None;
    }
    let new = [Face::new([a, c, d]).ok()?, Face::new([b, c, d]).ok()?];
    Some(Complex::from_faces(x.facets().iter().filter(|f| !e.is_subset_of(f)).cloned().chain(new)))
}

/// `count` triangulated 2-spheres: stacked spheres, random T/I sums, and
/// stacked spheres scrambled by random edge flips.
pub fn sphere2_corpus(count: usize, seed: u64) -> Vec<Complex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| match i % 3 {
            0 => stacked_sphere(rng.gen_range(4..40), 2, rng.gen()).expect("valid size"),
            1 => {
                let m = rng.gen_range(1..=4);
                let summands: Vec<Summand> =
                    (0..m).map(|_| if rng.gen_bool(0.5) { Summand::T } else { Summand::I }).collect();
                random_ti_sum(&summands, &mut rng).expect("valid summands")
            }
            _ => {
                let mut x = stacked_sphere(rng.gen_range(6..30), 2, rng.gen()).expect("valid size");
                for _ in 0..3 * x.num_vertices() {
                    let edges = x.faces(1);
                    let e = edges[rng.gen_range(0..edges.len())].clone();
                    if let Some(y) = flip_edge(&x, e.vertices()[0], e.vertices()[1]) {
                        x = y;
                    }
                }
                x
            }
        })
        .collect()
}

/// The stacked 3-sphere grown along a path: vertex `v >= 5` subdivides the
/// facet `{v-4, .., v-1}`.
pub fn path_stacked_sphere(n: usize) -> Result<Complex> {
    stacked_sphere_from_steps(3, &path_stacking(n))
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub complex: Complex,
    /// Present for stacked spheres and their handle quotients.
    pub certificate: Option<Certificate>,
}

impl CorpusEntry {
    fn plain(name: impl Into<String>, complex: Complex) -> Self {
        CorpusEntry { name: name.into(), complex, certificate: None }
    }

    fn certified(name: impl Into<String>, complex: Complex, steps: Vec<StackStep>, handles: Vec<HandleStep>) -> Self {
        let certificate = Certificate {
            seed: Seed::Stacking { dim: 3, steps },
            steps: handles,
            f_vector: complex.f_vector().0,
            rng_seed: None,
            restart: None,
        };
        CorpusEntry { name: name.into(), complex, certificate: Some(certificate) }
    }
}

/// Closed 3-manifolds on at most 12 vertices: stacked spheres, handle
/// quotients of path-like stacked spheres, neighbourly cyclic polytopes,
/// joins and suspensions, and facet subdivisions of the quotients.
pub fn closed_3manifold_corpus(seed: u64) -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for n in 5..=12 {
        for s in 0..4 {
            let s = seed.wrapping_mul(31).wrapping_add(s);
            let (x, steps) = stacked_sphere_with_steps(n, 3, s).expect("valid size");
            out.push(CorpusEntry::certified(format!("stacked n={n} seed={s}"), x, steps, Vec::new()));
        }
    }
    for n in 6..=12 {
        out.push(CorpusEntry::plain(format!("cyclic C({n},4)"), cyclic_polytope_boundary(n, 4).expect("valid size")));
    }
    out.push(CorpusEntry::plain("join tri*tri", join(&builtin::cycle(3), &builtin::cycle(3))));
    out.push(CorpusEntry::plain("suspension tetra", suspension(&builtin::boundary_simplex(3))));
    out.push(CorpusEntry::plain("suspension stacked6", suspension(&stacked_sphere(6, 2, seed).expect("valid size"))));
    let octa = join(&builtin::cycle(4), &Complex::from_facets([[0], [1]]).expect("two points"));
    out.push(CorpusEntry::plain("suspension octahedron", suspension(&octa)));

    for n in 13..=16 {
        let steps = path_stacking(n);
        let s = stacked_sphere_from_steps(3, &steps).expect("valid size");
        let handles = admissible_handles(&s);
        let mut picks: Vec<usize> = vec![0, handles.len() / 2, handles.len() - 1];
        picks.dedup();
        for i in picks {
            let m = handle_addition(&s, &handles[i]).expect("admissible");
            if m.num_vertices() < 12 {
                let f = m.facets()[m.facets().len() / 2].clone();
                let top = m.vertices().last().expect("nonempty") + 1;
                let sub = subdivide_facet(&m, &f, top).expect("facet");
                out.push(CorpusEntry::plain(format!("subdivided quotient n={n} #{i}"), sub));
            }
            out.push(CorpusEntry::certified(
                format!("handle quotient of path sphere n={n} #{i}"),
                m,
                steps.clone(),
                vec![handles[i].clone()],
            ));
        }
    }
    out
}

fn path_stacking(n: usize) -> Vec<StackStep> {
    (5..n as VertexId).map(|v| StackStep { facet: (v - 4..v).collect() }).collect()
}
