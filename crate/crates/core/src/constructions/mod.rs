//! Stacked spheres, elementary handle additions, the `80k + 1` arithmetic,
//! certificates and the randomized search for neighbourly handle quotients.

mod corpus;
mod search;

use std::fmt;

use itertools::Itertools;
use num_integer::Roots;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{face_bijection, Complex, Face, VertexId};
use crate::error::{Error, Result};
use crate::homology::is_orientable;
use crate::linalg::FieldSpec;
use crate::manifold::{require_closed, verify_closed_manifold};
use crate::stackedness::verify_stacked_certificate;

pub use corpus::{
    closed_3manifold_corpus, cyclic_polytope_boundary, flip_edge, join, path_stacked_sphere, random_ti_sum,
    sphere2_corpus, suspension, torus_7, CorpusEntry,
};
pub use search::{search_tight, SearchOptions, SearchOutcome, SearchResult};

/// Subdivide `facet` with a new vertex: a bistellar 0-move, or equivalently
/// a connected sum with a simplex boundary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StackStep {
    pub facet: Vec<VertexId>,
}

pub fn subdivide_facet(x: &Complex, facet: &Face, apex: VertexId) -> Result<Complex> {
    if !x.is_facet(facet) {
        return Err(Error::not_facet(facet));
    }
    if x.has_vertex(apex) {
        return Err(Error::Malformed(format!("vertex {apex} already present")));
    }
    let cone = facet.boundary().map(|f| f.with(apex));
    Ok(Complex::from_faces(x.facets().iter().filter(|f| *f != facet).cloned().chain(cone)))
}

/// Replay stacking steps on the boundary of the `(d+1)`-simplex on
/// `0..=d+1`; the `i`-th step introduces vertex `d + 2 + i`.
pub fn stacked_sphere_from_steps(d: usize, steps: &[StackStep]) -> Result<Complex> {
    if !(1..=3).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    let mut x = Complex::simplex_boundary(0..=(d as VertexId + 1))?;
    for (i, step) in steps.iter().enumerate() {
        let f = Face::new(step.facet.iter().copied())?;
        if f.dim() != d {
            return Err(Error::DimensionMismatch(format!("stacking facet {f} in dimension {d}")));
        }
        x = subdivide_facet(&x, &f, (d + 2 + i) as VertexId)?;
    }
    Ok(x)
}

fn check_stacking_args(n: usize, d: usize) -> Result<()> {
    if !(2..=3).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    if n < d + 2 {
        return Err(Error::Malformed(format!("a stacked {d}-sphere needs at least {} vertices, got {n}", d + 2)));
    }
    Ok(())
}

/// Stacking steps subdividing a uniformly random facet each time.
pub fn random_stacking<R: Rng>(n: usize, d: usize, rng: &mut R) -> Result<Vec<StackStep>> {
    check_stacking_args(n, d)?;
    let mut x = Complex::simplex_boundary(0..=(d as VertexId + 1))?;
    let mut steps = Vec::with_capacity(n - d - 2);
    for v in (d + 2)..n {
        let f = x.facets()[rng.gen_range(0..x.facets().len())].clone();
        x = subdivide_facet(&x, &f, v as VertexId)?;
        steps.push(StackStep { facet: f.into_vec() });
    }
    Ok(steps)
}

/// Stacking steps that always subdivide a facet through the newest vertex.
/// With probability `p` the chosen facet is the one avoiding the oldest
/// vertex of that star, which grows the sphere along a path; otherwise it is
/// uniform among the star.
pub fn elongated_stacking<R: Rng>(n: usize, d: usize, p: f64, rng: &mut R) -> Result<Vec<StackStep>> {
    check_stacking_args(n, d)?;
    let mut x = Complex::simplex_boundary(0..=(d as VertexId + 1))?;
    let mut steps = Vec::with_capacity(n - d - 2);
    for v in (d + 2)..n {
        let newest = v as VertexId - 1;
        let star: Vec<Face> = x.star_facets(newest).into_iter().cloned().collect();
        let f = if rng.gen_bool(p.clamp(0.0, 1.0)) {
            star.iter().max_by_key(|f| f.vertices()[0]).expect("nonempty star").clone()
        } else {
            star[rng.gen_range(0..star.len())].clone()
        };
        x = subdivide_facet(&x, &f, v as VertexId)?;
        steps.push(StackStep { facet: f.into_vec() });
    }
    Ok(steps)
}

/// A stacked `d`-sphere on `n` vertices labelled `0..n`, deterministic in `seed`.
pub fn stacked_sphere(n: usize, d: usize, seed: u64) -> Result<Complex> {
    stacked_sphere_with_steps(n, d, seed).map(|(x, _)| x)
}

pub fn stacked_sphere_with_steps(n: usize, d: usize, seed: u64) -> Result<(Complex, Vec<StackStep>)> {
    let steps = random_stacking(n, d, &mut ChaCha8Rng::seed_from_u64(seed))?;
    Ok((stacked_sphere_from_steps(d, &steps)?, steps))
}

/// One elementary handle addition: `facet1` and `facet2` are removed and
/// each `b` is identified with `a` for `(a, b)` in `bijection`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HandleStep {
    pub facet1: Vec<VertexId>,
    pub facet2: Vec<VertexId>,
    pub bijection: Vec<(VertexId, VertexId)>,
}

/// Check that the handle step is admissible on `x`: the facets are
/// disjoint facets, the bijection is one, and each vertex is at graph
/// distance at least 3 from its partner.
pub fn check_handle(x: &Complex, step: &HandleStep) -> Result<()> {
    let s1 = Face::new(step.facet1.iter().copied())?;
    let s2 = Face::new(step.facet2.iter().copied())?;
    let d = x.dim().ok_or_else(|| Error::Malformed("empty complex".into()))?;
    for s in [&s1, &s2] {
        if s.dim() != d || !x.is_facet(s) {
            return Err(Error::not_facet(s));
        }
    }
    if !s1.is_disjoint(&s2) {
        return Err(Error::FacetsIntersect(s1.into_vec(), s2.into_vec()));
    }
    let psi = face_bijection(&s1, &s2, &step.bijection)?;
    let g = x.graph();
    for (&a, &b) in &psi {
        let (i, j) = (g.index_of(a).expect("facet vertex"), g.index_of(b).expect("facet vertex"));
        match g.distances(i)[j] {
            1 => return Err(Error::Inadmissible(format!("{a} and {b} are adjacent"))),
            2 => {
                let c = g.neighbours(i).iter().find(|&&k| g.adjacent(k, j)).map(|&k| g.label(k));
                return Err(Error::Inadmissible(format!("{a} and {b} have the common neighbour {}", c.unwrap_or(a))));
            }
            _ => {}
        }
    }
    Ok(())
}

/// Remove `facet1` and `facet2` of the connected closed 3-manifold `x` and
/// identify their boundaries along the bijection. The labels of `facet1`
/// survive.
pub fn handle_addition(x: &Complex, step: &HandleStep) -> Result<Complex> {
    require_closed(x, 3)?;
    if !x.is_connected() {
        return Err(Error::not_manifold(3, "disconnected"));
    }
    check_handle(x, step)?;
    let (s1, s2) = (Face::new(step.facet1.iter().copied())?, Face::new(step.facet2.iter().copied())?);
    let back: std::collections::BTreeMap<VertexId, VertexId> = step.bijection.iter().map(|&(a, b)| (b, a)).collect();
    let facets: Vec<Vec<VertexId>> = x
        .facets()
        .iter()
        .filter(|f| **f != s1 && **f != s2)
        .map(|f| f.vertices().iter().map(|v| *back.get(v).unwrap_or(v)).collect())
        .collect();
    let y = Complex::from_facets(&facets)?;
    let report = verify_closed_manifold(&y)?;
    if !report.holds || y.facets().len() != facets.len() {
        let why =
            report.defect.map(|d| format!("{:?}: {}", d.face, d.reason)).unwrap_or_else(|| "facets collapsed".into());
        return Err(Error::Inadmissible(format!("quotient is not a closed 3-manifold ({why})")));
    }
    Ok(y)
}

/// All admissible handle steps on `x`, ordered by facet pair and then by
/// the bijection in lexicographic order of images.
pub fn admissible_handles(x: &Complex) -> Vec<HandleStep> {
    let g = x.graph();
    let dist: Vec<Vec<usize>> = (0..g.len()).map(|i| g.distances(i)).collect();
    let idx = |v: VertexId| g.index_of(v).expect("vertex");
    let facets = x.facets();
    let mut out = Vec::new();
    for (i, f1) in facets.iter().enumerate() {
        for f2 in &facets[i + 1..] {
            if !f1.is_disjoint(f2) {
                continue;
            }
            for image in f2.vertices().iter().copied().permutations(f2.len()) {
                let ok = f1.vertices().iter().zip(&image).all(|(&a, &b)| dist[idx(a)][idx(b)] >= 3);
                if ok {
                    out.push(HandleStep {
                        facet1: f1.vertices().to_vec(),
                        facet2: f2.vertices().to_vec(),
                        bijection: f1.vertices().iter().copied().zip(image).collect(),
                    });
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibleK {
    pub k: u64,
    pub f0: u64,
}

/// The `k` for which a tight handle quotient could exist: `80k + 1` is a
/// perfect square, and then `f0 = (9 + sqrt(80k + 1)) / 2`.
pub fn admissible_k(limit: u64) -> Vec<AdmissibleK> {
    (1..=limit).filter_map(|k| admissible_f0(k).map(|f0| AdmissibleK { k, f0 })).collect()
}

pub fn admissible_f0(k: u64) -> Option<u64> {
    let m = 80 * k + 1;
    let r = m.sqrt();
    (r * r == m).then_some((9 + r) / 2)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Seed {
    /// Stacking steps applied to the simplex boundary on `0..=dim+1`.
    Stacking { dim: usize, steps: Vec<StackStep> },
    /// An explicit stacked sphere.
    Facets { dim: usize, facets: Vec<Vec<VertexId>> },
}

impl Seed {
    pub fn dim(&self) -> usize {
        match self {
            Seed::Stacking { dim, .. } | Seed::Facets { dim, .. } => *dim,
        }
    }

    pub fn build(&self) -> Result<Complex> {
        match self {
            Seed::Stacking { dim, steps } => stacked_sphere_from_steps(*dim, steps),
            Seed::Facets { facets, .. } => Complex::from_facets(facets),
        }
    }
}

/// How to rebuild a complex: a stacked sphere followed by handle additions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub seed: Seed,
    pub steps: Vec<HandleStep>,
    pub f_vector: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rng_seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restart: Option<u64>,
}

impl Certificate {
    /// The trivial certificate for a simplex boundary.
    pub fn simplex(d: usize) -> Result<Certificate> {
        let x = stacked_sphere_from_steps(d, &[])?;
        Ok(Certificate {
            seed: Seed::Stacking { dim: d, steps: Vec::new() },
            steps: Vec::new(),
            f_vector: x.f_vector().0,
            rng_seed: None,
            restart: None,
        })
    }

    pub fn k(&self) -> usize {
        self.steps.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Topology {
    S3,
    OrientableHandleSum { k: usize },
    NonorientableHandleSum { k: usize },
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Topology::S3 => write!(f, "S3"),
            Topology::OrientableHandleSum { k } => write!(f, "orientable-handle-sum({k})"),
            Topology::NonorientableHandleSum { k } => write!(f, "nonorientable-handle-sum({k})"),
        }
    }
}

/// Name the topological type of `m` from a certificate that rebuilds it.
pub fn classify_topology(m: &Complex, cert: &Certificate) -> Result<Topology> {
    let v = verify_stacked_certificate(m, cert)?;
    if !v.holds {
        return Err(Error::Replay(v.witness.unwrap_or_default()));
    }
    let k = cert.k();
    Ok(if k == 0 {
        Topology::S3
    } else if is_orientable(m, FieldSpec::Rationals)? {
        Topology::OrientableHandleSum { k }
    } else {
        Topology::NonorientableHandleSum { k }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::homology::betti;

    /// The sphere grown along a path: vertex `v >= 5` subdivides `{v-4, .., v-1}`.
    fn path_sphere(n: usize) -> Complex {
        let steps: Vec<StackStep> = (5..n as u32).map(|v| StackStep { facet: (v - 4..v).collect() }).collect();
        stacked_sphere_from_steps(3, &steps).unwrap()
    }

    fn shift_handle(n: u32) -> HandleStep {
        HandleStep {
            facet1: vec![0, 1, 2, 3],
            facet2: (n - 4..n).collect(),
            bijection: (0..4).map(|i| (i, n - 4 + i)).collect(),
        }
    }

    #[test]
    fn small_stacked_spheres() {
        assert_eq!(stacked_sphere(5, 3, 1).unwrap(), builtin::boundary_simplex(4));
        let x = stacked_sphere(6, 2, 9).unwrap();
        assert_eq!(x.f_vector().0, vec![6, 12, 8]);
        let g = x.graph();
        assert_eq!((0..6).map(|i| g.degree(i)).min(), Some(3));
        let x = stacked_sphere(13, 3, 4).unwrap();
        assert_eq!(x.f_vector().0, vec![13, 42, 58, 29]);
        assert!(stacked_sphere(4, 3, 0).is_err());
        assert!(stacked_sphere(8, 4, 0).is_err());
    }

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(stacked_sphere(20, 3, 77).unwrap(), stacked_sphere(20, 3, 77).unwrap());
        assert_ne!(stacked_sphere(20, 3, 77).unwrap(), stacked_sphere(20, 3, 78).unwrap());
    }

    #[test]
    fn nine_vertex_quotient() {
        let s = path_sphere(13);
        assert_eq!(s.f_vector().0, vec![13, 42, 58, 29]);
        let m = handle_addition(&s, &shift_handle(13)).unwrap();
        assert_eq!(m.f_vector().0, vec![9, 36, 54, 27]);
        assert!(m.is_neighbourly());
        assert_eq!(betti(&m, FieldSpec::GF2).unwrap().betti, vec![1, 1, 1, 1]);
        assert_eq!(betti(&m, FieldSpec::Rationals).unwrap().get(3), 0);
    }

    #[test]
    fn inadmissible_handles() {
        let s = path_sphere(13);
        // 0 and 4 are adjacent; 0 and 5 share the neighbour 1
        let adjacent = HandleStep {
            facet1: vec![0, 1, 2, 3],
            facet2: vec![4, 6, 7, 8],
            bijection: vec![(0, 4), (1, 6), (2, 7), (3, 8)],
        };
        assert!(matches!(handle_addition(&s, &adjacent), Err(Error::Inadmissible(m)) if m.contains("adjacent")));
        let near = HandleStep {
            facet1: vec![0, 1, 2, 3],
            facet2: vec![5, 7, 8, 9],
            bijection: vec![(0, 5), (1, 7), (2, 8), (3, 9)],
        };
        assert!(matches!(handle_addition(&s, &near), Err(Error::Inadmissible(m)) if m.contains("common neighbour")));
        let mut overlap = shift_handle(13);
        overlap.facet2 = vec![0, 2, 3, 4];
        overlap.bijection = vec![(0, 0), (1, 2), (2, 3), (3, 4)];
        assert!(matches!(handle_addition(&s, &overlap), Err(Error::FacetsIntersect(..))));
    }

    #[test]
    fn admissibility_enumeration_matches_direct_check() {
        let s = path_sphere(14);
        let all = admissible_handles(&s);
        assert!(!all.is_empty());
        for h in &all {
            check_handle(&s, h).unwrap();
            let m = handle_addition(&s, h).unwrap();
            let (a, b) = (s.f_vector().0, m.f_vector().0);
            assert_eq!(a.iter().zip(&b).map(|(x, y)| x - y).collect::<Vec<_>>(), vec![4, 6, 4, 2]);
        }
    }

    #[test]
    fn admissible_k_table() {
        let ks = admissible_k(600);
        // independent oracle: scan f0 and solve (f0 - 4)(f0 - 5) = 20k
        let expected: Vec<(u64, u64)> = (5..200u64)
            .filter(|f| ((f - 4) * (f - 5)) % 20 == 0)
            .map(|f| ((f - 4) * (f - 5) / 20, f))
            .filter(|&(k, _)| (1..=600).contains(&k))
            .collect();
        assert_eq!(ks.iter().map(|a| (a.k, a.f0)).collect::<Vec<_>>(), expected);
        assert_eq!(ks.len(), 21);
        for (k, f0) in [(1, 9), (30, 29), (99, 49), (208, 69), (357, 89), (546, 109), (12, 20)] {
            assert!(ks.contains(&AdmissibleK { k, f0 }));
        }
        for a in ks {
            assert_eq!((a.f0 - 4) * (a.f0 - 5), 20 * a.k);
        }
        assert_eq!(admissible_f0(2), None);
    }

    #[test]
    fn classification() {
        let cert = Certificate::simplex(3).unwrap();
        assert_eq!(classify_topology(&builtin::boundary_simplex(4), &cert).unwrap(), Topology::S3);
        let s = path_sphere(13);
        let h = shift_handle(13);
        let m = handle_addition(&s, &h).unwrap();
        let cert = Certificate {
            seed: Seed::Facets { dim: 3, facets: s.facet_lists() },
            steps: vec![h],
            f_vector: m.f_vector().0,
            rng_seed: None,
            restart: None,
        };
        assert_eq!(classify_topology(&m, &cert).unwrap(), Topology::NonorientableHandleSum { k: 1 });
        assert_eq!(Topology::NonorientableHandleSum { k: 1 }.to_string(), "nonorientable-handle-sum(1)");
    }

    #[test]
    fn some_bijection_gives_an_orientable_handle() {
        let s = path_sphere(16);
        let found = admissible_handles(&s)
            .into_iter()
            .filter(|h| h.facet1 == vec![0, 1, 2, 3] && h.facet2 == vec![12, 13, 14, 15])
            .map(|h| handle_addition(&s, &h).unwrap())
            .any(|m| is_orientable(&m, FieldSpec::Rationals).unwrap());
        assert!(found);
    }
}
