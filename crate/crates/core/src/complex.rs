//! Abstract simplicial complexes stored by facets, with the full face lattice
//! derived once at construction.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = u32;

/// A nonempty, strictly increasing list of vertex labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Face(Vec<VertexId>);

impl Face {
    pub fn new(vertices: impl IntoIterator<Item = VertexId>) -> Result<Face> {
        let mut v: Vec<VertexId> = vertices.into_iter().collect();
        if v.is_empty() {
            return Err(Error::Malformed("empty face".into()));
        }
        v.sort_unstable();
        if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Malformed(format!("vertex {} repeated within a face", w[0])));
        }
        Ok(Face(v))
    }

    /// Caller guarantees `v` is sorted, nonempty and duplicate free.
    pub(crate) fn from_sorted(v: Vec<VertexId>) -> Face {
        debug_assert!(!v.is_empty() && v.windows(2).all(|w| w[0] < w[1]));
        Face(v)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_subset_of(&self, other: &Face) -> bool {
        is_sorted_subset(&self.0, &other.0)
    }

    pub fn is_disjoint(&self, other: &Face) -> bool {
        self.0.iter().all(|v| !other.contains(*v))
    }

    /// The face with `v` removed; `None` if that would leave it empty.
    pub fn without(&self, v: VertexId) -> Option<Face> {
        let rest: Vec<VertexId> = self.0.iter().copied().filter(|&u| u != v).collect();
        (!rest.is_empty()).then_some(Face(rest))
    }

    pub fn with(&self, v: VertexId) -> Face {
        let mut w = self.0.clone();
        if let Err(pos) = w.binary_search(&v) {
            w.insert(pos, v);
        }
        Face(w)
    }

    /// Codimension-one faces, in the order obtained by dropping position 0, 1, ...
    pub fn boundary(&self) -> impl Iterator<Item = Face> + '_ {
        (0..self.0.len()).filter(move |_| self.0.len() > 1).map(move |i| {
            let mut w = self.0.clone();
            w.remove(i);
            Face(w)
        })
    }

    pub fn into_vec(self) -> Vec<VertexId> {
        self.0
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

pub(crate) fn is_sorted_subset(a: &[VertexId], b: &[VertexId]) -> bool {
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

/// Face counts per dimension, `f_0, ..., f_d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FVector(pub Vec<usize>);

impl FVector {
    pub fn get(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.0.iter().enumerate().map(|(i, &f)| if i % 2 == 0 { f as i64 } else { -(f as i64) }).sum()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Display for FVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// An immutable finite simplicial complex.
///
/// Faces of each dimension are kept sorted lexicographically, so face indices
/// are stable and can be found by binary search. When the complex has at most
/// 64 vertices every face additionally carries a bitmask over vertex indices.
#[derive(Clone, Debug)]
pub struct Complex {
    vertices: Vec<VertexId>,
    facets: Vec<Face>,
    faces: Vec<Vec<Face>>,
    masks: Option<Vec<Vec<u64>>>,
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        self.facets == other.facets
    }
}

impl Eq for Complex {}

impl Complex {
    /// Downward closure of the given facets. Non-maximal inputs are absorbed
    /// and input order is irrelevant.
    pub fn from_facets<I, F>(facets: I) -> Result<Complex>
    where
        I: IntoIterator<Item = F>,
        F: AsRef<[VertexId]>,
    {
        let faces = facets.into_iter().map(|f| Face::new(f.as_ref().iter().copied())).collect::<Result<Vec<_>>>()?;
        Ok(Complex::from_faces(faces))
    }

    /// Downward closure of already validated faces.
    pub fn from_faces(faces: impl IntoIterator<Item = Face>) -> Complex {
        let mut input: Vec<Face> = faces.into_iter().collect();
        input.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        input.dedup();

        let mut closure: Vec<HashSet<Face>> = Vec::new();
        for face in input {
            let d = face.dim();
            if closure.len() <= d {
                closure.resize_with(d + 1, HashSet::new);
            }
            if closure[d].contains(&face) {
                continue;
            }
            let n = face.len();
            assert!(n < 32, "faces with {n} vertices are not supported");
            let verts = face.vertices();
            for bits in 1u32..(1u32 << n) {
                let sub: Vec<VertexId> = (0..n).filter(|i| bits >> i & 1 == 1).map(|i| verts[i]).collect();
                closure[sub.len() - 1].insert(Face(sub));
            }
        }

        let mut faces: Vec<Vec<Face>> = closure
            .into_iter()
            .map(|set| {
                let mut v: Vec<Face> = set.into_iter().collect();
                v.sort_unstable();
                v
            })
            .collect();
        while faces.last().is_some_and(|f| f.is_empty()) {
            faces.pop();
        }

        let mut non_maximal: HashSet<&Face> = HashSet::new();
        for k in 1..faces.len() {
            for f in &faces[k] {
                for i in 0..f.len() {
                    let mut w = f.0.clone();
                    w.remove(i);
                    if let Ok(pos) = faces[k - 1].binary_search(&Face(w)) {
                        non_maximal.insert(&faces[k - 1][pos]);
                    }
                }
            }
        }
        let mut facets: Vec<Face> = faces.iter().flatten().filter(|f| !non_maximal.contains(f)).cloned().collect();
        facets.sort_unstable();

        let vertices: Vec<VertexId> = faces.first().map(|v| v.iter().map(|f| f.0[0]).collect()).unwrap_or_default();

        let masks = (vertices.len() <= 64).then(|| {
            faces
                .iter()
                .map(|layer| {
                    layer
                        .iter()
                        .map(|f| {
                            f.0.iter().fold(0u64, |m, v| m | 1u64 << vertices.binary_search(v).expect("vertex present"))
                        })
                        .collect()
                })
                .collect()
        });

        Complex { vertices, facets, faces, masks }
    }

    pub fn empty() -> Complex {
        Complex { vertices: Vec::new(), facets: Vec::new(), faces: Vec::new(), masks: Some(Vec::new()) }
    }

    /// The full simplex on the given vertices.
    pub fn simplex(vertices: impl IntoIterator<Item = VertexId>) -> Result<Complex> {
        Ok(Complex::from_faces([Face::new(vertices)?]))
    }

    /// Boundary of the simplex on the given vertices.
    pub fn simplex_boundary(vertices: impl IntoIterator<Item = VertexId>) -> Result<Complex> {
        let top = Face::new(vertices)?;
        if top.len() < 2 {
            return Err(Error::Malformed("boundary of a 0-simplex is empty".into()));
        }
        Ok(Complex::from_faces(top.boundary().collect::<Vec<_>>()))
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// Position of `v` in the sorted vertex list.
    pub fn vertex_index(&self, v: VertexId) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    pub fn facets(&self) -> &[Face] {
        &self.facets
    }

    /// All faces of dimension `k`, sorted. Empty above the dimension.
    pub fn faces(&self, k: usize) -> &[Face] {
        self.faces.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Vertex-index bitmasks parallel to `faces(k)`; present iff at most 64 vertices.
    pub fn face_masks(&self, k: usize) -> Option<&[u64]> {
        self.masks.as_ref().map(|m| m.get(k).map(Vec::as_slice).unwrap_or(&[]))
    }

    pub fn dim(&self) -> Option<usize> {
        self.faces.len().checked_sub(1)
    }

    pub fn f_vector(&self) -> FVector {
        FVector(self.faces.iter().map(Vec::len).collect())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().euler_characteristic()
    }

    pub fn face_index(&self, face: &Face) -> Option<usize> {
        self.faces.get(face.dim())?.binary_search(face).ok()
    }

    pub fn contains_face(&self, face: &Face) -> bool {
        self.face_index(face).is_some()
    }

    /// Membership test for an arbitrary (unsorted, possibly invalid) vertex list.
    pub fn contains(&self, vertices: &[VertexId]) -> bool {
        Face::new(vertices.iter().copied()).map(|f| self.contains_face(&f)).unwrap_or(false)
    }

    pub fn is_facet(&self, face: &Face) -> bool {
        self.facets.binary_search(face).is_ok()
    }

    /// True when every facet has the top dimension.
    pub fn is_pure(&self) -> bool {
        match self.dim() {
            Some(d) => self.facets.iter().all(|f| f.dim() == d),
            None => true,
        }
    }

    fn check_vertex(&self, v: VertexId) -> Result<()> {
        if self.has_vertex(v) {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    pub fn link(&self, v: VertexId) -> Result<Complex> {
        self.check_vertex(v)?;
        Ok(Complex::from_faces(
            self.facets.iter().filter(|f| f.contains(v)).filter_map(|f| f.without(v)).collect::<Vec<_>>(),
        ))
    }

    /// Facets containing `v`.
    pub fn star_facets(&self, v: VertexId) -> Vec<&Face> {
        self.facets.iter().filter(|f| f.contains(v)).collect()
    }

    pub fn antistar(&self, v: VertexId) -> Result<Complex> {
        self.check_vertex(v)?;
        let rest: Vec<VertexId> = self.vertices.iter().copied().filter(|&u| u != v).collect();
        self.induced(&rest)
    }

    /// The induced subcomplex on `vertices`; every vertex must belong to the complex.
    pub fn induced(&self, vertices: &[VertexId]) -> Result<Complex> {
        for &v in vertices {
            self.check_vertex(v)?;
        }
        let set: BTreeSet<VertexId> = vertices.iter().copied().collect();
        let kept =
            self.faces.iter().flatten().filter(|f| f.0.iter().all(|v| set.contains(v))).cloned().collect::<Vec<_>>();
        Ok(Complex::from_faces(kept))
    }

    /// All faces of dimension at most `k`.
    pub fn skeleton(&self, k: usize) -> Complex {
        Complex::from_faces(self.faces.iter().take(k + 1).flatten().cloned().collect::<Vec<_>>())
    }

    pub fn one_skeleton(&self) -> Complex {
        self.skeleton(1)
    }

    pub fn is_neighbourly(&self) -> bool {
        let n = self.num_vertices();
        self.faces(1).len() == n * n.saturating_sub(1) / 2
    }

    pub fn graph(&self) -> Graph {
        Graph::of(self)
    }

    pub fn neighbours(&self, v: VertexId) -> Vec<VertexId> {
        let mut out: Vec<VertexId> =
            self.faces(1).iter().filter(|e| e.contains(v)).map(|e| if e.0[0] == v { e.0[1] } else { e.0[0] }).collect();
        out.sort_unstable();
        out
    }

    /// Connected components as sorted vertex lists, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let g = self.graph();
        g.components().into_iter().map(|comp| comp.into_iter().map(|i| self.vertices[i]).collect()).collect()
    }

    pub fn is_connected(&self) -> bool {
        !self.is_empty() && self.components().len() == 1
    }

    /// Apply a vertex relabeling. The map must be injective on the vertex set;
    /// vertices missing from it keep their label.
    pub fn relabel(&self, map: &BTreeMap<VertexId, VertexId>) -> Result<Complex> {
        let image: BTreeSet<VertexId> = self.vertices.iter().map(|v| *map.get(v).unwrap_or(v)).collect();
        if image.len() != self.vertices.len() {
            return Err(Error::InvalidBijection("relabeling is not injective".into()));
        }
        Complex::from_facets(
            self.facets.iter().map(|f| f.0.iter().map(|v| *map.get(v).unwrap_or(v)).collect::<Vec<_>>()),
        )
    }

    /// Facets as plain vertex lists, sorted.
    pub fn facet_lists(&self) -> Vec<Vec<VertexId>> {
        self.facets.iter().map(|f| f.0.clone()).collect()
    }

    /// Glue `other` to `self` along the facets `sigma_self` and `sigma_other`.
    ///
    /// `phi` maps each vertex of `sigma_other` to a vertex of `sigma_self`.
    /// All other vertices of `other` are relabeled above the largest label of
    /// `self`, in increasing order, before gluing; the shared facet is dropped.
    pub fn connected_sum(
        &self,
        other: &Complex,
        sigma_self: &Face,
        sigma_other: &Face,
        phi: &[(VertexId, VertexId)],
    ) -> Result<Complex> {
        let (Some(d), Some(d2)) = (self.dim(), other.dim()) else {
            return Err(Error::DimensionMismatch("connected sum of an empty complex".into()));
        };
        if d != d2 {
            return Err(Error::DimensionMismatch(format!("dim {d} vs dim {d2}")));
        }
        if sigma_self.dim() != d || !self.is_facet(sigma_self) {
            return Err(Error::not_facet(sigma_self));
        }
        if sigma_other.dim() != d || !other.is_facet(sigma_other) {
            return Err(Error::not_facet(sigma_other));
        }
        let map = face_bijection(sigma_other, sigma_self, phi)?;

        let mut next = self.vertices.last().map_or(0, |v| v + 1);
        let mut relabel = map;
        for &v in &other.vertices {
            if !sigma_other.contains(v) {
                relabel.insert(v, next);
                next += 1;
            }
        }
        let glued = self
            .facets
            .iter()
            .filter(|f| *f != sigma_self)
            .cloned()
            .chain(
                other
                    .facets
                    .iter()
                    .filter(|f| *f != sigma_other)
                    .map(|f| Face::new(f.0.iter().map(|v| relabel[v])).expect("relabeling is injective")),
            )
            .collect::<Vec<_>>();
        Ok(Complex::from_faces(glued))
    }
}

/// Validate `pairs` as a bijection from the vertices of `from` onto those of `to`.
pub(crate) fn face_bijection(
    from: &Face,
    to: &Face,
    pairs: &[(VertexId, VertexId)],
) -> Result<BTreeMap<VertexId, VertexId>> {
    let map: BTreeMap<VertexId, VertexId> = pairs.iter().copied().collect();
    let image: BTreeSet<VertexId> = map.values().copied().collect();
    let domain_ok =
        map.len() == pairs.len() && map.len() == from.len() && from.vertices().iter().all(|v| map.contains_key(v));
    let image_ok = image.len() == to.len() && to.vertices().iter().all(|v| image.contains(v));
    if domain_ok && image_ok {
        Ok(map)
    } else {
        Err(Error::InvalidBijection(format!("{pairs:?} is not a bijection {from} -> {to}")))
    }
}

/// Serialized as its sorted facet lists.
impl Serialize for Complex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.facets.serialize(s)
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, facet) in self.facets.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{facet}")?;
        }
        write!(f, "]")
    }
}

/// Index-based view of a 1-skeleton. Vertex `i` is the `i`-th smallest label.
#[derive(Clone, Debug)]
pub struct Graph {
    labels: Vec<VertexId>,
    adj: Vec<Vec<usize>>,
    matrix: Vec<bool>,
}

impl Graph {
    pub fn of(x: &Complex) -> Graph {
        let labels = x.vertices.clone();
        let n = labels.len();
        let mut adj = vec![Vec::new(); n];
        let mut matrix = vec![false; n * n];
        for e in x.faces(1) {
            let a = labels.binary_search(&e.0[0]).expect("vertex");
            let b = labels.binary_search(&e.0[1]).expect("vertex");
            adj[a].push(b);
            adj[b].push(a);
            matrix[a * n + b] = true;
            matrix[b * n + a] = true;
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { labels, adj, matrix }
    }

    /// Graph on the given labels with the given edges; labels may be unsorted.
    pub fn from_edges(labels: &[VertexId], edges: &[(VertexId, VertexId)]) -> Graph {
        let mut faces: Vec<Face> = labels.iter().map(|&v| Face(vec![v])).collect();
        faces.extend(edges.iter().filter_map(|&(a, b)| Face::new([a, b]).ok()));
        Graph::of(&Complex::from_faces(faces))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> VertexId {
        self.labels[i]
    }

    pub fn labels(&self) -> &[VertexId] {
        &self.labels
    }

    pub fn index_of(&self, v: VertexId) -> Option<usize> {
        self.labels.binary_search(&v).ok()
    }

    pub fn neighbours(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.matrix[i * self.labels.len() + j]
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, list) in self.adj.iter().enumerate() {
            for &j in list {
                if i < j {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// BFS distances from `src`; `usize::MAX` for unreachable vertices.
    pub fn distances(&self, src: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.len()];
        let mut queue = std::collections::VecDeque::from([src]);
        dist[src] = 0;
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for s in 0..self.len() {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;

    fn fv(x: &Complex) -> Vec<usize> {
        x.f_vector().0
    }

    #[test]
    fn three_cycle_from_edges() {
        let c = Complex::from_facets([[1, 2], [2, 3], [1, 3]]).unwrap();
        assert_eq!(fv(&c), vec![3, 3]);
        assert_eq!(c.dim(), Some(1));
    }

    #[test]
    fn absorbs_non_maximal_input() {
        let a = Complex::from_facets(vec![vec![1, 2, 3], vec![1, 2]]).unwrap();
        let b = Complex::from_facets([[1, 2, 3]]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.facets().len(), 1);
    }

    #[test]
    fn duplicate_vertex_is_malformed() {
        assert!(matches!(Complex::from_facets([[1, 2, 2]]), Err(Error::Malformed(_))));
        assert!(Complex::from_facets([Vec::<u32>::new()]).is_err());
    }

    #[test]
    fn named_f_vectors() {
        assert_eq!(fv(&builtin::boundary_simplex(4)), vec![5, 10, 10, 5]);
        assert_eq!(fv(&builtin::icosahedron()), vec![12, 30, 20]);
        assert_eq!(fv(&builtin::rp2_6()), vec![6, 15, 10]);
    }

    #[test]
    fn links() {
        let d4 = builtin::boundary_simplex(4);
        let l = d4.link(2).unwrap();
        assert_eq!(l, Complex::simplex_boundary([0, 1, 3, 4]).unwrap());

        let ico = builtin::icosahedron();
        let l0 = ico.link(0).unwrap();
        assert_eq!(l0, builtin::cycle_on(&[1, 2, 3, 4, 5]));

        let c6 = builtin::cycle(6);
        let l = c6.link(0).unwrap();
        assert_eq!(l.f_vector().0, vec![2]);
        assert!(matches!(c6.link(17), Err(Error::UnknownVertex(17))));
    }

    #[test]
    fn antistars() {
        let t = builtin::boundary_simplex(3);
        assert_eq!(t.antistar(0).unwrap(), Complex::simplex([1, 2, 3]).unwrap());

        let rp2 = builtin::rp2_6();
        let a = rp2.antistar(5).unwrap();
        assert_eq!(a, builtin::moebius_5());

        let c7 = builtin::cycle(7);
        let path = c7.antistar(3).unwrap();
        assert_eq!(fv(&path), vec![6, 5]);
        assert!(path.is_connected());
    }

    #[test]
    fn induced_subcomplexes() {
        let ico = builtin::icosahedron();
        assert_eq!(ico.induced(ico.vertices()).unwrap(), ico);
        // (0, 2, 4', 3', 5) with primes shifted by 6
        let five = ico.induced(&[0, 2, 10, 9, 5]).unwrap();
        assert_eq!(five, builtin::cycle_on(&[0, 2, 10, 9, 5]));
        let single = ico.induced(&[7]).unwrap();
        assert_eq!(fv(&single), vec![1]);
        assert!(ico.induced(&[0, 99]).is_err());
    }

    #[test]
    fn skeletons_and_neighbourliness() {
        let t = builtin::boundary_simplex(3);
        assert_eq!(t.one_skeleton(), builtin::complete(4));
        let ico = builtin::icosahedron();
        assert_eq!(fv(&ico.one_skeleton()), vec![12, 30]);
        let c5 = builtin::cycle(5);
        assert_eq!(c5.one_skeleton(), c5);

        assert!(builtin::boundary_simplex(4).is_neighbourly());
        assert!(!ico.is_neighbourly());
        assert!(builtin::rp2_6().is_neighbourly());
    }

    #[test]
    fn connected_sums() {
        let t = builtin::boundary_simplex(3);
        let s = t
            .connected_sum(
                &t,
                &Face::new([1, 2, 3]).unwrap(),
                &Face::new([0, 1, 2]).unwrap(),
                &[(0, 1), (1, 2), (2, 3)],
            )
            .unwrap();
        assert_eq!(fv(&s), vec![5, 9, 6]);

        let d4 = builtin::boundary_simplex(4);
        let sigma = Face::new([0, 1, 2, 3]).unwrap();
        let pairs: Vec<(u32, u32)> = (0..4).map(|i| (i, i)).collect();
        let s = d4.connected_sum(&d4, &sigma, &sigma, &pairs).unwrap();
        assert_eq!(fv(&s), vec![6, 14, 16, 8]);
        assert_eq!(s.f_vector().get(1), 4 * s.num_vertices() - 10);

        let tt = t
            .connected_sum(
                &t,
                &Face::new([1, 2, 3]).unwrap(),
                &Face::new([1, 2, 3]).unwrap(),
                &[(1, 1), (2, 2), (3, 3)],
            )
            .unwrap();
        let ttt = tt
            .connected_sum(&t, &tt.facets()[0].clone(), &Face::new([0, 1, 2]).unwrap(), &{
                let f = tt.facets()[0].vertices().to_vec();
                vec![(0, f[0]), (1, f[1]), (2, f[2])]
            })
            .unwrap();
        assert_eq!(fv(&ttt), vec![6, 12, 8]);
    }

    #[test]
    fn connected_sum_errors() {
        let t = builtin::boundary_simplex(3);
        let d4 = builtin::boundary_simplex(4);
        let f2 = Face::new([0, 1, 2]).unwrap();
        let f3 = Face::new([0, 1, 2, 3]).unwrap();
        assert!(matches!(t.connected_sum(&d4, &f2, &f3, &[]), Err(Error::DimensionMismatch(_))));
        let solid = Complex::simplex([0, 1, 2]).unwrap();
        assert!(matches!(t.connected_sum(&t, &Face::new([0, 1]).unwrap(), &f2, &[]), Err(Error::NotAFacet(_))));
        assert!(matches!(
            t.connected_sum(&solid, &f2, &f2, &[(0, 0), (1, 0), (2, 2)]),
            Err(Error::InvalidBijection(_))
        ));
    }

    #[test]
    fn components_and_relabel() {
        let x = Complex::from_facets(vec![vec![0, 1], vec![5, 6, 7], vec![9]]).unwrap();
        assert_eq!(x.components(), vec![vec![0, 1], vec![5, 6, 7], vec![9]]);
        let map: BTreeMap<u32, u32> = [(0, 100), (1, 101)].into_iter().collect();
        let y = x.relabel(&map).unwrap();
        assert!(y.has_vertex(100) && !y.has_vertex(0));
        let bad: BTreeMap<u32, u32> = [(0, 5)].into_iter().collect();
        assert!(x.relabel(&bad).is_err());
    }

    #[test]
    fn masks_follow_vertex_indices() {
        let x = Complex::from_facets([[3, 10, 40]]).unwrap();
        assert_eq!(x.face_masks(2).unwrap(), &[0b111]);
        assert_eq!(x.face_masks(1).unwrap(), &[0b011, 0b101, 0b110]);
    }
}
