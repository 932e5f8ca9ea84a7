//! Simplicial homology over a field, and injectivity of the maps induced by
//! inclusions of induced subcomplexes.

use serde::Serialize;

use crate::complex::{Complex, VertexId};
use crate::error::{Error, Result};
use crate::linalg::{FMatrix, FieldSpec, Scalar};
use crate::manifold::verify_closed_manifold;
use crate::Verdict;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiVector {
    pub field: FieldSpec,
    pub betti: Vec<usize>,
}

impl BettiVector {
    pub fn get(&self, k: usize) -> usize {
        self.betti.get(k).copied().unwrap_or(0)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.betti.iter().enumerate().map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) }).sum()
    }
}

/// Sparse signed boundary incidences of every face.
///
/// `boundary[k][i]` lists `(j, sign)` where `j` indexes `faces(k - 1)` and the
/// sign is `(-1)^p` for the position `p` of the dropped vertex in the sorted
/// face `i` of dimension `k`.
#[derive(Clone, Debug)]
pub struct ChainData {
    sizes: Vec<usize>,
    boundary: Vec<Vec<Vec<(usize, i64)>>>,
}

impl ChainData {
    pub fn new(x: &Complex) -> ChainData {
        let d = x.dim().map_or(0, |d| d + 1);
        let sizes: Vec<usize> = (0..d).map(|k| x.faces(k).len()).collect();
        let mut boundary = vec![Vec::new()];
        for k in 1..d {
            let lower = x.faces(k - 1);
            boundary.push(
                x.faces(k)
                    .iter()
                    .map(|f| {
                        f.boundary()
                            .enumerate()
                            .map(|(p, g)| {
                                let j = lower.binary_search(&g).expect("complex is closed");
                                (j, if p % 2 == 0 { 1 } else { -1 })
                            })
                            .collect()
                    })
                    .collect(),
            );
        }
        let chains = ChainData { sizes, boundary };
        debug_assert!(chains.boundary_squares_to_zero());
        chains
    }

    pub fn size(&self, k: usize) -> usize {
        self.sizes.get(k).copied().unwrap_or(0)
    }

    pub fn top(&self) -> Option<usize> {
        self.sizes.len().checked_sub(1)
    }

    pub fn incidences(&self, k: usize, i: usize) -> &[(usize, i64)] {
        &self.boundary[k][i]
    }

    /// Integer check of `∂_{k-1} ∘ ∂_k = 0`, which implies it over every field.
    pub fn boundary_squares_to_zero(&self) -> bool {
        (2..self.sizes.len()).all(|k| {
            self.boundary[k].iter().all(|row| {
                let mut acc = std::collections::BTreeMap::<usize, i64>::new();
                for &(j, s) in row {
                    for &(l, t) in &self.boundary[k - 1][j] {
                        *acc.entry(l).or_default() += s * t;
                    }
                }
                acc.values().all(|&v| v == 0)
            })
        })
    }

    pub fn matrix(&self, k: usize, field: FieldSpec) -> FMatrix {
        let cols = if k == 0 { 0 } else { self.size(k - 1) };
        FMatrix::from_sparse_rows(field, cols, self.boundary[k].iter().cloned())
    }
}

/// `∂_k` of `x`: rows are `k`-faces, columns `(k-1)`-faces, both in sorted order.
pub fn boundary_matrix(x: &Complex, k: usize, field: FieldSpec) -> Result<FMatrix> {
    let d = x.dim().ok_or_else(|| Error::Malformed("empty complex".into()))?;
    if k > d {
        return Err(Error::OutOfRange { index: k, max: d });
    }
    Ok(ChainData::new(x).matrix(k, field))
}

pub fn betti(x: &Complex, field: FieldSpec) -> Result<BettiVector> {
    let d = x.dim().ok_or_else(|| Error::Malformed("empty complex".into()))?;
    let chains = ChainData::new(x);
    let mut ranks = vec![0usize; d + 2];
    for k in 1..=d {
        ranks[k] = chains.matrix(k, field).rank();
    }
    let betti = (0..=d).map(|k| chains.size(k) - ranks[k] - ranks[k + 1]).collect();
    Ok(BettiVector { field, betti })
}

/// `H_d(x; F) != 0` for a closed `d`-manifold `x`.
pub fn is_orientable(x: &Complex, field: FieldSpec) -> Result<bool> {
    let report = verify_closed_manifold(x)?;
    if !report.holds {
        let why = report.defect.map(|f| format!("{:?}: {}", f.face, f.reason)).unwrap_or_default();
        return Err(Error::not_manifold(report.dim, why));
    }
    Ok(betti(x, field)?.get(report.dim) > 0)
}

/// A cycle of `Y = X[W]` that bounds in `X` but not in `Y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InjectivityWitness {
    pub degree: usize,
    pub cycle: Vec<(Vec<VertexId>, Scalar)>,
}

/// Injectivity test for `H_*(X[W]) -> H_*(X)`, reusable across many `W`.
///
/// In degree `k` the map is injective iff `dim(Z_k(Y) ∩ B_k(X)) = dim B_k(Y)`,
/// where `Y`-chains sit inside `X`-chains by face identity.
pub struct InjectivityTester<'a> {
    x: &'a Complex,
    field: FieldSpec,
    chains: ChainData,
    component: Vec<usize>,
    /// Row basis of `B_k(X)` for `k` below the top dimension.
    boundaries: Vec<FMatrix>,
}

impl<'a> InjectivityTester<'a> {
    pub fn new(x: &'a Complex, field: FieldSpec) -> InjectivityTester<'a> {
        let chains = ChainData::new(x);
        let mut component = vec![0; x.num_vertices()];
        for (c, comp) in x.graph().components().iter().enumerate() {
            for &i in comp {
                component[i] = c;
            }
        }
        let top = chains.top().unwrap_or(0);
        let boundaries = (0..top).map(|k| chains.matrix(k + 1, field).row_basis()).collect();
        InjectivityTester { x, field, chains, component, boundaries }
    }

    pub fn complex(&self) -> &Complex {
        self.x
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Indices into `faces(k)` of the faces spanned by `members`.
    fn faces_in(&self, k: usize, members: &[bool], mask: Option<u64>) -> Vec<usize> {
        match (mask, self.x.face_masks(k)) {
            (Some(w), Some(masks)) => masks.iter().enumerate().filter(|(_, &m)| m & !w == 0).map(|(i, _)| i).collect(),
            _ => self
                .x
                .faces(k)
                .iter()
                .enumerate()
                .filter(|(_, f)| f.vertices().iter().all(|&v| members[self.x.vertex_index(v).expect("vertex")]))
                .map(|(i, _)| i)
                .collect(),
        }
    }

    /// `None` when injective in every degree, else a witness.
    /// `w` lists vertex indices (positions in the sorted vertex list).
    pub fn test(&self, w: &[usize]) -> Option<InjectivityWitness> {
        let n = self.x.num_vertices();
        let mut members = vec![false; n];
        for &i in w {
            members[i] = true;
        }
        let mask = (n <= 64).then(|| w.iter().fold(0u64, |m, &i| m | 1 << i));

        let verts = self.faces_in(0, &members, mask);
        if verts.is_empty() {
            return None;
        }
        if let Some(wit) = self.degree_zero(&verts, &members, mask) {
            return Some(wit);
        }

        let top_x = self.chains.top().unwrap_or(0);
        let mut lower = verts;
        let mut current = self.faces_in(1, &members, mask);
        for k in 1..top_x {
            if current.is_empty() {
                break;
            }
            let upper = self.faces_in(k + 1, &members, mask);
            if let Some(wit) = self.degree_k(k, &lower, &current, &upper) {
                return Some(wit);
            }
            lower = current;
            current = upper;
        }
        None
    }

    fn degree_zero(&self, verts: &[usize], members: &[bool], mask: Option<u64>) -> Option<InjectivityWitness> {
        let n = self.x.num_vertices();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut a: usize) -> usize {
            while p[a] != a {
                p[a] = p[p[a]];
                a = p[a];
            }
            a
        }
        let edges = self.faces_in(1, members, mask);
        let x_edges = self.x.faces(1);
        for e in edges {
            let f = x_edges[e].vertices();
            let a = self.x.vertex_index(f[0]).expect("vertex");
            let b = self.x.vertex_index(f[1]).expect("vertex");
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        // first Y-component seen in each X-component
        let mut rep: Vec<Option<(usize, usize)>> = vec![None; n];
        for &v in verts {
            let root = find(&mut parent, v);
            let xc = self.component[v];
            match rep[xc] {
                None => rep[xc] = Some((root, v)),
                Some((r, u)) if r != root => {
                    let lab = |i: usize| vec![self.x.vertices()[i]];
                    return Some(InjectivityWitness {
                        degree: 0,
                        cycle: vec![
                            (lab(u), Scalar::from_int(self.field, 1)),
                            (lab(v), Scalar::from_int(self.field, -1)),
                        ],
                    });
                }
                Some(_) => {}
            }
        }
        None
    }

    fn degree_k(&self, k: usize, lower: &[usize], current: &[usize], upper: &[usize]) -> Option<InjectivityWitness> {
        let mut local_lower = vec![usize::MAX; self.chains.size(k - 1)];
        for (li, &xi) in lower.iter().enumerate() {
            local_lower[xi] = li;
        }
        let mut local_current = vec![usize::MAX; self.chains.size(k)];
        for (li, &xi) in current.iter().enumerate() {
            local_current[xi] = li;
        }
        let localize = |rows: &[usize], deg: usize, map: &[usize]| -> Vec<Vec<(usize, i64)>> {
            rows.iter().map(|&xi| self.chains.incidences(deg, xi).iter().map(|&(j, s)| (map[j], s)).collect()).collect()
        };
        let d_k = FMatrix::from_sparse_rows(self.field, lower.len(), localize(current, k, &local_lower));
        let d_k1 = FMatrix::from_sparse_rows(self.field, current.len(), localize(upper, k + 1, &local_current));

        let rank_by = if upper.is_empty() { 0 } else { d_k1.rank() };
        let cycles = d_k.left_null_space();
        let dim_z = cycles.rows();
        if dim_z == rank_by {
            return None;
        }
        let bx = &self.boundaries[k];
        let z_in_x = cycles.embed_columns(current, self.chains.size(k));
        let stacked = z_in_x.vstack(bx).expect("same column count");
        let sum = stacked.rank();
        if dim_z + bx.rows() - sum == rank_by {
            return None;
        }

        // Z ∩ B_X is spanned by x·Z over left-kernel vectors (x, y) of [Z; B_X].
        let kernel = stacked.left_null_space();
        let lift = cycles.vstack(&FMatrix::zeros(self.field, bx.rows(), current.len())).expect("same column count");
        let candidates = kernel.mul(&lift).expect("shapes agree");
        let faces = self.x.faces(k);
        (0..candidates.rows()).find_map(|r| {
            let c = candidates.select_rows(&[r]);
            let escapes = d_k1.vstack(&c).expect("same column count").rank() > rank_by;
            escapes.then(|| InjectivityWitness {
                degree: k,
                cycle: (0..current.len())
                    .map(|j| (faces[current[j]].vertices().to_vec(), c.get(0, j)))
                    .filter(|(_, s)| !s.is_zero())
                    .collect(),
            })
        })
    }
}

/// Is `H_*(X[W]; F) -> H_*(X; F)` injective in every degree?
pub fn induced_map_injective(x: &Complex, w: &[VertexId], field: FieldSpec) -> Result<Verdict<InjectivityWitness>> {
    let mut idx = w.iter().map(|&v| x.vertex_index(v).ok_or(Error::UnknownVertex(v))).collect::<Result<Vec<_>>>()?;
    idx.sort_unstable();
    idx.dedup();
    let tester = InjectivityTester::new(x, field);
    Ok(match tester.test(&idx) {
        None => Verdict::pass(),
        Some(wit) => Verdict::fail(wit),
    })
}
