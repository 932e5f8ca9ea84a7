//! Facet-preserving vertex bijections by backtracking with degree pruning.

use std::collections::{BTreeMap, HashSet};

use crate::complex::{Complex, Graph, VertexId};

/// A vertex bijection `x -> y` carrying facets onto facets, if one exists.
pub fn is_isomorphic(x: &Complex, y: &Complex) -> Option<BTreeMap<VertexId, VertexId>> {
    if x.f_vector() != y.f_vector() || x.facets().len() != y.facets().len() {
        return None;
    }
    let n = x.num_vertices();
    if n == 0 {
        return Some(BTreeMap::new());
    }
    let (gx, gy) = (x.graph(), y.graph());
    let sig = |c: &Complex, g: &Graph, i: usize| {
        let v = g.label(i);
        (g.degree(i), c.facets().iter().filter(|f| f.contains(v)).count())
    };
    let sx: Vec<_> = (0..n).map(|i| sig(x, &gx, i)).collect();
    let sy: Vec<_> = (0..n).map(|i| sig(y, &gy, i)).collect();
    let (mut a, mut b) = (sx.clone(), sy.clone());
    a.sort_unstable();
    b.sort_unstable();
    if a != b {
        return None;
    }

    // Visit order: rarest signature first, then always the vertex with most
    // already placed neighbours.
    let rarity = |s: &(usize, usize)| sx.iter().filter(|t| *t == s).count();
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    let first = (0..n).min_by_key(|&i| (rarity(&sx[i]), std::cmp::Reverse(sx[i].0), i)).expect("n > 0");
    order.push(first);
    placed[first] = true;
    while order.len() < n {
        let next = (0..n)
            .filter(|&i| !placed[i])
            .max_by_key(|&i| {
                let links = gx.neighbours(i).iter().filter(|&&j| placed[j]).count();
                (links, sx[i].0, std::cmp::Reverse(i))
            })
            .expect("unplaced vertex");
        placed[next] = true;
        order.push(next);
    }
    let position: Vec<usize> = {
        let mut p = vec![0; n];
        for (k, &i) in order.iter().enumerate() {
            p[i] = k;
        }
        p
    };

    // Facets of x keyed by the step at which their last vertex is placed.
    let mut closing: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n];
    for f in x.facets() {
        let idx: Vec<usize> = f.vertices().iter().map(|&v| gx.index_of(v).expect("vertex")).collect();
        let last = idx.iter().map(|&i| position[i]).max().expect("nonempty facet");
        closing[last].push(idx);
    }
    let y_facets: HashSet<Vec<usize>> =
        y.facets().iter().map(|f| f.vertices().iter().map(|&v| gy.index_of(v).expect("vertex")).collect()).collect();

    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let ctx = Search { gx: &gx, gy: &gy, sx: &sx, sy: &sy, order: &order, closing: &closing, y_facets: &y_facets };
    if ctx.extend(0, &mut image, &mut used) {
        Some((0..n).map(|i| (gx.label(i), gy.label(image[i]))).collect())
    } else {
        None
    }
}

struct Search<'a> {
    gx: &'a Graph,
    gy: &'a Graph,
    sx: &'a [(usize, usize)],
    sy: &'a [(usize, usize)],
    order: &'a [usize],
    closing: &'a [Vec<Vec<usize>>],
    y_facets: &'a HashSet<Vec<usize>>,
}

impl Search<'_> {
    fn extend(&self, step: usize, image: &mut [usize], used: &mut [bool]) -> bool {
        if step == self.order.len() {
            return true;
        }
        let u = self.order[step];
        for cand in 0..self.gy.len() {
            if used[cand] || self.sy[cand] != self.sx[u] {
                continue;
            }
            let consistent =
                self.order[..step].iter().all(|&w| self.gx.adjacent(u, w) == self.gy.adjacent(cand, image[w]));
            if !consistent {
                continue;
            }
            image[u] = cand;
            let facets_ok = self.closing[step].iter().all(|f| {
                let mut img: Vec<usize> = f.iter().map(|&i| image[i]).collect();
                img.sort_unstable();
                self.y_facets.contains(&img)
            });
            if facets_ok {
                used[cand] = true;
                if self.extend(step + 1, image, used) {
                    return true;
                }
                used[cand] = false;
            }
            image[u] = usize::MAX;
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    fn check_map(x: &Complex, y: &Complex, map: &BTreeMap<VertexId, VertexId>) {
        assert_eq!(&x.relabel(map).unwrap(), y);
    }

    #[test]
    fn relabeled_tetrahedron() {
        let t = builtin::boundary_simplex(3);
        let map: BTreeMap<u32, u32> = [(0, 40), (1, 7), (2, 13), (3, 2)].into_iter().collect();
        let u = t.relabel(&map).unwrap();
        let found = is_isomorphic(&t, &u).unwrap();
        check_map(&t, &u, &found);
        assert!(is_isomorphic(&t, &builtin::cycle(4)).is_none());
    }

    #[test]
    fn permuted_icosahedron() {
        let ico = builtin::icosahedron();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let mut perm: Vec<u32> = (100..112).collect();
            perm.shuffle(&mut rng);
            let map: BTreeMap<u32, u32> = (0..12).zip(perm).collect();
            let y = ico.relabel(&map).unwrap();
            let found = is_isomorphic(&ico, &y).unwrap();
            check_map(&ico, &y, &found);
        }
    }

    #[test]
    fn same_f_vector_different_complexes() {
        // octahedron vs the 6-vertex stacked 2-sphere: both (6,12,8)
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
        let stacked = crate::constructions::stacked_sphere(6, 2, 3).unwrap();
        assert_eq!(octa.f_vector(), stacked.f_vector());
        assert!(is_isomorphic(&octa, &stacked).is_none());
        // C6 vs two disjoint triangles
        let two = Complex::from_facets([[0, 1], [1, 2], [0, 2], [3, 4], [4, 5], [3, 5]]).unwrap();
        assert!(is_isomorphic(&builtin::cycle(6), &two).is_none());
    }
}
