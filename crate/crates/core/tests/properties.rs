use std::collections::BTreeMap;

use proptest::prelude::*;
use tighttri::builtin;
use tighttri::complex::{Complex, Face, VertexId};
use tighttri::constructions::{sphere2_corpus, stacked_sphere};
use tighttri::homology::{betti, induced_map_injective};
use tighttri::linalg::{dim_intersection, dim_sum, FMatrix, FieldSpec};
use tighttri::tightness::{is_tight_bruteforce, TightnessWitness};

const Q: FieldSpec = FieldSpec::Rationals;
const GF2: FieldSpec = FieldSpec::GF2;

fn arb_complex(max_v: u32, max_facets: usize) -> impl Strategy<Value = Complex> {
    prop::collection::vec(prop::collection::btree_set(0..max_v, 1..=4), 1..=max_facets)
        .prop_map(|fs| Complex::from_facets(fs.into_iter().map(|s| s.into_iter().collect::<Vec<_>>())).unwrap())
}

fn arb_matrix(rows: usize, cols: usize, lo: i64, hi: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(lo..=hi, cols), rows)
}

fn shuffle_labels(x: &Complex, seed: u64) -> (Complex, BTreeMap<VertexId, VertexId>) {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut image: Vec<VertexId> = (0..x.num_vertices() as VertexId).map(|i| 3 * i + 7).collect();
    image.shuffle(&mut rng);
    let map: BTreeMap<_, _> = x.vertices().iter().copied().zip(image).collect();
    (x.relabel(&map).unwrap(), map)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn downward_closed(x in arb_complex(8, 6)) {
        for k in 1..=x.dim().unwrap() {
            for f in x.faces(k) {
                for g in f.boundary() {
                    prop_assert!(x.contains_face(&g));
                }
            }
        }
        let fv = x.f_vector();
        for k in 0..fv.0.len() {
            prop_assert_eq!(fv.get(k), x.faces(k).len());
            prop_assert!(fv.get(k) > 0);
        }
        // no facet inside another
        for a in x.facets() {
            for b in x.facets() {
                prop_assert!(a == b || !a.is_subset_of(b));
            }
        }
    }

    #[test]
    fn euler_poincare(x in arb_complex(8, 7)) {
        for f in [Q, GF2, FieldSpec::Prime(3)] {
            prop_assert_eq!(betti(&x, f).unwrap().euler_characteristic(), x.euler_characteristic());
        }
    }

    #[test]
    fn star_decomposition(x in arb_complex(7, 6), pick in 0usize..7) {
        let v = x.vertices()[pick % x.num_vertices()];
        let link = x.link(v).unwrap();
        let anti = x.antistar(v).unwrap();
        for u in link.vertices() {
            prop_assert!(anti.has_vertex(*u));
        }
        let d = x.dim().unwrap();
        for i in 0..=d {
            let below = if i == 0 { 1 } else { link.f_vector().0.get(i - 1).copied().unwrap_or(0) };
            let rest = anti.f_vector().0.get(i).copied().unwrap_or(0);
            prop_assert_eq!(x.f_vector().get(i), rest + below);
        }
    }

    #[test]
    fn induced_is_idempotent(x in arb_complex(8, 6), a_mask in 1u32..256, b_mask in 1u32..256) {
        let a: Vec<VertexId> = x.vertices().iter().copied().filter(|v| a_mask >> v & 1 == 1).collect();
        let b: Vec<VertexId> = a.iter().copied().filter(|v| b_mask >> v & 1 == 1).collect();
        prop_assume!(!b.is_empty());
        let xa = x.induced(&a).unwrap();
        prop_assert_eq!(xa.induced(&b).unwrap(), x.induced(&b).unwrap());
        prop_assert_eq!(x.induced(x.vertices()).unwrap(), x.clone());
    }

    #[test]
    fn betti_and_tightness_ignore_labels(x in arb_complex(7, 6), seed in any::<u64>()) {
        let (y, _) = shuffle_labels(&x, seed);
        for f in [Q, GF2] {
            prop_assert_eq!(betti(&x, f).unwrap().betti, betti(&y, f).unwrap().betti);
            prop_assert_eq!(is_tight_bruteforce(&x, f).unwrap().verdict, is_tight_bruteforce(&y, f).unwrap().verdict);
        }
    }

    #[test]
    fn brute_witness_reverifies(x in arb_complex(7, 7)) {
        for f in [Q, GF2] {
            let r = is_tight_bruteforce(&x, f).unwrap();
            prop_assert_eq!(r.witness.is_some(), !r.verdict);
            match r.witness {
                Some(TightnessWitness::Subset { vertices, .. }) => {
                    prop_assert!(!induced_map_injective(&x, &vertices, f).unwrap().holds);
                }
                Some(TightnessWitness::Disconnected { components }) => prop_assert!(components.len() > 1),
                None => {
                    prop_assert!(x.is_neighbourly());
                }
            }
        }
    }

    #[test]
    fn connected_induced_acyclic_subsets_inject(x in arb_complex(7, 6), mask in 1u32..128) {
        let w: Vec<VertexId> = x.vertices().iter().copied().filter(|v| mask >> v & 1 == 1).collect();
        prop_assume!(!w.is_empty());
        let y = x.induced(&w).unwrap();
        let b = betti(&y, Q).unwrap();
        if y.is_connected() && b.betti.iter().skip(1).all(|&k| k == 0) {
            prop_assert!(induced_map_injective(&x, &w, Q).unwrap().holds);
        }
    }

    #[test]
    fn rank_of_transpose(m in arb_matrix(5, 7, -3, 3)) {
        for f in [Q, GF2, FieldSpec::Prime(5)] {
            let a = FMatrix::from_int_rows(f, 7, &m).unwrap();
            prop_assert_eq!(a.rank(), a.transpose().rank());
        }
    }

    #[test]
    fn gf2_rank_at_most_rational_rank(m in arb_matrix(6, 6, 0, 1)) {
        let q = FMatrix::from_int_rows(Q, 6, &m).unwrap().rank();
        let two = FMatrix::from_int_rows(GF2, 6, &m).unwrap().rank();
        prop_assert!(two <= q);
    }

    #[test]
    fn intersection_bounds(a in arb_matrix(4, 6, -2, 2), b in arb_matrix(3, 6, -2, 2)) {
        for f in [Q, GF2, FieldSpec::Prime(7)] {
            let (a, b) = (FMatrix::from_int_rows(f, 6, &a).unwrap(), FMatrix::from_int_rows(f, 6, &b).unwrap());
            let i = dim_intersection(&a, &b).unwrap();
            prop_assert!(i <= a.rank().min(b.rank()));
            prop_assert_eq!(dim_sum(&a, &b).unwrap() + i, a.rank() + b.rank());
        }
    }

    #[test]
    fn gf2_sum_matches_span_enumeration(a in arb_matrix(3, 5, 0, 1), b in arb_matrix(3, 5, 0, 1)) {
        let span = |rows: &[Vec<i64>]| -> std::collections::BTreeSet<u32> {
            (0u32..1 << rows.len())
                .map(|sel| {
                    (0..rows.len()).filter(|i| sel >> i & 1 == 1).fold(0u32, |acc, i| {
                        acc ^ rows[i].iter().enumerate().fold(0u32, |m, (j, &x)| m | ((x as u32) << j))
                    })
                })
                .collect()
        };
        let both: Vec<Vec<i64>> = a.iter().chain(&b).cloned().collect();
        let size = span(&both).len();
        let expected = size.trailing_zeros() as usize;
        let (ma, mb) = (FMatrix::from_int_rows(GF2, 5, &a).unwrap(), FMatrix::from_int_rows(GF2, 5, &b).unwrap());
        prop_assert_eq!(dim_sum(&ma, &mb).unwrap(), expected);
        prop_assert_eq!(ma.rank(), span(&a).len().trailing_zeros() as usize);
    }

    #[test]
    fn ill_conditioned_rank_is_stable(n in 2usize..9, scale in 1i64..1000) {
        // Hilbert-like integer matrix: lcm-scaled 1/(i+j+1), full rank
        let l: i64 = (1..=(2 * n as i64)).fold(1, num_integer::lcm);
        let rows: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| scale * l / (i + j + 1) as i64).collect()).collect();
        prop_assert_eq!(FMatrix::from_int_rows(Q, n, &rows).unwrap().rank(), n);
        let mut dup = rows.clone();
        dup.push(rows[0].iter().zip(&rows[1]).map(|(a, b)| 3 * a - 5 * b).collect());
        prop_assert_eq!(FMatrix::from_int_rows(Q, n, &dup).unwrap().rank(), n);
    }

    #[test]
    fn connected_sum_fvector_in_dimension_three(n in 5usize..12, m in 5usize..12, s1 in any::<u64>(), s2 in any::<u64>()) {
        let x = stacked_sphere(n, 3, s1).unwrap();
        let y = stacked_sphere(m, 3, s2).unwrap();
        let fx = x.facets()[0].clone();
        let fy = y.facets()[y.facets().len() - 1].clone();
        let phi: Vec<_> = fy.vertices().iter().copied().zip(fx.vertices().iter().copied()).collect();
        let z = x.connected_sum(&y, &fx, &fy, &phi).unwrap();
        let (a, b, c) = (x.f_vector().0, y.f_vector().0, z.f_vector().0);
        let delta = [4, 6, 4, 2];
        for i in 0..4 {
            prop_assert_eq!(c[i], a[i] + b[i] - delta[i]);
        }
    }
}

#[test]
fn closed_connected_three_manifolds_satisfy_duality_mod_two() {
    for e in tighttri::constructions::closed_3manifold_corpus(3) {
        let (name, x) = (e.name, e.complex);
        if !x.is_connected() {
            continue;
        }
        let b = betti(&x, GF2).unwrap();
        assert_eq!(b.get(0), 1, "{name}");
        assert_eq!(b.get(3), 1, "{name}");
        assert_eq!(b.get(1), b.get(2), "{name}");
        let q = betti(&x, Q).unwrap();
        assert_eq!(q.get(0), 1, "{name}");
    }
}

#[test]
fn gf2_orientability_of_closed_surfaces() {
    for s in sphere2_corpus(20, 11).iter().chain([builtin::rp2_6(), tighttri::constructions::torus_7()].iter()) {
        assert!(tighttri::homology::is_orientable(s, GF2).unwrap());
    }
}

#[test]
fn small_connected_sums_of_spheres() {
    let t = builtin::boundary_simplex(3);
    let s = Face::new([0, 1, 2]).unwrap();
    let x = t.connected_sum(&t, &s, &s, &[(0, 0), (1, 1), (2, 2)]).unwrap();
    assert_eq!(x.f_vector().0, vec![5, 9, 6]);
    let f = x.facets().last().unwrap().clone();
    let phi: Vec<_> = [0, 1, 2].into_iter().zip(f.vertices().iter().copied()).collect();
    let y = x.connected_sum(&t, &f, &s, &phi).unwrap();
    assert_eq!(y.f_vector().0, vec![6, 12, 8]);
    let d4 = builtin::boundary_simplex(4);
    let s4 = Face::new(0..4).unwrap();
    let z = d4.connected_sum(&d4, &s4, &s4, &[(0, 0), (1, 1), (2, 2), (3, 3)]).unwrap();
    assert_eq!(z.f_vector().0, vec![6, 14, 16, 8]);
    assert_eq!(z.f_vector().get(1), 4 * 6 - 10);
}
