use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::linalg::FieldSpec;
use crate::tightness::{cross_validate, is_tight_fast_3manifold, BruteOptions};

use super::{
    admissible_f0, admissible_handles, elongated_stacking, handle_addition, stacked_sphere_from_steps, Certificate,
    Seed,
};

/// Restarts examined per parallel round. The first success is the one with
/// the smallest restart index, whatever the thread count.
const ROUND: u64 = 64;

/// Largest vertex count for which an accepted complex is also confirmed by
/// the subset scan.
const CONFIRM_LIMIT: usize = 12;

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub k: u64,
    pub field: FieldSpec,
    /// Number of restarts.
    pub budget: u64,
    pub seed: u64,
    pub jobs: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchOutcome {
    pub complex: Complex,
    pub certificate: Certificate,
    pub restart: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    pub found: Option<SearchOutcome>,
    /// Restarts examined: up to and including the successful one, or the
    /// whole budget.
    pub restarts: u64,
    /// Neighbourly quotients rejected by the tightness check over the field.
    pub rejected: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

enum Attempt {
    Found(Box<SearchOutcome>),
    Rejected(u64),
}

/// Look for a neighbourly complex obtained from a stacked 3-sphere on
/// `f0 + 4k` vertices by `k` handle additions that is tight over the field.
pub fn search_tight(opts: &SearchOptions) -> Result<SearchResult> {
    let f0 = admissible_f0(opts.k).ok_or(Error::InadmissibleK(opts.k))? as usize;
    let start = Instant::now();
    let pool = match opts.jobs {
        Some(j) => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(j.max(1))
                .build()
                .map_err(|e| Error::Inconsistent(format!("thread pool: {e}")))?,
        ),
        None => None,
    };
    let mut rejected = 0;
    let mut round = 0;
    while round * ROUND < opts.budget {
        let lo = round * ROUND;
        let hi = (lo + ROUND).min(opts.budget);
        let run = || -> Vec<Result<Attempt>> { (lo..hi).into_par_iter().map(|r| attempt(opts, f0, r)).collect() };
        let results = match &pool {
            Some(p) => p.install(run),
            None => run(),
        };
        for (r, res) in (lo..hi).zip(results) {
            match res? {
                Attempt::Found(outcome) => {
                    return Ok(SearchResult {
                        found: Some(*outcome),
                        restarts: r + 1,
                        rejected,
                        elapsed: start.elapsed(),
                    });
                }
                Attempt::Rejected(n) => rejected += n,
            }
        }
        round += 1;
    }
    Ok(SearchResult { found: None, restarts: opts.budget, rejected, elapsed: start.elapsed() })
}

fn attempt(opts: &SearchOptions, f0: usize, restart: u64) -> Result<Attempt> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(restart);
    let p: f64 = rng.gen();
    let steps = elongated_stacking(f0 + 4 * opts.k as usize, 3, p, &mut rng)?;
    let sphere = stacked_sphere_from_steps(3, &steps)?;
    let mut x = sphere.clone();
    let mut handles = Vec::new();
    for _ in 1..opts.k {
        let Some(h) = admissible_handles(&x).choose(&mut rng).cloned() else {
            return Ok(Attempt::Rejected(0));
        };
        x = handle_addition(&x, &h)?;
        handles.push(h);
    }
    let mut rejected = 0;
    for h in admissible_handles(&x) {
        let m = handle_addition(&x, &h)?;
        if !m.is_neighbourly() {
            continue;
        }
        if !is_tight_fast_3manifold(&m, opts.field)?.verdict {
            rejected += 1;
            continue;
        }
        if m.num_vertices() <= CONFIRM_LIMIT {
            let check = cross_validate(&m, opts.field, &BruteOptions { jobs: Some(1), allow_exponential: false })?;
            if !check.verdict {
                return Err(Error::Inconsistent("accepted complex failed the subset scan".into()));
            }
        }
        handles.push(h);
        let certificate = Certificate {
            seed: Seed::Stacking { dim: 3, steps },
            steps: handles,
            f_vector: m.f_vector().0,
            rng_seed: Some(opts.seed),
            restart: Some(restart),
        };
        return Ok(Attempt::Found(Box::new(SearchOutcome { complex: m, certificate, restart })));
    }
    Ok(Attempt::Rejected(rejected))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::betti;

    #[test]
    fn finds_the_nine_vertex_instance_over_gf2() {
        let opts = SearchOptions { k: 1, field: FieldSpec::GF2, budget: 2000, seed: 1, jobs: None };
        let res = search_tight(&opts).unwrap();
        let found = res.found.expect("found within budget");
        assert_eq!(found.complex.f_vector().0, vec![9, 36, 54, 27]);
        assert_eq!(betti(&found.complex, FieldSpec::GF2).unwrap().get(1), 1);
        assert_eq!(found.restart + 1, res.restarts);
    }

    #[test]
    fn thread_count_does_not_change_the_result() {
        let base = SearchOptions { k: 1, field: FieldSpec::GF2, budget: 2000, seed: 5, jobs: Some(1) };
        let a = search_tight(&base).unwrap();
        let b = search_tight(&SearchOptions { jobs: Some(3), ..base }).unwrap();
        assert_eq!(a.restarts, b.restarts);
        assert_eq!(a.found.map(|f| f.certificate), b.found.map(|f| f.certificate));
    }

    #[test]
    fn rationals_reject_the_nine_vertex_quotients() {
        let opts = SearchOptions { k: 1, field: FieldSpec::Rationals, budget: 200, seed: 1, jobs: None };
        let res = search_tight(&opts).unwrap();
        assert!(res.found.is_none());
        assert!(res.rejected > 0);
    }

    #[test]
    fn inadmissible_k() {
        let opts = SearchOptions { k: 2, field: FieldSpec::GF2, budget: 1, seed: 0, jobs: None };
        assert!(matches!(search_tight(&opts), Err(Error::InadmissibleK(2))));
    }
}
