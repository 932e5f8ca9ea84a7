//! Tightness deciders: the definitional subset scan, the closed 3-manifold
//! criterion `(f0-4)(f0-5) = 20 β1` plus orientability, and the surface
//! criterion (orientable and neighbourly).

use std::time::{Duration, Instant};

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{Complex, VertexId};
use crate::error::{Error, Result};
use crate::homology::{betti, InjectivityTester, InjectivityWitness};
use crate::linalg::{FieldSpec, Scalar};
use crate::manifold::{require_closed, verify_closed_manifold};

/// Default cap on the vertex count for the exponential subset scan.
pub const BRUTE_FORCE_CAP: usize = 30;

/// Subsets handed to the thread pool at a time. Fixed so that the reported
/// witness does not depend on the number of threads.
const CHUNK: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Method {
    #[serde(rename = "brute")]
    Brute,
    #[serde(rename = "fast-3mfld")]
    Fast3Manifold,
    #[serde(rename = "surface")]
    Surface,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Auto,
    Fast,
    Brute,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TightnessWitness {
    /// Clause (a) fails.
    Disconnected { components: Vec<Vec<VertexId>> },
    /// Clause (b) fails for the induced subcomplex on `vertices`.
    Subset { vertices: Vec<VertexId>, degree: usize, cycle: Vec<(Vec<VertexId>, Scalar)> },
}

impl TightnessWitness {
    pub fn subset(&self) -> Option<&[VertexId]> {
        match self {
            TightnessWitness::Subset { vertices, .. } => Some(vertices),
            TightnessWitness::Disconnected { .. } => None,
        }
    }
}

/// The quantities the closed 3-manifold criterion is evaluated on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FastCriterion {
    pub connected: bool,
    pub orientable: bool,
    pub f0: usize,
    pub beta1: usize,
    /// `(f0 - 4)(f0 - 5)`
    pub lhs: i64,
    /// `20 β1`
    pub rhs: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceCriterion {
    pub orientable: bool,
    pub neighbourly: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TightnessReport {
    pub verdict: bool,
    pub method: Method,
    pub field: FieldSpec,
    pub witness: Option<TightnessWitness>,
    pub fast: Option<FastCriterion>,
    pub surface: Option<SurfaceCriterion>,
    /// Subsets examined up to and including the first failure.
    pub subsets_scanned: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Default)]
pub struct BruteOptions {
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    /// Lift the [`BRUTE_FORCE_CAP`] vertex limit.
    pub allow_exponential: bool,
}

pub fn is_tight_bruteforce(x: &Complex, field: FieldSpec) -> Result<TightnessReport> {
    is_tight_bruteforce_with(x, field, &BruteOptions::default())
}

/// Scan every vertex subset `W` with `2 <= |W| < |V|`, by increasing size and
/// then lexicographically, and report the first whose inclusion fails to
/// inject in homology.
pub fn is_tight_bruteforce_with(x: &Complex, field: FieldSpec, opts: &BruteOptions) -> Result<TightnessReport> {
    if x.is_empty() {
        return Err(Error::Malformed("empty complex".into()));
    }
    let n = x.num_vertices();
    if n > BRUTE_FORCE_CAP && !opts.allow_exponential {
        return Err(Error::TooManyVertices(n, BRUTE_FORCE_CAP));
    }
    let start = Instant::now();
    let report = |verdict, witness, scanned| TightnessReport {
        verdict,
        method: Method::Brute,
        field,
        witness,
        fast: None,
        surface: None,
        subsets_scanned: scanned,
        elapsed: start.elapsed(),
    };
    if !x.is_connected() {
        return Ok(report(false, Some(TightnessWitness::Disconnected { components: x.components() }), 0));
    }

    let tester = InjectivityTester::new(x, field);
    let pool = match opts.jobs {
        Some(j) => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(j.max(1))
                .build()
                .map_err(|e| Error::Inconsistent(format!("thread pool: {e}")))?,
        ),
        None => None,
    };
    let scan = |chunk: &[Vec<usize>]| -> Option<(usize, InjectivityWitness)> {
        let run = || chunk.par_iter().enumerate().find_map_first(|(i, w)| tester.test(w).map(|wit| (i, wit)));
        match &pool {
            Some(p) => p.install(run),
            None => run(),
        }
    };

    let mut scanned = 0u64;
    for size in 2..n {
        for chunk in &(0..n).combinations(size).chunks(CHUNK) {
            let chunk: Vec<Vec<usize>> = chunk.collect();
            if let Some((i, wit)) = scan(&chunk) {
                scanned += i as u64 + 1;
                let vertices = chunk[i].iter().map(|&j| x.vertices()[j]).collect();
                let witness = TightnessWitness::Subset { vertices, degree: wit.degree, cycle: wit.cycle };
                return Ok(report(false, Some(witness), scanned));
            }
            scanned += chunk.len() as u64;
        }
    }
    Ok(report(true, None, scanned))
}

/// The witness the subset scan would report first when it is found without
/// scanning: the components of a disconnected complex or the first non-edge.
fn cheap_witness(x: &Complex, field: FieldSpec) -> Option<TightnessWitness> {
    if !x.is_connected() {
        return Some(TightnessWitness::Disconnected { components: x.components() });
    }
    let g = x.graph();
    let (i, j) = (0..g.len()).tuple_combinations().find(|&(i, j)| !g.adjacent(i, j))?;
    let wit = InjectivityTester::new(x, field).test(&[i, j])?;
    Some(TightnessWitness::Subset { vertices: vec![g.label(i), g.label(j)], degree: wit.degree, cycle: wit.cycle })
}

/// Tightness of a closed 3-manifold: orientable and `(f0-4)(f0-5) = 20 β1`.
/// The manifold precondition is checked here, not trusted.
pub fn is_tight_fast_3manifold(x: &Complex, field: FieldSpec) -> Result<TightnessReport> {
    let start = Instant::now();
    require_closed(x, 3)?;
    let b = betti(x, field)?;
    let f0 = x.num_vertices();
    let crit = FastCriterion {
        connected: x.is_connected(),
        orientable: b.get(3) > 0,
        f0,
        beta1: b.get(1),
        lhs: (f0 as i64 - 4) * (f0 as i64 - 5),
        rhs: 20 * b.get(1) as i64,
    };
    let verdict = crit.connected && crit.orientable && crit.lhs == crit.rhs;
    Ok(TightnessReport {
        verdict,
        method: Method::Fast3Manifold,
        field,
        witness: if verdict { None } else { cheap_witness(x, field) },
        fast: Some(crit),
        surface: None,
        subsets_scanned: 0,
        elapsed: start.elapsed(),
    })
}

/// Tightness of a closed surface: orientable and neighbourly.
pub fn is_tight_surface(x: &Complex, field: FieldSpec) -> Result<TightnessReport> {
    let start = Instant::now();
    require_closed(x, 2)?;
    let crit = SurfaceCriterion { orientable: betti(x, field)?.get(2) > 0, neighbourly: x.is_neighbourly() };
    let verdict = crit.orientable && crit.neighbourly;
    Ok(TightnessReport {
        verdict,
        method: Method::Surface,
        field,
        witness: if verdict { None } else { cheap_witness(x, field) },
        fast: None,
        surface: Some(crit),
        subsets_scanned: 0,
        elapsed: start.elapsed(),
    })
}

/// Pick a decider. `Auto` uses the 3-manifold criterion for closed
/// 3-manifolds, the surface criterion for closed surfaces, and the subset
/// scan otherwise.
pub fn decide(x: &Complex, field: FieldSpec, mode: Mode, opts: &BruteOptions) -> Result<TightnessReport> {
    match mode {
        Mode::Brute => is_tight_bruteforce_with(x, field, opts),
        Mode::Fast => is_tight_fast_3manifold(x, field),
        Mode::Auto => match verify_closed_manifold(x) {
            Ok(r) if r.holds && r.dim == 3 => is_tight_fast_3manifold(x, field),
            Ok(r) if r.holds && r.dim == 2 => is_tight_surface(x, field),
            Ok(_) | Err(Error::UnsupportedDimension(_)) => is_tight_bruteforce_with(x, field, opts),
            Err(e) => Err(e),
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossValidation {
    pub verdict: bool,
    pub brute: TightnessReport,
    pub fast: TightnessReport,
}

/// Run both deciders on a closed 3-manifold and insist they agree.
pub fn cross_validate(x: &Complex, field: FieldSpec, opts: &BruteOptions) -> Result<CrossValidation> {
    let fast = is_tight_fast_3manifold(x, field)?;
    let brute = is_tight_bruteforce_with(x, field, opts)?;
    if brute.verdict != fast.verdict {
        return Err(Error::Inconsistent(format!(
            "brute force says {} (witness {:?}) but the 3-manifold criterion says {} ({:?}) over {field}",
            brute.verdict, brute.witness, fast.verdict, fast.fast
        )));
    }
    Ok(CrossValidation { verdict: brute.verdict, brute, fast })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceBounds {
    /// The f-vector forced by `f0` and `chi`: `(f0, 3(f0 - chi), 2(f0 - chi))`.
    pub f_vector: [i64; 3],
    /// False when that f-vector cannot belong to a simplicial surface.
    pub feasible: bool,
    /// Least `f0 >= 4` with `f0 (f0 - 7) >= -6 chi`.
    pub min_f0: i64,
}

pub fn surface_fvector_bounds(chi: i64, f0: i64) -> Result<SurfaceBounds> {
    if chi > 2 {
        return Err(Error::Malformed(format!("Euler characteristic {chi} > 2 is impossible for a closed surface")));
    }
    if f0 < 3 {
        return Err(Error::Malformed(format!("f0 = {f0} < 3")));
    }
    let f1 = 3 * (f0 - chi);
    let f2 = 2 * (f0 - chi);
    let feasible = f0 >= 4 && f2 > 0 && f1 <= f0 * (f0 - 1) / 2;
    let mut min_f0 = 4;
    while min_f0 * (min_f0 - 7) < -6 * chi {
        min_f0 += 1;
    }
    Ok(SurfaceBounds { f_vector: [f0, f1, f2], feasible, min_f0 })
}
