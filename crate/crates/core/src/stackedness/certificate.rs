use crate::complex::Complex;
use crate::constructions::{handle_addition, Certificate};
use crate::error::{Error, Result};
use crate::iso::is_isomorphic;
use crate::Verdict;

use super::stacked::is_stacked_sphere;

/// Rebuild the complex a certificate describes, checking that the seed is a
/// stacked sphere and that every handle step is admissible.
pub fn replay_certificate(cert: &Certificate) -> Result<Complex> {
    let d = cert.seed.dim();
    let seed = cert.seed.build().map_err(|e| Error::Replay(format!("seed: {e}")))?;
    let stacked = is_stacked_sphere(&seed, d).map_err(|e| Error::Replay(format!("seed: {e}")))?;
    if !stacked.holds {
        return Err(Error::Replay(format!("seed with f-vector {} is not a stacked {d}-sphere", seed.f_vector())));
    }
    let mut x = seed;
    for (i, step) in cert.steps.iter().enumerate() {
        x = handle_addition(&x, step).map_err(|e| Error::Replay(format!("handle step {i}: {e}")))?;
    }
    if x.f_vector().0 != cert.f_vector {
        return Err(Error::Replay(format!(
            "replay gives f-vector {} but the certificate records {:?}",
            x.f_vector(),
            cert.f_vector
        )));
    }
    Ok(x)
}

/// Does the certificate rebuild a complex isomorphic to `m`?
pub fn verify_stacked_certificate(m: &Complex, cert: &Certificate) -> Result<Verdict<String>> {
    let x = replay_certificate(cert)?;
    Ok(if is_isomorphic(&x, m).is_some() {
        Verdict::pass()
    } else {
        Verdict::fail(format!("replay gives f-vector {}, not isomorphic to the input ({})", x.f_vector(), m.f_vector()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::constructions::{path_stacked_sphere, HandleStep, Seed};

    #[test]
    fn trivial_certificate() {
        let cert = Certificate::simplex(3).unwrap();
        assert!(verify_stacked_certificate(&builtin::boundary_simplex(4), &cert).unwrap().holds);
        assert!(
            verify_stacked_certificate(&builtin::boundary_simplex(3), &Certificate::simplex(2).unwrap()).unwrap().holds
        );
    }

    #[test]
    fn adjacent_match_fails_replay() {
        let s = path_stacked_sphere(13).unwrap();
        let cert = Certificate {
            seed: Seed::Facets { dim: 3, facets: s.facet_lists() },
            steps: vec![HandleStep {
                facet1: vec![0, 1, 2, 3],
                facet2: vec![4, 6, 7, 8],
                bijection: vec![(0, 4), (1, 6), (2, 7), (3, 8)],
            }],
            f_vector: vec![9, 36, 54, 27],
            rng_seed: None,
            restart: None,
        };
        assert!(matches!(verify_stacked_certificate(&s, &cert), Err(Error::Replay(m)) if m.contains("adjacent")));
    }

    #[test]
    fn non_stacked_seed_is_rejected() {
        let c = crate::constructions::cyclic_polytope_boundary(7, 4).unwrap();
        let cert = Certificate {
            seed: Seed::Facets { dim: 3, facets: c.facet_lists() },
            steps: vec![],
            f_vector: c.f_vector().0,
            rng_seed: None,
            restart: None,
        };
        assert!(matches!(verify_stacked_certificate(&c, &cert), Err(Error::Replay(_))));
    }

    #[test]
    fn mismatch_is_a_failed_verdict() {
        let cert = Certificate::simplex(3).unwrap();
        let other = crate::constructions::stacked_sphere(6, 3, 0).unwrap();
        let v = verify_stacked_certificate(&other, &cert).unwrap();
        assert!(!v.holds);
    }
}
