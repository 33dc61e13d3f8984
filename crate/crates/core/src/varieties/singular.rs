//! Bounded search for singular points.

use serde::Serialize;

use crate::algebra::field::{next_prime, Field};
use crate::error::{Error, Result};
use crate::par::Jobs;
use crate::varieties::hypersurface::Hypersurface;
use crate::varieties::points::{self, PrimeEval};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SingularStatus {
    /// `witness` is a point over F_prime where f and every partial vanish.
    /// `r = 1` is the base field; `r > 1` is the larger-prime proxy for F_{p^r}.
    Singular { witness: Vec<u64>, r: u32, prime: u64 },
    NoSingularPointFound { bound: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchedField {
    pub r: u32,
    pub prime: u64,
    pub points: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingularReport {
    #[serde(flatten)]
    pub status: SingularStatus,
    pub searched: Vec<SearchedField>,
    /// Absence of a witness is bounded evidence, never a proof of smoothness.
    pub evidence: &'static str,
}

impl SingularReport {
    pub fn is_singular(&self) -> bool {
        matches!(self.status, SingularStatus::Singular { .. })
    }
}

/// The field used for extension level r: p itself for r = 1, otherwise the
/// next prime above p^r.
pub fn proxy_prime(p: u64, r: u32) -> Result<u64> {
    if r <= 1 {
        return Ok(p);
    }
    let pr = p
        .checked_pow(r)
        .filter(|&v| v < (1 << 31))
        .ok_or_else(|| Error::InvalidArgument(format!("p^{r} exceeds the supported prime range")))?;
    Ok(next_prime(pr))
}

/// First singular point of X over F_p (canonical point order), then over
/// larger primes for r = 2..=max_r. Witnesses are exact.
pub fn singular_search<F: Field>(
    x: &Hypersurface<F>,
    max_r: u32,
    budget: u128,
    jobs: Jobs,
) -> Result<SingularReport> {
    let base = x.as_prime("singular_search")?;
    let p = base.field().p();
    let n = x.n();
    let mut searched = Vec::new();
    for r in 1..=max_r.max(1) {
        let q = proxy_prime(p, r)?;
        points::check_budget(points::affine_size(n, q), budget)?;
        let xq = if q == p { base.clone() } else { base.reduce_mod(q)? };
        searched.push(SearchedField {
            r,
            prime: q,
            points: points::num_points(n, q),
        });
        if let Some(w) = first_singular_point(&xq, jobs) {
            return Ok(SingularReport {
                status: SingularStatus::Singular { witness: w, r, prime: q },
                searched,
                evidence: EVIDENCE,
            });
        }
    }
    Ok(SingularReport {
        status: SingularStatus::NoSingularPointFound { bound: max_r.max(1) },
        searched,
        evidence: EVIDENCE,
    })
}

const EVIDENCE: &str = "exhaustive over the listed prime fields; larger primes stand in for extension fields";

/// Exhaustive scan of P^n(F_p).
pub fn first_singular_point(
    x: &Hypersurface<crate::algebra::PrimeField>,
    jobs: Jobs,
) -> Option<Vec<u64>> {
    let p = x.field().p();
    let f = PrimeEval::new(x.form());
    let grads: Vec<PrimeEval> = x.partials().iter().map(PrimeEval::new).collect();
    points::find_first(x.n(), p, jobs, |pt| {
        let mut buf = Vec::new();
        if f.eval_with(pt, &mut buf) != 0 {
            return None;
        }
        grads
            .iter()
            .all(|g| g.eval_with(pt, &mut buf) == 0)
            .then(|| pt.to_vec())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_form, PrimeField, Rationals};

    fn hyp(s: &str, nvars: usize, p: u64) -> Hypersurface<PrimeField> {
        let fl = PrimeField::new(p).unwrap();
        Hypersurface::new(parse_form(s, nvars, &fl, None).unwrap()).unwrap()
    }

    #[test]
    fn fermat_is_smooth_at_r1() {
        let x = hyp("x0^3+x1^3+x2^3+x3^3", 4, 7);
        let rep = singular_search(&x, 1, 1 << 30, Jobs::SEQUENTIAL).unwrap();
        assert_eq!(rep.status, SingularStatus::NoSingularPointFound { bound: 1 });
        assert_eq!(rep.searched[0].points, 400);
    }

    #[test]
    fn witnesses() {
        let x = hyp("x0^2*x2 + x1^2*x3", 4, 7);
        let rep = singular_search(&x, 1, 1 << 30, Jobs(3)).unwrap();
        assert_eq!(
            rep.status,
            SingularStatus::Singular { witness: vec![0, 0, 1, 0], r: 1, prime: 7 }
        );
        let y = hyp("x0*x1", 4, 5);
        match singular_search(&y, 1, 1 << 30, Jobs::SEQUENTIAL).unwrap().status {
            SingularStatus::Singular { witness, .. } => {
                assert_eq!(witness, vec![0, 0, 1, 0]);
                // Exactness of the witness.
                assert_eq!(y.form().eval(&witness), 0);
                assert!(y.partials().iter().all(|g| g.eval(&witness) == 0));
            }
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn larger_prime_proxy_and_errors() {
        let x = hyp("x0^2 + x1^2 + x2^2", 3, 5);
        let rep = singular_search(&x, 2, 1 << 30, Jobs::SEQUENTIAL).unwrap();
        assert_eq!(rep.searched.iter().map(|s| s.prime).collect::<Vec<_>>(), vec![5, 29]);
        let q = Hypersurface::new(parse_form("x0*x1 - x2^2", 3, &Rationals, None).unwrap()).unwrap();
        assert!(matches!(singular_search(&q, 1, 1 << 30, Jobs::SEQUENTIAL), Err(Error::Unsupported(_))));
        assert!(matches!(
            singular_search(&x, 1, 10, Jobs::SEQUENTIAL),
            Err(Error::SearchSpaceTooLarge { size: 125, budget: 10 })
        ));
    }
}
