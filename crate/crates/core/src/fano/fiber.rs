//! Fano fibers F^Λ(X) as explicit equation systems, expected dimensions and
//! census-based dimension estimates.

use serde::Serialize;

use crate::algebra::binomial;
use crate::algebra::field::Field;
use crate::algebra::form::Form;
use crate::algebra::PrimeField;
use crate::error::{Error, Result};
use crate::expansion::{expand_at_plane, plane_diagnostics, DiagOptions, Multiset, PlaneExpansion};
use crate::par::Jobs;
use crate::varieties::points::{self, PrimeEval};
use crate::varieties::{Hypersurface, KPlane};

use super::census::{enumerate_kplanes, CensusOptions};

/// The k-planes through a (k-1)-plane center, cut out in P^{n-k} (fiber
/// coordinates a_k..a_n, renumbered from 0) by the c_I.
#[derive(Debug, Clone)]
pub struct FanoFiber<F: Field> {
    pub expansion: PlaneExpansion<F>,
    pub equations: Vec<(Multiset, Form<F>)>,
    pub expected_dim: i64,
}

impl<F: Field> FanoFiber<F> {
    pub fn center(&self) -> &KPlane<F> {
        &self.expansion.center
    }

    pub fn fiber_dim(&self) -> usize {
        self.expansion.n() - self.expansion.k()
    }

    pub fn is_solution(&self, a: &[F::Elem]) -> bool {
        let fl = self.expansion.field();
        self.equations.iter().all(|(_, g)| fl.is_zero(&g.eval(a)))
    }
}

pub fn fano_fiber<F: Field>(x: &Hypersurface<F>, center: &KPlane<F>) -> Result<FanoFiber<F>> {
    let expansion = expand_at_plane(x, center)?;
    let k = expansion.k();
    let equations = expansion
        .ordered()
        .into_iter()
        .map(|(i, _)| {
            let g = expansion.fiber_form(&i);
            (i, g)
        })
        .collect();
    let expected_dim = expected_dims(x.n(), x.d(), k).fiber;
    Ok(FanoFiber { expansion, equations, expected_dim })
}

/// All F_p points of the fiber, in canonical point order.
pub fn fiber_points(fiber: &FanoFiber<PrimeField>, budget: u128, jobs: Jobs) -> Result<Vec<Vec<u64>>> {
    let m = fiber.fiber_dim();
    let p = fiber.expansion.field().p();
    points::check_budget(points::affine_size(m, p), budget)?;
    let evs: Vec<PrimeEval> = fiber.equations.iter().map(|(_, g)| PrimeEval::new(g)).collect();
    Ok(points::scan(m, p, jobs, |a| {
        let mut buf = Vec::new();
        evs.iter().all(|e| e.eval_with(a, &mut buf) == 0).then(|| a.to_vec())
    }))
}

/// n - k - delta at a fiber point; the dimension of the tangent space.
pub fn tangent_dim<F: Field>(x: &Hypersurface<F>, fiber: &FanoFiber<F>, a: &[F::Elem], opts: DiagOptions) -> Result<usize> {
    if !fiber.is_solution(a) {
        return Err(Error::NotAFanoPoint);
    }
    let t = plane_diagnostics(x, &fiber.expansion, a, opts)?;
    Ok(t.tangent_dim(fiber.fiber_dim()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExpectedDims {
    /// (k+1)(n-k) - C(d+k, k)
    pub fano: i64,
    /// n - k - C(d+k-1, k)
    pub fiber: i64,
    /// n - 1 - d
    pub point_fiber: i64,
}

pub fn expected_dims(n: usize, d: u32, k: usize) -> ExpectedDims {
    let (n, d, k) = (n as i64, d as i64, k as i64);
    ExpectedDims {
        fano: (k + 1) * (n - k) - binomial((d + k) as u64, k as u64) as i64,
        fiber: n - k - binomial((d + k - 1) as u64, k as u64) as i64,
        point_fiber: n - 1 - d,
    }
}

/// round(log(c2/c1) / log(p2/p1)). Both counts zero gives -1; a single zero
/// count falls back to log_p of the other.
pub fn estimate_from_counts(c1: u64, p1: u64, c2: u64, p2: u64) -> i64 {
    let ln = |v: u64| (v as f64).ln();
    match (c1, c2) {
        (0, 0) => -1,
        (0, c) => (ln(c) / ln(p2)).round() as i64,
        (c, 0) => (ln(c) / ln(p1)).round() as i64,
        (a, b) => ((ln(b) - ln(a)) / (ln(p2) - ln(p1))).round() as i64,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionEstimate {
    pub primes: (u64, u64),
    pub counts: (u64, u64),
    pub estimate: i64,
    /// Expected dimension of F_k(X) for comparison.
    pub expected: i64,
    pub evidence: &'static str,
}

/// Census at two primes of the same integer polynomial (through the
/// canonical lift of the coefficients).
pub fn dimension_estimate<F: Field>(
    x: &Hypersurface<F>,
    k: usize,
    primes: (u64, u64),
    opts: &CensusOptions,
) -> Result<DimensionEstimate> {
    let x1 = x.reduce_mod(primes.0)?;
    let x2 = x.reduce_mod(primes.1)?;
    let c1 = enumerate_kplanes(&x1, k, None, opts)?.count;
    let c2 = enumerate_kplanes(&x2, k, None, opts)?.count;
    Ok(DimensionEstimate {
        primes,
        counts: (c1, c2),
        estimate: estimate_from_counts(c1, primes.0, c2, primes.1),
        expected: expected_dims(x.n(), x.d(), k).fano,
        evidence: "point counts at two primes; heuristic",
    })
}
