//! The boundary series {Z_Φ} on Γ, basepoint checks and Bertini strata.

use serde::Serialize;

use crate::algebra::field::Field;
use crate::algebra::form::Form;
use crate::algebra::PrimeField;
use crate::error::{Error, Result};
use crate::expansion::{expand_at_plane, Multiset};
use crate::par::Jobs;
use crate::varieties::points::{self, PrimeEval};
use crate::varieties::{Hypersurface, KPlane};

/// Z(a) = sum_{|I| = d-1} c_I(a) x^I on Γ ≅ P^k, with every c_I linear in
/// the n-k fiber coordinates a.
#[derive(Debug, Clone)]
pub struct BoundarySeries<F: Field> {
    pub gamma: KPlane<F>,
    pub d: u32,
    /// c_I restricted to the fiber coordinates (n-k variables).
    pub rows: Vec<(Multiset, Form<F>)>,
}

impl<F: Field> BoundarySeries<F> {
    /// Number of fiber coordinates, m + 1.
    pub fn params(&self) -> usize {
        self.gamma.ambient() - self.gamma.dim()
    }

    /// Z for a specific fiber point, a form of degree d-1 in k+1 variables.
    pub fn specialize(&self, a: &[F::Elem]) -> Form<F> {
        let fl = self.gamma.field();
        let k1 = self.gamma.dim() + 1;
        let mut z = Form::zero(fl, k1, self.d.saturating_sub(1));
        for (i, c) in &self.rows {
            let v = c.eval(a);
            if !fl.is_zero(&v) {
                z = z.add(&Form::monomial(fl, i.0.clone(), v)).expect("same shape");
            }
        }
        z
    }

    /// The members Z(e_j): Z(a) = sum_j a_j B_j.
    pub fn generators(&self) -> LinearSeries<F> {
        let fl = self.gamma.field();
        let gens = (0..self.params())
            .map(|j| {
                let mut e = vec![fl.zero(); self.params()];
                e[j] = fl.one();
                self.specialize(&e)
            })
            .collect();
        LinearSeries { k: self.gamma.dim(), generators: gens }
    }
}

/// Rows c_I with |I| = d-1 of the expansion along Γ. Empty for d = 1,
/// where the members carry no points.
pub fn boundary_series<F: Field>(x: &Hypersurface<F>, gamma: &KPlane<F>) -> Result<BoundarySeries<F>> {
    let exp = expand_at_plane(x, gamma)?;
    let d = x.d();
    let rows = if d == 1 {
        Vec::new()
    } else {
        exp.ordered()
            .into_iter()
            .filter(|(i, _)| i.size() == d - 1)
            .map(|(i, _)| {
                let c = exp.fiber_form(&i);
                (i, c)
            })
            .collect()
    };
    Ok(BoundarySeries { gamma: gamma.clone(), d, rows })
}

/// A linear system sum_j a_j B_j on P^k; the parameter space is P^m with
/// m + 1 generators.
#[derive(Debug, Clone)]
pub struct LinearSeries<F: Field> {
    pub k: usize,
    pub generators: Vec<Form<F>>,
}

impl<F: Field> LinearSeries<F> {
    pub fn m(&self) -> usize {
        self.generators.len().saturating_sub(1)
    }

    pub fn member(&self, a: &[F::Elem]) -> Form<F> {
        let fl = self.generators[0].field();
        let mut out = Form::zero(fl, self.k + 1, self.generators[0].degree());
        for (g, c) in self.generators.iter().zip(a) {
            if !fl.is_zero(c) {
                out = out.add(&g.scale(c)).expect("same shape");
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasepointReport {
    pub free: bool,
    /// First basepoint in canonical order.
    pub witness: Option<Vec<u64>>,
    pub prime: u64,
    pub primes_checked: Vec<u64>,
    pub evidence: &'static str,
}

/// Common zeros of all members over F_p and then over `second_prime` for
/// the same integer recipe (symmetric lift).
pub fn basepoint_free_check(
    series: &BoundarySeries<PrimeField>,
    second_prime: Option<u64>,
    jobs: Jobs,
) -> Result<BasepointReport> {
    let gens = series.generators();
    let p = series.gamma.field().p();
    let mut primes = vec![p];
    if let Some(q) = second_prime {
        if q != p {
            primes.push(q);
        }
    }
    let mut checked = Vec::new();
    for &q in &primes {
        checked.push(q);
        let fl = PrimeField::new(q)?;
        let forms: Vec<Form<PrimeField>> =
            gens.generators.iter().map(|g| g.to_field(&fl)).collect::<Result<_>>()?;
        if let Some(w) = base_point(gens.k, q, &forms, jobs) {
            return Ok(BasepointReport {
                free: false,
                witness: Some(w),
                prime: q,
                primes_checked: checked,
                evidence: BP_EVIDENCE,
            });
        }
    }
    Ok(BasepointReport { free: true, witness: None, prime: p, primes_checked: checked, evidence: BP_EVIDENCE })
}

const BP_EVIDENCE: &str = "exhaustive over the listed prime fields; freeness over the algebraic closure is not certified";

fn base_point(k: usize, p: u64, forms: &[Form<PrimeField>], jobs: Jobs) -> Option<Vec<u64>> {
    if forms.is_empty() || forms.iter().all(|f| f.degree() == 0) {
        return None;
    }
    let evs: Vec<PrimeEval> = forms.iter().map(PrimeEval::new).collect();
    points::find_first(k, p, jobs, |pt| {
        let mut buf = Vec::new();
        evs.iter().all(|e| e.eval_with(pt, &mut buf) == 0).then(|| pt.to_vec())
    })
}

/// How the base-locus dimension b entering S_j is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseDim {
    /// From the F_p points of the base locus.
    Measured,
    /// Supplied by the caller, e.g. -1 when basepoint-freeness is predicted.
    Assumed(i64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stratum {
    pub j: i64,
    /// Parameters whose member has singular-locus evidence dimension >= j + b.
    pub count: u64,
    pub evidence_dim: i64,
    /// m - j.
    pub bound: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BertiniStrata {
    pub prime: u64,
    pub m: usize,
    pub k: usize,
    pub base_dim: i64,
    pub base_dim_source: BaseDim,
    pub strata: Vec<Stratum>,
    pub violation: bool,
}

/// round(log_p(count)), or -1 for an empty set.
pub fn evidence_dim(count: u64, p: u64) -> i64 {
    if count == 0 {
        -1
    } else {
        ((count as f64).ln() / (p as f64).ln()).round() as i64
    }
}

/// S_j = {a in P^m : dim Sing(D_a) >= j + b} over F_p, with dimensions read
/// off from point counts. A member that vanishes identically is singular
/// everywhere (dimension k).
pub fn bertini_strata(series: &LinearSeries<PrimeField>, base: BaseDim, budget: u128, jobs: Jobs) -> Result<BertiniStrata> {
    if series.generators.is_empty() {
        return Err(Error::InvalidArgument("empty linear series".into()));
    }
    let fl = *series.generators[0].field();
    let p = fl.p();
    let (k, m) = (series.k, series.m());
    let work = points::num_points(m, p).saturating_mul(points::num_points(k, p));
    points::check_budget(work, budget)?;
    let base_dim = match base {
        BaseDim::Measured => {
            let evs: Vec<PrimeEval> = series.generators.iter().map(PrimeEval::new).collect();
            let count = points::scan(k, p, Jobs::SEQUENTIAL, |pt| {
                let mut buf = Vec::new();
                evs.iter().all(|e| e.eval_with(pt, &mut buf) == 0).then_some(())
            })
            .len() as u64;
            evidence_dim(count, p)
        }
        BaseDim::Assumed(b) => b,
    };
    let sing_dims: Vec<i64> = points::scan(m, p, jobs, |a| {
        let d = series.member(a);
        if d.is_zero() {
            return Some(k as i64);
        }
        let f = PrimeEval::new(&d);
        let grads: Vec<PrimeEval> = (0..=k).map(|i| PrimeEval::new(&d.derivative(i))).collect();
        let mut buf = Vec::new();
        let mut count = 0u64;
        let mut pt = points::point_at(k, p, 0);
        loop {
            if f.eval_with(&pt, &mut buf) == 0 && grads.iter().all(|g| g.eval_with(&pt, &mut buf) == 0) {
                count += 1;
            }
            if !points::advance(p, &mut pt) {
                break;
            }
        }
        Some(evidence_dim(count, p))
    });
    let mut strata = Vec::new();
    let mut violation = false;
    let mut j = 0i64;
    while j + base_dim <= k as i64 {
        let count = sing_dims.iter().filter(|&&s| s >= j + base_dim).count() as u64;
        let ev = evidence_dim(count, p);
        let bound = m as i64 - j;
        violation |= ev > bound;
        strata.push(Stratum { j, count, evidence_dim: ev, bound });
        j += 1;
    }
    Ok(BertiniStrata { prime: p, m, k, base_dim, base_dim_source: base, strata, violation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_form, Rationals};

    fn hyp(s: &str, p: u64) -> Hypersurface<PrimeField> {
        let fl = PrimeField::new(p).unwrap();
        Hypersurface::new(parse_form(s, 4, &fl, None).unwrap()).unwrap()
    }

    #[test]
    fn worked_series() {
        let q = Rationals;
        let x = Hypersurface::new(parse_form("x0*x3 - x1*x2", 4, &q, None).unwrap()).unwrap();
        let g = KPlane::vanishing(&q, 3, &[2, 3]).unwrap();
        let s = boundary_series(&x, &g).unwrap();
        let rendered: Vec<(String, String)> = s.rows.iter().map(|(i, c)| (i.render(), c.render())).collect();
        // c_{0} = a3, c_{1} = -a2 in fiber variables (a2, a3) -> (x0, x1).
        assert_eq!(rendered, vec![("{0}".to_string(), "x1".to_string()), ("{1}".to_string(), "-x0".to_string())]);
        for (_, c) in &s.rows {
            assert_eq!(c.degree(), 1);
        }

        let x = hyp("x0^2*x2 + x1^2*x3 + x2^3 + x3^3", 7);
        let g = KPlane::vanishing(x.field(), 3, &[2, 3]).unwrap();
        let s = boundary_series(&x, &g).unwrap();
        let fl = *x.field();
        assert_eq!(s.specialize(&[3, 5]), parse_form("3*x0^2 + 5*x1^2", 2, &fl, None).unwrap());
        let r = basepoint_free_check(&s, Some(13), Jobs::SEQUENTIAL).unwrap();
        assert!(r.free);
        assert_eq!(r.primes_checked, vec![7, 13]);
    }

    #[test]
    fn series_matches_residual() {
        let x = hyp("x0^2*x2 + x1^2*x3 + x2^3 + x3^3 + 2*x0*x1*x3", 11);
        let g = KPlane::vanishing(x.field(), 3, &[2, 3]).unwrap();
        let s = boundary_series(&x, &g).unwrap();
        for a in [[1u64, 0], [0, 1], [1, 7], [4, 9]] {
            let phi = g.span_with(&[0, 0, a[0], a[1]]).unwrap();
            let r = super::super::residual(&x, &g, &phi).unwrap();
            let fl = x.field();
            // Φ is stored in RREF, so Z may differ from the series by a scalar.
            let lead = if a[0] != 0 { a[0] } else { a[1] };
            let scaled = s.specialize(&a).scale(&fl.inv_u(lead).unwrap());
            assert_eq!(r.z, scaled);
        }
    }

    #[test]
    fn singular_control_has_a_basepoint() {
        let x = hyp("x0^2*x2 + x0*x1*x3 + x2^3 + x3^3", 7);
        let g = KPlane::vanishing(x.field(), 3, &[2, 3]).unwrap();
        let s = boundary_series(&x, &g).unwrap();
        let r = basepoint_free_check(&s, None, Jobs::SEQUENTIAL).unwrap();
        assert!(!r.free);
        assert_eq!(r.witness, Some(vec![0, 1]));
    }

    #[test]
    fn degree_one_series_is_empty() {
        let x = hyp("x3", 5);
        let g = KPlane::vanishing(x.field(), 3, &[2, 3]).unwrap();
        let s = boundary_series(&x, &g).unwrap();
        assert!(s.rows.is_empty());
        assert!(basepoint_free_check(&s, None, Jobs::SEQUENTIAL).unwrap().free);
    }

    #[test]
    fn strata_examples() {
        let fl = PrimeField::new(7).unwrap();
        let lines = LinearSeries {
            k: 2,
            generators: (0..3).map(|i| Form::var(&fl, 3, i)).collect(),
        };
        let s = bertini_strata(&lines, BaseDim::Measured, 1 << 30, Jobs::SEQUENTIAL).unwrap();
        assert_eq!(s.base_dim, -1);
        assert_eq!((s.strata[0].count, s.strata[0].evidence_dim), (57, 2));
        assert_eq!(s.strata[1].count, 0);
        assert!(!s.violation);

        let x = hyp("x0^2*x2 + x1^2*x3 + x2^3 + x3^3", 7);
        let g = KPlane::vanishing(&fl, 3, &[2, 3]).unwrap();
        let pencil = boundary_series(&x, &g).unwrap().generators();
        let s = bertini_strata(&pencil, BaseDim::Measured, 1 << 30, Jobs::SEQUENTIAL).unwrap();
        // Only x0^2 and x1^2 are singular members.
        assert_eq!(s.strata[1].count, 2);
        assert_eq!(s.strata[1].evidence_dim, 0);
        assert!(!s.violation);
        for w in s.strata.windows(2) {
            assert!(w[0].count >= w[1].count);
        }
    }

    #[test]
    fn cone_control_violates_only_under_the_freeness_assumption() {
        let x = hyp("x0^2*x2 + x0^2*x3 + x2^3 + x3^3", 7);
        let g = KPlane::vanishing(x.field(), 3, &[2, 3]).unwrap();
        let pencil = boundary_series(&x, &g).unwrap().generators();
        let measured = bertini_strata(&pencil, BaseDim::Measured, 1 << 30, Jobs::SEQUENTIAL).unwrap();
        assert_eq!(measured.base_dim, 0);
        assert!(!measured.violation);
        let assumed = bertini_strata(&pencil, BaseDim::Assumed(-1), 1 << 30, Jobs::SEQUENTIAL).unwrap();
        assert!(assumed.violation);
    }
}
