//! The degree-reduction step and a point sampler built from it.
//!
//! One sample: pick Φ ⊃ Γ at random, find Λ ⊆ Z_Φ = Y_Φ ∩ Γ, recurse on
//! (Y_Φ, Λ) until the degree is 2, parametrize that quadric from a point of
//! Λ and push the parameter image back up through every Φ.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::algebra::field::Field;
use crate::algebra::form::Form;
use crate::algebra::matrix::Matrix;
use crate::algebra::PrimeField;
use crate::error::{Error, Result};
use crate::expansion::{expand_at_plane, PlaneExpansion};
use crate::fano::{enumerate_kplanes, CensusOptions};
use crate::par::{self, Jobs};
use crate::rng;
use crate::varieties::points::{self, PrimeEval};
use crate::varieties::{contains, Hypersurface, KPlane};

use super::quadric::quadric_param;
use super::residual::{residual_in, ResidualDatum};

/// What to do when Y_Φ has an F_p-singular point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SingularResidualPolicy {
    Reject,
    /// Keep Φ as long as the chosen point of Λ is a smooth point of Y_Φ.
    AllowFromSmoothPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Failure {
    NoRoot,
    SingularY,
    DegeneratePhi,
    DegenerateParameter,
    SingularCenter,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FailureTally {
    pub no_root: u64,
    pub singular_y: u64,
    pub degenerate_phi: u64,
    pub degenerate_parameter: u64,
    pub singular_center: u64,
}

impl FailureTally {
    pub fn record(&mut self, f: Failure) {
        match f {
            Failure::NoRoot => self.no_root += 1,
            Failure::SingularY => self.singular_y += 1,
            Failure::DegeneratePhi => self.degenerate_phi += 1,
            Failure::DegenerateParameter => self.degenerate_parameter += 1,
            Failure::SingularCenter => self.singular_center += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.no_root + self.singular_y + self.degenerate_phi + self.degenerate_parameter + self.singular_center
    }
}

/// A successful reduction: the residual over a chosen Φ and an r-plane Λ
/// inside Z_Φ, given in the Φ-coordinates (x_0..x_k, t).
#[derive(Debug, Clone)]
pub struct ReductionStep {
    pub residual: ResidualDatum<PrimeField>,
    pub lambda: KPlane<PrimeField>,
    pub y_singular: bool,
}

/// F_p point of V(g) in P^{nvars-1} where g and all partials vanish.
fn singular_point(g: &Form<PrimeField>) -> Option<Vec<u64>> {
    let p = g.field().p();
    let f = PrimeEval::new(g);
    let grads: Vec<PrimeEval> = (0..g.nvars()).map(|i| PrimeEval::new(&g.derivative(i))).collect();
    points::find_first(g.nvars() - 1, p, Jobs::SEQUENTIAL, |pt| {
        let mut buf = Vec::new();
        (f.eval_with(pt, &mut buf) == 0 && grads.iter().all(|e| e.eval_with(pt, &mut buf) == 0)).then(|| pt.to_vec())
    })
}

fn random_projective<R: Rng + ?Sized>(fl: &PrimeField, len: usize, rng: &mut R) -> Vec<u64> {
    loop {
        let v: Vec<u64> = (0..len).map(|_| fl.random(rng)).collect();
        if let Some(v) = points::normalize(fl, &v) {
            return v;
        }
    }
}

/// One attempt of the reduction step over the expansion along Γ.
pub fn reduction_attempt<R: Rng + ?Sized>(
    x: &Hypersurface<PrimeField>,
    exp: &PlaneExpansion<PrimeField>,
    r: usize,
    policy: SingularResidualPolicy,
    budget: u128,
    rng: &mut R,
) -> Result<std::result::Result<ReductionStep, Failure>> {
    let fl = *x.field();
    let p = fl.p();
    let k = exp.center.dim();
    let a = random_projective(&fl, x.n() - k, rng);
    let res = match residual_in(x, exp, a) {
        Ok(res) => res,
        Err(Error::PhiInsideX) => return Ok(Err(Failure::DegeneratePhi)),
        Err(e) => return Err(e),
    };
    let lambda_rows: Vec<Vec<u64>> = if r == 0 {
        points::check_budget(points::affine_size(k, p), budget)?;
        let z = PrimeEval::new(&res.z);
        let roots = points::scan(k, p, Jobs::SEQUENTIAL, |pt| {
            let mut buf = Vec::new();
            (z.eval_with(pt, &mut buf) == 0).then(|| pt.to_vec())
        });
        match roots.choose(rng) {
            Some(pt) => vec![pt.clone()],
            None => return Ok(Err(Failure::NoRoot)),
        }
    } else {
        if k < 2 {
            return Err(Error::InvalidArgument(format!("an {r}-plane inside Z needs Γ of dimension >= 2")));
        }
        if res.z.is_zero() {
            // Γ ⊆ Y_Φ: any r-plane of Γ will do.
            KPlane::vanishing(&fl, k, &[])?.random_subplane(r, rng).0.rows()
        } else {
            let zx = Hypersurface::new(res.z.clone())?;
            let opts = CensusOptions { budget, jobs: Jobs::SEQUENTIAL, ..Default::default() };
            let census = enumerate_kplanes(&zx, r, None, &opts)?;
            let planes = census.planes.unwrap_or_default();
            match planes.choose(rng) {
                Some(pl) => pl.rows(),
                None => return Ok(Err(Failure::NoRoot)),
            }
        }
    };
    let lifted: Vec<Vec<u64>> = lambda_rows
        .into_iter()
        .map(|mut v| {
            v.push(0);
            v
        })
        .collect();
    let lambda = KPlane::new(&fl, k + 1, lifted)?;
    if !res.y.substitute(&lambda.parametrization())?.is_zero() {
        return Err(Error::Invariant("Λ lies in Z but not in Y".into()));
    }
    let y_singular = singular_point(&res.y).is_some();
    if y_singular {
        match policy {
            SingularResidualPolicy::Reject => return Ok(Err(Failure::SingularY)),
            SingularResidualPolicy::AllowFromSmoothPoint => {
                if r == 0 {
                    let pt = &lambda.rows()[0];
                    if res.y.gradient_at(pt).iter().all(|&c| c == 0) {
                        return Ok(Err(Failure::SingularY));
                    }
                }
            }
        }
    }
    Ok(Ok(ReductionStep { residual: res, lambda, y_singular }))
}

/// Repeat [`reduction_attempt`] until it succeeds or `retries` attempts
/// have failed.
pub fn reduction_step(
    x: &Hypersurface<PrimeField>,
    gamma: &KPlane<PrimeField>,
    r: usize,
    seed: u64,
    retries: usize,
    policy: SingularResidualPolicy,
) -> Result<(ReductionStep, FailureTally)> {
    if x.d() < 2 {
        return Err(Error::DegreeZeroResidual);
    }
    let exp = expand_at_plane(x, gamma)?;
    let mut rng = rng::stream(seed, 0);
    let mut tally = FailureTally::default();
    for _ in 0..retries {
        match reduction_attempt(x, &exp, r, policy, DEFAULT_BUDGET, &mut rng)? {
            Ok(step) => return Ok((step, tally)),
            Err(f) => tally.record(f),
        }
    }
    Err(Error::RetryBudgetExhausted(format!("{tally:?}")))
}

const DEFAULT_BUDGET: u128 = 100_000_000;

struct Sampled {
    point: Vec<u64>,
    used_singular_y: bool,
}

/// One point of V(f) from the tower over (f, Γ), in f's coordinates.
fn sample_point<R: Rng + ?Sized>(
    f: &Form<PrimeField>,
    gamma: &KPlane<PrimeField>,
    policy: SingularResidualPolicy,
    budget: u128,
    rng: &mut R,
) -> Result<std::result::Result<Sampled, Failure>> {
    let fl = *f.field();
    match f.degree() {
        0 => Err(Error::DegreeZeroResidual),
        1 => {
            let m = Matrix::from_rows(&fl, f.nvars(), vec![f.linear_coeffs()]);
            let basis = m.nullspace();
            let mut v = vec![0u64; f.nvars()];
            for b in &basis {
                let c = fl.random(rng);
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi = fl.add_u(*vi, fl.mul_u(c, *bi));
                }
            }
            Ok(if v.iter().all(|&c| c == 0) {
                Err(Failure::DegenerateParameter)
            } else {
                Ok(Sampled { point: v, used_singular_y: false })
            })
        }
        2 => {
            let (pt, _) = gamma.random_subplane(0, rng);
            let par = match quadric_param(f, &pt.rows()[0]) {
                Ok(par) => par,
                Err(Error::PointSingular) => return Ok(Err(Failure::SingularCenter)),
                Err(e) => return Err(e),
            };
            let v = par.eval(&par.random_parameter(rng));
            Ok(if v.iter().all(|&c| c == 0) {
                Err(Failure::DegenerateParameter)
            } else {
                Ok(Sampled { point: v, used_singular_y: false })
            })
        }
        d => {
            let x = Hypersurface::new(f.clone())?;
            let exp = expand_at_plane(&x, gamma)?;
            let r = if d - 1 == 2 { 0 } else { 1 };
            let step = match reduction_attempt(&x, &exp, r, policy, budget, rng)? {
                Ok(s) => s,
                Err(e) => return Ok(Err(e)),
            };
            match sample_point(&step.residual.y, &step.lambda, policy, budget, rng)? {
                Ok(s) => Ok(Ok(Sampled {
                    point: step.residual.lift(&s.point),
                    used_singular_y: s.used_singular_y || step.y_singular,
                })),
                Err(e) => Ok(Err(e)),
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SampleOptions {
    pub policy: SingularResidualPolicy,
    pub budget: u128,
    pub jobs: Jobs,
    /// hit_fraction at or above this counts as dominance evidence.
    pub threshold: f64,
}

impl Default for SampleOptions {
    fn default() -> Self {
        SampleOptions {
            policy: SingularResidualPolicy::AllowFromSmoothPoint,
            budget: DEFAULT_BUDGET,
            jobs: Jobs::default(),
            threshold: 0.5,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TowerSampleReport {
    pub prime: u64,
    pub seed: u64,
    pub samples_requested: usize,
    pub produced: usize,
    pub all_on_x: bool,
    pub distinct: usize,
    /// |X(F_p)| when the point scan fits the budget.
    pub x_points: Option<u64>,
    pub hit_fraction: Option<f64>,
    pub threshold: f64,
    pub dominance_evidence: Option<bool>,
    pub failures: FailureTally,
    /// Produced points whose tower used a singular residual.
    pub through_singular_y: u64,
    pub policy: SingularResidualPolicy,
    #[serde(skip)]
    pub points: Vec<Vec<u64>>,
}

/// Draw `samples` tower points; sample i uses the random stream (seed, i),
/// so the report does not depend on the number of workers.
pub fn unirational_sample(
    x: &Hypersurface<PrimeField>,
    gamma: &KPlane<PrimeField>,
    samples: usize,
    seed: u64,
    opts: &SampleOptions,
) -> Result<TowerSampleReport> {
    if gamma.ambient() != x.n() {
        return Err(Error::DimensionMismatch("Γ lives in a different projective space".into()));
    }
    if !contains(x, gamma)? {
        return Err(Error::NotNested("Γ is not contained in X".into()));
    }
    let fl = *x.field();
    let p = fl.p();
    let outcomes = par::map(opts.jobs, samples, |i| {
        let mut r = rng::stream(seed, i as u64);
        sample_point(x.form(), gamma, opts.policy, opts.budget, &mut r)
    });
    let mut tally = FailureTally::default();
    let mut set = BTreeSet::new();
    let (mut produced, mut all_on_x, mut through_singular) = (0usize, true, 0u64);
    for o in outcomes {
        match o? {
            Ok(s) => {
                produced += 1;
                all_on_x &= x.contains_point(&s.point);
                through_singular += s.used_singular_y as u64;
                set.insert(points::normalize(&fl, &s.point).expect("nonzero point"));
            }
            Err(f) => tally.record(f),
        }
    }
    let x_points = if points::num_points(x.n(), p) <= opts.budget {
        let f = PrimeEval::new(x.form());
        Some(
            points::scan(x.n(), p, opts.jobs, |pt| {
                let mut buf = Vec::new();
                (f.eval_with(pt, &mut buf) == 0).then_some(())
            })
            .len() as u64,
        )
    } else {
        None
    };
    let hit_fraction = x_points.map(|t| set.len() as f64 / t as f64);
    Ok(TowerSampleReport {
        prime: p,
        seed,
        samples_requested: samples,
        produced,
        all_on_x,
        distinct: set.len(),
        x_points,
        hit_fraction,
        threshold: opts.threshold,
        dominance_evidence: hit_fraction.map(|h| h >= opts.threshold),
        failures: tally,
        through_singular_y: through_singular,
        policy: opts.policy,
        points: set.into_iter().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_form;

    fn hyp(s: &str, p: u64) -> Hypersurface<PrimeField> {
        let fl = PrimeField::new(p).unwrap();
        Hypersurface::new(parse_form(s, 4, &fl, None).unwrap()).unwrap()
    }

    /// Independent oracle for the cubic: brute force over every
    /// Φ = <Γ, (0,0,a2,a3)>, every root λ of Z_Φ that is a smooth point of
    /// Y_Φ, and every direction v, collecting the second intersection points.
    fn cubic_reachable(p: u64) -> BTreeSet<Vec<u64>> {
        let fl = PrimeField::new(p).unwrap();
        let mut out = BTreeSet::new();
        for a in [[0u64, 1]].into_iter().chain((0..p).map(|c| [1, c])) {
            // Y = a2 x0^2 + a3 x1^2 + (a2^3 + a3^3) t^2 on Φ, point x0 e0 + x1 e1 + t (a2 e2 + a3 e3).
            let c = fl.add_u(fl.mul_u(a[0], fl.mul_u(a[0], a[0])), fl.mul_u(a[1], fl.mul_u(a[1], a[1])));
            let y = |u: [u64; 3]| {
                fl.add_u(fl.add_u(fl.mul_u(a[0], fl.mul_u(u[0], u[0])), fl.mul_u(a[1], fl.mul_u(u[1], u[1]))), fl.mul_u(c, fl.mul_u(u[2], u[2])))
            };
            for l0 in 0..p {
                for l1 in 0..p {
                    let lam = [l0, l1, 0];
                    if (l0, l1) == (0, 0) || y(lam) != 0 {
                        continue;
                    }
                    // gradient of Y at λ
                    let g = [fl.mul_u(2 * a[0] % p, l0), fl.mul_u(2 * a[1] % p, l1), 0];
                    if g == [0, 0, 0] {
                        continue;
                    }
                    // Every line through λ in Φ: second intersection.
                    for v0 in 0..p {
                        for v1 in 0..p {
                            for v2 in 0..p {
                                let v = [v0, v1, v2];
                                let lv = (0..3).fold(0, |s, i| fl.add_u(s, fl.mul_u(g[i], v[i])));
                                let qv = y(v);
                                let pt: Vec<u64> = (0..3).map(|i| fl.add_u(fl.mul_u(fl.neg(&qv), lam[i]), fl.mul_u(lv, v[i]))).collect();
                                if pt.iter().all(|&c| c == 0) {
                                    continue;
                                }
                                let x = [pt[0], pt[1], fl.mul_u(pt[2], a[0]), fl.mul_u(pt[2], a[1])];
                                out.insert(points::normalize(&fl, &x).unwrap());
                            }
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn cubic_sampler_reaches_the_predicted_set() {
        let x = hyp("x0^2*x2 + x1^2*x3 + x2^3 + x3^3", 7);
        let g = KPlane::vanishing(x.field(), 3, &[2, 3]).unwrap();
        let rep = unirational_sample(&x, &g, 2000, 42, &SampleOptions { jobs: Jobs(1), ..Default::default() }).unwrap();
        assert!(rep.all_on_x);
        assert_eq!(rep.x_points, Some(71));
        let oracle = cubic_reachable(7);
        // Three Φ carry a line pair Y_Φ; from a root on one line the
        // tower reaches both lines except their vertex: 3 * 14 points.
        assert_eq!(oracle.len(), 42);
        let got: BTreeSet<Vec<u64>> = rep.points.iter().cloned().collect();
        assert!(got.is_subset(&oracle));
        assert_eq!(got, oracle);
        assert!(rep.hit_fraction.unwrap() >= 0.5);

        let strict = SampleOptions { policy: SingularResidualPolicy::Reject, jobs: Jobs(1), ..Default::default() };
        let rep = unirational_sample(&x, &g, 200, 42, &strict).unwrap();
        assert_eq!(rep.produced, 0);
    }

    #[test]
    fn quadric_sampler_misses_the_tangent_section() {
        let x = hyp("x0*x3 - x1*x2", 11);
        let g = KPlane::new(x.field(), 3, vec![vec![1, 0, 0, 0]]).unwrap();
        let rep = unirational_sample(&x, &g, 3000, 1, &SampleOptions { jobs: Jobs(2), ..Default::default() }).unwrap();
        assert!(rep.all_on_x);
        assert_eq!(rep.x_points, Some(144));
        // Image of the stereographic map: {x3 != 0} plus the center.
        assert_eq!(rep.distinct, 122);
        for pt in &rep.points {
            assert!(pt[3] != 0 || pt == &vec![1, 0, 0, 0]);
        }
    }

    #[test]
    fn jobs_do_not_change_the_report() {
        let x = hyp("x0^2*x2 + x1^2*x3 + x2^3 + x3^3", 7);
        let g = KPlane::vanishing(x.field(), 3, &[2, 3]).unwrap();
        let a = unirational_sample(&x, &g, 300, 9, &SampleOptions { jobs: Jobs(1), ..Default::default() }).unwrap();
        let b = unirational_sample(&x, &g, 300, 9, &SampleOptions { jobs: Jobs(4), ..Default::default() }).unwrap();
        assert_eq!(a.points, b.points);
        assert_eq!(a.failures, b.failures);
    }

    #[test]
    fn reduction_step_examples() {
        let x = hyp("x0^2*x2 + x1^2*x3 + x2^3 + x3^3", 7);
        let g = KPlane::vanishing(x.field(), 3, &[2, 3]).unwrap();
        let (step, _) = reduction_step(&x, &g, 0, 3, 64, SingularResidualPolicy::AllowFromSmoothPoint).unwrap();
        let lam = step.lambda.rows()[0].clone();
        assert_eq!(step.residual.y.eval(&lam), 0);
        assert_eq!(step.residual.z.eval(&lam[..2]), 0);
        assert!(matches!(
            reduction_step(&x, &g, 0, 3, 64, SingularResidualPolicy::Reject),
            Err(Error::RetryBudgetExhausted(_))
        ));

        let q = hyp("x0*x3 - x1*x2 + x2^2", 7);
        let pt = KPlane::new(q.field(), 3, vec![vec![1, 0, 0, 0]]).unwrap();
        // Over a point, Z_Φ = c(a) x0 has a root only when c(a) = 0, i.e.
        // for Φ tangent to Q; every other Φ fails with NoRoot.
        let (step, tally) = reduction_step(&q, &pt, 0, 5, 256, SingularResidualPolicy::Reject).unwrap();
        assert_eq!(step.residual.y.degree(), 1);
        assert!(step.residual.z.is_zero());
        assert_eq!(tally.no_root + tally.degenerate_phi, tally.total());

        let off = KPlane::new(q.field(), 3, vec![vec![0, 1, 0, 0], vec![0, 0, 1, 0]]).unwrap();
        assert!(matches!(
            unirational_sample(&q, &off, 5, 0, &SampleOptions::default()),
            Err(Error::NotNested(_))
        ));
    }
}
