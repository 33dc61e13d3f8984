//! Linear parts of the local Fano equations, delta, and downward bases.

use serde::Serialize;

use crate::algebra::field::Field;
use crate::algebra::form::Form;
use crate::algebra::matrix::Matrix;
use crate::error::{Error, Result};
use crate::rng;
use crate::varieties::{Hypersurface, KPlane};

use super::plane::{expand_in_frame, frame_from, Multiset, PlaneExpansion};
use super::point::PointExpansion;

#[derive(Debug, Clone, Serialize)]
pub struct TangentDiagnostics {
    /// The diagnosed fiber point, rendered.
    pub at: Vec<String>,
    /// Global variable index dropped by the affine chart (the first nonzero
    /// fiber coordinate).
    pub chart: usize,
    /// Rendered linear parts, in index order.
    pub linear_parts: Vec<(String, String)>,
    pub delta: usize,
    pub downward_set: Option<Vec<Multiset>>,
    /// Seeds of re-randomized centers that were tried (empty when the
    /// given center already worked).
    pub seeds: Vec<u64>,
}

impl TangentDiagnostics {
    /// Dimension of the tangent space to the fiber at the point.
    pub fn tangent_dim(&self, fiber_dim: usize) -> usize {
        fiber_dim - self.delta
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DiagOptions {
    pub seed: u64,
    pub retries: usize,
}

impl Default for DiagOptions {
    fn default() -> Self {
        DiagOptions { seed: 0, retries: 32 }
    }
}

/// Linear part of `f` at the fiber point `a` in the chart a_{j0} = 1, as a
/// vector over the remaining fiber coordinates.
fn linear_part<F: Field>(f: &Form<F>, a: &[F::Elem], j0: usize) -> Vec<F::Elem> {
    let mut g = f.gradient_at(a);
    g.remove(j0);
    g
}

fn chart_of<F: Field>(fl: &F, a: &[F::Elem]) -> Result<usize> {
    a.iter()
        .position(|c| !fl.is_zero(c))
        .ok_or_else(|| Error::InvalidArgument("the zero vector is not a fiber point".into()))
}

fn rank_of<F: Field>(fl: &F, rows: &[Vec<F::Elem>], width: usize) -> usize {
    if rows.is_empty() {
        return 0;
    }
    Matrix::from_rows(fl, width, rows.to_vec()).rank()
}

/// Diagnostics for F^p(X) at a fiber point of a point expansion.
pub fn point_diagnostics<F: Field>(exp: &PointExpansion<F>, a: &[F::Elem]) -> Result<TangentDiagnostics> {
    let fl = exp.coordinate_change.field().clone();
    let n = exp.n();
    if a.len() != n {
        return Err(Error::DimensionMismatch(format!("fiber point of length {} in P^{}", a.len(), n - 1)));
    }
    let j0 = chart_of(&fl, a)?;
    let mut rows = Vec::new();
    let mut rendered = Vec::new();
    for i in 1..=exp.d() as usize {
        let f = exp.fiber_piece(i);
        if !fl.is_zero(&f.eval(a)) {
            return Err(Error::NotAFanoPoint);
        }
        let l = linear_part(&f, a, j0);
        rendered.push((format!("f{i}"), render_linear(&fl, &l, 1, j0 + 1)));
        rows.push(l);
    }
    let delta = rank_of(&fl, &rows, n - 1);
    Ok(TangentDiagnostics {
        at: a.iter().map(|c| fl.render(c)).collect(),
        chart: j0 + 1,
        linear_parts: rendered,
        delta,
        downward_set: None,
        seeds: Vec::new(),
    })
}

struct Attempt<E> {
    rows: Vec<(Multiset, Vec<E>)>,
    delta: usize,
    downward: Option<Vec<Multiset>>,
    j0: usize,
    a: Vec<E>,
}

fn attempt<F: Field>(exp: &PlaneExpansion<F>, a: &[F::Elem]) -> Result<Attempt<F::Elem>> {
    let fl = exp.field().clone();
    let j0 = chart_of(&fl, a)?;
    let width = exp.n() - exp.k();
    let mut rows = Vec::new();
    for (i, _) in exp.ordered() {
        let f = exp.fiber_form(&i);
        if !fl.is_zero(&f.eval(a)) {
            return Err(Error::NotAFanoPoint);
        }
        let l = linear_part(&f, a, j0);
        rows.push((i, l));
    }
    let all: Vec<Vec<F::Elem>> = rows.iter().map(|(_, l)| l.clone()).collect();
    let delta = rank_of(&fl, &all, width);
    let downward = greedy_downward(&fl, &rows, exp.k(), exp.d(), width, delta);
    Ok(Attempt { rows, delta, downward, j0, a: a.to_vec() })
}

/// Greedy selection by levels |I| = d-1 down to 0: keep I when all I ∪ {j}
/// are kept and L(c_I) raises the rank.
fn greedy_downward<F: Field>(
    fl: &F,
    rows: &[(Multiset, Vec<F::Elem>)],
    k: usize,
    d: u32,
    width: usize,
    delta: usize,
) -> Option<Vec<Multiset>> {
    let mut chosen: Vec<Multiset> = Vec::new();
    let mut basis: Vec<Vec<F::Elem>> = Vec::new();
    for level in (0..d).rev() {
        for (i, l) in rows.iter().filter(|(i, _)| i.size() == level) {
            if level + 1 < d && !(0..k).all(|j| chosen.contains(&i.with(j))) {
                continue;
            }
            let mut trial = basis.clone();
            trial.push(l.clone());
            if rank_of(fl, &trial, width) > basis.len() {
                basis = trial;
                chosen.push(i.clone());
            }
        }
    }
    (basis.len() == delta).then_some(chosen)
}

/// Diagnostics for F^Λ(X) at the fiber point `a` of a plane expansion.
///
/// delta is computed in the given frame. A downward basis is searched in
/// the given frame first and then in frames built on random sub-planes of
/// the diagnosed k-plane.
pub fn plane_diagnostics<F: Field>(
    x: &Hypersurface<F>,
    exp: &PlaneExpansion<F>,
    a: &[F::Elem],
    opts: DiagOptions,
) -> Result<TangentDiagnostics> {
    if a.len() != exp.n() - exp.k() + 1 {
        return Err(Error::DimensionMismatch(format!(
            "fiber point of length {} in P^{}",
            a.len(),
            exp.n() - exp.k()
        )));
    }
    let fl = exp.field().clone();
    let first = attempt(exp, a)?;
    let delta = first.delta;
    let mut seeds = Vec::new();
    let mut found = first.downward.clone().map(|t| (t, first.j0, first.rows.clone(), first.a.clone()));
    if found.is_none() && exp.k() > 0 {
        let phi = exp.plane_of(a)?;
        for r in 0..opts.retries {
            let s = rng::derive(opts.seed, r as u64);
            seeds.push(s);
            let (center, spanning) = random_center(&phi, exp.k(), s);
            let e = expand_in_frame(x, &center, frame_from(&center, &spanning))?;
            let a2 = e.fiber_point_of(&phi)?;
            let at = attempt(&e, &a2)?;
            if at.delta != delta {
                return Err(Error::Invariant(format!(
                    "delta changed from {delta} to {} under a new center",
                    at.delta
                )));
            }
            if let Some(t) = at.downward {
                found = Some((t, at.j0, at.rows, at.a));
                break;
            }
        }
        if found.is_none() {
            return Err(Error::DownwardSetNotFound { retries: opts.retries, seeds });
        }
    }
    let (downward, j0, rows, at) = match found {
        Some(v) => v,
        None => (Vec::new(), first.j0, first.rows, first.a),
    };
    let k = exp.k();
    Ok(TangentDiagnostics {
        at: at.iter().map(|c| fl.render(c)).collect(),
        chart: j0 + k,
        linear_parts: rows
            .iter()
            .map(|(i, l)| (format!("c{}", i.render()), render_linear(&fl, l, k, j0 + k)))
            .collect(),
        delta,
        downward_set: Some(downward),
        seeds,
    })
}

fn random_center<F: Field>(phi: &KPlane<F>, k: usize, seed: u64) -> (KPlane<F>, Vec<Vec<F::Elem>>) {
    let mut r = rng::stream(seed, 0);
    phi.random_subplane(k - 1, &mut r)
}

/// Render a chart vector as a linear form in the global variable names,
/// skipping the chart variable.
fn render_linear<F: Field>(fl: &F, l: &[F::Elem], first_var: usize, skip: usize) -> String {
    let vars: Vec<usize> = (first_var..first_var + l.len() + 1).filter(|&v| v != skip).collect();
    let nvars = vars.iter().max().map_or(0, |&m| m + 1);
    let mut coeffs = vec![fl.zero(); nvars];
    for (c, &v) in l.iter().zip(&vars) {
        coeffs[v] = c.clone();
    }
    Form::linear(fl, &coeffs).render()
}

/// delta for the canonical center through a k-plane; convenience for scans.
pub fn delta_at<F: Field>(x: &Hypersurface<F>, plane: &KPlane<F>, center: &KPlane<F>) -> Result<usize> {
    let e = super::plane::expand_at_plane(x, center)?;
    let a = e.fiber_point_of(plane)?;
    Ok(attempt(&e, &a)?.delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_form, PrimeField, Rationals};
    use crate::expansion::plane::{expand_at_plane, is_downward};
    use crate::expansion::point::{expand_at_point, X0Choice};

    #[test]
    fn quadric_ruling_point() {
        let q = Rationals;
        let x = Hypersurface::new(parse_form("x0*x3 - x1*x2", 4, &q, None).unwrap()).unwrap();
        let p = KPlane::from_i64(&q, 3, &[&[1, 0, 0, 0]]).unwrap();
        let e = expand_at_point(&x, &p, X0Choice::Adapted).unwrap();
        let a = vec![q.one(), q.zero(), q.zero()];
        let t = point_diagnostics(&e, &a).unwrap();
        assert_eq!(t.delta, 2);
        assert_eq!(t.chart, 1);
        assert_eq!(t.linear_parts[0].1, "x3");
        assert_eq!(t.linear_parts[1].1, "-x2");
        let bad = vec![q.zero(), q.zero(), q.one()];
        assert!(matches!(point_diagnostics(&e, &bad), Err(Error::NotAFanoPoint)));
    }

    #[test]
    fn cubic_surface_line_has_delta_two() {
        let f7 = PrimeField::new(7).unwrap();
        let x = Hypersurface::new(parse_form("x0^3+x1^3+x2^3+x3^3", 4, &f7, None).unwrap()).unwrap();
        let p = KPlane::from_i64(&f7, 3, &[&[1, -1, 0, 0]]).unwrap();
        let line = KPlane::from_i64(&f7, 3, &[&[1, -1, 0, 0], &[0, 0, 1, -1]]).unwrap();
        let e = expand_at_plane(&x, &p).unwrap();
        let a = e.fiber_point_of(&line).unwrap();
        let t = plane_diagnostics(&x, &e, &a, DiagOptions::default()).unwrap();
        assert_eq!(t.delta, 2);
        assert_eq!(t.tangent_dim(2), 0);
        let ds = t.downward_set.unwrap();
        assert_eq!(ds.len(), 2);
        assert!(is_downward(&ds, 1, 3).unwrap());
    }

    #[test]
    fn hyperplane_has_delta_one() {
        let q = Rationals;
        let x = Hypersurface::new(parse_form("x0 - x3", 4, &q, None).unwrap()).unwrap();
        let p = KPlane::from_i64(&q, 3, &[&[1, 0, 0, 1]]).unwrap();
        let e = expand_at_plane(&x, &p).unwrap();
        let a = vec![q.one(), q.zero(), q.zero()];
        let t = plane_diagnostics(&x, &e, &a, DiagOptions::default()).unwrap();
        assert_eq!(t.delta, 1);
        assert_eq!(t.downward_set.unwrap(), vec![Multiset(vec![0])]);
    }
}
