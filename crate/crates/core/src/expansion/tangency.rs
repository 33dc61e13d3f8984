//! Points where V(h) is tangent to V(h_1, .., h_r).

use serde::Serialize;

use crate::algebra::form::Form;
use crate::algebra::matrix::Matrix;
use crate::algebra::PrimeField;
use crate::error::{Error, Result};
use crate::par::Jobs;
use crate::varieties::points::{self, PrimeEval};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TangencyReport {
    pub prime: u64,
    pub count: usize,
    /// Points in canonical order (capped at `list_cap`).
    pub points: Vec<Vec<u64>>,
    /// log_p(count); `None` when the locus has no F_p points.
    pub log_p_count: Option<f64>,
    /// round(log_p(count)), or -1 when empty.
    pub dimension_estimate: i64,
}

/// Exhaustive scan of P^n(F_p): q is reported iff h(q) = 0, every h_i(q) = 0
/// and grad h(q) lies in the span of the grad h_i(q).
pub fn tangency_locus(
    h: &Form<PrimeField>,
    lower: &[Form<PrimeField>],
    budget: u128,
    list_cap: usize,
    jobs: Jobs,
) -> Result<TangencyReport> {
    let fl = *h.field();
    let p = fl.p();
    let nvars = h.nvars();
    for g in lower {
        if g.nvars() != nvars {
            return Err(Error::DimensionMismatch("all forms must share the variable set".into()));
        }
    }
    let n = nvars - 1;
    points::check_budget(points::affine_size(n, p), budget)?;
    let all: Vec<&Form<PrimeField>> = std::iter::once(h).chain(lower.iter()).collect();
    for g in &all {
        if p <= g.degree() as u64 {
            return Err(Error::CharacteristicTooSmall { p, d: g.degree() });
        }
    }
    let values: Vec<PrimeEval> = all.iter().map(|g| PrimeEval::new(g)).collect();
    let grads: Vec<Vec<PrimeEval>> = all
        .iter()
        .map(|g| (0..nvars).map(|i| PrimeEval::new(&g.derivative(i))).collect())
        .collect();
    let pts = points::scan(n, p, jobs, |pt| {
        let mut buf = Vec::new();
        if values.iter().any(|v| v.eval_with(pt, &mut buf) != 0) {
            return None;
        }
        let rows: Vec<Vec<u64>> = grads
            .iter()
            .map(|g| g.iter().map(|e| e.eval_with(pt, &mut buf)).collect())
            .collect();
        let lower_rank = if rows.len() > 1 {
            Matrix::from_rows(&fl, nvars, rows[1..].to_vec()).rank()
        } else {
            0
        };
        let full_rank = Matrix::from_rows(&fl, nvars, rows).rank();
        (full_rank == lower_rank).then(|| pt.to_vec())
    });
    let count = pts.len();
    let log_p_count = (count > 0).then(|| (count as f64).ln() / (p as f64).ln());
    Ok(TangencyReport {
        prime: p,
        count,
        points: pts.into_iter().take(list_cap).collect(),
        log_p_count,
        dimension_estimate: log_p_count.map_or(-1, |v| v.round() as i64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_form;
    use crate::varieties::{singular_search, Hypersurface, SingularStatus};

    fn pf(s: &str, nvars: usize, fl: &PrimeField) -> Form<PrimeField> {
        parse_form(s, nvars, fl, None).unwrap()
    }

    #[test]
    fn conic_and_a_transverse_line() {
        let f13 = PrimeField::new(13).unwrap();
        let h = pf("x0^2 + x1^2 + x2^2", 3, &f13);
        let r = tangency_locus(&h, &[pf("x0", 3, &f13)], 1 << 30, 100, Jobs::SEQUENTIAL).unwrap();
        assert_eq!(r.count, 0);
        assert_eq!(r.dimension_estimate, -1);
    }

    #[test]
    fn tangent_line_is_detected() {
        let f13 = PrimeField::new(13).unwrap();
        // The line x0 = x2 touches x0^2 - x1*x2... at [1,0,1]? Use the
        // tangent line at [0,1,0] of x0^2 - x1*x2, which is x2 = 0.
        let h = pf("x0^2 - x1*x2", 3, &f13);
        let r = tangency_locus(&h, &[pf("x2", 3, &f13)], 1 << 30, 100, Jobs::SEQUENTIAL).unwrap();
        assert_eq!(r.points, vec![vec![0, 1, 0]]);
        assert_eq!(r.dimension_estimate, 0);
    }

    #[test]
    fn empty_lower_list_gives_singular_points() {
        let f7 = PrimeField::new(7).unwrap();
        let smooth = pf("x0^3+x1^3+x2^3+x3^3", 4, &f7);
        assert_eq!(tangency_locus(&smooth, &[], 1 << 30, 10, Jobs(2)).unwrap().count, 0);
        let sing = pf("x0^2*x2 + x1^2*x3", 4, &f7);
        let r = tangency_locus(&sing, &[], 1 << 30, 1000, Jobs(2)).unwrap();
        let x = Hypersurface::new(sing).unwrap();
        match singular_search(&x, 1, 1 << 30, Jobs::SEQUENTIAL).unwrap().status {
            SingularStatus::Singular { witness, .. } => assert_eq!(r.points[0], witness),
            s => panic!("{s:?}"),
        }
        // Singular locus is the line x0 = x1 = 0: p + 1 points.
        assert_eq!(r.count, 8);
    }

    #[test]
    fn quadric_surface_and_a_plane() {
        let f7 = PrimeField::new(7).unwrap();
        let h = pf("x0*x3 - x1*x2", 4, &f7);
        let l = pf("x0 + 2*x1 + 3*x2 + 5*x3", 4, &f7);
        let r = tangency_locus(&h, &[l], 1 << 30, 10, Jobs::SEQUENTIAL).unwrap();
        assert!(r.count <= 8);
    }
}
