//! Rational curves on X: h^0 of twisted pullbacks of T_X, splitting types of
//! normal bundles of lines, and freeness.
//!
//! Everything is a kernel dimension. For f: P^1 -> X of degree e, the
//! pulled-back Euler sequence gives, for a twist j >= -1,
//!
//! ```text
//! h0(f*T_X(j)) = dim{ (g_0..g_n) : deg g_i = e + j, sum_i dF/dx_i(f) g_i = 0 } - h0(O(j)).
//! ```
//!
//! For a line, T_X|l = O(2) + N, so h0(N(m)) = h0(T_X|l(m)) - (m + 3) for
//! m >= -2, and #{a_i >= -m} = h0(N(m)) - h0(N(m-1)).

use serde::Serialize;

use crate::algebra::field::Field;
use crate::algebra::form::Form;
use crate::algebra::matrix::Matrix;
use crate::algebra::univariate::binary_forms_coprime;
use crate::error::{Error, Result};
use crate::varieties::{Hypersurface, KPlane};

/// A map P^1 -> P^n given by n+1 binary forms of degree e (variables s, t)
/// without a common zero, landing on X.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalCurve<F: Field> {
    e: u32,
    components: Vec<Form<F>>,
}

impl<F: Field> RationalCurve<F> {
    pub fn new(x: &Hypersurface<F>, components: Vec<Form<F>>) -> Result<Self> {
        if components.len() != x.n() + 1 {
            return Err(Error::DimensionMismatch(format!(
                "{} components for a curve in P^{}",
                components.len(),
                x.n()
            )));
        }
        let e = components[0].degree();
        if e == 0 {
            return Err(Error::InvalidArgument("curve degree must be at least 1".into()));
        }
        for c in &components {
            if c.nvars() != 2 {
                return Err(Error::DimensionMismatch("components must be binary forms".into()));
            }
            if c.degree() != e {
                return Err(Error::DegreeMismatch(e, c.degree()));
            }
        }
        if !binary_forms_coprime(&components) {
            return Err(Error::InvalidArgument("components have a common zero".into()));
        }
        if !x.form().substitute(&components)?.is_zero() {
            return Err(Error::CurveNotOnX);
        }
        Ok(RationalCurve { e, components })
    }

    /// The line as the degree-1 curve (s, t) -> s*b0 + t*b1.
    pub fn from_line(x: &Hypersurface<F>, line: &KPlane<F>) -> Result<Self> {
        if line.dim() != 1 {
            return Err(Error::InvalidArgument(format!("a line is a 1-plane, got dimension {}", line.dim())));
        }
        Self::new(x, line.parametrization())
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn components(&self) -> &[Form<F>] {
        &self.components
    }
}

/// h0(f*T_X(m*H)), or h0(f*T_X(m*H - q)) when `vanish_at` is the parameter
/// point q = (s:t). The effective twist on P^1 must be at least -1.
pub fn h0_twisted_tangent<F: Field>(
    x: &Hypersurface<F>,
    curve: &RationalCurve<F>,
    m: i64,
    vanish_at: Option<(F::Elem, F::Elem)>,
) -> Result<usize> {
    let fl = x.field();
    let e = curve.e as i64;
    let twist = e * m - i64::from(vanish_at.is_some());
    if twist < -1 {
        return Err(Error::TwistOutOfWindow { twist });
    }
    let deg_g = (e * (m + 1)) as usize;
    let grads: Vec<Form<F>> = x
        .partials()
        .iter()
        .map(|g| g.substitute(curve.components()))
        .collect::<Result<_>>()?;
    let deg_p = e as usize * (x.d() as usize - 1);
    let n1 = x.n() + 1;
    let cols = n1 * (deg_g + 1);
    let prod_deg = deg_p + deg_g;
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    // Coefficient of s^b t^(prod_deg - b) in sum_i P_i g_i, where column
    // (i, a) holds the coefficient of s^a t^(deg_g - a) in g_i.
    for b in 0..=prod_deg {
        let mut row = vec![fl.zero(); cols];
        for (i, p) in grads.iter().enumerate() {
            for a in 0..=deg_g.min(b) {
                let c = b - a;
                if c > deg_p {
                    continue;
                }
                let v = if p.is_zero() {
                    fl.zero()
                } else {
                    p.coeff(&[c as u16, (deg_p - c) as u16])
                };
                row[i * (deg_g + 1) + a] = v;
            }
        }
        rows.push(row);
    }
    if let Some((qs, qt)) = &vanish_at {
        if fl.is_zero(qs) && fl.is_zero(qt) {
            return Err(Error::InvalidArgument("(0:0) is not a point of P^1".into()));
        }
        for i in 0..n1 {
            let mut row = vec![fl.zero(); cols];
            for a in 0..=deg_g {
                let v = fl.mul(&fl.pow(qs, a as u64), &fl.pow(qt, (deg_g - a) as u64));
                row[i * (deg_g + 1) + a] = v;
            }
            rows.push(row);
        }
    }
    let kernel = cols - Matrix::from_rows(fl, cols, rows).rank();
    let correction = (twist + 1).max(0) as usize;
    kernel
        .checked_sub(correction)
        .ok_or_else(|| Error::Invariant(format!("kernel {kernel} smaller than the Euler correction {correction}")))
}

/// N_{l/X} = sum O(a_i), with h0(N(m)) for m = -1..d-2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplittingType {
    /// Descending.
    pub a: Vec<i64>,
    pub h0_table: Vec<(i64, i64)>,
}

impl SplittingType {
    pub fn is_free(&self) -> bool {
        self.a.iter().all(|&v| v >= 0)
    }

    /// h0(N(-1)).
    pub fn h0_minus_one(&self) -> i64 {
        self.h0_table[0].1
    }
}

/// Splitting type of the normal bundle of a line on X from the h0 table.
pub fn normal_bundle_splitting<F: Field>(x: &Hypersurface<F>, line: &KPlane<F>) -> Result<SplittingType> {
    let curve = RationalCurve::from_line(x, line)?;
    let n = x.n() as i64;
    let d = x.d() as i64;
    let mut table = Vec::new();
    for m in -1..=d - 2 {
        let tt = h0_twisted_tangent(x, &curve, m, None)? as i64;
        table.push((m, tt - (m + 3).max(0)));
    }
    // phi(-2) = 0 because every a_i <= 1.
    let phi = |m: i64| if m < -1 { 0 } else { table[(m + 1) as usize].1 };
    let at_least = |m: i64| phi(m) - phi(m - 1);
    let mut a = Vec::new();
    for m in -1..=d - 2 {
        let exactly = at_least(m) - if m > -1 { at_least(m - 1) } else { 0 };
        if exactly < 0 {
            return Err(Error::InconsistentSplitting(format!("table {table:?} is not convex")));
        }
        a.extend(std::iter::repeat_n(-m, exactly as usize));
    }
    if a.len() as i64 != n - 2 {
        return Err(Error::InconsistentSplitting(format!("rank {} instead of {}", a.len(), n - 2)));
    }
    let sum: i64 = a.iter().sum();
    if sum != n - d - 1 {
        return Err(Error::InconsistentSplitting(format!("degree {sum} instead of {}", n - d - 1)));
    }
    for &(m, h) in &table {
        let from_a: i64 = a.iter().map(|ai| (ai + m + 1).max(0)).sum();
        if from_a != h {
            return Err(Error::InconsistentSplitting(format!("h0(N({m})) = {h} but the splitting gives {from_a}")));
        }
    }
    Ok(SplittingType { a, h0_table: table })
}

/// f*T_X is globally generated iff h0(f*T_X(-1)) equals its Euler
/// characteristic e(n+1-d).
pub fn is_free<F: Field>(x: &Hypersurface<F>, curve: &RationalCurve<F>) -> Result<bool> {
    let fl = x.field();
    let h = h0_twisted_tangent(x, curve, 0, Some((fl.one(), fl.zero())))? as i64;
    let chi = curve.e as i64 * (x.n() as i64 + 1 - x.d() as i64);
    Ok(h == chi)
}

/// e(n+1-d) + n - 4.
pub fn expected_dim_curves(n: usize, d: u32, e: u32) -> i64 {
    e as i64 * (n as i64 + 1 - d as i64) + n as i64 - 4
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_form, PrimeField, Rationals};

    fn quadric() -> (Hypersurface<Rationals>, KPlane<Rationals>) {
        let q = Rationals;
        let x = Hypersurface::new(parse_form("x0*x3 - x1*x2", 4, &q, None).unwrap()).unwrap();
        (x, KPlane::vanishing(&q, 3, &[2, 3]).unwrap())
    }

    #[test]
    fn quadric_line_h0_values() {
        let q = Rationals;
        let (x, l) = quadric();
        let c = RationalCurve::from_line(&x, &l).unwrap();
        assert_eq!(h0_twisted_tangent(&x, &c, 0, None).unwrap(), 4);
        assert_eq!(h0_twisted_tangent(&x, &c, -1, None).unwrap(), 2);
        let h = h0_twisted_tangent(&x, &c, 0, Some((q.zero(), q.one()))).unwrap();
        assert_eq!(h, 2);
        assert!(h <= 3);
        assert!(matches!(
            h0_twisted_tangent(&x, &c, -1, Some((q.zero(), q.one()))),
            Err(Error::TwistOutOfWindow { twist: -2 })
        ));
    }

    #[test]
    fn splitting_examples() {
        let (x, l) = quadric();
        let s = normal_bundle_splitting(&x, &l).unwrap();
        assert_eq!(s.a, vec![0]);
        assert!(s.is_free());

        let f7 = PrimeField::new(7).unwrap();
        let cubic = Hypersurface::new(parse_form("x0^3+x1^3+x2^3+x3^3", 4, &f7, None).unwrap()).unwrap();
        let line = KPlane::new(&f7, 3, vec![vec![1, 6, 0, 0], vec![0, 0, 1, 6]]).unwrap();
        let s = normal_bundle_splitting(&cubic, &line).unwrap();
        assert_eq!(s.a, vec![-1]);
        assert!(!s.is_free());
        assert!(!is_free(&cubic, &RationalCurve::from_line(&cubic, &line).unwrap()).unwrap());

        let q3 = Hypersurface::new(parse_form("x0*x3 - x1*x2 + x4^2", 5, &f7, None).unwrap()).unwrap();
        let l3 = KPlane::vanishing(&f7, 4, &[2, 3, 4]).unwrap();
        let s = normal_bundle_splitting(&q3, &l3).unwrap();
        assert_eq!(s.a, vec![1, 0]);
        assert!(is_free(&q3, &RationalCurve::from_line(&q3, &l3).unwrap()).unwrap());
    }

    #[test]
    fn curve_validation() {
        let q = Rationals;
        let (x, _) = quadric();
        let p = |s: &str| parse_form(s, 2, &q, None).unwrap();
        // A conic on the quadric: (s^2, s*t, s*t, t^2).
        let conic = RationalCurve::new(&x, vec![p("x0^2"), p("x0*x1"), p("x0*x1"), p("x1^2")]).unwrap();
        assert_eq!(conic.degree(), 2);
        assert!(is_free(&x, &conic).unwrap());
        let h = h0_twisted_tangent(&x, &conic, 0, Some((q.one(), q.from_i64(3)))).unwrap();
        assert!(h <= 2 * 3);
        let off = RationalCurve::new(&x, vec![p("x0^2"), p("x0*x1"), p("x1^2"), p("x1^2")]);
        assert!(matches!(off, Err(Error::CurveNotOnX)));
        let based = RationalCurve::new(&x, vec![p("x0^2"), p("x0*x1"), p("x0*x1"), p("x0*x1")]);
        assert!(matches!(based, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn expected_dims() {
        assert_eq!(expected_dim_curves(4, 3, 1), 2);
        assert_eq!(expected_dim_curves(5, 2, 2), 9);
        assert_eq!(expected_dim_curves(3, 3, 1), 0);
    }
}
