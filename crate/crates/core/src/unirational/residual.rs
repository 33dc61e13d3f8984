//! Residual hypersurfaces: X ∩ Φ = Γ ∪ Y_Φ for a (k+1)-plane Φ through a
//! k-plane Γ on X.

use crate::algebra::field::Field;
use crate::algebra::form::Form;
use crate::error::{Error, Result};
use crate::expansion::{expand_at_plane, PlaneExpansion};
use crate::varieties::{Hypersurface, KPlane};

/// Y_Φ and Z_Φ = Y_Φ ∩ Γ in the coordinates (x_0..x_k, t) of Φ, where a
/// point of Φ is sum_i x_i γ_i + t w.
#[derive(Debug, Clone)]
pub struct ResidualDatum<F: Field> {
    pub gamma: KPlane<F>,
    pub phi: KPlane<F>,
    /// Fiber coordinates of Φ relative to Γ.
    pub a: Vec<F::Elem>,
    /// γ_0..γ_k, then w.
    pub embedding: Vec<Vec<F::Elem>>,
    /// f restricted to Φ, before division by t.
    pub restricted: Form<F>,
    /// Degree d-1 in k+2 variables, t last.
    pub y: Form<F>,
    /// Degree d-1 in k+1 variables.
    pub z: Form<F>,
}

impl<F: Field> ResidualDatum<F> {
    /// Point of P^n for Φ-coordinates (x_0..x_k, t).
    pub fn lift(&self, coords: &[F::Elem]) -> Vec<F::Elem> {
        let fl = self.gamma.field();
        let n1 = self.gamma.ambient() + 1;
        let mut out = vec![fl.zero(); n1];
        for (c, v) in coords.iter().zip(&self.embedding) {
            if fl.is_zero(c) {
                continue;
            }
            for (o, vi) in out.iter_mut().zip(v) {
                *o = fl.add(o, &fl.mul(c, vi));
            }
        }
        out
    }

    /// t * Y, which must equal `restricted`.
    pub fn reassemble(&self) -> Form<F> {
        let k2 = self.y.nvars();
        let t = Form::var(self.y.field(), k2, k2 - 1);
        t.mul(&self.y).expect("same variables")
    }
}

/// Residual of Γ in X ∩ Φ.
pub fn residual<F: Field>(x: &Hypersurface<F>, gamma: &KPlane<F>, phi: &KPlane<F>) -> Result<ResidualDatum<F>> {
    let exp = expand_at_plane(x, gamma)?;
    if phi.dim() != gamma.dim() + 1 {
        return Err(Error::NotNested(format!(
            "Φ has dimension {} over a {}-plane Γ",
            phi.dim(),
            gamma.dim()
        )));
    }
    let a = exp.fiber_point_of(phi)?;
    residual_in(x, &exp, a)
}

/// Residual for the Φ with fiber coordinates `a` in an existing expansion
/// along Γ.
pub fn residual_in<F: Field>(x: &Hypersurface<F>, exp: &PlaneExpansion<F>, a: Vec<F::Elem>) -> Result<ResidualDatum<F>> {
    let fl = x.field();
    if x.d() == 1 {
        return Err(Error::DegreeZeroResidual);
    }
    let gamma = exp.center.clone();
    let k1 = exp.k();
    let phi = exp.plane_of(&a)?;
    let mut y = vec![fl.zero(); k1];
    y.extend_from_slice(&a);
    let w = exp.frame.mul_vec(&y);
    let mut embedding: Vec<Vec<F::Elem>> = (0..k1).map(|j| exp.frame.column(j)).collect();
    embedding.push(w);
    let params: Vec<Form<F>> = (0..=x.n())
        .map(|i| {
            let col: Vec<F::Elem> = embedding.iter().map(|v| v[i].clone()).collect();
            Form::linear(fl, &col)
        })
        .collect();
    let restricted = x.form().substitute(&params)?;
    if restricted.is_zero() {
        return Err(Error::PhiInsideX);
    }
    let tv = k1;
    let mut yform = Form::zero(fl, k1 + 1, x.d() - 1);
    let mut zform = Form::zero(fl, k1, x.d() - 1);
    for (m, c) in restricted.terms() {
        let mut e = m.exps().to_vec();
        if e[tv] == 0 {
            return Err(Error::Invariant("restriction to Φ is not divisible by t; Γ is not on X".into()));
        }
        e[tv] -= 1;
        if e[tv] == 0 {
            zform = zform.add(&Form::monomial(fl, e[..k1].to_vec(), c.clone()))?;
        }
        yform = yform.add(&Form::monomial(fl, e, c.clone()))?;
    }
    Ok(ResidualDatum {
        gamma,
        phi,
        a,
        embedding,
        restricted,
        y: yform,
        z: zform,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_form, PrimeField, Rationals};

    #[test]
    fn quadric_residual_is_a_line() {
        let q = Rationals;
        let x = Hypersurface::new(parse_form("x0*x3 - x1*x2", 4, &q, None).unwrap()).unwrap();
        let g = KPlane::vanishing(&q, 3, &[2, 3]).unwrap();
        let phi = g.span_with(&[q.zero(), q.zero(), q.one(), q.from_i64(3)]).unwrap();
        let r = residual(&x, &g, &phi).unwrap();
        // a3*x0 - a2*x1 with (a2, a3) = (1, 3).
        assert_eq!(r.y.render(), "3*x0 - x1");
        assert_eq!(r.z.render(), "3*x0 - x1");
        assert_eq!(r.reassemble(), r.restricted);
    }

    #[test]
    fn cubic_residual_is_a_conic() {
        let f7 = PrimeField::new(7).unwrap();
        let x = Hypersurface::new(parse_form("x0^2*x2 + x1^2*x3 + x2^3 + x3^3", 4, &f7, None).unwrap()).unwrap();
        let g = KPlane::vanishing(&f7, 3, &[2, 3]).unwrap();
        let phi = g.span_with(&[0, 0, 1, 2]).unwrap();
        let r = residual(&x, &g, &phi).unwrap();
        // a2*x0^2 + a3*x1^2 + (a2^3 + a3^3)*t^2 with (1, 2): 1 + 8 = 9 = 2.
        let expect = parse_form("x0^2 + 2*x1^2 + 2*x2^2", 3, &f7, None).unwrap();
        assert_eq!(r.y, expect);
        assert_eq!(r.z, parse_form("x0^2 + 2*x1^2", 2, &f7, None).unwrap());
        assert_eq!(r.reassemble(), r.restricted);
        // Off Γ (t = 1), points of Φ are on X exactly when they are on Y.
        for u in 0..49u64 {
            let pt = [u % 7, u / 7, 1];
            assert_eq!(r.y.eval(&pt) == 0, x.contains_point(&r.lift(&pt)));
        }
    }

    #[test]
    fn degenerate_cases() {
        let q = Rationals;
        let x = Hypersurface::new(parse_form("x0*x3 - x1*x2", 4, &q, None).unwrap()).unwrap();
        let g = KPlane::from_i64(&q, 3, &[&[1, 0, 0, 0]]).unwrap();
        // Φ = V(x2, x3) is a ruling through the point.
        let phi = KPlane::vanishing(&q, 3, &[2, 3]).unwrap();
        assert!(matches!(residual(&x, &g, &phi), Err(Error::PhiInsideX)));
        let wrong = KPlane::from_i64(&q, 3, &[&[0, 1, 0, 0], &[0, 0, 1, 0]]).unwrap();
        assert!(matches!(residual(&x, &g, &wrong), Err(Error::NotNested(_))));
        let h = Hypersurface::new(parse_form("x3", 4, &q, None).unwrap()).unwrap();
        let phi = KPlane::from_i64(&q, 3, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]).unwrap();
        assert!(matches!(residual(&h, &g, &phi), Err(Error::DegreeZeroResidual)));
    }
}
