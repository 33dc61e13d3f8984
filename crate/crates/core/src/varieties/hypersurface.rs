//! Hypersurfaces and plane containment.

use crate::algebra::field::{Field, PrimeField};
use crate::algebra::form::Form;
use crate::error::{Error, Result};
use crate::varieties::kplane::KPlane;

/// X = V(f) in P^n with f nonzero, homogeneous of degree d >= 1 and n >= 2.
/// Over F_p the characteristic must exceed d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypersurface<F: Field> {
    form: Form<F>,
}

impl<F: Field> Hypersurface<F> {
    pub fn new(form: Form<F>) -> Result<Self> {
        if form.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if form.nvars() < 3 {
            return Err(Error::InvalidArgument(format!(
                "a hypersurface needs n >= 2 (got {} variables)",
                form.nvars()
            )));
        }
        if form.degree() == 0 {
            return Err(Error::InvalidArgument("degree must be at least 1".into()));
        }
        let p = form.field().characteristic();
        if p != 0 && p <= form.degree() as u64 {
            return Err(Error::CharacteristicTooSmall { p, d: form.degree() });
        }
        Ok(Hypersurface { form })
    }

    pub fn form(&self) -> &Form<F> {
        &self.form
    }

    pub fn field(&self) -> &F {
        self.form.field()
    }

    pub fn n(&self) -> usize {
        self.form.nvars() - 1
    }

    pub fn d(&self) -> u32 {
        self.form.degree()
    }

    pub fn partials(&self) -> Vec<Form<F>> {
        self.form
            .partial_derivatives()
            .expect("characteristic checked at construction")
    }

    pub fn contains_point(&self, pt: &[F::Elem]) -> bool {
        self.field().is_zero(&self.form.eval(pt))
    }

    /// Same integer polynomial (through the canonical lift) over F_p.
    pub fn reduce_mod(&self, p: u64) -> Result<Hypersurface<PrimeField>> {
        let fl = PrimeField::new(p)?;
        Hypersurface::new(self.form.to_field(&fl)?)
    }

    /// The prime field this hypersurface lives over; rationals are rejected
    /// with `Unsupported(what)`.
    pub fn as_prime(&self, what: &str) -> Result<Hypersurface<PrimeField>> {
        match self.field().characteristic() {
            0 => Err(Error::Unsupported(format!("{what} needs a prime field"))),
            p => self.reduce_mod(p),
        }
    }
}

/// True iff the plane lies on X: the form pulled back along the plane's
/// parametrization is identically zero.
pub fn contains<F: Field>(x: &Hypersurface<F>, plane: &KPlane<F>) -> Result<bool> {
    if plane.ambient() != x.n() {
        return Err(Error::DimensionMismatch(format!(
            "plane in P^{} tested against a hypersurface in P^{}",
            plane.ambient(),
            x.n()
        )));
    }
    Ok(x.form().substitute(&plane.parametrization())?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_form, Rationals};

    #[test]
    fn containment_examples() {
        let q = Hypersurface::new(parse_form("x0*x3 - x1*x2", 4, &Rationals, None).unwrap()).unwrap();
        let l = KPlane::vanishing(&Rationals, 3, &[2, 3]).unwrap();
        assert!(contains(&q, &l).unwrap());
        let l2 = KPlane::vanishing(&Rationals, 3, &[1, 2]).unwrap();
        assert!(!contains(&q, &l2).unwrap());
        // Oracle: the restriction to V(x1, x2) is x0*x3.
        let pulled = q.form().substitute(&l2.parametrization()).unwrap();
        assert_eq!(pulled, parse_form("x0*x1", 2, &Rationals, None).unwrap());

        let f7 = PrimeField::new(7).unwrap();
        let fermat = Hypersurface::new(parse_form("x0^3+x1^3+x2^3+x3^3", 4, &f7, None).unwrap()).unwrap();
        let line = KPlane::from_i64(&f7, 3, &[&[1, -1, 0, 0], &[0, 0, 1, -1]]).unwrap();
        assert!(contains(&fermat, &line).unwrap());
        let bad = KPlane::vanishing(&f7, 4, &[0]).unwrap();
        assert!(matches!(contains(&fermat, &bad), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn construction_checks() {
        let f3 = PrimeField::new(3).unwrap();
        let c = parse_form("x0^3+x1^3+x2^3", 3, &f3, None).unwrap();
        assert_eq!(Hypersurface::new(c), Err(Error::CharacteristicTooSmall { p: 3, d: 3 }));
        let z = parse_form("0", 4, &Rationals, Some(2)).unwrap();
        assert_eq!(Hypersurface::new(z), Err(Error::ZeroPolynomial));
    }
}
