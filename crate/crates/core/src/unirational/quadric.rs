//! Rational parametrization of a quadric from a smooth point.

use rand::Rng;

use crate::algebra::field::Field;
use crate::algebra::form::Form;
use crate::algebra::matrix::Matrix;
use crate::error::{Error, Result};

/// x(v) = -Q(v) pt + L(v) v, where v runs over the coordinates other than
/// the leading one of `pt` and L is the polar of pt. The forms live in N+1
/// variables with the leading variable unused.
#[derive(Debug, Clone)]
pub struct QuadricParam<F: Field> {
    pub point: Vec<F::Elem>,
    /// Index of the unused variable.
    pub lead: usize,
    pub forms: Vec<Form<F>>,
}

pub fn quadric_param<F: Field>(q: &Form<F>, pt: &[F::Elem]) -> Result<QuadricParam<F>> {
    let fl = q.field();
    if q.degree() != 2 {
        return Err(Error::InvalidArgument(format!("quadric expected, got degree {}", q.degree())));
    }
    if pt.len() != q.nvars() {
        return Err(Error::DimensionMismatch(format!("point of length {} for {} variables", pt.len(), q.nvars())));
    }
    let lead = pt
        .iter()
        .position(|c| !fl.is_zero(c))
        .ok_or_else(|| Error::InvalidArgument("the zero vector is not a point".into()))?;
    if !fl.is_zero(&q.eval(pt)) {
        return Err(Error::PointNotOnQ);
    }
    let grad = q.gradient_at(pt);
    if grad.iter().all(|c| fl.is_zero(c)) {
        return Err(Error::PointSingular);
    }
    let n1 = q.nvars();
    let mut lcoef = grad;
    lcoef[lead] = fl.zero();
    let l = Form::linear(fl, &lcoef);
    let images: Vec<Form<F>> = (0..n1)
        .map(|i| {
            if i == lead {
                Form::zero(fl, n1, 1)
            } else {
                Form::var(fl, n1, i)
            }
        })
        .collect();
    let qv = q.substitute(&images)?;
    let forms = (0..n1)
        .map(|i| {
            let a = qv.scale(&fl.neg(&pt[i]));
            let b = l.mul(&images[i]).expect("same variables");
            a.add(&b).expect("same degree")
        })
        .collect();
    Ok(QuadricParam { point: pt.to_vec(), lead, forms })
}

impl<F: Field> QuadricParam<F> {
    pub fn field(&self) -> &F {
        self.forms[0].field()
    }

    /// Image of a parameter vector (the leading entry is ignored).
    pub fn eval(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        self.forms.iter().map(|f| f.eval(v)).collect()
    }

    /// Q(x(v)) as a form; zero exactly when the parametrization lies on Q.
    pub fn pullback(&self, q: &Form<F>) -> Result<Form<F>> {
        q.substitute(&self.forms)
    }

    /// A random parameter vector with zero in the unused slot.
    pub fn random_parameter<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<F::Elem> {
        let fl = self.field();
        (0..self.forms.len())
            .map(|i| if i == self.lead { fl.zero() } else { fl.random(rng) })
            .collect()
    }

    /// Rank of the projective differential at v: rank of the affine
    /// Jacobian (N+1 rows, N parameters) minus one.
    pub fn projective_rank_at(&self, v: &[F::Elem]) -> usize {
        let fl = self.field();
        let n1 = self.forms.len();
        let rows: Vec<Vec<F::Elem>> = self
            .forms
            .iter()
            .map(|f| (0..n1).filter(|&j| j != self.lead).map(|j| f.derivative(j).eval(v)).collect())
            .collect();
        Matrix::from_rows(fl, n1 - 1, rows).rank().saturating_sub(1)
    }

    /// The conic obtained on the line v = s u + t w of parameter space, as
    /// N+1 binary forms of degree 2.
    pub fn restrict_to_line(&self, u: &[F::Elem], w: &[F::Elem]) -> Result<Vec<Form<F>>> {
        let fl = self.field();
        let images: Vec<Form<F>> = (0..self.forms.len())
            .map(|i| Form::linear(fl, &[u[i].clone(), w[i].clone()]))
            .collect();
        self.forms.iter().map(|f| f.substitute(&images)).collect()
    }
}
