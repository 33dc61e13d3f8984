//! Expansion f = sum_i f_i x0^{d-i} around a point.

use crate::algebra::field::Field;
use crate::algebra::form::Form;
use crate::algebra::matrix::Matrix;
use crate::error::{Error, Result};
use crate::rng;
use crate::varieties::{Hypersurface, KPlane};

use super::plane::canonical_frame;

/// How the coordinate x0 of the expansion is chosen.
#[derive(Debug, Clone)]
pub enum X0Choice<E> {
    /// The coordinate adapted to the center's canonical frame.
    Adapted,
    /// A given linear form, which must not vanish at the center.
    Given(Vec<E>),
    /// A random linear form, resampled until it is nonzero at the center.
    Random(u64),
}

/// New coordinates y = A x put the center at [1,0,..,0]; `pieces[i-1]` is
/// f_i, a form of degree i in y_1..y_n (stored in n+1 variables).
#[derive(Debug, Clone)]
pub struct PointExpansion<F: Field> {
    pub center: KPlane<F>,
    pub coordinate_change: Matrix<F>,
    pub transformed: Form<F>,
    pub pieces: Vec<Form<F>>,
    pub seed: Option<u64>,
}

impl<F: Field> PointExpansion<F> {
    pub fn d(&self) -> u32 {
        self.pieces.len() as u32
    }

    pub fn n(&self) -> usize {
        self.coordinate_change.rows() - 1
    }

    /// f_i for 1 <= i <= d.
    pub fn piece(&self, i: usize) -> &Form<F> {
        &self.pieces[i - 1]
    }

    /// f_i restricted to the fiber P^{n-1} (variables y_1..y_n renumbered).
    pub fn fiber_piece(&self, i: usize) -> Form<F> {
        let keep: Vec<usize> = (1..=self.n()).collect();
        self.pieces[i - 1].restrict_vars(&keep).expect("pieces avoid y0")
    }

    pub fn reassemble(&self) -> Form<F> {
        let fl = self.coordinate_change.field();
        let n1 = self.n() + 1;
        let d = self.d();
        let mut out = Form::zero(fl, n1, d);
        for (idx, f) in self.pieces.iter().enumerate() {
            let i = idx as u32 + 1;
            let mut e = vec![0u16; n1];
            e[0] = (d - i) as u16;
            out = out.add(&Form::monomial(fl, e, fl.one()).mul(f).unwrap()).unwrap();
        }
        out
    }

    /// The line through the center in direction y = (0, a).
    pub fn line_of(&self, a: &[F::Elem]) -> Result<KPlane<F>> {
        let fl = self.coordinate_change.field();
        let inv = self.coordinate_change.inverse().expect("invertible");
        let mut y = vec![fl.zero()];
        y.extend_from_slice(a);
        self.center.span_with(&inv.mul_vec(&y))
    }
}

pub fn expand_at_point<F: Field>(
    x: &Hypersurface<F>,
    point: &KPlane<F>,
    choice: X0Choice<F::Elem>,
) -> Result<PointExpansion<F>> {
    if point.dim() != 0 || point.ambient() != x.n() {
        return Err(Error::DimensionMismatch("center must be a point of the ambient space".into()));
    }
    let fl = x.field();
    let p = point.rows().remove(0);
    if !x.contains_point(&p) {
        return Err(Error::PointNotOnX);
    }
    let n1 = x.n() + 1;
    let mut a = canonical_frame(point).inverse().expect("frame is invertible");
    let dot = |l: &[F::Elem]| l.iter().zip(&p).fold(fl.zero(), |s, (u, v)| fl.add(&s, &fl.mul(u, v)));
    let mut seed = None;
    let lambda = match choice {
        X0Choice::Adapted => None,
        X0Choice::Given(l) => {
            if l.len() != n1 {
                return Err(Error::DimensionMismatch(format!("linear form of length {} for P^{}", l.len(), x.n())));
            }
            if fl.is_zero(&dot(&l)) {
                return Err(Error::CoordinateVanishesAtCenter);
            }
            Some(l)
        }
        X0Choice::Random(s) => {
            seed = Some(s);
            let mut r = rng::stream(s, 0);
            loop {
                let l: Vec<F::Elem> = (0..n1).map(|_| fl.random(&mut r)).collect();
                if !fl.is_zero(&dot(&l)) {
                    break Some(l);
                }
            }
        }
    };
    if let Some(l) = lambda {
        // Scale so that x0(p) = 1; the other rows already vanish at p.
        let inv = fl.inv(&dot(&l)).unwrap();
        for (j, c) in l.iter().enumerate() {
            a.set(0, j, fl.mul(c, &inv));
        }
    }
    let a_inv = a.inverse().ok_or_else(|| Error::Invariant("coordinate change not invertible".into()))?;
    let transformed = x.form().change_coordinates(&a_inv)?;
    let d = x.d();
    let mut pieces: Vec<Form<F>> = (1..=d).map(|i| Form::zero(fl, n1, i)).collect();
    for (m, c) in transformed.terms() {
        let e0 = m.exps()[0] as u32;
        if e0 == d {
            return Err(Error::Invariant("constant piece survives at a point of X".into()));
        }
        let mut rest = m.exps().to_vec();
        rest[0] = 0;
        let i = (d - e0) as usize;
        pieces[i - 1] = pieces[i - 1].add(&Form::monomial(fl, rest, c.clone()))?;
    }
    Ok(PointExpansion { center: point.clone(), coordinate_change: a, transformed, pieces, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_form, PrimeField, Rationals};
    use crate::expansion::plane::{expand_at_plane, Multiset};

    #[test]
    fn coefficient_extraction() {
        let q = Rationals;
        let x = Hypersurface::new(parse_form("x1*x0^2 + x2^2*x0 + x3^3", 4, &q, None).unwrap()).unwrap();
        let p = KPlane::from_i64(&q, 3, &[&[1, 0, 0, 0]]).unwrap();
        let e0 = vec![q.from_i64(1), q.zero(), q.zero(), q.zero()];
        let e = expand_at_point(&x, &p, X0Choice::Given(e0)).unwrap();
        for (i, s) in [(1, "x1"), (2, "x2^2"), (3, "x3^3")] {
            assert_eq!(*e.piece(i), parse_form(s, 4, &q, None).unwrap());
        }
        assert_eq!(e.reassemble(), e.transformed);
    }

    #[test]
    fn quadric_pieces() {
        let q = Rationals;
        let x = Hypersurface::new(parse_form("x0*x3 - x1*x2", 4, &q, None).unwrap()).unwrap();
        let p = KPlane::from_i64(&q, 3, &[&[1, 0, 0, 0]]).unwrap();
        let e = expand_at_point(&x, &p, X0Choice::Adapted).unwrap();
        assert_eq!(*e.piece(1), parse_form("x3", 4, &q, None).unwrap());
        assert_eq!(*e.piece(2), parse_form("-x1*x2", 4, &q, None).unwrap());
    }

    #[test]
    fn fermat_reassembly_with_random_x0() {
        let f7 = PrimeField::new(7).unwrap();
        let x = Hypersurface::new(parse_form("x0^3+x1^3+x2^3+x3^3", 4, &f7, None).unwrap()).unwrap();
        let p = KPlane::from_i64(&f7, 3, &[&[1, -1, 0, 0]]).unwrap();
        for seed in 0..10 {
            let e = expand_at_point(&x, &p, X0Choice::Random(seed)).unwrap();
            assert_eq!(e.reassemble(), e.transformed);
            let back = e.transformed.change_coordinates(&e.coordinate_change).unwrap();
            assert_eq!(back, *x.form());
            // The center is smooth, so the tangent piece is nonzero.
            assert!(!e.piece(1).is_zero());
        }
    }

    #[test]
    fn errors() {
        let q = Rationals;
        let x = Hypersurface::new(parse_form("x0*x3 - x1*x2", 4, &q, None).unwrap()).unwrap();
        let off = KPlane::from_i64(&q, 3, &[&[1, 0, 0, 1]]).unwrap();
        assert!(matches!(expand_at_point(&x, &off, X0Choice::Adapted), Err(Error::PointNotOnX)));
        let p = KPlane::from_i64(&q, 3, &[&[1, 0, 0, 0]]).unwrap();
        let l = vec![q.zero(), q.one(), q.zero(), q.zero()];
        assert!(matches!(expand_at_point(&x, &p, X0Choice::Given(l)), Err(Error::CoordinateVanishesAtCenter)));
    }

    #[test]
    fn agrees_with_plane_expansion_for_k1() {
        let f7 = PrimeField::new(7).unwrap();
        let x = Hypersurface::new(parse_form("x0^3+x1^3+x2^3+x3^3 + 2*x0*x1*x2", 4, &f7, None).unwrap()).unwrap();
        let p = KPlane::from_i64(&f7, 3, &[&[1, -1, 0, 0]]).unwrap();
        let pe = expand_at_point(&x, &p, X0Choice::Adapted).unwrap();
        let ce = expand_at_plane(&x, &p).unwrap();
        for i in 1..=3usize {
            let idx = Multiset(vec![(3 - i) as u16]);
            assert_eq!(ce.coefficient(&idx), pe.piece(i));
        }
    }
}
