//! Expansion f = sum_{I in T} c_I x^I along a (k-1)-plane.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::field::Field;
use crate::algebra::form::Form;
use crate::algebra::matrix::Matrix;
use crate::error::{Error, Result};
use crate::varieties::{contains, Hypersurface, KPlane};

/// A multiset on {0..k-1}, stored as multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multiset(pub Vec<u16>);

impl Multiset {
    pub fn size(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    /// I ∪ {j}.
    pub fn with(&self, j: usize) -> Multiset {
        let mut v = self.0.clone();
        v[j] += 1;
        Multiset(v)
    }

    /// Sorted element list, e.g. {0,0,1}.
    pub fn elements(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (j, &e) in self.0.iter().enumerate() {
            out.extend(std::iter::repeat_n(j, e as usize));
        }
        out
    }

    pub fn from_elements(k: usize, elems: &[usize]) -> Result<Multiset> {
        let mut v = vec![0u16; k];
        for &j in elems {
            if j >= k {
                return Err(Error::IndexOutOfRange(format!("element {j} in a multiset on 0..{k}")));
            }
            v[j] += 1;
        }
        Ok(Multiset(v))
    }

    pub fn render(&self) -> String {
        let e: Vec<String> = self.elements().iter().map(|j| j.to_string()).collect();
        format!("{{{}}}", e.join(","))
    }
}

impl Serialize for Multiset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.elements().serialize(s)
    }
}

/// The index set T: all multisets on {0..k-1} of size at most d-1, ordered
/// by size descending, then by element list ascending.
pub fn index_set(k: usize, d: u32) -> Vec<Multiset> {
    let mut out = Vec::new();
    for size in (0..d).rev() {
        let mut level: Vec<Multiset> = crate::algebra::form::monomials(k, size)
            .into_iter()
            .map(Multiset)
            .collect();
        level.sort_by_key(|m| m.elements());
        out.extend(level);
    }
    out
}

/// The expansion of f along a center plane of dimension k-1 in a frame
/// x = M y: the first k columns of M span the center, the remaining
/// columns are the standard vectors at the center's non-pivot positions.
/// Each c_I is a form in y_k..y_n, stored in n+1 variables.
#[derive(Debug, Clone)]
pub struct PlaneExpansion<F: Field> {
    pub center: KPlane<F>,
    pub frame: Matrix<F>,
    pub transformed: Form<F>,
    pub coefficients: BTreeMap<Multiset, Form<F>>,
    k: usize,
    d: u32,
}

impl<F: Field> PlaneExpansion<F> {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn n(&self) -> usize {
        self.frame.rows() - 1
    }

    pub fn field(&self) -> &F {
        self.frame.field()
    }

    pub fn coefficient(&self, i: &Multiset) -> &Form<F> {
        &self.coefficients[i]
    }

    /// c_I in T order.
    pub fn ordered(&self) -> Vec<(Multiset, &Form<F>)> {
        index_set(self.k, self.d)
            .into_iter()
            .map(|i| {
                let c = &self.coefficients[&i];
                (i, c)
            })
            .collect()
    }

    /// c_I as a form on the fiber P^{n-k} (variables a_k..a_n renumbered from 0).
    pub fn fiber_form(&self, i: &Multiset) -> Form<F> {
        let keep: Vec<usize> = (self.k..=self.n()).collect();
        self.coefficients[i]
            .restrict_vars(&keep)
            .expect("coefficients involve fiber variables only")
    }

    /// sum_I c_I y^I, which must equal `transformed`.
    pub fn reassemble(&self) -> Form<F> {
        let n1 = self.n() + 1;
        let mut out = Form::zero(self.field(), n1, self.d);
        for (i, c) in &self.coefficients {
            let mut e = vec![0u16; n1];
            e[..self.k].copy_from_slice(&i.0);
            let mono = Form::monomial(self.field(), e, self.field().one());
            out = out.add(&mono.mul(c).unwrap()).unwrap();
        }
        out
    }

    /// The k-plane span(center, M (0,..,0,a)) for a fiber point a.
    pub fn plane_of(&self, a: &[F::Elem]) -> Result<KPlane<F>> {
        if a.len() != self.n() - self.k + 1 {
            return Err(Error::DimensionMismatch(format!(
                "fiber point of length {} in P^{}",
                a.len(),
                self.n() - self.k
            )));
        }
        let mut y = vec![self.field().zero(); self.k];
        y.extend_from_slice(a);
        self.center.span_with(&self.frame.mul_vec(&y))
    }

    /// Fiber coordinates of a k-plane containing the center.
    pub fn fiber_point_of(&self, plane: &KPlane<F>) -> Result<Vec<F::Elem>> {
        if plane.dim() != self.k || !self.center.is_subspace_of(plane) {
            return Err(Error::NotNested(format!(
                "a {}-plane is not a {}-plane through the center",
                plane.dim(),
                self.k
            )));
        }
        let fl = self.field();
        let inv = self.frame.inverse().expect("frame is invertible");
        for row in plane.rows() {
            let y = inv.mul_vec(&self.center.reduce(&row));
            let a = y[self.k..].to_vec();
            if a.iter().any(|c| !fl.is_zero(c)) {
                return Ok(a);
            }
        }
        Err(Error::Invariant("plane equals its center".into()))
    }
}

/// The canonical frame for a center plane: its RREF rows, then the standard
/// vectors at the non-pivot positions.
pub fn canonical_frame<F: Field>(center: &KPlane<F>) -> Matrix<F> {
    frame_from(center, &center.rows())
}

/// Frame whose first columns are `spanning` (a basis of `center`).
pub fn frame_from<F: Field>(center: &KPlane<F>, spanning: &[Vec<F::Elem>]) -> Matrix<F> {
    let fl = center.field();
    let n1 = center.ambient() + 1;
    let mut m = Matrix::zeros(fl, n1, n1);
    for (j, v) in spanning.iter().enumerate() {
        for (i, vi) in v.iter().enumerate().take(n1) {
            m.set(i, j, vi.clone());
        }
    }
    for (off, c) in center.non_pivots().into_iter().enumerate() {
        m.set(c, spanning.len() + off, fl.one());
    }
    m
}

pub fn expand_at_plane<F: Field>(x: &Hypersurface<F>, center: &KPlane<F>) -> Result<PlaneExpansion<F>> {
    expand_in_frame(x, center, canonical_frame(center))
}

/// Expansion in an explicit frame (see [`PlaneExpansion`]).
pub fn expand_in_frame<F: Field>(
    x: &Hypersurface<F>,
    center: &KPlane<F>,
    frame: Matrix<F>,
) -> Result<PlaneExpansion<F>> {
    if !contains(x, center)? {
        return Err(Error::PlaneNotInX);
    }
    let k = center.dim() + 1;
    let d = x.d();
    let n1 = x.n() + 1;
    let transformed = x.form().change_coordinates(&frame)?;
    let mut coefficients: BTreeMap<Multiset, Form<F>> = index_set(k, d)
        .into_iter()
        .map(|i| {
            let deg = d - i.size();
            (i, Form::zero(x.field(), n1, deg))
        })
        .collect();
    for (m, c) in transformed.terms() {
        let i = Multiset(m.exps()[..k].to_vec());
        let Some(slot) = coefficients.get_mut(&i) else {
            return Err(Error::Invariant(format!("term with |I| = {} survives on the center", i.size())));
        };
        let mut rest = m.exps().to_vec();
        rest[..k].iter_mut().for_each(|e| *e = 0);
        let term = Form::monomial(x.field(), rest, c.clone());
        *slot = slot.add(&term)?;
    }
    Ok(PlaneExpansion { center: center.clone(), frame, transformed, coefficients, k, d })
}

/// Whether `family` is downward: every I with |I| < d-1 has all I ∪ {j}.
pub fn is_downward(family: &[Multiset], k: usize, d: u32) -> Result<bool> {
    for i in family {
        if i.k() != k {
            return Err(Error::IndexOutOfRange(format!("multiset on {} elements, expected {k}", i.k())));
        }
        if i.size() >= d {
            return Err(Error::IndexOutOfRange(format!("|I| = {} is not below d = {d}", i.size())));
        }
    }
    Ok(family
        .iter()
        .filter(|i| i.size() + 1 < d)
        .all(|i| (0..k).all(|j| family.contains(&i.with(j)))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::binomial as num_binomial;
    use crate::algebra::{parse_form, PrimeField, Rationals};

    fn ms(k: usize, e: &[usize]) -> Multiset {
        Multiset::from_elements(k, e).unwrap()
    }

    #[test]
    fn index_set_sizes() {
        for k in 1..=3 {
            for d in 2..=5u32 {
                assert_eq!(index_set(k, d).len() as u64, num_binomial(d as u64 + k as u64 - 1, k as u64));
            }
        }
        assert_eq!(
            index_set(2, 3).iter().map(|m| m.elements()).collect::<Vec<_>>(),
            vec![vec![0, 0], vec![0, 1], vec![1, 1], vec![0], vec![1], vec![]]
        );
    }

    #[test]
    fn quadric_at_point() {
        let q = Hypersurface::new(parse_form("x0*x3 - x1*x2", 4, &Rationals, None).unwrap()).unwrap();
        let p = KPlane::from_i64(&Rationals, 3, &[&[1, 0, 0, 0]]).unwrap();
        let e = expand_at_plane(&q, &p).unwrap();
        assert_eq!(e.coefficients.len(), 2);
        assert_eq!(*e.coefficient(&ms(1, &[0])), parse_form("x3", 4, &Rationals, None).unwrap());
        assert_eq!(*e.coefficient(&ms(1, &[])), parse_form("-x1*x2", 4, &Rationals, None).unwrap());
        assert_eq!(e.reassemble(), e.transformed);
    }

    #[test]
    fn cubic_along_a_line() {
        let f7 = PrimeField::new(7).unwrap();
        let x = Hypersurface::new(parse_form("x0^2*x2 + x1^2*x3 + x2^3 + x3^3", 4, &f7, None).unwrap()).unwrap();
        let g = KPlane::vanishing(&f7, 3, &[2, 3]).unwrap();
        let e = expand_at_plane(&x, &g).unwrap();
        assert_eq!(e.coefficients.len(), 6);
        let p = |s: &str, d| parse_form(s, 4, &f7, Some(d)).unwrap();
        assert_eq!(*e.coefficient(&ms(2, &[0, 0])), p("x2", 1));
        assert_eq!(*e.coefficient(&ms(2, &[1, 1])), p("x3", 1));
        assert_eq!(*e.coefficient(&ms(2, &[])), p("x2^3 + x3^3", 3));
        for i in [ms(2, &[0, 1]), ms(2, &[0]), ms(2, &[1])] {
            assert!(e.coefficient(&i).is_zero());
        }
        assert_eq!(e.reassemble(), e.transformed);
    }

    #[test]
    fn degree_one_and_errors() {
        let h = Hypersurface::new(parse_form("x0 + 2*x1 - x3", 4, &Rationals, None).unwrap()).unwrap();
        let p = KPlane::from_i64(&Rationals, 3, &[&[0, 0, 1, 0]]).unwrap();
        let e = expand_at_plane(&h, &p).unwrap();
        assert_eq!(e.coefficients.len(), 1);
        // In the frame y = (x2, x0, x1, x3) the form is f itself, relabelled.
        assert_eq!(*e.coefficient(&ms(1, &[])), e.transformed);
        assert_eq!(e.transformed, parse_form("x1 + 2*x2 - x3", 4, &Rationals, None).unwrap());
        let off = KPlane::from_i64(&Rationals, 3, &[&[1, 0, 0, 0]]).unwrap();
        assert!(matches!(expand_at_plane(&h, &off), Err(Error::PlaneNotInX)));
    }

    #[test]
    fn downward_examples() {
        let t = index_set(1, 3);
        assert!(is_downward(&t, 1, 3).unwrap());
        assert!(is_downward(&[], 1, 3).unwrap());
        assert!(!is_downward(&[ms(1, &[0])], 1, 3).unwrap());
        assert!(is_downward(&[ms(1, &[0, 0])], 1, 3).unwrap());
        // Any family containing the empty multiset other than T fails.
        let t2 = index_set(2, 3);
        for skip in 0..t2.len() - 1 {
            let fam: Vec<_> = t2.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, m)| m.clone()).collect();
            assert!(!is_downward(&fam, 2, 3).unwrap());
        }
        assert!(is_downward(&t2, 2, 3).unwrap());
        assert!(matches!(is_downward(&[ms(1, &[0, 0, 0])], 1, 3), Err(Error::IndexOutOfRange(_))));
    }

    #[test]
    fn fiber_round_trip() {
        let f7 = PrimeField::new(7).unwrap();
        let q = Hypersurface::new(parse_form("x0*x3 - x1*x2", 4, &f7, None).unwrap()).unwrap();
        let p = KPlane::from_i64(&f7, 3, &[&[1, 2, 3, 6]]).unwrap();
        let e = expand_at_plane(&q, &p).unwrap();
        let a = vec![1, 5, 2];
        let plane = e.plane_of(&a).unwrap();
        let back = e.fiber_point_of(&plane).unwrap();
        let proj_equal = Matrix::from_rows(&f7, 3, vec![a, back]).rank() == 1;
        assert!(proj_equal);
    }
}
