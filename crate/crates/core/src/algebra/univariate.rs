//! Dense univariate polynomials, used for root finding on binary forms.

use crate::algebra::field::Field;
use crate::algebra::form::Form;

/// Coefficients from the constant term upward, with no trailing zeros.
pub type Poly<E> = Vec<E>;

fn trim<F: Field>(f: &F, p: &mut Poly<F::Elem>) {
    while p.last().is_some_and(|c| f.is_zero(c)) {
        p.pop();
    }
}

/// Remainder of `a` modulo a nonzero `b`.
pub fn rem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F::Elem> {
    let mut r = a.to_vec();
    trim(f, &mut r);
    let mut b = b.to_vec();
    trim(f, &mut b);
    assert!(!b.is_empty(), "division by the zero polynomial");
    let lead_inv = f.inv(b.last().unwrap()).unwrap();
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let q = f.mul(r.last().unwrap(), &lead_inv);
        for (i, c) in b.iter().enumerate() {
            r[shift + i] = f.sub(&r[shift + i], &f.mul(&q, c));
        }
        trim(f, &mut r);
    }
    r
}

/// Monic gcd; the zero polynomial is returned as an empty vector.
pub fn gcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F::Elem> {
    let mut x = a.to_vec();
    trim(f, &mut x);
    let mut y = b.to_vec();
    trim(f, &mut y);
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    if let Some(l) = x.last() {
        let li = f.inv(l).unwrap();
        for c in x.iter_mut() {
            *c = f.mul(c, &li);
        }
    }
    x
}

/// Dehomogenize a binary form g(s, t) at t = 1 (variable 0 is s).
pub fn dehomogenize<F: Field>(g: &Form<F>) -> Poly<F::Elem> {
    assert_eq!(g.nvars(), 2);
    let fl = g.field();
    let mut out = vec![fl.zero(); g.degree() as usize + 1];
    for (m, c) in g.terms() {
        out[m.exps()[0] as usize] = c.clone();
    }
    trim(fl, &mut out);
    out
}

/// True when the binary forms have no common zero on P^1 over the
/// algebraic closure. Zero forms are ignored; all-zero input has every
/// point as a common zero.
pub fn binary_forms_coprime<F: Field>(forms: &[Form<F>]) -> bool {
    let nonzero: Vec<&Form<F>> = forms.iter().filter(|g| !g.is_zero()).collect();
    let Some(first) = nonzero.first() else {
        return false;
    };
    let fl = first.field();
    // Common zero at infinity (t = 0) iff every s^deg coefficient vanishes.
    let at_infinity = nonzero.iter().all(|g| {
        let mut e = vec![0u16; 2];
        e[0] = g.degree() as u16;
        fl.is_zero(&g.coeff(&e))
    });
    if at_infinity {
        return false;
    }
    let mut acc: Poly<F::Elem> = Vec::new();
    for g in &nonzero {
        acc = gcd(fl, &acc, &dehomogenize(g));
        if acc.len() == 1 {
            return true;
        }
    }
    acc.len() <= 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{PrimeField, Rationals};
    use crate::algebra::parse::parse_form;

    #[test]
    fn gcd_examples() {
        let q = Rationals;
        let v = |xs: &[i64]| xs.iter().map(|&x| q.from_i64(x)).collect::<Vec<_>>();
        // (s-1)(s-2) and (s-1)(s+3)
        let g = gcd(&q, &v(&[2, -3, 1]), &v(&[-3, 2, 1]));
        assert_eq!(g, v(&[-1, 1]));
        assert_eq!(gcd(&q, &v(&[1, 1]), &v(&[2, 1])), v(&[1]));
    }

    #[test]
    fn coprimality_of_binary_forms() {
        let f = PrimeField::new(7).unwrap();
        let p = |s: &str| parse_form(s, 2, &f, None).unwrap();
        assert!(binary_forms_coprime(&[p("x0"), p("x1")]));
        assert!(!binary_forms_coprime(&[p("x0*x1"), p("x1^2")]));
        assert!(!binary_forms_coprime(&[p("x0*x1 + x1^2"), p("x0*x1 - 2*x1^2")]));
        assert!(binary_forms_coprime(&[p("x0^2"), p("x0*x1"), p("x1^2")]));
        assert!(!binary_forms_coprime(&[p("x0^2 + x1^2"), p("x0^2 - 6*x1^2")]));
    }
}
