//! Parser for the polynomial text grammar.
//!
//! ```text
//! poly   = ['+'|'-'] term (('+'|'-') term)*
//! term   = coeff | [coeff '*'] factor ('*' factor)*
//! factor = 'x' INDEX ['^' EXP]
//! coeff  = INTEGER | INTEGER '/' INTEGER
//! ```
//! Whitespace is ignored and the Unicode minus sign is accepted.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::field::Field;
use crate::algebra::form::Form;
use crate::error::{Error, Result};

struct Cursor<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        let chars = src
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .map(|(i, c)| (i, if c == '\u{2212}' { '-' } else { c }))
            .collect();
        Cursor { chars, pos: 0, src }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map(|&(i, _)| i).unwrap_or(self.src.len())
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.pos += 1;
        c
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.offset(),
            msg: msg.into(),
        }
    }

    fn digits(&mut self) -> Result<String> {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                s.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        if s.is_empty() {
            Err(self.err("expected digits"))
        } else {
            Ok(s)
        }
    }
}

/// Parse a homogeneous form in `nvars` variables over `field`.
///
/// The zero polynomial has no intrinsic degree: it is returned only when
/// `degree_hint` supplies one, and reported as [`Error::ZeroPolynomial`]
/// otherwise. When a hint is given, non-zero input must match it.
pub fn parse_form<F: Field>(
    text: &str,
    nvars: usize,
    field: &F,
    degree_hint: Option<u32>,
) -> Result<Form<F>> {
    let mut cur = Cursor::new(text);
    let mut terms: Vec<(Vec<u16>, BigRational)> = Vec::new();
    let mut first = true;
    loop {
        let mut sign = BigRational::one();
        match cur.peek() {
            Some('+') => {
                cur.bump();
            }
            Some('-') => {
                cur.bump();
                sign = -sign;
            }
            Some(_) if first => {}
            Some(c) => return Err(cur.err(format!("expected '+' or '-', found '{c}'"))),
            None if first => return Err(cur.err("empty polynomial")),
            None => break,
        }
        first = false;
        let (exps, coeff) = parse_term(&mut cur, nvars)?;
        terms.push((exps, sign * coeff));
        if cur.peek().is_none() {
            break;
        }
    }

    // Degree check on the syntactic terms (before cancellation).
    let mut degree: Option<u32> = degree_hint;
    for (exps, c) in &terms {
        if c.is_zero() {
            continue;
        }
        let d: u32 = exps.iter().map(|&e| e as u32).sum();
        match degree {
            None => degree = Some(d),
            Some(d0) if d0 != d => return Err(Error::NonHomogeneous(d0, d)),
            _ => {}
        }
    }
    let mut out_terms = Vec::with_capacity(terms.len());
    for (exps, c) in terms {
        if c.is_zero() {
            continue;
        }
        out_terms.push((exps, field.from_rational(&c)?));
    }
    match degree {
        Some(d) => {
            let f = Form::from_terms(field, nvars, d, out_terms)?;
            if f.is_zero() && degree_hint.is_none() {
                return Err(Error::ZeroPolynomial);
            }
            Ok(f)
        }
        None => Err(Error::ZeroPolynomial),
    }
}

/// A single coefficient (`3`, `-2`, `5/7`) mapped into the field.
pub fn parse_elem<F: Field>(text: &str, field: &F) -> Result<F::Elem> {
    let t = text.trim().replace('\u{2212}', "-");
    let q: BigRational = t.parse().map_err(|_| Error::Parse {
        pos: 0,
        msg: format!("'{}' is not a number", text.trim()),
    })?;
    field.from_rational(&q)
}

/// Comma-separated coordinates.
pub fn parse_vector<F: Field>(text: &str, field: &F) -> Result<Vec<F::Elem>> {
    text.split(',').map(|c| parse_elem(c, field)).collect()
}

/// Rows separated by ';', entries by ','.
pub fn parse_rows<F: Field>(text: &str, field: &F) -> Result<Vec<Vec<F::Elem>>> {
    text.split(';').filter(|r| !r.trim().is_empty()).map(|r| parse_vector(r, field)).collect()
}

fn parse_term(cur: &mut Cursor<'_>, nvars: usize) -> Result<(Vec<u16>, BigRational)> {
    let mut exps = vec![0u16; nvars];
    let mut coeff = BigRational::one();
    let mut need_factor = false;
    if matches!(cur.peek(), Some(c) if c.is_ascii_digit()) {
        let num: BigInt = cur.digits()?.parse().expect("digits");
        let mut den = BigInt::one();
        if cur.peek() == Some('/') {
            cur.bump();
            den = cur.digits()?.parse().expect("digits");
            if den.is_zero() {
                return Err(cur.err("zero denominator"));
            }
        }
        coeff = BigRational::new(num, den);
        if cur.peek() == Some('*') {
            cur.bump();
            need_factor = true;
        } else {
            return Ok((exps, coeff));
        }
    }
    loop {
        match cur.peek() {
            Some('x') => {
                cur.bump();
            }
            Some(c) => return Err(cur.err(format!("expected a variable, found '{c}'"))),
            None if need_factor => return Err(cur.err("expected a variable after '*'")),
            None => return Err(cur.err("expected a term")),
        }
        let idx: usize = cur
            .digits()?
            .parse()
            .map_err(|_| cur.err("variable index too large"))?;
        if idx >= nvars {
            return Err(Error::UnknownVariable {
                index: idx,
                max: nvars.saturating_sub(1),
            });
        }
        let mut e: u16 = 1;
        if cur.peek() == Some('^') {
            cur.bump();
            e = cur.digits()?.parse().map_err(|_| cur.err("exponent too large"))?;
        }
        exps[idx] = exps[idx]
            .checked_add(e)
            .ok_or_else(|| cur.err("exponent overflow"))?;
        if cur.peek() == Some('*') {
            cur.bump();
            need_factor = true;
        } else {
            break;
        }
    }
    Ok((exps, coeff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{PrimeField, Rationals};

    #[test]
    fn fermat_cubic() {
        let f7 = PrimeField::new(7).unwrap();
        let f = parse_form("x0^3+x1^3+x2^3+x3^3", 4, &f7, None).unwrap();
        assert_eq!(f.num_terms(), 4);
        assert_eq!(f.degree(), 3);
    }

    #[test]
    fn quadric_over_q() {
        let f = parse_form("x0*x3 - x1*x2", 4, &Rationals, None).unwrap();
        assert_eq!(f.num_terms(), 2);
        assert_eq!(f.degree(), 2);
        let g = parse_form(" x0 * x3 \u{2212} x1*x2 ", 4, &Rationals, None).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn errors() {
        assert_eq!(
            parse_form("x0^2 + x1", 2, &Rationals, None),
            Err(Error::NonHomogeneous(2, 1))
        );
        assert_eq!(
            parse_form("x0*x4", 4, &Rationals, None),
            Err(Error::UnknownVariable { index: 4, max: 3 })
        );
        assert_eq!(parse_form("x0 - x0", 2, &Rationals, None), Err(Error::ZeroPolynomial));
        assert_eq!(parse_form("0", 2, &Rationals, None), Err(Error::ZeroPolynomial));
        let z = parse_form("0", 2, &Rationals, Some(3)).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.degree(), 3);
        assert!(matches!(parse_form("x0 +", 2, &Rationals, None), Err(Error::Parse { .. })));
        assert!(matches!(parse_form("2*", 2, &Rationals, None), Err(Error::Parse { .. })));
        assert!(matches!(parse_form("y0", 2, &Rationals, None), Err(Error::Parse { .. })));
        let f5 = PrimeField::new(5).unwrap();
        assert!(matches!(
            parse_form("1/5*x0", 2, &f5, None),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn reduction_mod_p() {
        let f7 = PrimeField::new(7).unwrap();
        // 7*x0*x1 vanishes mod 7, leaving the other term.
        let f = parse_form("7*x0*x1 + 3/2*x1^2", 2, &f7, None).unwrap();
        assert_eq!(f.num_terms(), 1);
        assert_eq!(f.coeff(&[0, 2]), 5);
    }
}
