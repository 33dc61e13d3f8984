//! Exact scalars, sparse forms and dense linear algebra.

pub mod field;
pub mod form;
pub mod matrix;
pub mod parse;
pub mod univariate;

pub use field::{Field, FieldSpec, PrimeField, Rationals};
pub use form::{Form, Monomial};
pub use matrix::Matrix;
pub use parse::{parse_elem, parse_form, parse_rows, parse_vector};

/// Exact binomial coefficient for small arguments (panics on overflow).
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial overflow")
}
