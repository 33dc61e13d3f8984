//! Linear subspaces of projective space in canonical (RREF) form.

use std::fmt;

use rand::Rng;

use crate::algebra::field::Field;
use crate::algebra::form::Form;
use crate::algebra::matrix::Matrix;
use crate::error::{Error, Result};

/// A projective k-plane in P^n, stored as a (k+1) x (n+1) matrix in reduced
/// row echelon form. Equal subspaces compare equal.
#[derive(Clone, PartialEq, Eq)]
pub struct KPlane<F: Field> {
    basis: Matrix<F>,
    pivots: Vec<usize>,
}

impl<F: Field> fmt::Debug for KPlane<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KPlane{:?}", self.basis)
    }
}

impl<F: Field> KPlane<F> {
    /// Span of the given rows in P^n. The rows must be independent.
    pub fn new(field: &F, n: usize, rows: Vec<Vec<F::Elem>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::DegenerateBasis);
        }
        for r in &rows {
            if r.len() != n + 1 {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} for a plane in P^{}",
                    r.len(),
                    n
                )));
            }
        }
        let k1 = rows.len();
        Self::from_matrix(&Matrix::from_rows(field, n + 1, rows), k1)
    }

    /// Canonicalize a spanning matrix; `expected_rank` rows must be independent.
    pub fn from_matrix(m: &Matrix<F>, expected_rank: usize) -> Result<Self> {
        let r = m.rref();
        if r.pivots.len() != expected_rank {
            return Err(Error::DegenerateBasis);
        }
        let rows = (0..expected_rank).map(|i| r.matrix.row(i).to_vec()).collect();
        Ok(KPlane {
            basis: Matrix::from_rows(m.field(), m.cols(), rows),
            pivots: r.pivots,
        })
    }

    pub fn from_i64(field: &F, n: usize, rows: &[&[i64]]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Self::new(field, n, rows)
    }

    pub fn point(field: &F, coords: Vec<F::Elem>) -> Result<Self> {
        let n = coords.len().checked_sub(1).ok_or(Error::DegenerateBasis)?;
        Self::new(field, n, vec![coords])
    }

    /// The coordinate subspace V(x_i : i in `zero`).
    pub fn vanishing(field: &F, n: usize, zero: &[usize]) -> Result<Self> {
        let rows = (0..=n)
            .filter(|i| !zero.contains(i))
            .map(|i| {
                let mut v = vec![field.zero(); n + 1];
                v[i] = field.one();
                v
            })
            .collect();
        Self::new(field, n, rows)
    }

    pub fn field(&self) -> &F {
        self.basis.field()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows() - 1
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols() - 1
    }

    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }

    pub fn rows(&self) -> Vec<Vec<F::Elem>> {
        self.basis.row_vecs()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn non_pivots(&self) -> Vec<usize> {
        (0..=self.ambient()).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// The residue of `v` after eliminating the pivot coordinates; zero iff
    /// `v` lies in the subspace.
    pub fn reduce(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let fl = self.field();
        let mut out = v.to_vec();
        for (r, &pc) in self.pivots.iter().enumerate() {
            let c = out[pc].clone();
            if fl.is_zero(&c) {
                continue;
            }
            for (j, b) in self.basis.row(r).iter().enumerate() {
                out[j] = fl.sub(&out[j], &fl.mul(&c, b));
            }
        }
        out
    }

    pub fn contains_vector(&self, v: &[F::Elem]) -> bool {
        let fl = self.field();
        self.reduce(v).iter().all(|c| fl.is_zero(c))
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.ambient() == other.ambient()
            && self.dim() <= other.dim()
            && (0..self.basis.rows()).all(|i| other.contains_vector(self.basis.row(i)))
    }

    /// span(self, v); fails if v already lies in the plane.
    pub fn span_with(&self, v: &[F::Elem]) -> Result<Self> {
        let mut rows = self.rows();
        rows.push(v.to_vec());
        Self::new(self.field(), self.ambient(), rows)
    }

    /// The n+1 linear forms x_i = sum_j basis[j][i] u_j in k+1 parameters.
    pub fn parametrization(&self) -> Vec<Form<F>> {
        let k1 = self.basis.rows();
        (0..=self.ambient())
            .map(|i| Form::linear(self.field(), &self.basis.column(i)[..k1]))
            .collect()
    }

    /// A uniformly random sub-plane of dimension `dim`, returned together
    /// with the (non-canonical) spanning vectors that were drawn.
    pub fn random_subplane<R: Rng + ?Sized>(&self, dim: usize, rng: &mut R) -> (Self, Vec<Vec<F::Elem>>) {
        assert!(dim <= self.dim());
        let fl = self.field();
        loop {
            let coeffs: Vec<Vec<F::Elem>> = (0..=dim)
                .map(|_| (0..=self.dim()).map(|_| fl.random(rng)).collect())
                .collect();
            let c = Matrix::from_rows(fl, self.dim() + 1, coeffs);
            let spanning = c.mul(&self.basis);
            if let Ok(p) = Self::from_matrix(&spanning, dim + 1) {
                return (p, spanning.row_vecs());
            }
        }
    }

    pub fn to_field<G: Field>(&self, target: &G) -> Result<KPlane<G>> {
        let fl = self.field();
        let rows = self
            .rows()
            .into_iter()
            .map(|r| r.iter().map(|c| target.from_rational(&fl.lift(c))).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        KPlane::new(target, self.ambient(), rows)
    }

    /// Rows rendered as `[[a,b,..],..]` with field elements in grammar syntax.
    pub fn render(&self) -> String {
        let fl = self.field();
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|c| fl.render(c)).collect::<Vec<_>>().join(",")))
            .collect();
        format!("[{}]", rows.join(","))
    }
}
