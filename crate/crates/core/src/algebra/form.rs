//! Sparse homogeneous polynomials with exact coefficients.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::field::Field;
use crate::error::{Error, Result};

/// Exponent vector of a monomial. Ordered lexicographically (x0 first); since
/// every term of a form has the same total degree this is also graded lex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u16>);

impl Monomial {
    pub fn new(exps: Vec<u16>) -> Self {
        Monomial(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[u16] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// All exponent vectors of total degree `degree` in `nvars` variables, in
/// ascending lexicographic order.
pub fn monomials(nvars: usize, degree: u32) -> Vec<Vec<u16>> {
    fn rec(out: &mut Vec<Vec<u16>>, cur: &mut Vec<u16>, i: usize, left: u32) {
        if i + 1 == cur.len() {
            cur[i] = left as u16;
            out.push(cur.clone());
            cur[i] = 0;
            return;
        }
        for e in 0..=left {
            cur[i] = e as u16;
            rec(out, cur, i + 1, left - e);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if degree == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(&mut out, &mut vec![0; nvars], 0, degree);
    out
}

/// A homogeneous form of fixed degree in `nvars` variables x0..x_{nvars-1}.
///
/// Invariants: every stored exponent vector sums to `degree`, no zero
/// coefficient is stored. Degree and variable count are explicit, so the
/// zero form still knows its degree.
#[derive(Clone, PartialEq, Eq)]
pub struct Form<F: Field> {
    field: F,
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Monomial, F::Elem>,
}

impl<F: Field> fmt::Debug for Form<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form[{}; deg {}]({})", self.nvars, self.degree, self.render())
    }
}

impl<F: Field> fmt::Display for Form<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl<F: Field> Form<F> {
    pub fn zero(field: &F, nvars: usize, degree: u32) -> Self {
        Form {
            field: field.clone(),
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &F, nvars: usize, c: F::Elem) -> Self {
        let mut f = Self::zero(field, nvars, 0);
        f.add_term(Monomial::one(nvars), c);
        f
    }

    pub fn var(field: &F, nvars: usize, i: usize) -> Self {
        let mut f = Self::zero(field, nvars, 1);
        f.add_term(Monomial::var(nvars, i), field.one());
        f
    }

    /// The linear form sum_i coeffs[i] * x_i.
    pub fn linear(field: &F, coeffs: &[F::Elem]) -> Self {
        let n = coeffs.len();
        let mut f = Self::zero(field, n, 1);
        for (i, c) in coeffs.iter().enumerate() {
            f.add_term(Monomial::var(n, i), c.clone());
        }
        f
    }

    pub fn monomial(field: &F, exps: Vec<u16>, coeff: F::Elem) -> Self {
        let m = Monomial::new(exps);
        let mut f = Self::zero(field, m.nvars(), m.degree());
        f.add_term(m, coeff);
        f
    }

    /// A dense form with small integer coefficients drawn from `rng`, so the
    /// same seed gives the same integer polynomial over every field.
    pub fn random_integer<R: rand::Rng + ?Sized>(field: &F, nvars: usize, degree: u32, rng: &mut R) -> Self {
        let mut f = Self::zero(field, nvars, degree);
        for m in monomials(nvars, degree) {
            let c: i64 = rng.gen_range(-9..=9);
            f.add_term(Monomial::new(m), field.from_i64(c));
        }
        f
    }

    /// Build from terms, combining duplicates. All exponent vectors must have
    /// length `nvars` and sum to `degree`.
    pub fn from_terms<I>(field: &F, nvars: usize, degree: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u16>, F::Elem)>,
    {
        let mut f = Self::zero(field, nvars, degree);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(Error::DimensionMismatch(format!(
                    "exponent vector of length {} in a form with {} variables",
                    exps.len(),
                    nvars
                )));
            }
            let m = Monomial::new(exps);
            if m.degree() != degree {
                return Err(Error::NonHomogeneous(degree, m.degree()));
            }
            f.add_term(m, c);
        }
        Ok(f)
    }

    /// Add `c * m` in place. The caller guarantees `m` has the right degree.
    pub(crate) fn add_term(&mut self, m: Monomial, c: F::Elem) {
        debug_assert_eq!(m.degree(), self.degree);
        debug_assert_eq!(m.nvars(), self.nvars);
        if self.field.is_zero(&c) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = self.field.add(o.get(), &c);
                if self.field.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &F::Elem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u16]) -> F::Elem {
        self.terms
            .get(&Monomial::new(exps.to_vec()))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Coefficients of a degree-1 form, indexed by variable.
    pub fn linear_coeffs(&self) -> Vec<F::Elem> {
        assert_eq!(self.degree, 1, "linear_coeffs on a form of degree {}", self.degree);
        let mut out = vec![self.field.zero(); self.nvars];
        for (m, c) in &self.terms {
            let i = m.exps().iter().position(|&e| e == 1).expect("degree one");
            out[i] = c.clone();
        }
        out
    }

    /// Variables that actually occur.
    pub fn support(&self) -> Vec<usize> {
        let mut used = vec![false; self.nvars];
        for m in self.terms.keys() {
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    used[i] = true;
                }
            }
        }
        (0..self.nvars).filter(|&i| used[i]).collect()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch(format!(
                "forms in {} and {} variables",
                self.nvars, other.nvars
            )));
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&self.field.neg(&self.field.one()))
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let mut out = Self::zero(&self.field, self.nvars, self.degree);
        if self.field.is_zero(c) {
            return out;
        }
        for (m, a) in &self.terms {
            out.terms.insert(m.clone(), self.field.mul(a, c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch(format!(
                "forms in {} and {} variables",
                self.nvars, other.nvars
            )));
        }
        let mut out = Self::zero(&self.field, self.nvars, self.degree + other.degree);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), self.field.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(&self.field, self.nvars, self.field.one());
        for _ in 0..e {
            acc = acc.mul(self).expect("same variable count");
        }
        acc
    }

    /// Exact value at a point; `pt.len()` must equal `nvars`.
    pub fn eval(&self, pt: &[F::Elem]) -> F::Elem {
        assert_eq!(pt.len(), self.nvars, "evaluation point has the wrong length");
        let fl = &self.field;
        let mut powers: Vec<Vec<F::Elem>> = pt
            .iter()
            .map(|x| vec![fl.one(), x.clone()])
            .collect();
        let mut acc = fl.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let row = &mut powers[i];
                while row.len() <= e as usize {
                    let next = fl.mul(row.last().unwrap(), &pt[i]);
                    row.push(next);
                }
                t = fl.mul(&t, &row[e as usize]);
            }
            acc = fl.add(&acc, &t);
        }
        acc
    }

    /// Substitute `images[i]` for x_i. Images are forms in a common set of
    /// fresh variables and share one degree `e`; the result has degree
    /// `degree * e`.
    pub fn substitute(&self, images: &[Form<F>]) -> Result<Self> {
        if images.len() != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "{} images for a form in {} variables",
                images.len(),
                self.nvars
            )));
        }
        let (m, e) = match images.first() {
            Some(g) => (g.nvars, g.degree),
            None => {
                return Err(Error::DimensionMismatch("substitution into a form with no variables".into()))
            }
        };
        for g in images {
            if g.degree != e {
                return Err(Error::DegreeMismatch(e, g.degree));
            }
            if g.nvars != m {
                return Err(Error::DimensionMismatch(format!(
                    "images in {} and {} variables",
                    m, g.nvars
                )));
            }
        }
        let one = Self::constant(&self.field, m, self.field.one());
        let mut powers: Vec<Vec<Form<F>>> = images.iter().map(|g| vec![one.clone(), g.clone()]).collect();
        let mut out = Self::zero(&self.field, m, self.degree * e);
        for (mono, c) in &self.terms {
            let mut t = one.scale(c);
            for (i, &ex) in mono.exps().iter().enumerate() {
                if ex == 0 {
                    continue;
                }
                let row = &mut powers[i];
                while row.len() <= ex as usize {
                    let next = row.last().unwrap().mul(&images[i])?;
                    row.push(next);
                }
                t = t.mul(&row[ex as usize])?;
            }
            for (mm, cc) in t.terms {
                out.add_term(mm, cc);
            }
        }
        Ok(out)
    }

    /// Linear change of coordinates x = M y, i.e. substitute
    /// x_i = sum_j M[i][j] y_j.
    pub fn change_coordinates(&self, m: &crate::algebra::matrix::Matrix<F>) -> Result<Self> {
        if m.rows() != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} coordinate change for a form in {} variables",
                m.rows(),
                m.cols(),
                self.nvars
            )));
        }
        let images: Vec<Form<F>> = (0..m.rows()).map(|i| Form::linear(&self.field, m.row(i))).collect();
        self.substitute(&images)
    }

    /// Formal partial derivative with respect to x_i (no characteristic check).
    pub fn derivative(&self, i: usize) -> Self {
        let new_deg = self.degree.saturating_sub(1);
        let mut out = Self::zero(&self.field, self.nvars, new_deg);
        if self.degree == 0 {
            return out;
        }
        for (m, c) in &self.terms {
            let e = m.exps()[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps().to_vec();
            exps[i] -= 1;
            out.add_term(Monomial::new(exps), self.field.mul(c, &self.field.from_i64(e as i64)));
        }
        out
    }

    /// All partial derivatives. In positive characteristic the prime must
    /// exceed the degree so that integer factors stay invertible.
    pub fn partial_derivatives(&self) -> Result<Vec<Self>> {
        let p = self.field.characteristic();
        if p != 0 && p <= self.degree as u64 {
            return Err(Error::CharacteristicTooSmall { p, d: self.degree });
        }
        Ok((0..self.nvars).map(|i| self.derivative(i)).collect())
    }

    /// Gradient of the form at a point (formal derivatives evaluated).
    pub fn gradient_at(&self, pt: &[F::Elem]) -> Vec<F::Elem> {
        (0..self.nvars).map(|i| self.derivative(i).eval(pt)).collect()
    }

    /// Re-express in a larger (or permuted) variable set: variable i of
    /// `self` becomes variable `map[i]` of the result.
    pub fn remap(&self, new_nvars: usize, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.nvars);
        let mut out = Self::zero(&self.field, new_nvars, self.degree);
        for (m, c) in &self.terms {
            let mut exps = vec![0u16; new_nvars];
            for (i, &e) in m.exps().iter().enumerate() {
                exps[map[i]] += e;
            }
            out.add_term(Monomial::new(exps), c.clone());
        }
        out
    }

    /// Drop variables that are known not to occur; `keep` lists the
    /// surviving variables in order. Fails if a dropped variable occurs.
    pub fn restrict_vars(&self, keep: &[usize]) -> Result<Self> {
        let mut out = Self::zero(&self.field, keep.len(), self.degree);
        for (m, c) in &self.terms {
            let mut exps = Vec::with_capacity(keep.len());
            for &k in keep {
                exps.push(m.exps()[k]);
            }
            if exps.iter().map(|&e| e as u32).sum::<u32>() != self.degree {
                return Err(Error::InvalidArgument("form involves a dropped variable".into()));
            }
            out.add_term(Monomial::new(exps), c.clone());
        }
        Ok(out)
    }

    /// Map into another field through the canonical lift to Q.
    pub fn to_field<G: Field>(&self, target: &G) -> Result<Form<G>> {
        let mut out = Form::zero(target, self.nvars, self.degree);
        for (m, c) in &self.terms {
            let v = target.from_rational(&self.field.lift(c))?;
            out.add_term(m.clone(), v);
        }
        Ok(out)
    }

    /// Render in the input grammar with variable prefix `x`.
    pub fn render(&self) -> String {
        self.render_with("x")
    }

    /// Render in the input grammar, terms in descending monomial order.
    pub fn render_with(&self, prefix: &str) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let mut coeff = self.field.render(c);
            let negative = coeff.starts_with('-');
            if negative {
                coeff.remove(0);
            }
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let factors: Vec<String> = m
                .exps()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        format!("{prefix}{i}")
                    } else {
                        format!("{prefix}{i}^{e}")
                    }
                })
                .collect();
            if factors.is_empty() {
                out.push_str(&coeff);
            } else {
                if coeff != "1" {
                    out.push_str(&coeff);
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}
