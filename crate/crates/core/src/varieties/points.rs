//! Projective points over F_p: indexing, scanning and fast evaluation.
//!
//! Points of P^n(F_p) are normalized so the first nonzero coordinate is 1.
//! They are indexed by the position of that leading one (ascending) and then
//! by the trailing coordinates read as a base-p number, most significant
//! first. This is the order in which every scan reports its results.

use crate::algebra::form::Form;
use crate::algebra::PrimeField;
use crate::error::{Error, Result};
use crate::par::{self, Jobs};

/// Number of points of P^n(F_p).
pub fn num_points(n: usize, p: u64) -> u128 {
    let p = p as u128;
    (0..=n).map(|j| p.pow(j as u32)).sum()
}

/// p^(n+1), the affine size used for budget checks.
pub fn affine_size(n: usize, p: u64) -> u128 {
    (p as u128).checked_pow(n as u32 + 1).unwrap_or(u128::MAX)
}

pub fn check_budget(size: u128, budget: u128) -> Result<()> {
    if size > budget {
        Err(Error::SearchSpaceTooLarge { size, budget })
    } else {
        Ok(())
    }
}

/// The point with index `idx` in the canonical order.
pub fn point_at(n: usize, p: u64, mut idx: u64) -> Vec<u64> {
    let mut pt = vec![0u64; n + 1];
    for j in 0..=n {
        let block = p.pow((n - j) as u32);
        if idx < block {
            pt[j] = 1;
            for c in (j + 1..=n).rev() {
                pt[c] = idx % p;
                idx /= p;
            }
            return pt;
        }
        idx -= block;
    }
    panic!("point index out of range");
}

/// Index of a normalized point; inverse of [`point_at`].
pub fn index_of(p: u64, pt: &[u64]) -> u64 {
    let n = pt.len() - 1;
    let j = pt.iter().position(|&c| c != 0).expect("nonzero point");
    let mut idx: u64 = (0..j).map(|i| p.pow((n - i) as u32)).sum();
    let mut tail = 0u64;
    for &c in &pt[j + 1..] {
        tail = tail * p + c;
    }
    idx += tail;
    idx
}

/// Scale so that the first nonzero coordinate is 1. Returns `None` for the
/// zero vector.
pub fn normalize(fl: &PrimeField, v: &[u64]) -> Option<Vec<u64>> {
    let lead = *v.iter().find(|&&c| c != 0)?;
    let inv = fl.inv_u(lead).unwrap();
    Some(v.iter().map(|&c| fl.mul_u(c, inv)).collect())
}

/// Advance a normalized point to the next one in canonical order; returns
/// false after the last point.
pub fn advance(p: u64, pt: &mut [u64]) -> bool {
    let n = pt.len() - 1;
    let j = pt.iter().position(|&c| c != 0).unwrap();
    for c in (j + 1..=n).rev() {
        pt[c] += 1;
        if pt[c] < p {
            return true;
        }
        pt[c] = 0;
    }
    if j == n {
        return false;
    }
    pt[j] = 0;
    pt[j + 1] = 1;
    true
}

const BLOCK: u64 = 1 << 12;

/// Apply `f` to every point of P^n(F_p) and collect the `Some` results in
/// canonical order.
pub fn scan<T, G>(n: usize, p: u64, jobs: Jobs, f: G) -> Vec<T>
where
    T: Send,
    G: Fn(&[u64]) -> Option<T> + Sync + Send,
{
    let total = num_points(n, p) as u64;
    let blocks = par::blocks(total, BLOCK);
    let parts = par::map(jobs, blocks.len(), |b| {
        let (start, end) = blocks[b];
        let mut pt = point_at(n, p, start);
        let mut out = Vec::new();
        for i in start..end {
            if let Some(t) = f(&pt) {
                out.push(t);
            }
            if i + 1 < end {
                advance(p, &mut pt);
            }
        }
        out
    });
    parts.into_iter().flatten().collect()
}

/// First point (in canonical order) where `f` returns `Some`.
pub fn find_first<T, G>(n: usize, p: u64, jobs: Jobs, f: G) -> Option<T>
where
    T: Send,
    G: Fn(&[u64]) -> Option<T> + Sync + Send,
{
    let total = num_points(n, p) as u64;
    let blocks = par::blocks(total, BLOCK);
    par::find_first(jobs, blocks.len(), |b| {
        let (start, end) = blocks[b];
        let mut pt = point_at(n, p, start);
        for i in start..end {
            if let Some(t) = f(&pt) {
                return Some(t);
            }
            if i + 1 < end {
                advance(p, &mut pt);
            }
        }
        None
    })
    .map(|(_, t)| t)
}

/// A form over F_p flattened for repeated evaluation.
#[derive(Debug, Clone)]
pub struct PrimeEval {
    p: u64,
    nvars: usize,
    max_exp: usize,
    terms: Vec<(Vec<(usize, usize)>, u64)>,
}

impl PrimeEval {
    pub fn new(f: &Form<PrimeField>) -> Self {
        let mut max_exp = 0;
        let terms = f
            .terms()
            .map(|(m, c)| {
                let factors: Vec<(usize, usize)> = m
                    .exps()
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| (i, e as usize))
                    .collect();
                for &(_, e) in &factors {
                    max_exp = max_exp.max(e);
                }
                (factors, *c)
            })
            .collect();
        PrimeEval {
            p: f.field().p(),
            nvars: f.nvars(),
            max_exp,
            terms,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Evaluate using a caller-owned power table.
    pub fn eval_with(&self, pt: &[u64], powers: &mut Vec<u64>) -> u64 {
        let p = self.p;
        let w = self.max_exp + 1;
        powers.resize(self.nvars * w, 0);
        for (i, &x) in pt.iter().enumerate() {
            let row = &mut powers[i * w..(i + 1) * w];
            row[0] = 1;
            for e in 1..w {
                row[e] = row[e - 1] * x % p;
            }
        }
        let mut acc = 0u64;
        for (factors, c) in &self.terms {
            let mut t = *c;
            for &(i, e) in factors {
                t = t * powers[i * w + e] % p;
            }
            acc += t;
            if acc >= p {
                acc -= p;
            }
        }
        acc
    }

    pub fn eval(&self, pt: &[u64]) -> u64 {
        let mut buf = Vec::new();
        self.eval_with(pt, &mut buf)
    }
}
