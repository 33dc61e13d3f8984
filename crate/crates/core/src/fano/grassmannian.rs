//! G(k, n)(F_p) by RREF pivot charts.
//!
//! Each chart fixes the pivot columns of the (k+1) x (n+1) RREF matrix; its
//! free entries are the positions right of a row's pivot that are not
//! pivots themselves. Every plane lies in exactly one chart.

/// One pivot pattern and its free positions (row, column).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chart {
    pub pivots: Vec<usize>,
    pub free: Vec<(usize, usize)>,
}

impl Chart {
    pub fn size(&self, p: u64) -> u64 {
        p.pow(self.free.len() as u32)
    }

    /// Fill `rows` ((k+1) x (n+1), row-major) with the plane of index `idx`.
    /// Free entries are read as base-p digits, the last free position least
    /// significant.
    pub fn fill(&self, p: u64, mut idx: u64, rows: &mut [u64], width: usize) {
        rows.iter_mut().for_each(|c| *c = 0);
        for (r, &c) in self.pivots.iter().enumerate() {
            rows[r * width + c] = 1;
        }
        for &(r, c) in self.free.iter().rev() {
            rows[r * width + c] = idx % p;
            idx /= p;
        }
    }
}

/// All charts of G(k, n) in lexicographic pivot order.
pub fn charts(k: usize, n: usize) -> Vec<Chart> {
    fn rec(out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>, start: usize, left: usize, n: usize) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for c in start..=n + 1 - left {
            cur.push(c);
            rec(out, cur, c + 1, left - 1, n);
            cur.pop();
        }
    }
    let mut sets = Vec::new();
    rec(&mut sets, &mut Vec::new(), 0, k + 1, n);
    sets.into_iter()
        .map(|pivots| {
            let mut free = Vec::new();
            for (r, &pc) in pivots.iter().enumerate() {
                for c in pc + 1..=n {
                    if !pivots.contains(&c) {
                        free.push((r, c));
                    }
                }
            }
            Chart { pivots, free }
        })
        .collect()
}

/// |G(k, n)(F_p)|, the Gaussian binomial [n+1, k+1]_p.
pub fn num_planes(k: usize, n: usize, p: u64) -> u128 {
    charts(k, n).iter().map(|c| (p as u128).pow(c.free.len() as u32)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PrimeField;
    use crate::varieties::KPlane;
    use std::collections::HashSet;

    #[test]
    fn gaussian_binomials() {
        // Lines in P^3 over F_q: (q^2+1)(q^2+q+1).
        for q in [3u64, 5, 7] {
            let expect = (q * q + 1) * (q * q + q + 1);
            assert_eq!(num_planes(1, 3, q), expect as u128);
        }
        // Points of P^n.
        assert_eq!(num_planes(0, 2, 5), 31);
        assert_eq!(charts(1, 3).len(), 6);
    }

    #[test]
    fn chart_planes_are_canonical_and_distinct() {
        let p = 3;
        let f = PrimeField::new(p).unwrap();
        let (k, n) = (1, 3);
        let mut seen = HashSet::new();
        let mut rows = vec![0u64; (k + 1) * (n + 1)];
        for ch in charts(k, n) {
            for idx in 0..ch.size(p) {
                ch.fill(p, idx, &mut rows, n + 1);
                let vecs: Vec<Vec<u64>> = rows.chunks(n + 1).map(|r| r.to_vec()).collect();
                let plane = KPlane::new(&f, n, vecs.clone()).unwrap();
                assert_eq!(plane.rows(), vecs, "chart output is already in RREF");
                assert!(seen.insert(vecs));
            }
        }
        assert_eq!(seen.len() as u128, num_planes(k, n, p));
    }
}
