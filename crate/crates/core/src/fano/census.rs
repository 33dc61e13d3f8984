//! Exhaustive enumeration of the k-planes on X over F_p.

use serde::Serialize;

use crate::algebra::PrimeField;
use crate::error::{Error, Result};
use crate::par::{self, Jobs};
use crate::varieties::points::{self, PrimeEval};
use crate::varieties::{Hypersurface, KPlane};

use super::grassmannian::{charts, Chart};

/// Plane lists are materialized only up to this many planes.
pub const DEFAULT_LIST_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CensusMethod {
    FullGrassmannian,
    ThroughCenter,
}

#[derive(Debug, Clone)]
pub struct PlaneCensus {
    pub n: usize,
    pub d: u32,
    pub k: usize,
    pub p: u64,
    pub count: u64,
    pub method: CensusMethod,
    /// `None` when the count exceeded the list cap.
    pub planes: Option<Vec<KPlane<PrimeField>>>,
}

#[derive(Debug, Clone, Copy)]
pub struct CensusOptions {
    pub budget: u128,
    pub list_cap: usize,
    pub jobs: Jobs,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            budget: 100_000_000,
            list_cap: DEFAULT_LIST_CAP,
            jobs: Jobs::default(),
        }
    }
}

/// Containment by evaluation: f restricted to a k-plane is a form of degree
/// d in k+1 parameters, and since p > d it is zero iff it vanishes on the
/// grid {0..d}^{k+1}. Unit vectors come first so most planes are rejected
/// after one or two evaluations.
pub struct PlaneTester {
    f: PrimeEval,
    p: u64,
    grid: Vec<Vec<u64>>,
}

impl PlaneTester {
    pub fn new(x: &Hypersurface<PrimeField>, k: usize) -> Self {
        let d = x.d() as u64;
        let mut grid: Vec<Vec<u64>> = (0..=k)
            .map(|j| {
                let mut u = vec![0; k + 1];
                u[j] = 1;
                u
            })
            .collect();
        let mut u = vec![0u64; k + 1];
        loop {
            let nonzero = u.iter().filter(|&&c| c != 0).count();
            if nonzero > 1 || (nonzero == 1 && u.iter().any(|&c| c > 1)) {
                grid.push(u.clone());
            }
            let mut i = k + 1;
            loop {
                if i == 0 {
                    return PlaneTester { f: PrimeEval::new(x.form()), p: x.field().p(), grid };
                }
                i -= 1;
                u[i] += 1;
                if u[i] <= d {
                    break;
                }
                u[i] = 0;
            }
        }
    }

    /// `rows` is a (k+1) x (n+1) row-major basis.
    pub fn contains(&self, rows: &[u64], width: usize, pt: &mut Vec<u64>, buf: &mut Vec<u64>) -> bool {
        let p = self.p;
        for u in &self.grid {
            pt.clear();
            pt.resize(width, 0);
            for (j, &c) in u.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for (x, &b) in pt.iter_mut().zip(&rows[j * width..(j + 1) * width]) {
                    *x = (*x + c * b) % p;
                }
            }
            if self.f.eval_with(pt, buf) != 0 {
                return false;
            }
        }
        true
    }
}

const BLOCK: u64 = 1 << 12;

fn to_plane(fl: &PrimeField, n: usize, rows: &[u64]) -> KPlane<PrimeField> {
    KPlane::new(fl, n, rows.chunks(n + 1).map(|r| r.to_vec()).collect()).expect("independent rows")
}

/// Count (and list) the k-planes on X over F_p, either over the whole
/// Grassmannian or among the k-planes containing `through`.
pub fn enumerate_kplanes(
    x: &Hypersurface<PrimeField>,
    k: usize,
    through: Option<&KPlane<PrimeField>>,
    opts: &CensusOptions,
) -> Result<PlaneCensus> {
    let n = x.n();
    if k >= n {
        return Err(Error::InvalidArgument(format!("k = {k} must be below n = {n}")));
    }
    let fl = *x.field();
    let p = fl.p();
    let tester = PlaneTester::new(x, k);
    let width = n + 1;
    let (count, found, method) = match through {
        None => {
            let size = (p as u128).checked_pow(((k + 1) * (n - k)) as u32).unwrap_or(u128::MAX);
            points::check_budget(size, opts.budget)?;
            let chs = charts(k, n);
            let mut work: Vec<(usize, u64, u64)> = Vec::new();
            for (ci, ch) in chs.iter().enumerate() {
                for (s, e) in par::blocks(ch.size(p), BLOCK) {
                    work.push((ci, s, e));
                }
            }
            let parts = par::map(opts.jobs, work.len(), |w| {
                let (ci, s, e) = work[w];
                let ch: &Chart = &chs[ci];
                let mut rows = vec![0u64; (k + 1) * width];
                let (mut pt, mut buf) = (Vec::new(), Vec::new());
                let mut hits = Vec::new();
                for idx in s..e {
                    ch.fill(p, idx, &mut rows, width);
                    if tester.contains(&rows, width, &mut pt, &mut buf) {
                        hits.push(rows.clone());
                    }
                }
                hits
            });
            let found: Vec<Vec<u64>> = parts.into_iter().flatten().collect();
            (found.len() as u64, found, CensusMethod::FullGrassmannian)
        }
        Some(center) => {
            if center.dim() + 1 != k || center.ambient() != n {
                return Err(Error::DimensionMismatch(format!(
                    "center of dimension {} for a census of {k}-planes",
                    center.dim()
                )));
            }
            if !crate::varieties::contains(x, center)? {
                return Err(Error::PlaneNotInX);
            }
            let fiber_n = n - k;
            points::check_budget(points::affine_size(fiber_n, p), opts.budget)?;
            let np = center.non_pivots();
            let base: Vec<u64> = center.rows().concat();
            let found = points::scan(fiber_n, p, opts.jobs, |a| {
                let mut rows = base.clone();
                let mut v = vec![0u64; width];
                for (c, &ai) in np.iter().zip(a) {
                    v[*c] = ai;
                }
                rows.extend(v);
                let (mut pt, mut buf) = (Vec::new(), Vec::new());
                tester.contains(&rows, width, &mut pt, &mut buf).then_some(rows)
            });
            (found.len() as u64, found, CensusMethod::ThroughCenter)
        }
    };
    let planes = (found.len() <= opts.list_cap).then(|| found.iter().map(|r| to_plane(&fl, n, r)).collect());
    Ok(PlaneCensus { n, d: x.d(), k, p, count, method, planes })
}
