//! Generators for the example families.

use serde::Serialize;

use crate::algebra::field::Field;
use crate::algebra::form::Form;
use crate::error::{Error, Result};
use crate::par::Jobs;
use crate::rng;
use crate::varieties::hypersurface::{contains, Hypersurface};
use crate::varieties::kplane::KPlane;
use crate::varieties::singular::{singular_search, SingularReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExampleKind {
    /// x0^d + ... + xn^d.
    Fermat { n: usize, d: u32 },
    /// f = g + x0*h with g in x2..xn only; the vertex [0,1,0,..,0] is marked.
    Conical { n: usize, d: u32, seed: u64 },
    /// f = sum_{i>m} x_i*g_i, containing the marked m-plane V(x_{m+1},..,x_n).
    Planed { n: usize, d: u32, m: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy)]
pub struct GenOptions {
    pub attempts: usize,
    pub budget: u128,
    pub jobs: Jobs,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions {
            attempts: 100,
            budget: 100_000_000,
            jobs: Jobs::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Example<F: Field> {
    pub x: Hypersurface<F>,
    pub marked: Option<KPlane<F>>,
    /// Seed of the attempt that was accepted.
    pub seed: Option<u64>,
    pub attempt: usize,
    /// `None` when no F_p scan was possible (rationals, or over budget).
    pub smoothness: Option<SingularReport>,
}

fn smoothness<F: Field>(x: &Hypersurface<F>, opts: &GenOptions) -> Result<Option<SingularReport>> {
    if x.field().characteristic() == 0 {
        return Ok(None);
    }
    match singular_search(x, 1, opts.budget, opts.jobs) {
        Ok(r) => Ok(Some(r)),
        Err(Error::SearchSpaceTooLarge { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn fermat<F: Field>(field: &F, n: usize, d: u32) -> Result<Hypersurface<F>> {
    let mut f = Form::zero(field, n + 1, d);
    for i in 0..=n {
        let mut e = vec![0u16; n + 1];
        e[i] = d as u16;
        f = f.add(&Form::monomial(field, e, field.one()))?;
    }
    Hypersurface::new(f)
}

fn conical_form<F: Field>(field: &F, n: usize, d: u32, rng: &mut rng::Rng) -> Result<Form<F>> {
    let g_small = Form::random_integer(field, n - 1, d, rng);
    let map: Vec<usize> = (2..=n).collect();
    let g = g_small.remap(n + 1, &map);
    let h = Form::random_integer(field, n + 1, d - 1, rng);
    g.add(&Form::var(field, n + 1, 0).mul(&h)?)
}

fn planed_form<F: Field>(field: &F, n: usize, d: u32, m: usize, rng: &mut rng::Rng) -> Result<Form<F>> {
    let mut f = Form::zero(field, n + 1, d);
    for i in m + 1..=n {
        let g = Form::random_integer(field, n + 1, d - 1, rng);
        f = f.add(&Form::var(field, n + 1, i).mul(&g)?)?;
    }
    Ok(f)
}

/// Build an example, regenerating random families until the F_p scan finds
/// no singular point (or the attempt budget runs out).
pub fn example_hypersurface<F: Field>(field: &F, kind: ExampleKind, opts: &GenOptions) -> Result<Example<F>> {
    match kind {
        ExampleKind::Fermat { n, d } => {
            let x = fermat(field, n, d)?;
            let smoothness = smoothness(&x, opts)?;
            Ok(Example { x, marked: None, seed: None, attempt: 0, smoothness })
        }
        ExampleKind::Conical { n, d, seed } | ExampleKind::Planed { n, d, seed, .. } => {
            if n < 2 || d < 1 {
                return Err(Error::InvalidArgument("need n >= 2 and d >= 1".into()));
            }
            let marked = match kind {
                ExampleKind::Conical { .. } => {
                    let mut v = vec![field.zero(); n + 1];
                    v[1] = field.one();
                    KPlane::point(field, v)?
                }
                ExampleKind::Planed { m, .. } => {
                    if m >= n {
                        return Err(Error::InvalidArgument(format!("cannot mark an {m}-plane in P^{n}")));
                    }
                    KPlane::vanishing(field, n, &(m + 1..=n).collect::<Vec<_>>())?
                }
                ExampleKind::Fermat { .. } => unreachable!(),
            };
            for attempt in 0..opts.attempts {
                let s = rng::derive(seed, attempt as u64);
                let mut r = rng::stream(s, 0);
                let f = match kind {
                    ExampleKind::Conical { .. } => conical_form(field, n, d, &mut r)?,
                    ExampleKind::Planed { m, .. } => planed_form(field, n, d, m, &mut r)?,
                    ExampleKind::Fermat { .. } => unreachable!(),
                };
                let x = match Hypersurface::new(f) {
                    Ok(x) => x,
                    Err(Error::ZeroPolynomial) => continue,
                    Err(e) => return Err(e),
                };
                if !contains(&x, &marked)? {
                    return Err(Error::Invariant("generated hypersurface misses its marked plane".into()));
                }
                let sm = smoothness(&x, opts)?;
                if sm.as_ref().is_some_and(|r| r.is_singular()) {
                    continue;
                }
                return Ok(Example { x, marked: Some(marked), seed: Some(s), attempt, smoothness: sm });
            }
            Err(Error::SmoothnessNotAchieved { attempts: opts.attempts })
        }
    }
}

/// A dense random hypersurface that passes the F_p singular scan.
pub fn random_smooth<F: Field>(field: &F, n: usize, d: u32, seed: u64, opts: &GenOptions) -> Result<Example<F>> {
    if field.characteristic() == 0 {
        return Err(Error::Unsupported("random_smooth needs a prime field".into()));
    }
    for attempt in 0..opts.attempts {
        let s = rng::derive(seed, attempt as u64);
        let mut r = rng::stream(s, 0);
        let x = match Hypersurface::new(Form::random_integer(field, n + 1, d, &mut r)) {
            Ok(x) => x,
            Err(Error::ZeroPolynomial) => continue,
            Err(e) => return Err(e),
        };
        let rep = singular_search(&x, 1, opts.budget, opts.jobs)?;
        if !rep.is_singular() {
            return Ok(Example { x, marked: None, seed: Some(s), attempt, smoothness: Some(rep) });
        }
    }
    Err(Error::SmoothnessNotAchieved { attempts: opts.attempts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PrimeField;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn fermat_cubic_surface() {
        let ex = example_hypersurface(&f(7), ExampleKind::Fermat { n: 3, d: 3 }, &GenOptions::default()).unwrap();
        assert_eq!(ex.x.form().num_terms(), 4);
        assert!(ex.marked.is_none());
        assert!(!ex.smoothness.unwrap().is_singular());
    }

    #[test]
    fn planed_and_conical_contain_their_marks() {
        let opts = GenOptions::default();
        for seed in 0..5 {
            let ex = example_hypersurface(&f(7), ExampleKind::Planed { n: 3, d: 3, m: 1, seed }, &opts).unwrap();
            let l = ex.marked.as_ref().unwrap();
            assert_eq!(l.dim(), 1);
            assert!(contains(&ex.x, l).unwrap());
            assert!(!ex.smoothness.unwrap().is_singular());
        }
        let ex = example_hypersurface(&f(7), ExampleKind::Conical { n: 4, d: 5, seed: 1 }, &opts).unwrap();
        assert!(contains(&ex.x, ex.marked.as_ref().unwrap()).unwrap());
        // g involves only x2..x4.
        let x1_only = ex.x.form().terms().all(|(m, _)| m.exps()[0] > 0 || m.exps()[1] == 0);
        assert!(x1_only);
    }

    #[test]
    fn random_smooth_examples() {
        let opts = GenOptions::default();
        let c = random_smooth(&f(7), 3, 3, 11, &opts).unwrap();
        assert!(!c.smoothness.unwrap().is_singular());
        let q = random_smooth(&f(5), 3, 2, 11, &GenOptions { attempts: 10, ..opts }).unwrap();
        assert_eq!(q.x.d(), 2);
        let l = random_smooth(&f(5), 2, 1, 11, &GenOptions { attempts: 1, ..opts }).unwrap();
        assert_eq!(l.attempt, 0);
    }
}
