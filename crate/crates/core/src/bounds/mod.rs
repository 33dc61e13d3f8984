//! Closed-form thresholds: k0, n0, the binomial growth lemma and the
//! predicate battery for (n, d, k, s, e).

use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Degrees at or above this need `allow_large`.
pub const GATE: u32 = 7;

static K0_CACHE: Mutex<Vec<BigUint>> = Mutex::new(Vec::new());

/// C(n, k) for a big n and small k.
pub fn binomial_big(n: &BigUint, k: u32) -> BigUint {
    let kk = BigUint::from(k);
    if &kk > n {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - BigUint::from(i)) / BigUint::from(i + 1);
    }
    acc
}

fn binom_i(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k) as u32;
    BigInt::from(binomial_big(&BigUint::from(n as u64), k))
}

/// k0(d) for d ≤ 6.
pub fn k0(d: u32) -> Result<BigUint> {
    k0_with(d, false)
}

pub fn k0_with(d: u32, allow_large: bool) -> Result<BigUint> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("k0 needs d >= 2, got {d}")));
    }
    if d >= GATE && !allow_large {
        return Err(Error::GatedDegree(d));
    }
    let mut cache = K0_CACHE.lock().expect("k0 cache poisoned");
    if cache.is_empty() {
        cache.push(BigUint::zero());
    }
    while cache.len() < (d - 1) as usize {
        let e = cache.len() as u32 + 2;
        let prev = cache.last().unwrap().clone();
        let a = binomial_big(&(&prev + BigUint::from(e - 2)), e - 2);
        let b = binomial_big(&(&prev + BigUint::from(e - 1)), e - 1);
        cache.push(BigUint::one() + a * 2u32 + b);
    }
    Ok(cache[(d - 2) as usize].clone())
}

pub fn n0(d: u32) -> Result<BigUint> {
    n0_with(d, false)
}

pub fn n0_with(d: u32, allow_large: bool) -> Result<BigUint> {
    let k = k0_with(d, allow_large)?;
    let c = binomial_big(&(&k + BigUint::from(d)), d);
    Ok(c.div_ceil(&(&k + BigUint::one())) + k)
}

/// 2^(m!) as an exact integer.
pub fn two_pow_factorial(m: u32) -> BigUint {
    let f: u64 = (1..=m as u64).product();
    BigUint::one() << f
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BinomCheck {
    pub x: u64,
    pub d: u32,
    pub holds: bool,
    /// x ≥ 6 and d ≥ 5.
    pub in_hypothesis: bool,
    pub lhs: String,
    pub rhs: String,
}

/// 4 C(x+d, d) < x^d.
pub fn binom_bound_check(x: u64, d: u32) -> BinomCheck {
    let lhs = binomial_big(&BigUint::from(x + d as u64), d) * 4u32;
    let rhs = BigUint::from(x).pow(d);
    BinomCheck {
        x,
        d,
        holds: lhs < rhs,
        in_hypothesis: x >= 6 && d >= 5,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundInputs {
    pub n: i64,
    pub d: i64,
    pub k: i64,
    pub s: i64,
    pub e: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Predicate {
    pub name: &'static str,
    pub holds: bool,
    pub inequality: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpectedDimensions {
    pub fano_scheme: String,
    pub fiber: String,
    pub point_fiber: String,
    pub curves: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThresholdValues {
    /// None when d is gated or below 2.
    pub k0: Option<String>,
    pub n0: Option<String>,
    pub n0_le_two_pow_d_factorial: Option<bool>,
    /// The d = 4 case of the n0 growth bound is not covered by the
    /// binomial lemma and is checked directly.
    pub n0_checked_directly: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub inputs: BoundInputs,
    pub values: ThresholdValues,
    pub binomials: Vec<(String, String)>,
    pub predicates: Vec<Predicate>,
    pub expected: ExpectedDimensions,
    pub notes: Vec<String>,
}

impl BoundReport {
    pub fn predicate(&self, name: &str) -> Option<bool> {
        self.predicates.iter().find(|p| p.name == name).map(|p| p.holds)
    }
}

fn pred(name: &'static str, lhs: &BigInt, op: &str, rhs: &BigInt) -> Predicate {
    let holds = match op {
        "<=" => lhs <= rhs,
        ">=" => lhs >= rhs,
        "<" => lhs < rhs,
        ">" => lhs > rhs,
        _ => unreachable!(),
    };
    Predicate { name, holds, inequality: format!("{lhs} {op} {rhs}") }
}

pub fn threshold_report(n: i64, d: i64, k: i64, s: i64, e: i64, r: Option<i64>) -> Result<BoundReport> {
    if !(n > k && k >= 0) {
        return Err(Error::InvalidArgument(format!("need n > k >= 0, got n={n}, k={k}")));
    }
    if d < 1 || s < -1 || e < 1 {
        return Err(Error::InvalidArgument(format!("need d >= 1, s >= -1, e >= 1, got d={d}, s={s}, e={e}")));
    }
    if matches!(r, Some(r) if r < 0) {
        return Err(Error::InvalidArgument("r must be nonnegative".into()));
    }
    let big = BigInt::from;
    let nb = big(n);
    let c_fib = binom_i(d + k - 1, k);
    let c_fano = binom_i(d + k, k);
    let mut binomials = vec![
        (format!("C({},{})", d + k - 1, k), c_fib.to_string()),
        (format!("C({},{})", d + k, k), c_fano.to_string()),
    ];

    let mut preds = vec![
        pred("conjecture_range", &big(d), "<=", &nb),
        pred("lines_expected_dimension", &nb, ">=", &big(2 * d - 4)),
        Predicate {
            name: "lines_irreducible",
            holds: n >= 2 * d - 1 && n >= 4,
            inequality: format!("{n} >= {} and {n} >= 4", 2 * d - 1),
        },
        pred("kplanes_theorem", &nb, ">=", &(&c_fib * 2 + k)),
        pred("kplanes_expected_dimension", &nb, ">=", &(&c_fib * 2 + (s - 1).max(k - 2))),
        pred("kplanes_irreducible", &nb, ">=", &(&c_fib * 2 + (s + 1).max(k))),
        pred("counterexample_range", &(big(n + 1) * (k + 1)), "<", &(&c_fano * 2)),
        pred("planes_expected", &(big(k + 1) * (n - k)), ">=", &c_fano),
        pred("curves_range", &big(d * (e + 1)), "<=", &big(e + n)),
        pred("conical_excess", &big(e * (d - 3)), ">", &big(n - 1)),
    ];
    let mut notes = Vec::new();
    if let Some(r) = r {
        if d >= 2 {
            let a = binom_i(d + r - 2, d - 2);
            let b = binom_i(d + r - 1, r);
            binomials.push((format!("C({},{})", d + r - 2, d - 2), a.to_string()));
            binomials.push((format!("C({},{})", d + r - 1, r), b.to_string()));
            preds.push(pred("unirationality_step", &big(k), ">=", &(&a * 2 + b + 1)));
            notes.push(format!("C({0},{1}) = C({0},{2})", d + r - 1, r, d - 1));
        } else {
            notes.push("unirationality step needs d >= 2".into());
        }
    }

    let du = d as u32;
    let gated = d < 2 || du >= GATE;
    let (k0v, n0v, growth) = if gated {
        if d >= GATE as i64 {
            notes.push(format!("k0 and n0 are gated for d >= {GATE}"));
        }
        (None, None, None)
    } else {
        let kv = k0(du)?;
        let nv = n0(du)?;
        let holds = nv <= two_pow_factorial(du);
        preds.push(pred("unirational_threshold", &nb, ">=", &BigInt::from(nv.clone())));
        (Some(kv.to_string()), Some(nv.to_string()), Some(holds))
    };
    if d == 4 {
        notes.push("n0(4) <= 2^(4!) is checked directly, outside the binomial lemma".into());
    }

    let expected = ExpectedDimensions {
        fano_scheme: (big(k + 1) * (n - k) - &c_fano).to_string(),
        fiber: (big(n - k) - &c_fib).to_string(),
        point_fiber: (n - 1 - d).to_string(),
        curves: (e * (n + 1 - d) + n - 4).to_string(),
    };

    Ok(BoundReport {
        inputs: BoundInputs { n, d, k, s, e, r },
        values: ThresholdValues { k0: k0v, n0: n0v, n0_le_two_pow_d_factorial: growth, n0_checked_directly: d == 4 },
        binomials,
        predicates: preds,
        expected,
        notes,
    })
}
