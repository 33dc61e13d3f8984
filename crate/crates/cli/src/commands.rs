//! Subcommand handlers. Each returns the report body as a JSON object.

use fano_core::algebra::{parse_form, parse_rows, parse_vector, Field, Form, Matrix, PrimeField, Rationals};
use fano_core::bounds;
use fano_core::curves::{self, RationalCurve};
use fano_core::expansion::{delta_at, DiagOptions, Multiset, expand_at_plane, expand_at_point, tangency_locus, X0Choice};
use fano_core::fano::{dimension_estimate, enumerate_kplanes, fano_fiber, fiber_points, tangent_dim, CensusOptions};
use fano_core::par::Jobs;
use fano_core::unirational::{
    basepoint_free_check, bertini_strata, boundary_series, quadric_param, unirational_sample, BaseDim, SampleOptions,
    SingularResidualPolicy,
};
use fano_core::varieties::{example_hypersurface, random_smooth, Example, ExampleKind, GenOptions, KPlane};
use fano_core::Error;
use serde::Serialize;
use serde_json::{json, Value};

use crate::input::{load, read_file, Input, Loaded};
use crate::{BoundsCmd, Cli, Cmd, CliError, CurveArg, CurveCmd, ExamplesCmd, ExpandCmd, FanoCmd, Global, UniratCmd};

type Out = Result<Value, CliError>;

macro_rules! on_field {
    ($loaded:expr, $inp:ident => $body:expr) => {
        match $loaded {
            Loaded::Prime($inp) => $body,
            Loaded::Rational($inp) => $body,
        }
    };
}

fn at(flag: &'static str) -> impl Fn(Error) -> CliError {
    move |e| CliError::at(flag, e)
}

fn to_json<T: Serialize>(v: &T) -> Out {
    serde_json::to_value(v).map_err(|e| Error::Invariant(format!("serialization failed: {e}")).into())
}

/// Exact integer as a JSON number of any size.
fn big_number(v: &impl ToString) -> Value {
    serde_json::from_str(&v.to_string()).expect("decimal integers are valid JSON")
}

fn render_vec<F: Field>(fl: &F, v: &[F::Elem]) -> Vec<String> {
    v.iter().map(|c| fl.render(c)).collect()
}

fn render_matrix<F: Field>(m: &Matrix<F>) -> Vec<Vec<String>> {
    m.row_vecs().iter().map(|r| render_vec(m.field(), r)).collect()
}

fn element_value<F: Field>(fl: &F, c: &F::Elem) -> Value {
    let s = fl.render(c);
    match s.parse::<i64>() {
        Ok(v) => Value::from(v),
        Err(_) => Value::from(s),
    }
}

fn load_input(g: &Global) -> Result<Loaded, CliError> {
    let path = g
        .input
        .as_ref()
        .ok_or_else(|| CliError::usage("--input", "this command needs --input FILE"))?;
    load(&read_file(path)?, g.prime)
}

fn need_prime(loaded: Loaded, what: &str) -> Result<Input<PrimeField>, CliError> {
    match loaded {
        Loaded::Prime(i) => Ok(i),
        Loaded::Rational(_) => Err(CliError::at("--prime", Error::Unsupported(format!("{what} needs a prime field")))),
    }
}

fn plane_arg<F: Field>(inp: &Input<F>, text: &str, flag: &'static str) -> Result<KPlane<F>, CliError> {
    let fl = inp.x.field();
    let rows = parse_rows(text, fl).map_err(at(flag))?;
    KPlane::new(fl, inp.x.n(), rows).map_err(at(flag))
}

fn marked<F: Field>(inp: &Input<F>, idx: usize) -> Result<KPlane<F>, CliError> {
    inp.marked.get(idx).cloned().ok_or_else(|| {
        CliError::usage("--gamma", format!("the input has {} marked plane(s); index {idx} is out of range", inp.marked.len()))
    })
}

pub fn command_name(cmd: &Cmd) -> &'static str {
    match cmd {
        Cmd::Expand(ExpandCmd::Point { .. }) => "expand point",
        Cmd::Expand(ExpandCmd::Plane { .. }) => "expand plane",
        Cmd::Fano(FanoCmd::Fiber { .. }) => "fano fiber",
        Cmd::Fano(FanoCmd::Census { .. }) => "fano census",
        Cmd::Fano(FanoCmd::Estimate { .. }) => "fano estimate",
        Cmd::Curve(CurveCmd::Splitting { .. }) => "curve splitting",
        Cmd::Curve(CurveCmd::H0 { .. }) => "curve h0",
        Cmd::Curve(CurveCmd::Free { .. }) => "curve free",
        Cmd::Unirat(UniratCmd::Sample { .. }) => "unirat sample",
        Cmd::Unirat(UniratCmd::Quadric { .. }) => "unirat quadric",
        Cmd::Unirat(UniratCmd::Series { .. }) => "unirat series",
        Cmd::Unirat(UniratCmd::Bertini { .. }) => "unirat bertini",
        Cmd::Bounds(BoundsCmd::K0 { .. }) => "bounds k0",
        Cmd::Bounds(BoundsCmd::N0 { .. }) => "bounds n0",
        Cmd::Bounds(BoundsCmd::Report { .. }) => "bounds report",
        Cmd::Examples(ExamplesCmd::Fermat { .. }) => "examples fermat",
        Cmd::Examples(ExamplesCmd::Conical { .. }) => "examples conical",
        Cmd::Examples(ExamplesCmd::Planed { .. }) => "examples planed",
        Cmd::Examples(ExamplesCmd::RandomSmooth { .. }) => "examples random-smooth",
        Cmd::Tangency { .. } => "tangency",
    }
}

pub fn dispatch(cli: &Cli) -> Result<(&'static str, Value), CliError> {
    Ok((command_name(&cli.cmd), report(cli)?))
}

fn report(cli: &Cli) -> Out {
    let g = &cli.global;
    let jobs = Jobs(g.jobs);
    match &cli.cmd {
        Cmd::Bounds(b) => bounds_cmd(b),
        Cmd::Examples(e) => examples_cmd(g, e),
        Cmd::Expand(e) => {
            let loaded = load_input(g)?;
            match e {
                ExpandCmd::Point { point, random_x0 } => {
                    let choice_seed = random_x0.then_some(g.seed);
                    on_field!(&loaded, inp => expand_point(inp, point, choice_seed))
                }
                ExpandCmd::Plane { center } => on_field!(&loaded, inp => expand_plane(inp, center)),
            }
        }
        Cmd::Fano(f) => {
            let loaded = load_input(g)?;
            match f {
                FanoCmd::Fiber { center } => match &loaded {
                    Loaded::Prime(inp) => {
                        let (mut v, c) = fiber_cmd(inp, center)?;
                        v["points"] = fiber_scan(inp, &c, g)?;
                        Ok(v)
                    }
                    Loaded::Rational(inp) => Ok(fiber_cmd(inp, center)?.0),
                },
                FanoCmd::Census { k, through, list } => census_cmd(need_prime(loaded, "a census")?, *k, *through, *list, g),
                FanoCmd::Estimate { k, primes } => {
                    let ps: Vec<u64> = primes
                        .split(',')
                        .map(|s| s.trim().parse::<u64>())
                        .collect::<Result<_, _>>()
                        .map_err(|_| CliError::usage("--primes", format!("'{primes}' is not a list of two primes")))?;
                    if ps.len() != 2 {
                        return Err(CliError::usage("--primes", "give exactly two primes, e.g. 5,13"));
                    }
                    let opts = CensusOptions { budget: g.budget, jobs, ..CensusOptions::default() };
                    let est = on_field!(&loaded, inp => dimension_estimate(&inp.x, *k, (ps[0], ps[1]), &opts))
                        .map_err(at("--primes"))?;
                    to_json(&est)
                }
            }
        }
        Cmd::Curve(c) => {
            let loaded = load_input(g)?;
            on_field!(&loaded, inp => curve_cmd(inp, c))
        }
        Cmd::Unirat(u) => {
            let loaded = load_input(g)?;
            unirat_cmd(loaded, u, g)
        }
        Cmd::Tangency { lower, list_cap } => {
            let inp = need_prime(load_input(g)?, "the tangency scan")?;
            let fl = inp.x.field();
            let forms: Vec<Form<PrimeField>> = lower
                .split(';')
                .filter(|s| !s.trim().is_empty())
                .map(|s| parse_form(s, inp.x.n() + 1, fl, None))
                .collect::<Result<_, _>>()
                .map_err(at("--lower"))?;
            let rep = tangency_locus(inp.x.form(), &forms, g.budget, *list_cap, jobs)?;
            let mut v = to_json(&rep)?;
            v["r"] = Value::from(forms.len());
            v["h"] = Value::from(inp.x.form().render());
            Ok(v)
        }
    }
}

fn bounds_cmd(b: &BoundsCmd) -> Out {
    match b {
        BoundsCmd::K0 { d, allow_large } => {
            let v = bounds::k0_with(*d, *allow_large).map_err(at("--d"))?;
            Ok(json!({ "d": d, "k0": big_number(&v) }))
        }
        BoundsCmd::N0 { d, allow_large } => {
            let k = bounds::k0_with(*d, *allow_large).map_err(at("--d"))?;
            let n = bounds::n0_with(*d, *allow_large).map_err(at("--d"))?;
            Ok(json!({ "d": d, "k0": big_number(&k), "n0": big_number(&n) }))
        }
        BoundsCmd::Report { n, d, k, s, e, r } => to_json(&bounds::threshold_report(*n, *d, *k, *s, *e, *r)?),
    }
}

fn example_json<F: Field>(ex: &Example<F>) -> Out {
    let x = &ex.x;
    let fl = x.field();
    let marked: Vec<Value> = ex
        .marked
        .iter()
        .map(|p| {
            Value::Array(
                p.rows()
                    .iter()
                    .map(|r| Value::Array(r.iter().map(|c| element_value(fl, c)).collect()))
                    .collect(),
            )
        })
        .collect();
    Ok(json!({
        "n": x.n(),
        "d": x.d(),
        "field": to_json(&fl.spec())?,
        "form": x.form().render(),
        "marked_planes": marked,
        "seed": ex.seed,
        "attempt": ex.attempt,
        "smoothness": to_json(&ex.smoothness)?,
    }))
}

fn examples_cmd(g: &Global, e: &ExamplesCmd) -> Out {
    let opts = GenOptions { budget: g.budget, jobs: Jobs(g.jobs), ..GenOptions::default() };
    let kind = match *e {
        ExamplesCmd::Fermat { n, d } => ExampleKind::Fermat { n, d },
        ExamplesCmd::Conical { n, d } => ExampleKind::Conical { n, d, seed: g.seed },
        ExamplesCmd::Planed { n, d, m } => ExampleKind::Planed { n, d, m, seed: g.seed },
        ExamplesCmd::RandomSmooth { n, d } => {
            let p = g.prime.ok_or_else(|| CliError::usage("--prime", "random-smooth needs --prime"))?;
            let fl = PrimeField::new(p).map_err(at("--prime"))?;
            return example_json(&random_smooth(&fl, n, d, g.seed, &opts)?);
        }
    };
    match g.prime {
        Some(p) => {
            let fl = PrimeField::new(p).map_err(at("--prime"))?;
            example_json(&example_hypersurface(&fl, kind, &opts)?)
        }
        None => example_json(&example_hypersurface(&Rationals, kind, &opts)?),
    }
}

fn expand_point<F: Field>(inp: &Input<F>, point: &str, random: Option<u64>) -> Out {
    let fl = inp.x.field();
    let v = parse_vector(point, fl).map_err(at("--point"))?;
    let p = KPlane::point(fl, v).map_err(at("--point"))?;
    let choice = match random {
        Some(s) => X0Choice::Random(s),
        None => X0Choice::Adapted,
    };
    let e = expand_at_point(&inp.x, &p, choice).map_err(at("--point"))?;
    let pieces: Vec<String> = (1..=inp.x.d() as usize).map(|i| e.piece(i).render_with("y")).collect();
    Ok(json!({
        "point": p.render(),
        "coordinate_change": render_matrix(&e.coordinate_change),
        "pieces": pieces,
        "identity_holds": e.reassemble() == e.transformed,
        "x0_seed": e.seed,
    }))
}

fn expand_plane<F: Field>(inp: &Input<F>, center: &str) -> Out {
    let c = plane_arg(inp, center, "--center")?;
    let e = expand_at_plane(&inp.x, &c).map_err(at("--center"))?;
    let coeffs: Vec<(String, String)> = e.ordered().into_iter().map(|(i, f)| (i.render(), f.render_with("y"))).collect();
    Ok(json!({
        "center": c.render(),
        "frame": render_matrix(&e.frame),
        "coefficients": coeffs,
        "identity_holds": e.reassemble() == e.transformed,
    }))
}

fn fiber_cmd<F: Field>(inp: &Input<F>, center: &str) -> Result<(Value, KPlane<F>), CliError> {
    let c = plane_arg(inp, center, "--center")?;
    let fib = fano_fiber(&inp.x, &c).map_err(at("--center"))?;
    let eqs: Vec<(String, String)> = fib.equations.iter().map(|(i, f)| (i.render(), f.render_with("a"))).collect();
    let v = json!({
        "center": c.render(),
        "equations": eqs,
        "fiber_dim": fib.fiber_dim(),
        "expected_dim": fib.expected_dim,
    });
    Ok((v, c))
}

/// Fiber points with their planes and tangent dimensions.
fn fiber_scan(inp: &Input<PrimeField>, c: &KPlane<PrimeField>, g: &Global) -> Out {
    let fib = fano_fiber(&inp.x, c)?;
    let pts = fiber_points(&fib, g.budget, Jobs(g.jobs))?;
    let opts = DiagOptions { seed: g.seed, ..DiagOptions::default() };
    let mut out = Vec::new();
    for a in &pts {
        let plane = fib.expansion.plane_of(a)?;
        out.push(json!({
            "a": a,
            "plane": plane.render(),
            "tangent_dim": tangent_dim(&inp.x, &fib, a, opts)?,
        }));
    }
    Ok(Value::Array(out))
}

fn census_cmd(inp: Input<PrimeField>, k: usize, through: Option<usize>, list: bool, g: &Global) -> Out {
    let center = match through {
        Some(i) => Some(
            inp.marked
                .get(i)
                .cloned()
                .ok_or_else(|| CliError::usage("--through", format!("the input has {} marked plane(s)", inp.marked.len())))?,
        ),
        None => None,
    };
    let opts = CensusOptions { budget: g.budget, jobs: Jobs(g.jobs), ..CensusOptions::default() };
    let c = enumerate_kplanes(&inp.x, k, center.as_ref(), &opts).map_err(at("--k"))?;
    let mut v = json!({
        "n": c.n,
        "d": c.d,
        "k": c.k,
        "prime": c.p,
        "count": c.count,
        "method": to_json(&c.method)?,
    });
    if list {
        v["planes"] = match &c.planes {
            Some(ps) => Value::from(ps.iter().map(|p| p.render()).collect::<Vec<_>>()),
            None => Value::Null,
        };
    }
    Ok(v)
}

fn curve_of<F: Field>(inp: &Input<F>, arg: &CurveArg) -> Result<RationalCurve<F>, CliError> {
    match (&arg.line, &arg.curve) {
        (Some(l), None) => {
            let line = plane_arg(inp, l, "--line")?;
            RationalCurve::from_line(&inp.x, &line).map_err(at("--line"))
        }
        (None, Some(c)) => {
            let fl = inp.x.field();
            let comps = c
                .split(';')
                .map(|s| parse_form(s, 2, fl, None))
                .collect::<Result<Vec<_>, _>>()
                .map_err(at("--curve"))?;
            RationalCurve::new(&inp.x, comps).map_err(at("--curve"))
        }
        _ => Err(CliError::usage("--line", "give exactly one of --line or --curve")),
    }
}

fn curve_cmd<F: Field>(inp: &Input<F>, c: &CurveCmd) -> Out {
    let x = &inp.x;
    let fl = x.field();
    match c {
        CurveCmd::Splitting { line } => {
            let l = plane_arg(inp, line, "--line")?;
            let s = curves::normal_bundle_splitting(x, &l).map_err(at("--line"))?;
            let p = KPlane::point(fl, l.rows().remove(0))?;
            let delta = delta_at(x, &l, &p)?;
            let table: serde_json::Map<String, Value> =
                s.h0_table.iter().map(|(m, h)| (m.to_string(), Value::from(*h))).collect();
            Ok(json!({
                "line": l.render(),
                "a": s.a,
                "h0_table": table,
                "free": s.is_free(),
                "delta": delta,
                "delta_bridge_check": (x.n() as i64 - 1 - delta as i64) == s.h0_minus_one(),
            }))
        }
        CurveCmd::H0 { curve, m, at: q } => {
            let cv = curve_of(inp, curve)?;
            let vanish = match q {
                Some(t) => {
                    let v = parse_vector(t, fl).map_err(at("--at"))?;
                    if v.len() != 2 {
                        return Err(CliError::usage("--at", "a parameter point is \"s,t\""));
                    }
                    Some((v[0].clone(), v[1].clone()))
                }
                None => None,
            };
            let h = curves::h0_twisted_tangent(x, &cv, *m, vanish).map_err(at("--m"))?;
            Ok(json!({ "e": cv.degree(), "m": m, "vanishing": q, "h0": h, "bound_en": cv.degree() as usize * x.n() }))
        }
        CurveCmd::Free { curve } => {
            let cv = curve_of(inp, curve)?;
            Ok(json!({
                "e": cv.degree(),
                "free": curves::is_free(x, &cv)?,
                "expected_dim": curves::expected_dim_curves(x.n(), x.d(), cv.degree()),
            }))
        }
    }
}

fn unirat_cmd(loaded: Loaded, u: &UniratCmd, g: &Global) -> Out {
    let jobs = Jobs(g.jobs);
    match u {
        UniratCmd::Sample { gamma, samples, reject_singular } => {
            let inp = need_prime(loaded, "the tower sampler")?;
            let gm = marked(&inp, *gamma)?;
            let policy = if *reject_singular {
                SingularResidualPolicy::Reject
            } else {
                SingularResidualPolicy::AllowFromSmoothPoint
            };
            let opts = SampleOptions { policy, budget: g.budget, jobs, ..SampleOptions::default() };
            let rep = unirational_sample(&inp.x, &gm, *samples, g.seed, &opts)?;
            let mut v = to_json(&rep)?;
            v["gamma"] = Value::from(gm.render());
            Ok(v)
        }
        UniratCmd::Quadric { point } => on_field!(&loaded, inp => {
            let fl = inp.x.field();
            let pt = parse_vector(point, fl).map_err(at("--point"))?;
            let par = quadric_param(inp.x.form(), &pt).map_err(at("--point"))?;
            let forms: Vec<String> = par.forms.iter().map(|f| f.render_with("v")).collect();
            Ok(json!({
                "point": render_vec(fl, &par.point),
                "unused_variable": par.lead,
                "forms": forms,
                "identity_holds": par.pullback(inp.x.form())?.is_zero(),
            }))
        }),
        UniratCmd::Series { gamma, second_prime } => match loaded {
            Loaded::Prime(inp) => {
                let gm = marked(&inp, *gamma)?;
                let s = boundary_series(&inp.x, &gm).map_err(at("--gamma"))?;
                let mut v = series_json(&s.rows, &s.generators().generators);
                v["basepoints"] = to_json(&basepoint_free_check(&s, *second_prime, jobs).map_err(at("--second-prime"))?)?;
                v["gamma"] = Value::from(gm.render());
                Ok(v)
            }
            Loaded::Rational(inp) => {
                let gm = marked(&inp, *gamma)?;
                let s = boundary_series(&inp.x, &gm).map_err(at("--gamma"))?;
                let mut v = series_json(&s.rows, &s.generators().generators);
                v["gamma"] = Value::from(gm.render());
                Ok(v)
            }
        },
        UniratCmd::Bertini { gamma, base_dim } => {
            let inp = need_prime(loaded, "the stratification")?;
            let gm = marked(&inp, *gamma)?;
            let s = boundary_series(&inp.x, &gm).map_err(at("--gamma"))?;
            let base = match base_dim {
                Some(b) => BaseDim::Assumed(*b),
                None => BaseDim::Measured,
            };
            to_json(&bertini_strata(&s.generators(), base, g.budget, jobs)?)
        }
    }
}

fn series_json<F: Field>(rows: &[(Multiset, Form<F>)], gens: &[Form<F>]) -> Value {
    let rows: Vec<(String, String)> = rows.iter().map(|(i, f)| (i.render(), f.render_with("a"))).collect();
    let gens: Vec<String> = gens.iter().map(|f| f.render()).collect();
    json!({ "rows": rows, "generators": gens })
}
