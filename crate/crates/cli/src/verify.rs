//! Independent re-checking of `run` output.
//!
//! Every claim in a result is recomputed from the embedded job: memberships by
//! exact division, valuations exactly, bounds against tolerances. The job is
//! then rerun and the output compared field by field, so any edit to a result
//! is reported even when the edited certificate happens to remain valid.

use crat_core::exec::Execution;
use crat_core::hyperspace::padic_gap_sweep;
use crat_core::interp::QuadPoly;
use crat_core::numeric::{padic_order, rational_pow, CRational, QSqrt2};
use crat_core::ring::CPoly;
use crat_core::rings::polyring::in_closed_disk;
use crat_core::{Element, PrincipalIdeal, RingContext, RingKind};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::codec;
use crate::error::{CliError, CliResult};
use crate::job::{self, run, Command, DensifyJob, JobSpec, Settings, Stop};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub failures: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({ "verified": self.passed(), "failures": self.failures })
    }
}

/// Collects failed checks; parse errors inside the result count as failures.
struct Checks(Vec<String>);

impl Checks {
    fn require(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.0.push(msg());
        }
    }
}

fn field<'a>(v: &'a Value, key: &str) -> CliResult<&'a Value> {
    v.get(key)
        .ok_or_else(|| CliError::schema(format!("result: missing field \"{key}\"")))
}

fn array<'a>(v: &'a Value, key: &str) -> CliResult<&'a Vec<Value>> {
    field(v, key)?
        .as_array()
        .ok_or_else(|| CliError::schema(format!("result.{key}: expected an array")))
}

fn count(v: &Value, key: &str) -> CliResult<u64> {
    field(v, key)?
        .as_u64()
        .ok_or_else(|| CliError::schema(format!("result.{key}: expected a count")))
}

/// `V(x) <= bound`, decided exactly.
fn within(ctx: &RingContext, x: &Element, bound: &BigRational) -> CliResult<bool> {
    Ok(ctx.valuation(x)? <= QSqrt2::from_rational(bound.clone()))
}

fn meets(bound: &BigRational, eps: &BigRational) -> bool {
    if eps.is_zero() {
        bound.is_zero()
    } else {
        bound < eps
    }
}

/// `Σ |c_k|₁ R^k`.
fn weighted_l1(f: &CPoly, radius: &BigRational) -> BigRational {
    let mut total = BigRational::zero();
    let mut rk = BigRational::one();
    for c in f.coeffs() {
        total += (c.re.abs() + c.im.abs()) * &rk;
        rk *= radius;
    }
    total
}

/// Taylor coefficients of `f` at `w` by repeated division by `z − w`.
fn taylor(f: &CPoly, w: &CRational, n: usize) -> Vec<CRational> {
    let lin = CPoly::linear(w.clone());
    let mut q = f.clone();
    (0..n)
        .map(|_| {
            let (next, r) = q.div_rem(&lin);
            q = next;
            r.coeff(0)
        })
        .collect()
}

fn first_difference(a: &Value, b: &Value, path: String) -> Option<String> {
    match (a, b) {
        (Value::Object(x), Value::Object(y)) => {
            for k in x.keys().chain(y.keys()) {
                match (x.get(k), y.get(k)) {
                    (Some(u), Some(v)) => {
                        if let Some(p) = first_difference(u, v, format!("{path}.{k}")) {
                            return Some(p);
                        }
                    }
                    _ => return Some(format!("{path}.{k}")),
                }
            }
            None
        }
        (Value::Array(x), Value::Array(y)) if x.len() == y.len() => x
            .iter()
            .zip(y)
            .enumerate()
            .find_map(|(k, (u, v))| first_difference(u, v, format!("{path}[{k}]"))),
        _ if a == b => None,
        _ => Some(path),
    }
}

/// Re-checks a result produced by [`run`].
pub fn verify(result: &Value) -> VerifyReport {
    let mut checks = Checks(Vec::new());
    let spec = match field(result, "job").and_then(|j| JobSpec::parse(j, None)) {
        Ok(s) => s,
        Err(e) => {
            return VerifyReport {
                failures: vec![format!("job: {e}")],
            }
        }
    };
    let settings = Settings::unbounded();
    checks.require(
        result.get("command") == Some(&json!(spec.command.name())),
        || "command does not match the job".into(),
    );
    checks.require(result.get("ring") == Some(&codec::ring(&spec.ring)), || {
        "ring does not match the job".into()
    });
    let ctx = &spec.ring;
    let outcome = match spec.command {
        Command::Crt => check_crt(ctx, &spec.payload, result, &mut checks),
        Command::InterpLagrange => check_lagrange(&spec.payload, result, &mut checks),
        Command::InterpHermite => check_hermite(&spec.payload, result, &mut checks),
        Command::HyperGap => check_gap(ctx, &spec.payload, result, &mut checks),
        Command::HyperNet => check_net(ctx, &spec.payload, result, &mut checks),
        Command::DensifyDemo => check_densify(ctx, &spec.payload, result, &mut checks),
        Command::DivergenceDemo => check_divergence(ctx, &spec.payload, result, &mut checks),
        Command::TcmCheck => check_tcm(ctx, &spec.payload, result, &mut checks),
    };
    if let Err(e) = outcome {
        checks.0.push(format!("recheck: {e}"));
    }
    match run(&spec, settings) {
        Ok(fresh) => {
            if let Some(path) = first_difference(result, &fresh, "result".into()) {
                checks.0.push(format!("rerun differs at {path}"));
            }
        }
        Err(e) => checks.0.push(format!("rerun failed: {e}")),
    }
    VerifyReport { failures: checks.0 }
}

fn check_crt(
    ctx: &RingContext,
    payload: &Value,
    res: &Value,
    checks: &mut Checks,
) -> CliResult<()> {
    let (entries, eps, exceptions) = job::crt_entries(ctx, payload)?;
    let solution = codec::parse_element(ctx, "solution", field(res, "solution")?)?;
    ctx.check(&solution)?;
    let stated = codec::parse_rational("eps", field(res, "eps")?)?;
    checks.require(stated == eps, || {
        format!("eps {stated} differs from the job's {eps}")
    });
    let rows = array(res, "residuals")?;
    checks.require(rows.len() == entries.len(), || {
        format!("{} residuals for {} ideals", rows.len(), entries.len())
    });
    for (k, (row, (ideal, target))) in rows.iter().zip(&entries).enumerate() {
        let i = codec::parse_ideal(ctx, "ideal", field(row, "ideal")?)?;
        let t = codec::parse_element(ctx, "target", field(row, "target")?)?;
        let w = codec::parse_element(ctx, "witness", field(row, "witness")?)?;
        let bound = codec::parse_rational("bound", field(row, "bound")?)?;
        checks.require(&i == ideal && &t == target, || {
            format!("residual {k}: ideal or target differs from the job")
        });
        checks.require(ideal.contains(&w)?, || {
            format!("residual {k}: witness not in {ideal}")
        });
        let err = solution.sub(target)?.sub(&w)?;
        checks.require(within(ctx, &err, &bound)?, || {
            format!("residual {k}: V(solution - target - witness) exceeds {bound}")
        });
        checks.require(meets(&bound, &eps), || {
            format!("residual {k}: bound {bound} does not meet {eps}")
        });
    }
    if exceptions {
        let stated: Vec<u64> = array(res, "exceptional")?
            .iter()
            .map(|v| {
                v.as_u64()
                    .ok_or_else(|| CliError::schema("exceptional: expected indices"))
            })
            .collect::<CliResult<_>>()?;
        let mut expected = Vec::new();
        for (k, (ideal, _)) in entries.iter().enumerate() {
            let dense = match &ctx.kind {
                RingKind::Padic { p } => !ideal.int_generator()?.is_multiple_of(p),
                RingKind::Poly { radius } => {
                    !ideal.is_zero()
                        && ideal
                            .root_powers()?
                            .iter()
                            .all(|f| f.mult == 0 || !in_closed_disk(&f.root, radius))
                }
                RingKind::Quad => !ideal.is_zero(),
            };
            if eps.is_zero() || !dense {
                expected.push(k as u64);
            }
        }
        checks.require(stated == expected, || {
            format!("exceptional set {stated:?}, expected {expected:?}")
        });
        for row in array(res, "density")? {
            let k = count(row, "index")? as usize;
            let a = codec::parse_element(ctx, "density.a", field(row, "a")?)?;
            let Some((ideal, _)) = entries.get(k) else {
                checks.0.push(format!("density index {k} out of range"));
                continue;
            };
            checks.require(ideal.contains(&a)?, || {
                format!("density {k}: a is not in {ideal}")
            });
            checks.require(ctx.valuation(&a.one_minus())? < QSqrt2::one(), || {
                format!("density {k}: V(1 - a) >= 1")
            });
        }
    }
    Ok(())
}

fn check_lagrange(payload: &Value, res: &Value, checks: &mut Checks) -> CliResult<()> {
    let (points, values, eps) = job::lagrange_inputs(payload)?;
    let coeffs = array(res, "poly")?
        .iter()
        .map(|c| codec::parse_quad("poly", c))
        .collect::<CliResult<Vec<_>>>()?;
    let poly = QuadPoly::new(coeffs);
    let weights = array(res, "weights")?
        .iter()
        .map(|c| codec::parse_quad("weights", c))
        .collect::<CliResult<Vec<_>>>()?;
    checks.require(weights.len() == points.len(), || {
        "one weight per point expected".into()
    });
    let mut rebuilt = QuadPoly::zero();
    for (i, w) in weights.iter().enumerate() {
        let ell = points
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .fold(QuadPoly::one(), |acc, (_, xj)| {
                &acc * &QuadPoly::linear(xj.clone())
            });
        rebuilt = &rebuilt + &ell.scale(w);
    }
    checks.require(rebuilt == poly, || {
        "poly is not the weighted Lagrange sum".into()
    });
    let stated = codec::parse_rational("eps", field(res, "eps")?)?;
    checks.require(stated == eps, || {
        format!("eps {stated} differs from the job's {eps}")
    });
    let rows = array(res, "residuals")?;
    checks.require(rows.len() == points.len(), || {
        "one residual per point expected".into()
    });
    for (k, (row, (x, y))) in rows.iter().zip(points.iter().zip(&values)).enumerate() {
        let px = codec::parse_quad("point", field(row, "point")?)?;
        let py = codec::parse_quad("value", field(row, "value")?)?;
        checks.require(&px == x && &py == y, || {
            format!("residual {k}: point or value differs")
        });
        let residual = codec::parse_surd("residual", field(row, "residual")?)?;
        let bound = codec::parse_rational("bound", field(row, "bound")?)?;
        let direct = (&poly.eval(x) - y).abs_value();
        checks.require(direct == residual, || {
            format!("residual {k}: recomputed {direct}, stated {residual}")
        });
        checks.require(direct <= QSqrt2::from_rational(bound.clone()), || {
            format!("residual {k}: exceeds its bound {bound}")
        });
        checks.require(bound < eps, || {
            format!("residual {k}: bound {bound} not below {eps}")
        });
    }
    Ok(())
}

fn check_hermite(payload: &Value, res: &Value, checks: &mut Checks) -> CliResult<()> {
    let jets = job::hermite_inputs(payload)?;
    let f = codec::parse_cpoly("poly", field(res, "poly")?)?;
    let total: usize = jets.iter().map(|j| j.values.len()).sum();
    checks.require(f.degree().unwrap_or(0) < total, || {
        format!("degree is not below {total}")
    });
    for (n, jet) in jets.iter().enumerate() {
        let got = taylor(&f, &jet.point, jet.values.len());
        checks.require(got == jet.values, || {
            format!("jet {n} at {} is not matched", jet.point)
        });
    }
    Ok(())
}

fn gap_oracle(ctx: &RingContext, a: &PrincipalIdeal, b: &PrincipalIdeal) -> CliResult<BigRational> {
    let p = ctx.prime()?;
    let level = [a, b]
        .iter()
        .filter_map(|i| padic_order(i.int_generator().ok()?, p))
        .max()
        .unwrap_or(0);
    let level = u32::try_from(level + 1).map_err(|_| CliError::schema("generator too large"))?;
    Ok(padic_gap_sweep(ctx, a, b, level, Execution::Sequential)?)
}

fn check_gap(
    ctx: &RingContext,
    payload: &Value,
    res: &Value,
    checks: &mut Checks,
) -> CliResult<()> {
    let (pairs, eps) = job::gap_inputs(ctx, payload)?;
    let rows = array(res, "rows")?;
    checks.require(rows.len() == pairs.len(), || {
        "one row per pair expected".into()
    });
    for (n, (row, (a, b))) in rows.iter().zip(&pairs).enumerate() {
        checks.require(count(row, "n")? == n as u64, || {
            format!("row {n}: wrong index")
        });
        let ra = codec::parse_ideal(ctx, "a", field(row, "a")?)?;
        let rb = codec::parse_ideal(ctx, "b", field(row, "b")?)?;
        checks.require(&ra == a && &rb == b, || {
            format!("row {n}: ideals differ from the job")
        });
        let gap = codec::parse_rational("gap", field(row, "gap")?)?;
        let want = gap_oracle(ctx, a, b)?;
        checks.require(gap == want, || {
            format!("row {n}: gap {gap}, recomputed {want}")
        });
        if let Some(eps) = &eps {
            let inside = if want < *eps { "yes" } else { "no" };
            checks.require(row.get("entourage") == Some(&json!(inside)), || {
                format!("row {n}: entourage decision should be {inside}")
            });
        }
    }
    Ok(())
}

fn check_net(
    ctx: &RingContext,
    payload: &Value,
    res: &Value,
    checks: &mut Checks,
) -> CliResult<()> {
    let net = job::net_inputs(ctx, payload)?;
    let limit = codec::parse_ideal(ctx, "limit", field(res, "limit")?)?;
    if let Some(l) = &net.limit {
        checks.require(l == &limit, || "limit differs from the job".into());
    }
    for (n, w) in net.chain.windows(2).enumerate() {
        checks.require(w[1].is_subset_of(&w[0])?, || {
            format!("chain is not descending at {}", n + 1)
        });
    }
    let rows = array(res, "rows")?;
    checks.require(rows.len() == net.chain.len(), || {
        "one row per chain member expected".into()
    });
    let mut gaps = Vec::new();
    let mut consecutive = Vec::new();
    for (n, row) in rows.iter().enumerate().take(net.chain.len()) {
        let gap = codec::parse_rational("gap", field(row, "gap")?)?;
        let want = gap_oracle(ctx, &net.chain[n], &limit)?;
        checks.require(gap == want, || {
            format!("row {n}: gap {gap}, recomputed {want}")
        });
        gaps.push(want);
        if let Some(next) = net.chain.get(n + 1) {
            let c = codec::parse_rational("consecutive", field(row, "consecutive")?)?;
            let want = gap_oracle(ctx, &net.chain[n], next)?;
            checks.require(c == want, || {
                format!("row {n}: consecutive gap {c}, recomputed {want}")
            });
            consecutive.push(want);
        }
    }
    let verdict = field(res, "verdict")?;
    let tail = &gaps[gaps.len() / 2..];
    match verdict.get("kind").and_then(Value::as_str) {
        Some("converges") => checks.require(gaps.windows(2).all(|w| w[1] <= w[0]), || {
            "convergent chain has an increasing gap".into()
        }),
        Some(kind @ ("stalls" | "cauchy_not_convergent")) => {
            let floor = codec::parse_rational("floor", field(verdict, "floor")?)?;
            checks.require(tail.iter().min() == Some(&floor), || {
                format!("floor {floor} is not the least tail gap")
            });
            if kind == "cauchy_not_convergent" {
                let ctail = &consecutive[(gaps.len() / 2).min(consecutive.len())..];
                checks.require(
                    !ctail.is_empty() && ctail.iter().all(|c| c < &floor),
                    || "consecutive gaps do not fall below the floor".into(),
                );
            }
        }
        _ => checks.0.push("verdict: unknown kind".into()),
    }
    Ok(())
}

fn check_densify(
    ctx: &RingContext,
    payload: &Value,
    res: &Value,
    checks: &mut Checks,
) -> CliResult<()> {
    match job::densify_inputs(ctx, payload)? {
        DensifyJob::Scheme { ideal, a, r, stop } => {
            checks.require(ideal.contains(&a)?, || format!("a is not in {ideal}"));
            let delta = ctx.norm(&a.one_minus())?;
            let stated = codec::parse_rational("delta", field(res, "delta")?)?;
            checks.require(stated == delta, || {
                format!("delta {stated}, recomputed {delta}")
            });
            checks.require(delta < BigRational::one(), || "a is not contractive".into());
            let vr = ctx.norm(&r)?;
            let steps = array(res, "steps")?;
            let mut rn = ctx.zero();
            let mut last_error = None;
            for (n, row) in steps.iter().enumerate() {
                if n > 0 {
                    rn = rn.add(&r.sub(&rn)?.mul(&a)?)?;
                }
                let it = codec::parse_element(ctx, "iterate", field(row, "iterate")?)?;
                let error = codec::parse_rational("error", field(row, "error")?)?;
                let envelope = codec::parse_rational("envelope", field(row, "envelope")?)?;
                let want = ctx.norm(&r.sub(&rn)?)?;
                let env = rational_pow(&delta, n as u32) * &vr;
                checks.require(it == rn, || {
                    format!("step {n}: iterate differs from the recurrence")
                });
                checks.require(ideal.contains(&rn)?, || {
                    format!("step {n}: iterate not in {ideal}")
                });
                checks.require(error == want, || {
                    format!("step {n}: error {error}, recomputed {want}")
                });
                checks.require(envelope == env, || {
                    format!("step {n}: envelope {envelope}, recomputed {env}")
                });
                checks.require(want <= env, || {
                    format!("step {n}: error above the envelope")
                });
                last_error = Some(want);
            }
            match stop {
                Stop::Count(c) => checks.require(steps.len() == c as usize + 1, || {
                    format!("{} steps recorded for count {c}", steps.len())
                }),
                Stop::Eps(eps) => {
                    let value = codec::parse_element(ctx, "value", field(res, "value")?)?;
                    let bound = codec::parse_rational("bound", field(res, "bound")?)?;
                    checks.require(value == rn, || "value is not the last iterate".into());
                    checks.require(Some(&bound) == last_error.as_ref() && bound < eps, || {
                        format!("bound {bound} is not the final error below {eps}")
                    });
                    let mut n0 = 0u64;
                    let mut env = vr.clone();
                    while !r.is_zero() && env >= eps {
                        env *= &delta;
                        n0 += 1;
                    }
                    checks.require(count(res, "n0")? == n0, || format!("n0 should be {n0}"));
                }
            }
        }
        DensifyJob::Poles { poles, mult, eps } => {
            let radius = ctx.radius()?;
            let rows = array(res, "rows")?;
            checks.require(rows.len() == poles.len(), || {
                "one row per pole expected".into()
            });
            for (k, (row, w)) in rows.iter().zip(&poles).enumerate() {
                let pole = codec::parse_complex("pole", field(row, "pole")?)?;
                checks.require(&pole == w && count(row, "mult")? == u64::from(mult), || {
                    format!("row {k}: pole differs from the job")
                });
                let a = codec::parse_cpoly("a", field(row, "a")?)?;
                let bound = codec::parse_rational("bound", field(row, "bound")?)?;
                let vanishing = taylor(&a, w, mult as usize);
                checks.require(vanishing.iter().all(Zero::is_zero), || {
                    format!("row {k}: a is not divisible by (z - {w})^{mult}")
                });
                let v = weighted_l1(&(&CPoly::one() - &a), radius);
                checks.require(v <= bound && bound < eps, || {
                    format!("row {k}: V(1 - a) = {v}, bound {bound}, eps {eps}")
                });
            }
        }
    }
    Ok(())
}

fn check_divergence(
    ctx: &RingContext,
    payload: &Value,
    res: &Value,
    checks: &mut Checks,
) -> CliResult<()> {
    let (center, n_max) = job::divergence_inputs(payload)?;
    let radius = ctx.radius()?;
    let stated = codec::parse_complex("center", field(res, "center")?)?;
    checks.require(stated == center, || "center differs from the job".into());
    let rho = codec::parse_rational("rho", field(res, "rho")?)?;
    let slack = radius - &rho;
    checks.require(
        rho.is_positive() && !slack.is_negative() && &slack * &slack >= center.modulus_sq(),
        || format!("rho {rho} is not a lower bound on R - |z0|"),
    );
    let rows = array(res, "rows")?;
    checks.require(rows.len() == n_max as usize + 1, || {
        "one row per power expected".into()
    });
    for (n, row) in rows.iter().enumerate() {
        let lb = codec::parse_rational("lower_bound", field(field(row, "gap")?, "lower_bound")?)?;
        // the n-th Taylor coefficient of (z - z0)^n at z0 is 1
        let want = rational_pow(&rho, n as u32);
        checks.require(count(row, "n")? == n as u64 && lb == want, || {
            format!("row {n}: lower bound {lb}, recomputed {want}")
        });
    }
    Ok(())
}

fn check_tcm(
    ctx: &RingContext,
    payload: &Value,
    res: &Value,
    checks: &mut Checks,
) -> CliResult<()> {
    let (a, b, eps) = job::tcm_inputs(ctx, payload)?;
    let tcm = field(res, "tcm")?
        .as_bool()
        .ok_or_else(|| CliError::schema("tcm: expected a boolean"))?;
    let want = job::decide_tcm(ctx, &a, &b)?;
    checks.require(tcm == want, || format!("tcm should be {want}"));
    if let RingKind::Padic { .. } = ctx.kind {
        let g = codec::parse_int("gcd", field(res, "gcd")?)?;
        let want = a.int_generator()?.gcd(b.int_generator()?);
        checks.require(g == want, || format!("gcd {g}, recomputed {want}"));
    }
    match (res.get("witness"), &eps) {
        (Some(w), Some(eps)) => {
            let i = codec::parse_element(ctx, "witness.i", field(w, "i")?)?;
            let j = codec::parse_element(ctx, "witness.j", field(w, "j")?)?;
            let bound = codec::parse_rational("witness.bound", field(w, "bound")?)?;
            checks.require(a.contains(&i)? && b.contains(&j)?, || {
                "witness memberships fail".into()
            });
            checks.require(within(ctx, &i.add(&j)?.one_minus(), &bound)?, || {
                format!("V(1 - i - j) exceeds {bound}")
            });
            checks.require(meets(&bound, eps), || {
                format!("witness bound {bound} does not meet {eps}")
            });
        }
        (None, Some(_)) => checks.require(!want, || "witness missing".into()),
        (Some(_), None) => checks.0.push("witness without a tolerance".into()),
        (None, None) => {}
    }
    Ok(())
}
