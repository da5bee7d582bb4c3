//! Job specifications and their execution.

use crat_core::crat::{
    crat_infinite, densify, densify_trace, finite_crat, reduce_certificate, tcm_witness,
    Certificate, ResidueSystem,
};
use crat_core::hyperspace::{
    entourage, ideal_power_divergence_demo, monotone_limit_check, padic_gap, Decision, NetSpec,
    NetVerdict, DEFAULT_DEGREE_BUDGET,
};
use crat_core::interp::{hermite_jets, ideal_density_within, lagrange_dense, Jet};
use crat_core::numeric::QuadInt;
use crat_core::rings::polyring::in_closed_disk;
use crat_core::{Element, Error, PrincipalIdeal, RingContext, RingKind};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::codec::{self, Fields};
use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Crt,
    InterpLagrange,
    InterpHermite,
    HyperGap,
    HyperNet,
    DensifyDemo,
    DivergenceDemo,
    TcmCheck,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Crt,
        Command::InterpLagrange,
        Command::InterpHermite,
        Command::HyperGap,
        Command::HyperNet,
        Command::DensifyDemo,
        Command::DivergenceDemo,
        Command::TcmCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Crt => "crt",
            Command::InterpLagrange => "interp-lagrange",
            Command::InterpHermite => "interp-hermite",
            Command::HyperGap => "hyper-gap",
            Command::HyperNet => "hyper-net",
            Command::DensifyDemo => "densify-demo",
            Command::DivergenceDemo => "divergence-demo",
            Command::TcmCheck => "tcm-check",
        }
    }

    pub fn from_name(s: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == s)
    }
}

/// Knobs that come from the environment rather than the job file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Settings {
    pub degree_budget: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            degree_budget: DEFAULT_DEGREE_BUDGET,
        }
    }
}

impl Settings {
    /// Reads `CRAT_DEGREE_BUDGET`.
    pub fn from_env() -> CliResult<Self> {
        match std::env::var("CRAT_DEGREE_BUDGET") {
            Ok(s) => s
                .trim()
                .parse()
                .map(|degree_budget| Settings { degree_budget })
                .map_err(|_| CliError::schema(format!("CRAT_DEGREE_BUDGET: not a count: {s:?}"))),
            Err(_) => Ok(Settings::default()),
        }
    }

    /// No cap on the degree searches.
    pub fn unbounded() -> Self {
        Settings {
            degree_budget: usize::MAX,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct JobSpec {
    pub command: Command,
    pub ring: RingContext,
    pub payload: Value,
}

impl JobSpec {
    /// Parses `{"command", "ring", "payload"}`. When `expect` is given the
    /// command field may be omitted, and must agree with it otherwise.
    pub fn parse(v: &Value, expect: Option<Command>) -> CliResult<Self> {
        let mut f = Fields::new("job", v)?;
        let named = match f.opt("command") {
            Some(c) => {
                let s = c
                    .as_str()
                    .ok_or_else(|| CliError::schema("job.command: expected a string"))?;
                Some(
                    Command::from_name(s)
                        .ok_or_else(|| CliError::schema(format!("unknown command \"{s}\"")))?,
                )
            }
            None => None,
        };
        let command = match (named, expect) {
            (Some(a), Some(b)) if a != b => {
                return Err(CliError::schema(format!(
                    "job is a \"{}\" job, not \"{}\"",
                    a.name(),
                    b.name()
                )))
            }
            (Some(c), _) | (None, Some(c)) => c,
            (None, None) => return Err(CliError::schema("job: missing field \"command\"")),
        };
        let ring = codec::parse_ring(f.req("ring")?)?;
        let payload = f.req("payload")?.clone();
        f.finish()?;
        if !payload.is_object() {
            return Err(CliError::schema("job.payload: expected an object"));
        }
        Ok(JobSpec {
            command,
            ring,
            payload,
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command.name(),
            "ring": codec::ring(&self.ring),
            "payload": self.payload,
        })
    }
}

/// Executes a job. The result echoes the job next to the command's
/// certificate fields, so it can be re-checked on its own. Settings only
/// decide whether a certificate is found, never its content.
pub fn run(spec: &JobSpec, settings: Settings) -> CliResult<Value> {
    let ctx = &spec.ring;
    let body = match spec.command {
        Command::Crt => run_crt(ctx, &spec.payload)?,
        Command::InterpLagrange => run_lagrange(ctx, &spec.payload)?,
        Command::InterpHermite => run_hermite(ctx, &spec.payload)?,
        Command::HyperGap => run_gap(ctx, &spec.payload)?,
        Command::HyperNet => run_net(ctx, &spec.payload)?,
        Command::DensifyDemo => run_densify(ctx, &spec.payload, settings)?,
        Command::DivergenceDemo => run_divergence(ctx, &spec.payload)?,
        Command::TcmCheck => run_tcm(ctx, &spec.payload)?,
    };
    let mut out = body;
    out.insert("command".into(), json!(spec.command.name()));
    out.insert("ring".into(), codec::ring(ctx));
    out.insert("job".into(), spec.to_json());
    Ok(Value::Object(out))
}

fn require(ctx: &RingContext, ok: bool, command: Command, need: &str) -> CliResult<()> {
    if ok {
        Ok(())
    } else {
        Err(CliError::schema(format!(
            "{} jobs need a {need} ring, got {ctx}",
            command.name()
        )))
    }
}

fn is_poly(ctx: &RingContext) -> bool {
    matches!(ctx.kind, RingKind::Poly { .. })
}

fn parse_list<T>(
    items: &[Value],
    what: &str,
    f: impl Fn(&str, &Value) -> CliResult<T>,
) -> CliResult<Vec<T>> {
    items
        .iter()
        .enumerate()
        .map(|(k, v)| f(&format!("{what}[{k}]"), v))
        .collect()
}

fn eps_field(f: &mut Fields<'_>, default: Option<&str>) -> CliResult<BigRational> {
    match (f.opt("eps"), default) {
        (Some(v), _) => codec::parse_rational("payload.eps", v),
        (None, Some(d)) => Ok(codec::parse_rational("payload.eps", &json!(d))?),
        (None, None) => Err(CliError::schema("payload: missing field \"eps\"")),
    }
}

fn bool_field(f: &mut Fields<'_>, key: &'static str) -> CliResult<bool> {
    match f.opt(key) {
        Some(v) => v
            .as_bool()
            .ok_or_else(|| CliError::schema(format!("payload.{key}: expected a boolean"))),
        None => Ok(false),
    }
}

pub(crate) fn certificate_json(cert: &Certificate, out: &mut Map<String, Value>) {
    out.insert("solution".into(), codec::element(&cert.solution));
    out.insert("eps".into(), codec::rational(&cert.eps));
    let rows = cert
        .residuals
        .iter()
        .map(|r| {
            json!({
                "ideal": codec::ideal(&r.ideal),
                "target": codec::element(&r.target),
                "witness": codec::element(&r.witness),
                "bound": codec::rational(&r.bound),
            })
        })
        .collect();
    out.insert("residuals".into(), Value::Array(rows));
}

type Entries = Vec<(PrincipalIdeal, Element)>;
type Pairs = Vec<(PrincipalIdeal, PrincipalIdeal)>;

/// Ideals and targets of a `crt` payload.
pub(crate) fn crt_entries(
    ctx: &RingContext,
    payload: &Value,
) -> CliResult<(Entries, BigRational, bool)> {
    let mut f = Fields::new("payload", payload)?;
    let ideals = f.array("ideals")?;
    let targets = f.array("targets")?;
    let eps = eps_field(&mut f, Some("0"))?;
    let exceptions = bool_field(&mut f, "exceptions")?;
    f.finish()?;
    if ideals.is_empty() {
        return Err(CliError::schema("payload.ideals: empty ideal list"));
    }
    if ideals.len() != targets.len() {
        return Err(CliError::schema(
            "payload: ideals and targets differ in length",
        ));
    }
    let ideals = parse_list(ideals, "payload.ideals", |w, v| {
        codec::parse_ideal(ctx, w, v)
    })?;
    let targets = parse_list(targets, "payload.targets", |w, v| {
        codec::parse_element(ctx, w, v)
    })?;
    Ok((ideals.into_iter().zip(targets).collect(), eps, exceptions))
}

fn run_crt(ctx: &RingContext, payload: &Value) -> CliResult<Map<String, Value>> {
    let (entries, eps, exceptions) = crt_entries(ctx, payload)?;
    let sys = ResidueSystem::new(ctx.clone(), entries, eps)?;
    let mut out = Map::new();
    if exceptions {
        let sol = crat_infinite(&sys)?;
        certificate_json(&sol.certificate, &mut out);
        out.insert("exceptional".into(), json!(sol.exceptional));
        let density = sol
            .density
            .iter()
            .map(|(k, a)| json!({ "index": k, "a": codec::element(a) }))
            .collect();
        out.insert("density".into(), Value::Array(density));
    } else {
        let cert = finite_crat(&sys)?;
        let cert = match reduce_certificate(&cert) {
            Ok(c) => c,
            Err(Error::UnsupportedRing(_)) => cert,
            Err(e) => return Err(e.into()),
        };
        certificate_json(&cert, &mut out);
    }
    Ok(out)
}

pub(crate) fn lagrange_inputs(
    payload: &Value,
) -> CliResult<(Vec<QuadInt>, Vec<QuadInt>, BigRational)> {
    let mut f = Fields::new("payload", payload)?;
    let points = parse_list(f.array("points")?, "payload.points", codec::parse_quad)?;
    let values = parse_list(f.array("values")?, "payload.values", codec::parse_quad)?;
    let eps = eps_field(&mut f, None)?;
    f.finish()?;
    if points.is_empty() || points.len() != values.len() {
        return Err(CliError::schema(
            "payload: need as many values as points, at least one",
        ));
    }
    Ok((points, values, eps))
}

fn run_lagrange(ctx: &RingContext, payload: &Value) -> CliResult<Map<String, Value>> {
    require(
        ctx,
        ctx.kind == RingKind::Quad,
        Command::InterpLagrange,
        "quad",
    )?;
    let (points, values, eps) = lagrange_inputs(payload)?;
    let res = lagrange_dense(&points, &values, &eps)?;
    let mut out = Map::new();
    out.insert(
        "poly".into(),
        Value::Array(res.poly.coeffs().iter().map(codec::quad).collect()),
    );
    out.insert(
        "weights".into(),
        Value::Array(res.weights.iter().map(codec::quad).collect()),
    );
    let rows = res
        .residuals
        .iter()
        .map(|r| {
            json!({
                "point": codec::quad(&r.point),
                "value": codec::quad(&r.value),
                "residual": codec::surd(&r.residual),
                "bound": codec::rational(&r.bound),
            })
        })
        .collect();
    out.insert("residuals".into(), Value::Array(rows));
    out.insert("eps".into(), codec::rational(&res.eps));
    Ok(out)
}

pub(crate) fn hermite_inputs(payload: &Value) -> CliResult<Vec<Jet>> {
    let mut f = Fields::new("payload", payload)?;
    let jets = parse_list(f.array("jets")?, "payload.jets", |w, v| {
        let mut jf = Fields::new(w, v)?;
        let point = codec::parse_complex(w, jf.req("point")?)?;
        let values = parse_list(jf.array("values")?, w, codec::parse_complex)?;
        jf.finish()?;
        Ok(Jet { point, values })
    })?;
    f.finish()?;
    if jets.is_empty() {
        return Err(CliError::schema("payload.jets: empty jet list"));
    }
    Ok(jets)
}

fn run_hermite(ctx: &RingContext, payload: &Value) -> CliResult<Map<String, Value>> {
    require(ctx, is_poly(ctx), Command::InterpHermite, "poly")?;
    let jets = hermite_inputs(payload)?;
    let f = hermite_jets(&jets)?;
    let mut out = Map::new();
    out.insert("poly".into(), codec::cpoly(&f));
    Ok(out)
}

pub(crate) fn gap_inputs(
    ctx: &RingContext,
    payload: &Value,
) -> CliResult<(Pairs, Option<BigRational>)> {
    let mut f = Fields::new("payload", payload)?;
    let pairs = parse_list(f.array("pairs")?, "payload.pairs", |w, v| {
        match v.as_array() {
            Some(ab) if ab.len() == 2 => Ok((
                codec::parse_ideal(ctx, w, &ab[0])?,
                codec::parse_ideal(ctx, w, &ab[1])?,
            )),
            _ => Err(CliError::schema(format!("{w}: expected a pair [A, B]"))),
        }
    })?;
    let eps = match f.opt("eps") {
        Some(v) => Some(codec::parse_rational("payload.eps", v)?),
        None => None,
    };
    f.finish()?;
    Ok((pairs, eps))
}

fn decision_name(d: Decision) -> &'static str {
    match d {
        Decision::Yes => "yes",
        Decision::No => "no",
        Decision::Undecided => "undecided",
    }
}

fn run_gap(ctx: &RingContext, payload: &Value) -> CliResult<Map<String, Value>> {
    require(ctx, ctx.prime().is_ok(), Command::HyperGap, "padic")?;
    let (pairs, eps) = gap_inputs(ctx, payload)?;
    let mut rows = Vec::with_capacity(pairs.len());
    for (n, (a, b)) in pairs.iter().enumerate() {
        let mut row = json!({
            "n": n,
            "a": codec::ideal(a),
            "b": codec::ideal(b),
            "gap": codec::rational(&padic_gap(ctx, a, b)?),
        });
        if let Some(eps) = &eps {
            let d = entourage(ctx, a, b, eps, 0)?.decision;
            row["entourage"] = json!(decision_name(d));
        }
        rows.push(row);
    }
    let mut out = Map::new();
    out.insert("rows".into(), Value::Array(rows));
    if let Some(eps) = eps {
        out.insert("eps".into(), codec::rational(&eps));
    }
    Ok(out)
}

pub(crate) fn net_inputs(ctx: &RingContext, payload: &Value) -> CliResult<NetSpec> {
    let mut f = Fields::new("payload", payload)?;
    let chain = parse_list(f.array("chain")?, "payload.chain", |w, v| {
        codec::parse_ideal(ctx, w, v)
    })?;
    let limit = match f.opt("limit") {
        Some(v) => Some(codec::parse_ideal(ctx, "payload.limit", v)?),
        None => None,
    };
    f.finish()?;
    if chain.is_empty() {
        return Err(CliError::schema("payload.chain: empty chain"));
    }
    Ok(NetSpec { chain, limit })
}

pub(crate) fn verdict_json(v: &NetVerdict) -> Value {
    match v {
        NetVerdict::Converges => json!({ "kind": "converges" }),
        NetVerdict::Stalls { floor } => {
            json!({ "kind": "stalls", "floor": codec::rational(floor) })
        }
        NetVerdict::CauchyNotConvergent { floor } => {
            json!({ "kind": "cauchy_not_convergent", "floor": codec::rational(floor) })
        }
    }
}

fn run_net(ctx: &RingContext, payload: &Value) -> CliResult<Map<String, Value>> {
    require(ctx, ctx.prime().is_ok(), Command::HyperNet, "padic")?;
    let net = net_inputs(ctx, payload)?;
    let report = monotone_limit_check(ctx, &net)?;
    let rows = report
        .gaps
        .iter()
        .enumerate()
        .map(|(n, g)| {
            let mut row = json!({ "n": n, "gap": codec::rational(g) });
            if let Some(c) = report.consecutive.get(n) {
                row["consecutive"] = codec::rational(c);
            }
            row
        })
        .collect();
    let mut out = Map::new();
    out.insert("limit".into(), codec::ideal(&report.limit));
    out.insert("rows".into(), Value::Array(rows));
    out.insert("verdict".into(), verdict_json(&report.verdict));
    Ok(out)
}

/// The two shapes of a `densify-demo` payload.
pub(crate) enum DensifyJob {
    /// Iterates `r_0 … r_count`, or iterates until `V(r − r_n) < ε`.
    Scheme {
        ideal: PrincipalIdeal,
        a: Element,
        r: Element,
        stop: Stop,
    },
    /// Density certificates for `⟨(z − w)^mult⟩`, one per pole.
    Poles {
        poles: Vec<crat_core::numeric::CRational>,
        mult: u32,
        eps: BigRational,
    },
}

pub(crate) enum Stop {
    Count(u32),
    Eps(BigRational),
}

pub(crate) fn densify_inputs(ctx: &RingContext, payload: &Value) -> CliResult<DensifyJob> {
    let mut f = Fields::new("payload", payload)?;
    let job = if let Some(poles) = f.opt("poles") {
        require(ctx, is_poly(ctx), Command::DensifyDemo, "poly")?;
        let poles = poles
            .as_array()
            .ok_or_else(|| CliError::schema("payload.poles: expected an array"))?;
        let poles = parse_list(poles, "payload.poles", codec::parse_complex)?;
        let mult = match f.opt("mult") {
            Some(m) => codec::parse_u32("payload.mult", m)?,
            None => 1,
        };
        DensifyJob::Poles {
            poles,
            mult,
            eps: eps_field(&mut f, None)?,
        }
    } else {
        let ideal = codec::parse_ideal(ctx, "payload.ideal", f.req("ideal")?)?;
        let a = codec::parse_element(ctx, "payload.a", f.req("a")?)?;
        let r = codec::parse_element(ctx, "payload.r", f.req("r")?)?;
        let stop = match (f.opt("count"), f.opt("eps")) {
            (Some(c), None) => Stop::Count(codec::parse_u32("payload.count", c)?),
            (None, Some(e)) => Stop::Eps(codec::parse_rational("payload.eps", e)?),
            _ => {
                return Err(CliError::schema(
                    "payload: give exactly one of \"count\" or \"eps\"",
                ))
            }
        };
        DensifyJob::Scheme { ideal, a, r, stop }
    };
    f.finish()?;
    Ok(job)
}

fn run_densify(
    ctx: &RingContext,
    payload: &Value,
    settings: Settings,
) -> CliResult<Map<String, Value>> {
    let mut out = Map::new();
    match densify_inputs(ctx, payload)? {
        DensifyJob::Scheme { ideal, a, r, stop } => {
            let (steps, delta) = match &stop {
                Stop::Count(n) => {
                    let steps = densify_trace(ctx, &ideal, &a, &r, *n)?;
                    (steps, ctx.norm(&a.one_minus())?)
                }
                Stop::Eps(eps) => {
                    let res = densify(ctx, &ideal, &a, &r, eps)?;
                    out.insert("n0".into(), json!(res.n0));
                    out.insert("value".into(), codec::element(&res.value));
                    out.insert("bound".into(), codec::rational(&res.bound));
                    (res.steps, res.delta)
                }
            };
            out.insert("delta".into(), codec::rational(&delta));
            let rows = steps
                .iter()
                .enumerate()
                .map(|(n, s)| {
                    json!({
                        "n": n,
                        "iterate": codec::element(&s.iterate),
                        "error": codec::rational(&s.error),
                        "envelope": codec::rational(&s.envelope),
                    })
                })
                .collect();
            out.insert("steps".into(), Value::Array(rows));
        }
        DensifyJob::Poles { poles, mult, eps } => {
            let radius = ctx.radius()?;
            let mut rows = Vec::with_capacity(poles.len());
            for w in &poles {
                let d = ideal_density_within(w, mult, radius, &eps, Some(settings.degree_budget))?
                    .ok_or(CliError::Budget(settings.degree_budget))?;
                rows.push(json!({
                    "pole": codec::complex(w),
                    "mult": mult,
                    "a": codec::cpoly(&d.a),
                    "degree": d.degree,
                    "bound": codec::rational(&d.bound),
                }));
            }
            out.insert("rows".into(), Value::Array(rows));
            out.insert("eps".into(), codec::rational(&eps));
        }
    }
    Ok(out)
}

pub(crate) fn divergence_inputs(
    payload: &Value,
) -> CliResult<(crat_core::numeric::CRational, u32)> {
    let mut f = Fields::new("payload", payload)?;
    let center = codec::parse_complex("payload.center", f.req("center")?)?;
    let n_max = codec::parse_u32("payload.n_max", f.req("n_max")?)?;
    f.finish()?;
    Ok((center, n_max))
}

fn run_divergence(ctx: &RingContext, payload: &Value) -> CliResult<Map<String, Value>> {
    require(ctx, is_poly(ctx), Command::DivergenceDemo, "poly")?;
    let (center, n_max) = divergence_inputs(payload)?;
    let report = ideal_power_divergence_demo(&center, ctx.radius()?, n_max)?;
    let rows = report
        .rows
        .iter()
        .map(|r| json!({ "n": r.n, "gap": { "lower_bound": codec::rational(&r.lower_bound) } }))
        .collect();
    let mut out = Map::new();
    out.insert("center".into(), codec::complex(&report.center));
    out.insert("rho".into(), codec::rational(&report.rho));
    out.insert("rows".into(), Value::Array(rows));
    Ok(out)
}

pub(crate) fn tcm_inputs(
    ctx: &RingContext,
    payload: &Value,
) -> CliResult<(PrincipalIdeal, PrincipalIdeal, Option<BigRational>)> {
    let mut f = Fields::new("payload", payload)?;
    let a = codec::parse_ideal(ctx, "payload.a", f.req("a")?)?;
    let b = codec::parse_ideal(ctx, "payload.b", f.req("b")?)?;
    let eps = match f.opt("eps") {
        Some(v) => Some(codec::parse_rational("payload.eps", v)?),
        None => None,
    };
    f.finish()?;
    Ok((a, b, eps))
}

/// Whether `A + B` is dense: `p`-adic, the gcd of the generators is prime to
/// `p`; `Z[√2]`, not both ideals are zero; polynomial, no common root lies in
/// the closed disk.
pub(crate) fn decide_tcm(
    ctx: &RingContext,
    a: &PrincipalIdeal,
    b: &PrincipalIdeal,
) -> CliResult<bool> {
    Ok(match &ctx.kind {
        RingKind::Padic { p } => {
            let g = a.int_generator()?.gcd(b.int_generator()?);
            !g.is_zero() && !g.is_multiple_of(p)
        }
        RingKind::Quad => !(a.is_zero() && b.is_zero()),
        RingKind::Poly { radius } => {
            let inside = |i: &PrincipalIdeal| -> CliResult<Option<Vec<_>>> {
                if i.is_zero() {
                    return Ok(None);
                }
                Ok(Some(
                    i.root_powers()?
                        .iter()
                        .filter(|f| f.mult > 0 && in_closed_disk(&f.root, radius))
                        .map(|f| f.root.clone())
                        .collect(),
                ))
            };
            match (inside(a)?, inside(b)?) {
                (None, None) => false,
                (Some(r), None) | (None, Some(r)) => r.is_empty(),
                (Some(r), Some(s)) => r.iter().all(|x| !s.contains(x)),
            }
        }
    })
}

fn run_tcm(ctx: &RingContext, payload: &Value) -> CliResult<Map<String, Value>> {
    let (a, b, eps) = tcm_inputs(ctx, payload)?;
    let tcm = decide_tcm(ctx, &a, &b)?;
    let mut out = Map::new();
    out.insert("tcm".into(), json!(tcm));
    if let RingKind::Padic { .. } = ctx.kind {
        let g = a.int_generator()?.gcd(b.int_generator()?);
        out.insert("gcd".into(), codec::int(&g));
    }
    if let (true, Some(eps)) = (tcm, eps) {
        let w = tcm_witness(ctx, &a, &b, &eps)?;
        out.insert(
            "witness".into(),
            json!({
                "i": codec::element(&w.i),
                "j": codec::element(&w.j),
                "bound": codec::rational(&w.bound),
            }),
        );
        out.insert("eps".into(), codec::rational(&eps));
    }
    Ok(out)
}
