//! JSON encoding of rings, elements and ideals.
//!
//! Rationals are `"num/den"` strings, integers are JSON numbers when they fit
//! in an `i64` and decimal strings otherwise. `Z[√2]` elements are
//! `{"a", "b"}` for `a + b√2`; Gaussian rationals are `{"re", "im"}`;
//! polynomials are coefficient arrays, constant term first.

use std::collections::BTreeSet;

use crat_core::numeric::{fmt_rational, CRational, QSqrt2, QuadInt};
use crat_core::ring::CPoly;
use crat_core::{Element, PrincipalIdeal, RingContext, RingKind, RootPower};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::error::{CliError, CliResult};

/// Strict view of a JSON object: every key must be read before [`Fields::finish`].
pub struct Fields<'a> {
    what: &'a str,
    map: &'a Map<String, Value>,
    seen: BTreeSet<&'a str>,
}

impl<'a> Fields<'a> {
    pub fn new(what: &'a str, v: &'a Value) -> CliResult<Self> {
        let map = v
            .as_object()
            .ok_or_else(|| CliError::schema(format!("{what}: expected an object")))?;
        Ok(Fields {
            what,
            map,
            seen: BTreeSet::new(),
        })
    }

    pub fn opt(&mut self, key: &'a str) -> Option<&'a Value> {
        self.seen.insert(key);
        self.map.get(key).filter(|v| !v.is_null())
    }

    pub fn req(&mut self, key: &'a str) -> CliResult<&'a Value> {
        let what = self.what;
        self.opt(key)
            .ok_or_else(|| CliError::schema(format!("{what}: missing field \"{key}\"")))
    }

    pub fn array(&mut self, key: &'a str) -> CliResult<&'a Vec<Value>> {
        let what = self.what;
        self.req(key)?
            .as_array()
            .ok_or_else(|| CliError::schema(format!("{what}.{key}: expected an array")))
    }

    pub fn finish(self) -> CliResult<()> {
        match self.map.keys().find(|k| !self.seen.contains(k.as_str())) {
            Some(k) => Err(CliError::schema(format!(
                "{}: unknown field \"{k}\"",
                self.what
            ))),
            None => Ok(()),
        }
    }
}

fn bad(what: &str, expected: &str) -> CliError {
    CliError::schema(format!("{what}: expected {expected}"))
}

pub fn rational(q: &BigRational) -> Value {
    Value::String(fmt_rational(q))
}

pub fn parse_rational(what: &str, v: &Value) -> CliResult<BigRational> {
    match v {
        Value::String(s) => crat_core::numeric::parse_rational(s),
        Value::Number(n) => n.as_i64().map(|n| BigRational::from_integer(n.into())),
        _ => None,
    }
    .ok_or_else(|| bad(what, "a rational \"num/den\""))
}

pub fn int(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(k) => json!(k),
        None => Value::String(n.to_string()),
    }
}

pub fn parse_int(what: &str, v: &Value) -> CliResult<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
    .ok_or_else(|| bad(what, "an integer"))
}

pub fn parse_u32(what: &str, v: &Value) -> CliResult<u32> {
    v.as_u64()
        .and_then(|n| u32::try_from(n).ok())
        .ok_or_else(|| bad(what, "a small nonnegative integer"))
}

pub fn quad(q: &QuadInt) -> Value {
    json!({ "a": int(&q.a), "b": int(&q.b) })
}

pub fn parse_quad(what: &str, v: &Value) -> CliResult<QuadInt> {
    if v.is_object() {
        let mut f = Fields::new(what, v)?;
        let a = parse_int(what, f.req("a")?)?;
        let b = parse_int(what, f.req("b")?)?;
        f.finish()?;
        Ok(QuadInt::new(a, b))
    } else {
        Ok(QuadInt::from_int(parse_int(what, v)?))
    }
}

pub fn surd(x: &QSqrt2) -> Value {
    json!({ "rat": rational(&x.rat), "irr": rational(&x.irr) })
}

pub fn parse_surd(what: &str, v: &Value) -> CliResult<QSqrt2> {
    let mut f = Fields::new(what, v)?;
    let rat = parse_rational(what, f.req("rat")?)?;
    let irr = parse_rational(what, f.req("irr")?)?;
    f.finish()?;
    Ok(QSqrt2::new(rat, irr))
}

pub fn complex(c: &CRational) -> Value {
    json!({ "re": rational(&c.re), "im": rational(&c.im) })
}

/// `{"re", "im"}`, or a bare rational for a real number.
pub fn parse_complex(what: &str, v: &Value) -> CliResult<CRational> {
    if v.is_object() {
        let mut f = Fields::new(what, v)?;
        let re = parse_rational(what, f.req("re")?)?;
        let im = parse_rational(what, f.req("im")?)?;
        f.finish()?;
        Ok(CRational::new(re, im))
    } else {
        Ok(CRational::real(parse_rational(what, v)?))
    }
}

pub fn cpoly(p: &CPoly) -> Value {
    Value::Array(p.coeffs().iter().map(complex).collect())
}

pub fn parse_cpoly(what: &str, v: &Value) -> CliResult<CPoly> {
    let items = v
        .as_array()
        .ok_or_else(|| bad(what, "a coefficient array"))?;
    let coeffs = items
        .iter()
        .map(|c| parse_complex(what, c))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(CPoly::new(coeffs))
}

pub fn ring(ctx: &RingContext) -> Value {
    match &ctx.kind {
        RingKind::Padic { p } => json!({ "kind": "padic", "p": int(p) }),
        RingKind::Quad => json!({ "kind": "quad" }),
        RingKind::Poly { radius } => json!({ "kind": "poly", "R": rational(radius) }),
    }
}

pub fn parse_ring(v: &Value) -> CliResult<RingContext> {
    let mut f = Fields::new("ring", v)?;
    let kind = f
        .req("kind")?
        .as_str()
        .ok_or_else(|| bad("ring.kind", "a string"))?;
    let ctx = match kind {
        "padic" => RingContext::padic(parse_int("ring.p", f.req("p")?)?),
        "quad" => Ok(RingContext::quad()),
        "poly" => RingContext::poly(parse_rational("ring.R", f.req("R")?)?),
        other => {
            return Err(CliError::schema(format!(
                "ring.kind: unknown kind \"{other}\""
            )))
        }
    }
    .map_err(|e| CliError::schema(format!("ring: {e}")))?;
    f.finish()?;
    Ok(ctx)
}

pub fn element(x: &Element) -> Value {
    match x {
        Element::Int(n) => int(n),
        Element::Quad(q) => quad(q),
        Element::Poly(p) => cpoly(p),
    }
}

pub fn parse_element(ctx: &RingContext, what: &str, v: &Value) -> CliResult<Element> {
    Ok(match ctx.kind {
        RingKind::Padic { .. } => Element::Int(parse_int(what, v)?),
        RingKind::Quad => Element::Quad(parse_quad(what, v)?),
        RingKind::Poly { .. } => Element::Poly(parse_cpoly(what, v)?),
    })
}

/// Integer and `Z[√2]` ideals are written as their generator; polynomial
/// ideals as `{"roots": [{"root", "mult"}]}` or `{"generator": [...]}`.
pub fn ideal(i: &PrincipalIdeal) -> Value {
    match (&i.generator, &i.factors) {
        (Element::Poly(_), Some(fs)) => json!({
            "roots": fs
                .iter()
                .map(|f| json!({ "root": complex(&f.root), "mult": f.mult }))
                .collect::<Vec<_>>()
        }),
        (Element::Poly(g), None) => json!({ "generator": cpoly(g) }),
        (g, _) => element(g),
    }
}

pub fn parse_ideal(ctx: &RingContext, what: &str, v: &Value) -> CliResult<PrincipalIdeal> {
    match ctx.kind {
        RingKind::Padic { .. } => Ok(PrincipalIdeal::int(parse_int(what, v)?)),
        RingKind::Quad => Ok(PrincipalIdeal::quad(parse_quad(what, v)?)),
        RingKind::Poly { .. } => {
            let mut f = Fields::new(what, v)?;
            let out = match (f.opt("roots"), f.opt("generator")) {
                (Some(roots), None) => {
                    let roots = roots
                        .as_array()
                        .ok_or_else(|| bad(what, "a list of roots"))?;
                    let factors = roots
                        .iter()
                        .map(|r| {
                            let mut rf = Fields::new(what, r)?;
                            let root = parse_complex(what, rf.req("root")?)?;
                            let mult = match rf.opt("mult") {
                                Some(m) => parse_u32(what, m)?,
                                None => 1,
                            };
                            rf.finish()?;
                            Ok(RootPower::new(root, mult))
                        })
                        .collect::<CliResult<Vec<_>>>()?;
                    PrincipalIdeal::from_roots(factors)
                }
                (None, Some(g)) => {
                    let g = parse_cpoly(what, g)?;
                    if g.is_zero() {
                        PrincipalIdeal::zero(ctx)
                    } else {
                        PrincipalIdeal::poly(g)
                    }
                }
                _ => return Err(bad(what, "exactly one of \"roots\" or \"generator\"")),
            };
            f.finish()?;
            Ok(out)
        }
    }
}
