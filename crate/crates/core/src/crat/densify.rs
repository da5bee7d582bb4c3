use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numeric::rational_pow;
use crate::ring::{Element, RingContext};
use crate::rings::PrincipalIdeal;

/// One recorded step `r_n` of the densification scheme.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensifyStep {
    pub iterate: Element,
    /// `V(r − r_n)`, exactly.
    pub error: BigRational,
    /// `δ^n · V(r)`.
    pub envelope: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensifyResult {
    pub value: Element,
    /// A-priori count: smallest `n` with `δ^n · V(r) < ε`.
    pub n0: u32,
    /// Iterates `r_0 = 0, r_1, …` up to the one returned.
    pub steps: Vec<DensifyStep>,
    /// `V(r − value)`.
    pub bound: BigRational,
    pub delta: BigRational,
}

fn contraction(ctx: &RingContext, ideal: &PrincipalIdeal, a: &Element) -> Result<BigRational> {
    ideal.check(ctx)?;
    ctx.check(a)?;
    if !ideal.contains(a)? {
        return Err(Error::InvalidInput(format!(
            "{a} is not an element of {ideal}"
        )));
    }
    let delta = ctx.norm(&a.one_minus())?;
    if delta >= BigRational::one() {
        return Err(Error::NotContractive(delta.to_string()));
    }
    Ok(delta)
}

fn step(r: &Element, rn: &Element, a: &Element) -> Result<Element> {
    rn.add(&r.sub(rn)?.mul(a)?)
}

/// The first `count + 1` iterates of `r_{n+1} = r_n + (r − r_n)·a`, `r_0 = 0`,
/// each checked against the envelope `V(r − r_n) <= δ^n V(r)`.
pub fn densify_trace(
    ctx: &RingContext,
    ideal: &PrincipalIdeal,
    a: &Element,
    r: &Element,
    count: u32,
) -> Result<Vec<DensifyStep>> {
    let delta = contraction(ctx, ideal, a)?;
    ctx.check(r)?;
    let vr = ctx.norm(r)?;
    let mut out = Vec::with_capacity(count as usize + 1);
    let mut rn = ctx.zero();
    for n in 0..=count {
        if n > 0 {
            rn = step(r, &rn, a)?;
        }
        out.push(record(ctx, ideal, r, &rn, &delta, &vr, n)?);
    }
    Ok(out)
}

fn record(
    ctx: &RingContext,
    ideal: &PrincipalIdeal,
    r: &Element,
    rn: &Element,
    delta: &BigRational,
    vr: &BigRational,
    n: u32,
) -> Result<DensifyStep> {
    let error = ctx.norm(&r.sub(rn)?)?;
    let envelope = rational_pow(delta, n) * vr;
    if error > envelope || !ideal.contains(rn)? {
        return Err(Error::ToleranceViolation(format!(
            "iterate {n}: V(r - r_n) = {error} exceeds δ^n V(r) = {envelope}"
        )));
    }
    Ok(DensifyStep {
        iterate: rn.clone(),
        error,
        envelope,
    })
}

/// Approximates `r` inside `I` given `a ∈ I` with `δ = V(1 − a) < 1`.
pub fn densify(
    ctx: &RingContext,
    ideal: &PrincipalIdeal,
    a: &Element,
    r: &Element,
    eps: &BigRational,
) -> Result<DensifyResult> {
    let delta = contraction(ctx, ideal, a)?;
    ctx.check(r)?;
    if eps <= &BigRational::zero() {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let vr = ctx.norm(r)?;
    let mut n0 = 0u32;
    if !r.is_zero() {
        let mut env = vr.clone();
        while &env >= eps {
            env *= &delta;
            n0 += 1;
        }
    }
    let mut steps = vec![record(ctx, ideal, r, &ctx.zero(), &delta, &vr, 0)?];
    let mut rn = ctx.zero();
    for n in 1..=n0 {
        if steps.last().is_some_and(|s| &s.error < eps) {
            break;
        }
        rn = step(r, &rn, a)?;
        steps.push(record(ctx, ideal, r, &rn, &delta, &vr, n)?);
    }
    let bound = steps
        .last()
        .map(|s| s.error.clone())
        .unwrap_or_else(BigRational::zero);
    Ok(DensifyResult {
        value: rn,
        n0,
        steps,
        bound,
        delta,
    })
}
