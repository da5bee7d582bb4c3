//! Meets, stability and openness lifts built from co-maximality witnesses.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::{Element, RingContext};

use super::TcmWitness;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lift {
    pub value: Element,
    /// Exact valuation of the approximation error (or of the value, for
    /// [`quotient_lift`]).
    pub bound: BigRational,
}

fn require_member(w: &TcmWitness, x: &Element, left: bool) -> Result<()> {
    let ideal = if left { &w.left } else { &w.right };
    if ideal.contains(x)? {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "{x} is not an element of {ideal}"
        )))
    }
}

fn two() -> BigRational {
    BigRational::from_integer(BigInt::from(2))
}

/// `y = a·x' + b·x ∈ I ∩ J` close to `x ∈ I`, given `x' ∈ J` close to `x`.
pub fn comaximal_meet_approx(
    ctx: &RingContext,
    x: &Element,
    w: &TcmWitness,
    x_prime: &Element,
    eps: &BigRational,
) -> Result<Lift> {
    ctx.check(x)?;
    ctx.check(x_prime)?;
    if x.is_zero() {
        return Ok(Lift {
            value: ctx.zero(),
            bound: BigRational::zero(),
        });
    }
    require_member(w, x, true)?;
    require_member(w, x_prime, false)?;
    let (a, b) = (&w.i, &w.j);
    let vx = ctx.norm(x)?;
    let va = ctx.norm(a)?;
    let near_one = ctx.norm(&w.defect()?)? * two() * &vx;
    let near_x = ctx.norm(&x.sub(x_prime)?)? * two() * &va;
    if &near_one >= eps || &near_x >= eps {
        return Err(Error::ToleranceViolation(format!(
            "need 2V(x)V(1-(a+b)) = {near_one} and 2V(a)V(x-x') = {near_x} below {eps}"
        )));
    }
    let y = a.mul(x_prime)?.add(&b.mul(x)?)?;
    if !w.left.contains(&y)? || !w.right.contains(&y)? {
        return Err(Error::ToleranceViolation(format!("{y} escaped I ∩ J")));
    }
    let bound = ctx.norm(&x.sub(&y)?)?;
    if &bound >= eps {
        return Err(Error::ToleranceViolation(format!(
            "V(x - y) = {bound} >= {eps}"
        )));
    }
    Ok(Lift { value: y, bound })
}

/// Proximity `δ` for [`stability_lift`]: `ε / (3·max(1, V(a)))`, so that
/// `V(b)δ + V(a)δ <= (1 + 2V(a))δ <= ε`.
pub fn choose_delta(ctx: &RingContext, w: &TcmWitness, eps: &BigRational) -> Result<BigRational> {
    let va = ctx.norm(&w.i)?.max(BigRational::one());
    Ok(eps / (BigRational::from_integer(3.into()) * va))
}

/// `r' = b·r₁ + a·r₂ ∈ I ∩ J` for `r` within `δ` of `r₁ ∈ I` and of `r₂ ∈ J`.
pub fn stability_lift(
    ctx: &RingContext,
    w: &TcmWitness,
    r: &Element,
    r1: &Element,
    r2: &Element,
    eps: &BigRational,
) -> Result<Lift> {
    if !w.is_exact() {
        return Err(Error::InexactWitness(w.bound.to_string()));
    }
    ctx.check(r)?;
    require_member(w, r1, true)?;
    require_member(w, r2, false)?;
    let delta = choose_delta(ctx, w, eps)?;
    let d1 = ctx.norm(&r.sub(r1)?)?;
    let d2 = ctx.norm(&r.sub(r2)?)?;
    if d1 >= delta || d2 >= delta {
        return Err(Error::ToleranceViolation(format!(
            "V(r - r1) = {d1}, V(r - r2) = {d2}; both must be below δ = {delta}"
        )));
    }
    let value = w.j.mul(r1)?.add(&w.i.mul(r2)?)?;
    let bound = ctx.norm(&r.sub(&value)?)?;
    if &bound >= eps {
        return Err(Error::ToleranceViolation(format!(
            "V(r - r') = {bound} >= {eps}"
        )));
    }
    Ok(Lift { value, bound })
}

/// `y = a·x ∈ I` with `y ≡ x (mod J)`. The bound records `V(y)`, which never
/// exceeds `V(a)V(x)`.
pub fn quotient_lift(ctx: &RingContext, x: &Element, w: &TcmWitness) -> Result<Lift> {
    if !w.is_exact() {
        return Err(Error::InexactWitness(w.bound.to_string()));
    }
    ctx.check(x)?;
    let y = w.i.mul(x)?;
    if !w.left.contains(&y)? || !w.right.contains(&y.sub(x)?)? {
        return Err(Error::InvalidInput("witness does not split x".into()));
    }
    let bound = ctx.norm(&y)?;
    debug_assert!(bound <= ctx.norm(&w.i)? * ctx.norm(x)?);
    Ok(Lift { value: y, bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crat::tcm_witness;
    use crate::numeric::{rat, CRational};
    use crate::ring::CPoly;
    use crate::rings::PrincipalIdeal;

    fn seven_adic_witness() -> (RingContext, TcmWitness) {
        let ctx = RingContext::padic(7).unwrap();
        let w = tcm_witness(
            &ctx,
            &PrincipalIdeal::int(3),
            &PrincipalIdeal::int(5),
            &rat(0, 1),
        )
        .unwrap();
        (ctx, w)
    }

    #[test]
    fn meet_approximation() {
        let (ctx, w) = seven_adic_witness();
        let y = comaximal_meet_approx(&ctx, &Element::int(15), &w, &Element::int(15), &rat(1, 2))
            .unwrap();
        assert_eq!((y.value, y.bound), (Element::int(15), rat(0, 1)));
        let y = comaximal_meet_approx(&ctx, &Element::int(0), &w, &Element::int(5), &rat(1, 2))
            .unwrap();
        assert_eq!(y.value, Element::int(0));
        // 3 and 3 + 49·... : x' must be in 5Z and 7-adically near x
        let y = comaximal_meet_approx(&ctx, &Element::int(3), &w, &Element::int(-340), &rat(1, 2))
            .unwrap();
        assert!(y.bound < rat(1, 2));
        assert!(
            comaximal_meet_approx(&ctx, &Element::int(3), &w, &Element::int(5), &rat(1, 2))
                .is_err()
        );
    }

    #[test]
    fn polynomial_meet_is_fixed_point() {
        let ctx = RingContext::poly(rat(1, 1)).unwrap();
        let i = PrincipalIdeal::root_power(CRational::from_int(0), 1);
        let j = PrincipalIdeal::root_power(CRational::from_int(1), 1);
        let w = tcm_witness(&ctx, &i, &j, &rat(0, 1)).unwrap();
        let g = CPoly::new(vec![CRational::from_int(2), CRational::from_int(-1)]);
        let zz1 = &CPoly::new(vec![
            CRational::from_int(0),
            CRational::from_int(-1),
            CRational::from_int(1),
        ]) * &g;
        let x = Element::Poly(zz1);
        let y = comaximal_meet_approx(&ctx, &x, &w, &x, &rat(1, 100)).unwrap();
        assert_eq!(y.value, x);
    }

    #[test]
    fn stability_and_quotient() {
        let (ctx, w) = seven_adic_witness();
        assert_eq!(choose_delta(&ctx, &w, &rat(1, 9)).unwrap(), rat(1, 27));
        let l = stability_lift(
            &ctx,
            &w,
            &Element::int(64),
            &Element::int(15),
            &Element::int(15),
            &rat(1, 9),
        )
        .unwrap();
        assert_eq!((l.value, l.bound), (Element::int(15), rat(1, 49)));
        let l = stability_lift(
            &ctx,
            &w,
            &Element::int(30),
            &Element::int(30),
            &Element::int(30),
            &rat(1, 9),
        )
        .unwrap();
        assert_eq!(l.value, Element::int(30));
        let q = quotient_lift(&ctx, &Element::int(7), &w).unwrap();
        assert_eq!(q.value, Element::int(42));
        assert_eq!(
            quotient_lift(&ctx, &Element::int(0), &w).unwrap().value,
            Element::int(0)
        );
    }
}
