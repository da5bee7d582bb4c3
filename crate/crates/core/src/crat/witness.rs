//! Witnesses of topological co-maximality and their algebra.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::interp::product_density_certificate;
use crate::numeric::{centered_mod, mod_inverse, padic_level, rat, QuadInt};
use crate::ring::{CPoly, Element, RingContext, RingKind};
use crate::rings::polyring::in_closed_disk;
use crate::rings::{ideal_meet, quad_inverse_approx, PrincipalIdeal, RootPower};

/// A pair `i ∈ I`, `j ∈ J` with `V(1 − (i + j)) <= bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TcmWitness {
    pub left: PrincipalIdeal,
    pub right: PrincipalIdeal,
    pub i: Element,
    pub j: Element,
    pub bound: BigRational,
    pub valuation: String,
}

impl TcmWitness {
    pub fn is_exact(&self) -> bool {
        self.bound.is_zero()
    }

    /// `1 − (i + j)`.
    pub fn defect(&self) -> Result<Element> {
        Ok(self.i.add(&self.j)?.one_minus())
    }

    /// Re-checks memberships and that the recorded bound dominates the exact
    /// valuation of the defect.
    pub fn verify(&self, ctx: &RingContext) -> Result<bool> {
        Ok(self.left.contains(&self.i)?
            && self.right.contains(&self.j)?
            && ctx.value_bound(&self.defect()?)? <= self.bound)
    }
}

fn witness(
    ctx: &RingContext,
    left: &PrincipalIdeal,
    right: &PrincipalIdeal,
    i: Element,
    j: Element,
) -> Result<TcmWitness> {
    let defect = i.add(&j)?.one_minus();
    let bound = ctx.value_bound(&defect)?;
    Ok(TcmWitness {
        left: left.clone(),
        right: right.clone(),
        i,
        j,
        bound,
        valuation: ctx.id(),
    })
}

fn exact_required(what: &str) -> Error {
    Error::NotTcm(format!(
        "{what}; an exact witness was requested (tolerance 0)"
    ))
}

/// Integer Bezout pair for coprime `a`, `b`: `i = s·a` with `s = a⁻¹ mod b`
/// taken from the centered window `[−b/2, b/2)`, and `j = 1 − i`.
fn int_bezout(a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
    if b.is_one() {
        return (BigInt::zero(), BigInt::one());
    }
    if b.is_zero() {
        // a = 1 here
        return (BigInt::one(), BigInt::zero());
    }
    let s = centered_mod(&mod_inverse(a, b).expect("coprime"), b);
    let i = s * a;
    let j = BigInt::one() - &i;
    (i, j)
}

fn padic_witness(
    ctx: &RingContext,
    left: &PrincipalIdeal,
    right: &PrincipalIdeal,
    eps: &BigRational,
) -> Result<TcmWitness> {
    let p = ctx.prime()?;
    let (a, b) = (left.int_generator()?, right.int_generator()?);
    if a.is_one() {
        return witness(ctx, left, right, Element::int(1), Element::int(0));
    }
    let g = a.gcd(b);
    if g.is_one() {
        let (i, j) = int_bezout(a, b);
        return witness(ctx, left, right, Element::Int(i), Element::Int(j));
    }
    if g.is_multiple_of(p) {
        return Err(Error::NotTcm(format!("{p} divides both {a} and {b}")));
    }
    if eps.is_zero() {
        return Err(exact_required(&format!(
            "gcd({a}, {b}) = {g} is not a unit"
        )));
    }
    let e = a.extended_gcd(b);
    let (s, t) = if e.gcd.is_negative() {
        (-e.x, -e.y)
    } else {
        (e.x, e.y)
    };
    let modulus = num_traits::pow(p.clone(), padic_level(p, eps) as usize);
    let k = centered_mod(
        &mod_inverse(&g, &modulus).expect("p does not divide g"),
        &modulus,
    );
    let i = &s * &k * a;
    let j = &t * &k * b;
    let w = witness(ctx, left, right, Element::Int(i), Element::Int(j))?;
    debug_assert!(w.bound < *eps);
    Ok(w)
}

fn common_roots(a: &[RootPower], b: &[RootPower]) -> Vec<RootPower> {
    a.iter()
        .filter_map(|x| {
            b.iter()
                .find(|y| y.root == x.root)
                .map(|y| RootPower::new(x.root.clone(), x.mult.min(y.mult)))
        })
        .collect()
}

fn poly_witness(
    ctx: &RingContext,
    left: &PrincipalIdeal,
    right: &PrincipalIdeal,
    eps: &BigRational,
) -> Result<TcmWitness> {
    let radius = ctx.radius()?;
    let (f, g) = (left.poly_generator()?, right.poly_generator()?);
    let (gcd, s, t) = CPoly::ext_gcd(f, g);
    if gcd.degree() == Some(0) {
        // s·f + t·g = 1; reduce s modulo g to keep degrees small
        let (s, t) = if g.degree().unwrap_or(0) > 0 {
            let s = s.rem(g);
            let t = (&CPoly::one() - &(&s * f))
                .exact_div(g)
                .expect("Bezout identity");
            (s, t)
        } else {
            (s, t)
        };
        return witness(
            ctx,
            left,
            right,
            Element::Poly(&s * f),
            Element::Poly(&t * g),
        );
    }
    let shared = match (&left.factors, &right.factors) {
        (Some(a), Some(b)) => common_roots(a, b),
        _ if gcd.is_zero() => return Err(Error::NotTcm("both ideals are zero".into())),
        _ => {
            return Err(Error::InvalidInput(
                "ideals with common roots need factored forms to locate them".into(),
            ))
        }
    };
    if let Some(inside) = shared.iter().find(|rp| in_closed_disk(&rp.root, radius)) {
        return Err(Error::NotTcm(format!(
            "common root {} lies in the disk |z| <= {radius}",
            inside.root
        )));
    }
    if eps.is_zero() {
        return Err(exact_required("the ideals share roots outside the disk"));
    }
    // s·f + t·g = G, and a ∈ ⟨G⟩ near 1 gives i + j = a
    let dens = product_density_certificate(&shared, radius, eps)?;
    let h = dens
        .a
        .exact_div(&gcd)
        .expect("density element lies in the gcd ideal");
    let i = &(&s * f) * &h;
    let j = &(&t * g) * &h;
    witness(ctx, left, right, Element::Poly(i), Element::Poly(j))
}

fn quad_witness(
    ctx: &RingContext,
    left: &PrincipalIdeal,
    right: &PrincipalIdeal,
    eps: &BigRational,
) -> Result<TcmWitness> {
    let (d1, d2) = match (&left.generator, &right.generator) {
        (Element::Quad(a), Element::Quad(b)) => (a, b),
        _ => return Err(Error::WrongRing("expected Z[√2] ideals".into())),
    };
    let zero = Element::Quad(QuadInt::zero());
    if d1.is_unit() {
        let inv = quad_inverse_approx(d1, &rat(1, 2))?;
        return witness(ctx, left, right, Element::Quad(d1 * &inv.value), zero);
    }
    if d2.is_unit() {
        let inv = quad_inverse_approx(d2, &rat(1, 2))?;
        return witness(ctx, left, right, zero, Element::Quad(d2 * &inv.value));
    }
    if eps.is_zero() {
        return Err(Error::UnsupportedRing(
            "exact witnesses for non-unit ideals of Z[√2]".into(),
        ));
    }
    // every nonzero ideal of Z[√2] is dense in R
    let (d, on_left) = match (d1.is_zero(), d2.is_zero()) {
        (false, _) => (d1, true),
        (true, false) => (d2, false),
        (true, true) => return Err(Error::NotTcm("both ideals are zero".into())),
    };
    let s = quad_inverse_approx(d, eps)?;
    let x = Element::Quad(d * &s.value);
    if on_left {
        witness(ctx, left, right, x, zero)
    } else {
        witness(ctx, left, right, zero, x)
    }
}

/// Finds `i ∈ I`, `j ∈ J` with `V(1 − (i + j)) < ε`; `ε = 0` asks for an
/// exact witness `i + j = 1`. Exactly co-maximal ideals always get an exact
/// witness from the extended Euclidean algorithm.
pub fn tcm_witness(
    ctx: &RingContext,
    left: &PrincipalIdeal,
    right: &PrincipalIdeal,
    eps: &BigRational,
) -> Result<TcmWitness> {
    left.check(ctx)?;
    right.check(ctx)?;
    if eps.is_negative() {
        return Err(Error::InvalidInput("tolerance must be nonnegative".into()));
    }
    match ctx.kind {
        RingKind::Padic { .. } => padic_witness(ctx, left, right, eps),
        RingKind::Poly { .. } => poly_witness(ctx, left, right, eps),
        RingKind::Quad => quad_witness(ctx, left, right, eps),
    }
}

/// From witnesses for `(I, J₁)` and `(I, J₂)`, a witness for `(I, J₁J₂)`:
/// `(i₁ + j₁)(i₂ + j₂) = (i₁i₂ + i₁j₂ + j₁i₂) + j₁j₂`. The recorded bound is
/// `b₁ + (1 + b₁)·b₂`.
pub fn combine_witnesses_product(
    ctx: &RingContext,
    w1: &TcmWitness,
    w2: &TcmWitness,
) -> Result<TcmWitness> {
    if w1.left != w2.left || w1.valuation != w2.valuation {
        return Err(Error::MismatchedI);
    }
    let i =
        w1.i.mul(&w2.i)?
            .add(&w1.i.mul(&w2.j)?)?
            .add(&w1.j.mul(&w2.i)?)?;
    let j = w1.j.mul(&w2.j)?;
    ctx.check(&i)?;
    let one = BigRational::one();
    let bound = &w1.bound + (&one + &w1.bound) * &w2.bound;
    Ok(TcmWitness {
        left: w1.left.clone(),
        right: w1.right.product(&w2.right)?,
        i,
        j,
        bound,
        valuation: w1.valuation.clone(),
    })
}

/// Witness for `(I, ∩ₖ Jₖ)` by folding pairwise witnesses; the `k`-th one is
/// requested at `min(ε, 1)/2^(k+2)` so that the folded bound stays below `ε`.
pub fn intersection_witness(
    ctx: &RingContext,
    left: &PrincipalIdeal,
    others: &[PrincipalIdeal],
    eps: &BigRational,
) -> Result<TcmWitness> {
    let whole = PrincipalIdeal::whole(ctx);
    let Some((first, rest)) = others.split_first() else {
        return witness(ctx, left, &whole, ctx.zero(), ctx.one());
    };
    let base = if eps > &BigRational::one() {
        BigRational::one()
    } else {
        eps.clone()
    };
    let step = |k: usize| &base / BigRational::from_integer(BigInt::one() << (k + 2));
    let mut acc = tcm_witness(ctx, left, first, &step(1))?;
    for (k, other) in rest.iter().enumerate() {
        let w = tcm_witness(ctx, left, other, &step(k + 2))?;
        acc = combine_witnesses_product(ctx, &acc, &w)?;
    }
    if !matches!(ctx.kind, RingKind::Quad) {
        let mut meet = first.clone();
        for other in rest {
            meet = ideal_meet(&meet, other)?;
        }
        debug_assert!(meet.contains(&acc.j)?);
        acc.right = meet;
    }
    let too_big = if eps.is_zero() {
        !acc.bound.is_zero()
    } else {
        acc.bound >= *eps
    };
    if too_big {
        return Err(Error::ToleranceViolation(format!(
            "folded witness bound {} does not meet {eps}",
            acc.bound
        )));
    }
    Ok(acc)
}

/// Exact valuation of the witness defect, for audits of the recorded bound.
pub fn witness_defect_value(ctx: &RingContext, w: &TcmWitness) -> Result<BigRational> {
    ctx.value_bound(&w.defect()?)
}
