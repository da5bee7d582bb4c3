//! Approximation in the dense subring `Z[√2] ⊂ R`.
//!
//! Inverses are built from powers of the unit `u = √2 − 1 ≈ 0.4142`. If `u`
//! has order `t` modulo `d`, then for every multiple `k` of `t` the element
//! `s = (1 − u^k)/d` lies in `Z[√2]` and `s·d − 1 = −u^k` exactly. When the
//! order is out of reach, `s = u^k · round((1/d)(1 + √2)^k)` is used instead,
//! whose error shrinks like `u^k`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::{QSqrt2, QuadInt};

/// Result of an approximation in `Z[√2]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadApprox {
    pub value: QuadInt,
    /// The exact error, as an element of `Q(√2)`.
    pub residual: QSqrt2,
    /// Rational upper bound on `residual`, strictly below the tolerance.
    pub bound: BigRational,
}

const TRIAL_LIMIT: u64 = 1 << 20;

/// Rational upper bound for `x`, within `2^-32` of it, certifying `x < eps`,
/// with the number of bits of `√2` used. `None` when `x >= eps`.
pub fn certify_below(x: &QSqrt2, eps: &BigRational) -> Option<(BigRational, u32)> {
    if *x >= QSqrt2::from_rational(eps.clone()) {
        return None;
    }
    if let Some(q) = x.as_rational() {
        return Some((q.clone(), 0));
    }
    let size = x.irr.numer().bits() + x.irr.denom().bits();
    let mut bits = 32 + u32::try_from(size).unwrap_or(u32::MAX / 4);
    loop {
        let hi = x.upper_bound(bits);
        if &hi < eps {
            return Some((hi, bits));
        }
        bits *= 2;
    }
}

/// Trial-division factorization; the last factor may be an unfactored
/// cofactor when it exceeds the trial limit (flagged `false`).
fn factorize(n: &BigInt) -> (Vec<(BigInt, u32)>, bool) {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::from(2);
    let mut steps = 0u64;
    while &d * &d <= n {
        if steps > TRIAL_LIMIT {
            out.push((n, 1));
            return (out, false);
        }
        let mut e = 0;
        while n.is_multiple_of(&d) {
            n /= &d;
            e += 1;
        }
        if e > 0 {
            out.push((d.clone(), e));
        }
        d += if d == BigInt::from(2) { 1 } else { 2 };
        steps += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    (out, true)
}

fn pow_mod(base: &QuadInt, e: &BigInt, m: &BigInt) -> QuadInt {
    let mut acc = QuadInt::one().reduce_mod(m);
    let mut b = base.reduce_mod(m);
    let bits = e.bits();
    for i in 0..bits {
        if e.bit(i) {
            acc = (&acc * &b).reduce_mod(m);
        }
        b = (&b * &b).reduce_mod(m);
    }
    acc
}

/// Multiplicative order of `u = √2 − 1` modulo `d` (non-unit, nonzero).
fn unit_order(d: &QuadInt) -> Option<BigInt> {
    let m = d.norm().abs();
    let u = QuadInt::small_unit();
    let is_one = |k: &BigInt| (pow_mod(&u, k, &m) - QuadInt::one()).exact_div(d).is_some();
    let (fs, complete) = factorize(&m);
    if !complete {
        return None;
    }
    // λ = Π p^(2e) (p − 1)² (p + 1) is a multiple of the unit group exponent
    // of Z[√2]/(m) whatever the splitting type of each p.
    let mut primes: Vec<BigInt> = Vec::new();
    let mut lambda = BigInt::one();
    for (p, e) in &fs {
        lambda *= num_traits::pow(p.clone(), 2 * *e as usize);
        lambda *= (p - 1u32) * (p - 1u32) * (p + 1u32);
        primes.push(p.clone());
        for q in [p - 1u32, p + 1u32] {
            let (qs, _) = factorize(&q);
            primes.extend(qs.into_iter().map(|(r, _)| r));
        }
    }
    primes.sort();
    primes.dedup();
    if !is_one(&lambda) {
        return None;
    }
    let mut t = lambda;
    for q in primes.iter().filter(|q| **q > BigInt::one()) {
        while t.is_multiple_of(q) && is_one(&(&t / q)) {
            t /= q;
        }
    }
    Some(t)
}

/// Smallest `k` with `u^k < target`.
fn unit_exponent_below(target: &QSqrt2) -> u64 {
    let u = QuadInt::small_unit().to_real();
    let mut k = 0;
    let mut uk = QSqrt2::one();
    while uk >= *target {
        uk = &uk * &u;
        k += 1;
    }
    k
}

fn finish(value: QuadInt, residual: QSqrt2, eps: &BigRational) -> Option<QuadApprox> {
    let (bound, _) = certify_below(&residual, eps)?;
    Some(QuadApprox {
        value,
        residual,
        bound,
    })
}

fn inverse_by_rounding(d: &QuadInt, eps: &BigRational) -> QuadApprox {
    let t = d.to_real().inverse().expect("nonzero");
    let big = QuadInt::new(1, 1);
    let u = QuadInt::small_unit();
    let mut scale = QuadInt::one();
    let mut down = QuadInt::one();
    loop {
        let x = &t * &scale.to_real();
        let rounded = QuadInt::new(x.rat.round().to_integer(), x.irr.round().to_integer());
        let s = &down * &rounded;
        let residual = (&(&s * d) - &QuadInt::one()).abs_value();
        if let Some(out) = finish(s, residual, eps) {
            return out;
        }
        scale = &scale * &big;
        down = &down * &u;
    }
}

/// `s ∈ Z[√2]` with `|s·d − 1| < ε`, together with an exact certificate.
pub fn quad_inverse_approx(d: &QuadInt, eps: &BigRational) -> Result<QuadApprox> {
    if d.is_zero() {
        return Err(Error::ZeroDivisor);
    }
    if !eps.is_positive() {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    if d.is_unit() {
        let s = QuadInt::new(d.norm() * &d.a, -(d.norm() * &d.b));
        return Ok(QuadApprox {
            value: s,
            residual: QSqrt2::zero(),
            bound: BigRational::zero(),
        });
    }
    let target = QSqrt2::from_rational(eps.clone());
    let k_min = unit_exponent_below(&target);
    if let Some(t) = unit_order(d) {
        if let Ok(t) = u64::try_from(t) {
            let k = k_min.div_ceil(t) * t;
            if k <= 64 + 4 * k_min {
                let uk = QuadInt::small_unit().pow(k);
                let s = (QuadInt::one() - uk.clone())
                    .exact_div(d)
                    .expect("d divides 1 - u^k");
                if let Some(out) = finish(s, uk.abs_value(), eps) {
                    return Ok(out);
                }
            }
        }
    }
    Ok(inverse_by_rounding(d, eps))
}

/// Element of `Z[√2]` within `ε` of the rational `target`.
pub fn quad_approx(target: &BigRational, eps: &BigRational) -> Result<QuadApprox> {
    if !eps.is_positive() {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let exact = |q: QuadInt| QuadApprox {
        value: q,
        residual: QSqrt2::zero(),
        bound: BigRational::zero(),
    };
    if target.is_integer() {
        return Ok(exact(QuadInt::from_int(target.to_integer())));
    }
    let (p, q) = (target.numer().clone(), target.denom().clone());
    let inner = eps * BigRational::from_integer(q.clone()) / BigRational::from_integer(p.abs());
    let s = quad_inverse_approx(&QuadInt::from_int(q), &inner)?;
    let value = &QuadInt::from_int(p) * &s.value;
    let residual = (&value.to_real() - &QSqrt2::from_rational(target.clone())).abs();
    let (bound, _) = certify_below(&residual, eps).expect("scaled inverse meets the tolerance");
    Ok(QuadApprox {
        value,
        residual,
        bound,
    })
}
