//! Exact number types: rationals, Gaussian rationals, `Z[√2]`, `Q(√2)` and
//! dense univariate polynomials over any of them.

mod complex;
mod poly;
mod quadint;
mod surd;

pub use complex::CRational;
pub use poly::{Coeff, FieldCoeff, Poly};
pub use quadint::QuadInt;
pub use surd::{sqrt2_enclosure, QSqrt2};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `n/d` as a big rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

/// Canonical "num/den" rendering (denominator always present).
pub fn fmt_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses "num/den" or a bare integer.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

pub fn rational_pow(base: &BigRational, exp: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Binomial coefficient as a big integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Exact `p`-adic order of a nonzero integer; `None` for zero.
pub fn padic_order(x: &BigInt, p: &BigInt) -> Option<u64> {
    if x.is_zero() {
        return None;
    }
    let mut x = x.abs();
    let mut v = 0;
    loop {
        let (q, r) = x.div_rem(p);
        if !r.is_zero() {
            return Some(v);
        }
        x = q;
        v += 1;
    }
}

/// Residue of `x` modulo `m > 0` chosen in the half-open window `[-m/2, m/2)`.
pub fn centered_mod(x: &BigInt, m: &BigInt) -> BigInt {
    let r = x.mod_floor(m);
    // r in [0, m); move into [-m/2, m/2)
    if BigInt::from(2) * &r >= *m {
        r - m
    } else {
        r
    }
}

/// Inverse of `a` modulo `m` (`m > 0`), if it exists, in `[0, m)`.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    if let (Some(a), Some(m)) = (a.to_i64(), m.to_i64()) {
        return small_mod_inverse(a as i128, m as i128).map(BigInt::from);
    }
    let e = a.mod_floor(m).extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

fn small_mod_inverse(a: i128, m: i128) -> Option<i128> {
    let (mut r0, mut r1) = (a.rem_euclid(m), m);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(m))
}

/// Lower bound for `√q` (`q >= 0`) with absolute error below `2^(-bits)`.
pub fn sqrt_lower_bound(q: &BigRational, bits: u32) -> BigRational {
    // √(n/d) = √(n·d)/d
    let scale = BigInt::one() << bits;
    let nd = q.numer() * q.denom() * &scale * &scale;
    BigRational::new(nd.sqrt(), q.denom() * scale)
}

/// Upper bound for `√q` (`q >= 0`) with absolute error below `2^(-bits)`.
pub fn sqrt_upper_bound(q: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits;
    let nd = q.numer() * q.denom() * &scale * &scale;
    let r = nd.sqrt();
    let r = if &r * &r == nd { r } else { r + 1 };
    BigRational::new(r, q.denom() * scale)
}

/// Smallest `m >= 0` with `p^(-m) < eps`.
pub fn padic_level(p: &BigInt, eps: &BigRational) -> u32 {
    let mut m = 0u32;
    let mut scale = BigRational::one();
    let p = BigRational::from_integer(p.clone());
    while &scale >= eps {
        scale /= &p;
        m += 1;
    }
    m
}
