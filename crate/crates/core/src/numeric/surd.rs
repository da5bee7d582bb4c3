use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Rational enclosure `lo <= √2 < hi` with `hi - lo = 2^(-bits)`.
pub fn sqrt2_enclosure(bits: u32) -> (BigRational, BigRational) {
    let scale = BigInt::one() << bits;
    let s = (BigInt::from(2) * &scale * &scale).sqrt();
    (
        BigRational::new(s.clone(), scale.clone()),
        BigRational::new(s + 1, scale),
    )
}

/// An exact real number `rat + irr·√2` in the field `Q(√2)`.
///
/// Ordering is decided exactly by sign analysis of `a² − 2b²`, so values of
/// this type never go through floating point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSqrt2 {
    pub rat: BigRational,
    pub irr: BigRational,
}

impl QSqrt2 {
    pub fn new(rat: BigRational, irr: BigRational) -> Self {
        QSqrt2 { rat, irr }
    }

    pub fn from_rational(q: BigRational) -> Self {
        QSqrt2 {
            rat: q,
            irr: BigRational::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.irr.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.irr.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.rat)
    }

    pub fn conj(&self) -> Self {
        QSqrt2 {
            rat: self.rat.clone(),
            irr: -self.irr.clone(),
        }
    }

    /// Field norm `rat² − 2·irr²`.
    pub fn norm(&self) -> BigRational {
        &self.rat * &self.rat - BigRational::from_integer(2.into()) * &self.irr * &self.irr
    }

    pub fn signum(&self) -> Ordering {
        let a = self.rat.signum();
        let b = self.irr.signum();
        let zero = BigRational::zero();
        match (a.cmp(&zero), b.cmp(&zero)) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
            (Ordering::Less, Ordering::Less) => Ordering::Less,
            (Ordering::Greater, Ordering::Less) => self.norm().cmp(&zero),
            (Ordering::Less, Ordering::Greater) => zero.cmp(&self.norm()),
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        let c = self.conj();
        Some(QSqrt2 {
            rat: c.rat / &n,
            irr: c.irr / n,
        })
    }

    /// Closed rational enclosure `lo <= self <= hi` using `bits` bits of √2.
    pub fn enclosure(&self, bits: u32) -> (BigRational, BigRational) {
        let (lo2, hi2) = sqrt2_enclosure(bits);
        let (x, y) = (&self.irr * &lo2, &self.irr * &hi2);
        let (mn, mx) = if x <= y { (x, y) } else { (y, x) };
        (&self.rat + mn, &self.rat + mx)
    }

    pub fn upper_bound(&self, bits: u32) -> BigRational {
        self.enclosure(bits).1
    }

    pub fn lower_bound(&self, bits: u32) -> BigRational {
        self.enclosure(bits).0
    }

    /// Exact floor.
    pub fn floor(&self) -> BigInt {
        let (lo, _) = self.enclosure(32);
        let mut n = lo.floor().to_integer();
        // lo <= self, so n <= self; walk up until n + 1 > self
        loop {
            let next = QSqrt2::from_rational(BigRational::from_integer(&n + 1));
            if next > *self {
                return n;
            }
            n += 1;
        }
    }

    /// Rendered with a short decimal approximation, e.g. `-192 + 136√2 (~0.333044)`.
    pub fn approx_decimal(&self, digits: usize) -> String {
        let (lo, _) = self.enclosure(64);
        let scale = BigInt::from(10).pow(digits as u32);
        let scaled = (lo * BigRational::from_integer(scale.clone()))
            .round()
            .to_integer();
        let (q, r) = scaled.abs().div_rem(&scale);
        let sign = if scaled.is_negative() { "-" } else { "" };
        format!("{sign}{q}.{:0>width$}", r.to_string(), width = digits)
    }
}

impl PartialOrd for QSqrt2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QSqrt2 {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl<'a> Add<&'a QSqrt2> for &'a QSqrt2 {
    type Output = QSqrt2;
    fn add(self, o: &QSqrt2) -> QSqrt2 {
        QSqrt2 {
            rat: &self.rat + &o.rat,
            irr: &self.irr + &o.irr,
        }
    }
}

impl<'a> Sub<&'a QSqrt2> for &'a QSqrt2 {
    type Output = QSqrt2;
    fn sub(self, o: &QSqrt2) -> QSqrt2 {
        QSqrt2 {
            rat: &self.rat - &o.rat,
            irr: &self.irr - &o.irr,
        }
    }
}

impl<'a> Mul<&'a QSqrt2> for &'a QSqrt2 {
    type Output = QSqrt2;
    fn mul(self, o: &QSqrt2) -> QSqrt2 {
        let two = BigRational::from_integer(2.into());
        QSqrt2 {
            rat: &self.rat * &o.rat + two * &self.irr * &o.irr,
            irr: &self.rat * &o.irr + &self.irr * &o.rat,
        }
    }
}

impl Add for QSqrt2 {
    type Output = QSqrt2;
    fn add(self, o: QSqrt2) -> QSqrt2 {
        &self + &o
    }
}

impl Sub for QSqrt2 {
    type Output = QSqrt2;
    fn sub(self, o: QSqrt2) -> QSqrt2 {
        &self - &o
    }
}

impl Mul for QSqrt2 {
    type Output = QSqrt2;
    fn mul(self, o: QSqrt2) -> QSqrt2 {
        &self * &o
    }
}

impl Neg for QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2 {
            rat: -self.rat,
            irr: -self.irr,
        }
    }
}

impl fmt::Display for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.irr.is_zero() {
            write!(f, "{}", self.rat)
        } else if self.rat.is_zero() {
            write!(f, "{}√2", self.irr)
        } else if self.irr.is_negative() {
            write!(f, "{} - {}√2", self.rat, -self.irr.clone())
        } else {
            write!(f, "{} + {}√2", self.rat, self.irr)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    fn q(a: i64, b: i64) -> QSqrt2 {
        QSqrt2::new(rat(a, 1), rat(b, 1))
    }

    #[test]
    fn sign_tests_are_exact() {
        // 577 - 408√2 is tiny and positive
        assert_eq!(q(577, -408).signum(), Ordering::Greater);
        assert_eq!(q(-577, 408).signum(), Ordering::Less);
        assert_eq!(q(3, -2).signum(), Ordering::Greater);
        assert_eq!(q(0, 0).signum(), Ordering::Equal);
        assert!(q(-192, 136) < QSqrt2::from_rational(rat(1, 3)));
        assert!(q(-192, 136) > QSqrt2::from_rational(rat(333, 1000)));
    }

    #[test]
    fn enclosure_brackets_value() {
        let (lo, hi) = sqrt2_enclosure(40);
        assert!(&lo * &lo < rat(2, 1));
        assert!(&hi * &hi > rat(2, 1));
        let x = q(-192, 136);
        let (lo, hi) = x.enclosure(60);
        assert!(lo < rat(3331, 10000) && hi > rat(3330, 10000));
    }

    #[test]
    fn floor_and_inverse() {
        assert_eq!(q(0, 1).floor(), BigInt::from(1));
        assert_eq!(q(-1, 1).floor(), BigInt::from(0));
        assert_eq!(q(0, -1).floor(), BigInt::from(-2));
        assert_eq!(q(5, 0).floor(), BigInt::from(5));
        let inv = q(1, 1).inverse().unwrap();
        assert_eq!(inv, q(-1, 1));
        assert_eq!(q(-192, 136).approx_decimal(5), "0.33304");
    }
}
