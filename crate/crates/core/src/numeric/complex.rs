use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A Gaussian rational `re + im·i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl CRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        CRational { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        CRational {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        CRational::real(BigRational::from_integer(n.into()))
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// `re² + im²`, the exact square of the modulus.
    pub fn modulus_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Taxicab magnitude `|re| + |im|`. Submultiplicative and an upper bound
    /// on the modulus, and always an exact rational.
    pub fn norm1(&self) -> BigRational {
        self.re.abs() + self.im.abs()
    }

    /// `max(|re|, |im|)`, an exact rational lower bound on the modulus.
    pub fn norm_inf(&self) -> BigRational {
        let (a, b) = (self.re.abs(), self.im.abs());
        if a >= b {
            a
        } else {
            b
        }
    }

    pub fn conj(&self) -> Self {
        CRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.modulus_sq();
        if n.is_zero() {
            return None;
        }
        Some(CRational {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        CRational {
            re: &self.re * k,
            im: &self.im * k,
        }
    }
}

impl Zero for CRational {
    fn zero() -> Self {
        CRational::real(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for CRational {
    fn one() -> Self {
        CRational::real(BigRational::one())
    }
}

impl Add for CRational {
    type Output = CRational;
    fn add(self, o: CRational) -> CRational {
        CRational {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }
}

impl Sub for CRational {
    type Output = CRational;
    fn sub(self, o: CRational) -> CRational {
        CRational {
            re: self.re - o.re,
            im: self.im - o.im,
        }
    }
}

impl Mul for CRational {
    type Output = CRational;
    fn mul(self, o: CRational) -> CRational {
        CRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for CRational {
    type Output = CRational;
    fn div(self, o: CRational) -> CRational {
        self * o.inv().expect("division by zero Gaussian rational")
    }
}

impl Neg for CRational {
    type Output = CRational;
    fn neg(self) -> CRational {
        CRational {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl fmt::Display for CRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{} - {}i", self.re, -self.im.clone())
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}
