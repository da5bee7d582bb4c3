//! Approximate Lagrange interpolation over `Z[√2]`, exact Hermite-jet
//! interpolation, and Taylor-truncation density certificates on a disk.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::crat::{finite_crat, reduce_certificate, ResidueSystem};
use crate::error::{Error, Result};
use crate::numeric::{binomial, sqrt_lower_bound, CRational, Poly, QSqrt2, QuadInt};
use crate::ring::{disk_norm, CPoly, Element, RingContext};
use crate::rings::polyring::in_closed_disk;
use crate::rings::quadratic::certify_below;
use crate::rings::{quad_inverse_approx, PrincipalIdeal, RootPower};

pub type QuadPoly = Poly<QuadInt>;

/// Degree-`d` Taylor truncation `h` of `f/(z − w)^m` about 0, with a certified
/// bound on `V_R(h·(z − w)^m − f)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RungeApprox {
    pub h: CPoly,
    pub degree: usize,
    pub bound: BigRational,
}

/// Certified rational quantities describing the pole `w` relative to the disk.
struct PoleGeometry {
    /// `V_R((z − w)^m)`.
    factor_norm: BigRational,
    /// Rational lower bound `L <= |w|` with `L > R`.
    lower: BigRational,
    /// `1` when the taxicab modulus of powers of `w⁻¹` equals the modulus,
    /// `3/2 >= √2` otherwise.
    kappa: BigRational,
}

fn pole_geometry(w: &CRational, m: u32, radius: &BigRational) -> PoleGeometry {
    let factor_norm = disk_norm(&CPoly::linear(w.clone()).pow(m), radius);
    let on_axis = w.re.is_zero() || w.im.is_zero();
    let (lower, kappa) = if on_axis {
        (w.norm_inf(), BigRational::one())
    } else {
        let sq = w.modulus_sq();
        let mut bits = 8;
        let mut lower = sqrt_lower_bound(&sq, bits);
        while &lower <= radius {
            bits *= 2;
            lower = sqrt_lower_bound(&sq, bits);
        }
        (lower, BigRational::new(3.into(), 2.into()))
    };
    PoleGeometry {
        factor_norm,
        lower,
        kappa,
    }
}

/// `Σ_{i >= n} C(i+m−1, m−1) ρ^i`, bounded above through the ratio test:
/// consecutive terms shrink by at most `q_n = ρ(n+m)/(n+1)` from index `n` on.
/// `None` when `q_n >= 1`.
fn binomial_tail(n: usize, m: u32, rho: &BigRational) -> Option<BigRational> {
    let nn = BigRational::from_integer(BigInt::from(n));
    let mm = BigRational::from_integer(BigInt::from(m));
    let q = rho * (&nn + &mm) / (&nn + BigRational::one());
    if q >= BigRational::one() {
        return None;
    }
    let term = BigRational::from_integer(binomial(n as u64 + m as u64 - 1, m as u64 - 1))
        * crate::numeric::rational_pow(rho, n as u32);
    Some(term / (BigRational::one() - q))
}

/// Closed-form certified bound on the truncation error at degree `d`
/// (`d >= deg f`), or `None` when the ratio test does not apply yet.
pub fn runge_tail_bound(
    f: &CPoly,
    w: &CRational,
    m: u32,
    radius: &BigRational,
    d: usize,
) -> Option<BigRational> {
    let g = pole_geometry(w, m, radius);
    tail_bound_with(&g, f, m, radius, d)
}

fn tail_bound_with(
    g: &PoleGeometry,
    f: &CPoly,
    m: u32,
    radius: &BigRational,
    d: usize,
) -> Option<BigRational> {
    let deg = f.degree()?;
    if d < deg {
        return None;
    }
    let rho = radius / &g.lower;
    let mut sum = BigRational::zero();
    let mut rj = BigRational::one();
    for (j, c) in f.coeffs().iter().enumerate() {
        if !c.is_zero() {
            sum += c.norm1() * &rj * binomial_tail(d - j + 1, m, &rho)?;
        }
        rj *= radius;
    }
    let lm = crate::numeric::rational_pow(&g.lower, m);
    Some(&g.factor_norm * &g.kappa * sum / lm)
}

/// Taylor coefficients `a_i` of `(z − w)^(−m)` about 0 for `i <= d`.
fn inverse_power_series(w: &CRational, m: u32, d: usize) -> Vec<CRational> {
    let winv = w.inv().expect("pole outside a positive disk is nonzero");
    let sign = if m.is_multiple_of(2) {
        CRational::one()
    } else {
        -CRational::one()
    };
    let mut wpow = (0..m).fold(CRational::one(), |acc, _| acc * winv.clone());
    let mut out = Vec::with_capacity(d + 1);
    for i in 0..=d {
        let c = binomial(i as u64 + m as u64 - 1, m as u64 - 1);
        out.push(sign.clone() * wpow.clone() * CRational::real(BigRational::from_integer(c)));
        wpow = wpow * winv.clone();
    }
    out
}

/// Approximates `f` inside `⟨(z − w)^m⟩` for a pole `w` strictly outside the
/// disk `|z| <= R`.
pub fn runge_disk_densify(
    f: &CPoly,
    w: &CRational,
    m: u32,
    radius: &BigRational,
    eps: &BigRational,
) -> Result<RungeApprox> {
    runge_within(f, w, m, radius, eps, None).map(|r| r.expect("no degree cap"))
}

/// As [`runge_disk_densify`], giving up (`None`) once the truncation degree
/// would exceed `max_degree`.
pub fn runge_within(
    f: &CPoly,
    w: &CRational,
    m: u32,
    radius: &BigRational,
    eps: &BigRational,
    max_degree: Option<usize>,
) -> Result<Option<RungeApprox>> {
    if in_closed_disk(w, radius) {
        return Err(Error::PoleInsideDisk(w.to_string()));
    }
    if !eps.is_positive() {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let factor = CPoly::linear(w.clone()).pow(m);
    if let Some(h) = f.exact_div(&factor) {
        let degree = h.degree().unwrap_or(0);
        return Ok(Some(RungeApprox {
            h,
            degree,
            bound: BigRational::zero(),
        }));
    }
    let g = pole_geometry(w, m, radius);
    let mut d = f.degree().unwrap_or(0);
    let bound = loop {
        if max_degree.is_some_and(|cap| d > cap) {
            return Ok(None);
        }
        if let Some(b) = tail_bound_with(&g, f, m, radius, d) {
            if &b < eps {
                break b;
            }
        }
        d += 1;
    };
    let a = inverse_power_series(w, m, d);
    let h = CPoly::new(
        (0..=d)
            .map(|k| {
                (0..=k).fold(CRational::zero(), |acc, j| {
                    acc + f.coeff(j) * a[k - j].clone()
                })
            })
            .collect(),
    );
    Ok(Some(RungeApprox {
        h,
        degree: d,
        bound,
    }))
}

/// `a ∈ I` with `V_R(1 − a) <= bound < ε`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealDensity {
    pub a: CPoly,
    /// Degree of the Taylor truncation (0 when no truncation was needed).
    pub degree: usize,
    pub bound: BigRational,
}

/// Density certificate for `⟨(z − w)^m⟩` with `w` outside the disk.
pub fn ideal_density_certificate(
    w: &CRational,
    m: u32,
    radius: &BigRational,
    eps: &BigRational,
) -> Result<IdealDensity> {
    ideal_density_within(w, m, radius, eps, None).map(|d| d.expect("no degree cap"))
}

pub fn ideal_density_within(
    w: &CRational,
    m: u32,
    radius: &BigRational,
    eps: &BigRational,
    max_degree: Option<usize>,
) -> Result<Option<IdealDensity>> {
    if m == 0 {
        return Ok(Some(IdealDensity {
            a: CPoly::one(),
            degree: 0,
            bound: BigRational::zero(),
        }));
    }
    let Some(r) = runge_within(&CPoly::one(), w, m, radius, eps, max_degree)? else {
        return Ok(None);
    };
    let a = &r.h * &CPoly::linear(w.clone()).pow(m);
    Ok(Some(IdealDensity {
        a,
        degree: r.degree,
        bound: r.bound,
    }))
}

/// Density certificate for `Π (z − w_k)^(m_k)`: the product of per-factor
/// certificates at `min(ε, 1)/(2k)` each. The recorded bound is the exact
/// `V_R(1 − a)`.
pub fn product_density_certificate(
    factors: &[RootPower],
    radius: &BigRational,
    eps: &BigRational,
) -> Result<IdealDensity> {
    product_density_within(factors, radius, eps, None).map(|d| d.expect("no degree cap"))
}

pub fn product_density_within(
    factors: &[RootPower],
    radius: &BigRational,
    eps: &BigRational,
    max_degree: Option<usize>,
) -> Result<Option<IdealDensity>> {
    let live: Vec<&RootPower> = factors.iter().filter(|f| f.mult > 0).collect();
    if live.len() == 1 {
        return ideal_density_within(&live[0].root, live[0].mult, radius, eps, max_degree);
    }
    let base = if eps > &BigRational::one() {
        BigRational::one()
    } else {
        eps.clone()
    };
    let each = base / BigRational::from_integer(BigInt::from(2 * live.len().max(1)));
    let mut a = CPoly::one();
    let mut degree = 0;
    for f in live {
        let Some(c) = ideal_density_within(&f.root, f.mult, radius, &each, max_degree)? else {
            return Ok(None);
        };
        a = &a * &c.a;
        degree = degree.max(c.degree);
    }
    let bound = disk_norm(&(&CPoly::one() - &a), radius);
    debug_assert!(&bound < eps);
    Ok(Some(IdealDensity { a, degree, bound }))
}

/// Residual of an approximate Lagrange interpolant at one node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LagrangeResidual {
    pub point: QuadInt,
    pub value: QuadInt,
    /// `|p(x_i) − y_i|`, exactly.
    pub residual: QSqrt2,
    /// Rational upper bound on `residual`, below `ε`.
    pub bound: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LagrangeResult {
    pub poly: QuadPoly,
    /// `c_i` in `p = Σ c_i ℓ_i`.
    pub weights: Vec<QuadInt>,
    pub residuals: Vec<LagrangeResidual>,
    pub eps: BigRational,
}

/// Approximate inverse in `Z[√2]`: `s` with `|s·d − 1| < ε`.
pub type InverseOracle<'a> = dyn Fn(&QuadInt, &BigRational) -> Result<QuadInt> + 'a;

fn default_inverse(d: &QuadInt, eps: &BigRational) -> Result<QuadInt> {
    Ok(quad_inverse_approx(d, eps)?.value)
}

/// `p ∈ Z[√2][x]` with `|p(x_i) − y_i| < ε` at every node.
pub fn lagrange_dense(
    points: &[QuadInt],
    values: &[QuadInt],
    eps: &BigRational,
) -> Result<LagrangeResult> {
    lagrange_dense_with(points, values, eps, &default_inverse)
}

/// As [`lagrange_dense`], with a caller-supplied approximate inverse. The
/// oracle's answers are re-checked exactly.
pub fn lagrange_dense_with(
    points: &[QuadInt],
    values: &[QuadInt],
    eps: &BigRational,
    inverse: &InverseOracle<'_>,
) -> Result<LagrangeResult> {
    if points.len() != values.len() || points.is_empty() {
        return Err(Error::InvalidInput(
            "need as many values as points, at least one".into(),
        ));
    }
    if !eps.is_positive() {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    for (k, x) in points.iter().enumerate() {
        if points[..k].contains(x) {
            return Err(Error::DuplicatePoints);
        }
    }
    let n = points.len();
    let nn = BigRational::from_integer(BigInt::from(n));
    let mut poly = QuadPoly::zero();
    let mut weights = Vec::with_capacity(n);
    for (i, (xi, yi)) in points.iter().zip(values).enumerate() {
        let ell = points
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .fold(QuadPoly::one(), |acc, (_, xj)| {
                &acc * &QuadPoly::linear(xj.clone())
            });
        let c = if yi.is_zero() {
            QuadInt::zero()
        } else {
            let scale = yi.abs_value().upper_bound(8).max(BigRational::one());
            let eps_i = eps / (&nn * scale);
            yi * &inverse(&ell.eval(xi), &eps_i)?
        };
        poly = &poly + &ell.scale(&c);
        weights.push(c);
    }
    let mut residuals = Vec::with_capacity(n);
    for (xi, yi) in points.iter().zip(values) {
        let residual = (&poly.eval(xi) - yi).abs_value();
        let (bound, _) = certify_below(&residual, eps).ok_or_else(|| {
            Error::ToleranceViolation(format!("residual {residual} at {xi} is not below {eps}"))
        })?;
        residuals.push(LagrangeResidual {
            point: xi.clone(),
            value: yi.clone(),
            residual,
            bound,
        });
    }
    Ok(LagrangeResult {
        poly,
        weights,
        residuals,
        eps: eps.clone(),
    })
}

/// Re-evaluates a Lagrange certificate with `factor`× as many bits of `√2`
/// and reports whether every residual is still certified below `ε`.
pub fn lagrange_recheck(res: &LagrangeResult, factor: u32) -> bool {
    res.residuals.iter().all(|r| {
        let direct = (&res.poly.eval(&r.point) - &r.value).abs_value();
        let size = direct.irr.numer().bits() + direct.irr.denom().bits();
        let bits = factor.saturating_mul(32 + u32::try_from(size).unwrap_or(u32::MAX / 64));
        direct == r.residual && direct.upper_bound(bits) < res.eps
    })
}

/// Prescribed jet at one node: `f^(k)(z) = k!·w_k` for `k <= m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Jet {
    pub point: CRational,
    pub values: Vec<CRational>,
}

/// Exact Hermite interpolation: the unique `f` of degree `< Σ(m_n + 1)`
/// matching every jet, obtained from the exact CRT over `⟨(z − z_n)^(m_n+1)⟩`.
pub fn hermite_jets(jets: &[Jet]) -> Result<CPoly> {
    if jets.is_empty() {
        return Err(Error::EmptySystem);
    }
    for (k, j) in jets.iter().enumerate() {
        if j.values.is_empty() {
            return Err(Error::InvalidInput(format!(
                "jet at {} has no values",
                j.point
            )));
        }
        if jets[..k].iter().any(|o| o.point == j.point) {
            return Err(Error::DuplicatePoints);
        }
    }
    let ctx = RingContext::poly(BigRational::one())?;
    let entries = jets
        .iter()
        .map(|j| {
            let ideal = PrincipalIdeal::root_power(j.point.clone(), j.values.len() as u32);
            let shift = CPoly::linear(j.point.clone());
            let target = j
                .values
                .iter()
                .enumerate()
                .fold(CPoly::zero(), |acc, (k, w)| {
                    &acc + &shift.pow(k as u32).scale(w)
                });
            (ideal, Element::Poly(target))
        })
        .collect();
    let sys = ResidueSystem::new(ctx, entries, BigRational::zero())?;
    let cert = reduce_certificate(&finite_crat(&sys)?)?;
    let f = cert
        .solution
        .as_poly()
        .expect("polynomial solution")
        .clone();
    if !jets_match(&f, jets) {
        return Err(Error::ToleranceViolation(
            "interpolant misses a prescribed jet".into(),
        ));
    }
    Ok(f)
}

/// `f^(k)(z_n) == k!·w_{k,n}` for every prescribed value, by exact
/// symbolic differentiation.
pub fn jets_match(f: &CPoly, jets: &[Jet]) -> bool {
    jets.iter().all(|j| {
        let mut d = f.clone();
        let mut fact = BigInt::one();
        j.values.iter().enumerate().all(|(k, w)| {
            if k > 0 {
                d = d.derivative();
                fact *= BigInt::from(k);
            }
            d.eval(&j.point) == w.scale(&BigRational::from_integer(fact.clone()))
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    fn c(n: i64) -> CRational {
        CRational::from_int(n)
    }

    #[test]
    fn runge_worked_example() {
        let r = runge_disk_densify(&CPoly::one(), &c(2), 1, &rat(1, 1), &rat(1, 100)).unwrap();
        assert_eq!(r.degree, 8);
        assert_eq!(r.bound, rat(3, 512));
        let want: Vec<_> = (0..=8)
            .map(|k| CRational::real(rat(-1, 1 << (k + 1))))
            .collect();
        assert_eq!(r.h.coeffs(), want.as_slice());
        let err = &(&r.h * &CPoly::linear(c(2))) - &CPoly::one();
        assert!(disk_norm(&err, &rat(1, 1)) <= r.bound);
    }

    #[test]
    fn runge_exact_and_errors() {
        let g = CPoly::new(vec![c(1), c(2)]);
        let f = &g * &CPoly::linear(c(3));
        let r = runge_disk_densify(&f, &c(3), 1, &rat(1, 1), &rat(1, 100)).unwrap();
        assert_eq!((r.h, r.bound), (g, rat(0, 1)));
        let r = runge_disk_densify(&CPoly::zero(), &c(3), 1, &rat(1, 1), &rat(1, 100)).unwrap();
        assert!(r.h.is_zero());
        assert!(matches!(
            runge_disk_densify(&CPoly::one(), &c(1), 1, &rat(1, 1), &rat(1, 100)),
            Err(Error::PoleInsideDisk(_))
        ));
    }

    #[test]
    fn off_axis_pole() {
        let w = CRational::new(rat(4, 5), rat(4, 5));
        let r = runge_disk_densify(&CPoly::one(), &w, 2, &rat(1, 1), &rat(1, 10)).unwrap();
        let err = &(&r.h * &CPoly::linear(w).pow(2)) - &CPoly::one();
        assert!(disk_norm(&err, &rat(1, 1)) <= r.bound);
        assert!(r.bound < rat(1, 10));
    }

    #[test]
    fn density_certificates() {
        let d = ideal_density_certificate(&c(2), 1, &rat(1, 1), &rat(1, 100)).unwrap();
        assert_eq!((d.degree, d.bound.clone()), (8, rat(3, 512)));
        let d = ideal_density_certificate(&c(10), 2, &rat(1, 1), &rat(1, 100)).unwrap();
        assert!(d.degree <= 3);
        let d = ideal_density_certificate(&c(5), 0, &rat(1, 1), &rat(1, 100)).unwrap();
        assert_eq!(d.a, CPoly::one());
        let fs = [RootPower::new(c(3), 1), RootPower::new(c(-4), 2)];
        let d = product_density_certificate(&fs, &rat(1, 1), &rat(1, 100)).unwrap();
        assert!(d.bound < rat(1, 100));
    }

    #[test]
    fn lagrange_worked_example() {
        let pts = [QuadInt::from_int(0), QuadInt::from_int(3)];
        let vals = [QuadInt::from_int(1), QuadInt::from_int(0)];
        let res = lagrange_dense(&pts, &vals, &rat(1, 100)).unwrap();
        let want = &QuadPoly::linear(QuadInt::from_int(3)).scale(&QuadInt::new(192, -136));
        assert_eq!(&res.poly, want);
        assert_eq!(res.residuals[0].residual, QuadInt::new(577, -408).to_real());
        assert!(res.residuals[1].residual.is_zero());
        assert!(lagrange_recheck(&res, 10));
    }

    #[test]
    fn lagrange_trivial_cases() {
        let res = lagrange_dense(
            &[QuadInt::from_int(0), QuadInt::from_int(1)],
            &[QuadInt::from_int(0), QuadInt::from_int(1)],
            &rat(1, 10),
        )
        .unwrap();
        assert_eq!(res.poly, QuadPoly::monomial(QuadInt::one(), 1));
        let res =
            lagrange_dense(&[QuadInt::new(2, 1)], &[QuadInt::new(7, -3)], &rat(1, 10)).unwrap();
        assert_eq!(res.poly, QuadPoly::constant(QuadInt::new(7, -3)));
        assert_eq!(
            lagrange_dense(
                &[QuadInt::from_int(1), QuadInt::from_int(1)],
                &[QuadInt::one(), QuadInt::one()],
                &rat(1, 10)
            ),
            Err(Error::DuplicatePoints)
        );
    }

    #[test]
    fn hermite_examples() {
        let f = hermite_jets(&[Jet {
            point: c(0),
            values: vec![c(0), c(1)],
        }])
        .unwrap();
        assert_eq!(f, CPoly::monomial(c(1), 1));
        let f = hermite_jets(&[
            Jet {
                point: c(0),
                values: vec![c(1)],
            },
            Jet {
                point: c(1),
                values: vec![c(2)],
            },
        ])
        .unwrap();
        assert_eq!(f, CPoly::new(vec![c(1), c(1)]));
        let f = hermite_jets(&[
            Jet {
                point: c(0),
                values: vec![c(0), c(0)],
            },
            Jet {
                point: c(1),
                values: vec![c(1), c(0)],
            },
        ])
        .unwrap();
        assert_eq!(f, CPoly::new(vec![c(0), c(0), c(3), c(-2)]));
    }
}
