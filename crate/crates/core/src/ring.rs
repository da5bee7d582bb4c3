//! Pseudo-valuated rings: contexts, elements, valuations, balls and the
//! axiom-checking harness.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::{fmt_rational, padic_order, CRational, Poly, QSqrt2, QuadInt};

pub type CPoly = Poly<CRational>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingKind {
    /// `Z` with the `p`-adic topology.
    Padic { p: BigInt },
    /// `Z[√2] ⊂ R` with the absolute value.
    Quad,
    /// `Q(i)[z]` with the weighted ℓ1 norm on the closed disk `|z| <= radius`.
    Poly { radius: BigRational },
}

/// A concrete ring instance.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingContext {
    pub kind: RingKind,
}

fn is_prime(p: &BigInt) -> bool {
    if *p < BigInt::from(2) {
        return false;
    }
    let mut d = BigInt::from(2);
    while &d * &d <= *p {
        if p.is_multiple_of(&d) {
            return false;
        }
        d += 1;
    }
    true
}

impl RingContext {
    pub fn padic(p: impl Into<BigInt>) -> Result<Self> {
        let p = p.into();
        if !is_prime(&p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        Ok(RingContext {
            kind: RingKind::Padic { p },
        })
    }

    pub fn quad() -> Self {
        RingContext {
            kind: RingKind::Quad,
        }
    }

    pub fn poly(radius: BigRational) -> Result<Self> {
        if !radius.is_positive() {
            return Err(Error::InvalidInput(format!(
                "disk radius {radius} must be positive"
            )));
        }
        Ok(RingContext {
            kind: RingKind::Poly { radius },
        })
    }

    /// Short identifier of the standard valuation, e.g. `V_3` or `V_R(1/1)`.
    pub fn id(&self) -> String {
        match &self.kind {
            RingKind::Padic { p } => format!("V_{p}"),
            RingKind::Quad => "abs".to_string(),
            RingKind::Poly { radius } => format!("V_R({})", fmt_rational(radius)),
        }
    }

    pub fn prime(&self) -> Result<&BigInt> {
        match &self.kind {
            RingKind::Padic { p } => Ok(p),
            _ => Err(Error::WrongRing(format!(
                "{} is not a p-adic context",
                self.id()
            ))),
        }
    }

    pub fn radius(&self) -> Result<&BigRational> {
        match &self.kind {
            RingKind::Poly { radius } => Ok(radius),
            _ => Err(Error::WrongRing(format!(
                "{} is not a polynomial context",
                self.id()
            ))),
        }
    }

    pub fn zero(&self) -> Element {
        self.from_int(0)
    }

    pub fn one(&self) -> Element {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> Element {
        match self.kind {
            RingKind::Padic { .. } => Element::Int(BigInt::from(n)),
            RingKind::Quad => Element::Quad(QuadInt::from_int(n)),
            RingKind::Poly { .. } => Element::Poly(CPoly::constant(CRational::from_int(n))),
        }
    }

    pub fn contains(&self, x: &Element) -> bool {
        matches!(
            (&self.kind, x),
            (RingKind::Padic { .. }, Element::Int(_))
                | (RingKind::Quad, Element::Quad(_))
                | (RingKind::Poly { .. }, Element::Poly(_))
        )
    }

    pub fn check(&self, x: &Element) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::WrongRing(format!(
                "{x} is not an element of {}",
                self.id()
            )))
        }
    }

    /// The standard valuation of the context, exactly.
    pub fn valuation(&self, x: &Element) -> Result<QSqrt2> {
        self.check(x)?;
        Ok(match (&self.kind, x) {
            (RingKind::Quad, Element::Quad(q)) => q.abs_value(),
            _ => QSqrt2::from_rational(self.norm(x)?),
        })
    }

    /// The standard valuation for the rational-valued kinds (p-adic, poly).
    pub fn norm(&self, x: &Element) -> Result<BigRational> {
        self.check(x)?;
        match (&self.kind, x) {
            (RingKind::Padic { p }, Element::Int(n)) => Ok(padic_norm(n, p)),
            (RingKind::Poly { radius }, Element::Poly(f)) => Ok(disk_norm(f, radius)),
            _ => Err(Error::UnsupportedRing(
                "Z[√2] absolute values are irrational; use valuation()".into(),
            )),
        }
    }
}

impl RingContext {
    /// Rational upper bound for the standard valuation: exact for the p-adic
    /// and polynomial kinds, within `2^-32` for `Z[√2]`.
    pub fn value_bound(&self, x: &Element) -> Result<BigRational> {
        let v = self.valuation(x)?;
        Ok(match v.as_rational() {
            Some(q) => q.clone(),
            None => {
                let size = v.irr.numer().bits() + v.irr.denom().bits();
                v.upper_bound(32 + u32::try_from(size).unwrap_or(u32::MAX / 4))
            }
        })
    }
}

impl fmt::Display for RingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            RingKind::Padic { p } => write!(f, "Z ({p}-adic)"),
            RingKind::Quad => write!(f, "Z[√2]"),
            RingKind::Poly { radius } => write!(f, "Q(i)[z] on |z| <= {radius}"),
        }
    }
}

/// `p^(-v_p(n))`, and `0` for `n = 0`.
pub fn padic_norm(n: &BigInt, p: &BigInt) -> BigRational {
    match padic_order(n, p) {
        None => BigRational::zero(),
        Some(v) => BigRational::new(BigInt::one(), num_traits::pow(p.clone(), v as usize)),
    }
}

/// Weighted ℓ1 norm `Σ |c_k|₁ R^k` with the taxicab modulus `|re| + |im|`.
pub fn disk_norm(f: &CPoly, radius: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    let mut rk = BigRational::one();
    for c in f.coeffs() {
        acc += c.norm1() * &rk;
        rk *= radius;
    }
    acc
}

/// An element of one of the concrete rings.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Element {
    Int(BigInt),
    Quad(QuadInt),
    Poly(CPoly),
}

impl Element {
    pub fn int(n: impl Into<BigInt>) -> Self {
        Element::Int(n.into())
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Element::Int(n) => n.is_zero(),
            Element::Quad(q) => q.is_zero(),
            Element::Poly(f) => f.is_zero(),
        }
    }

    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            Element::Int(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_quad(&self) -> Option<&QuadInt> {
        match self {
            Element::Quad(q) => Some(q),
            _ => None,
        }
    }

    pub fn as_poly(&self) -> Option<&CPoly> {
        match self {
            Element::Poly(f) => Some(f),
            _ => None,
        }
    }

    pub fn add(&self, o: &Element) -> Result<Element> {
        match (self, o) {
            (Element::Int(a), Element::Int(b)) => Ok(Element::Int(a + b)),
            (Element::Quad(a), Element::Quad(b)) => Ok(Element::Quad(a + b)),
            (Element::Poly(a), Element::Poly(b)) => Ok(Element::Poly(a + b)),
            _ => Err(Error::MixedRings),
        }
    }

    pub fn sub(&self, o: &Element) -> Result<Element> {
        match (self, o) {
            (Element::Int(a), Element::Int(b)) => Ok(Element::Int(a - b)),
            (Element::Quad(a), Element::Quad(b)) => Ok(Element::Quad(a - b)),
            (Element::Poly(a), Element::Poly(b)) => Ok(Element::Poly(a - b)),
            _ => Err(Error::MixedRings),
        }
    }

    pub fn mul(&self, o: &Element) -> Result<Element> {
        match (self, o) {
            (Element::Int(a), Element::Int(b)) => Ok(Element::Int(a * b)),
            (Element::Quad(a), Element::Quad(b)) => Ok(Element::Quad(a * b)),
            (Element::Poly(a), Element::Poly(b)) => Ok(Element::Poly(a * b)),
            _ => Err(Error::MixedRings),
        }
    }

    pub fn neg(&self) -> Element {
        match self {
            Element::Int(a) => Element::Int(-a),
            Element::Quad(a) => Element::Quad(-a.clone()),
            Element::Poly(a) => Element::Poly(-a),
        }
    }

    /// `1 - self` in the same ring.
    pub fn one_minus(&self) -> Element {
        match self {
            Element::Int(a) => Element::Int(BigInt::one() - a),
            Element::Quad(a) => Element::Quad(QuadInt::one() - a.clone()),
            Element::Poly(a) => Element::Poly(&CPoly::one() - a),
        }
    }

    fn same_ring(&self, o: &Element) -> bool {
        std::mem::discriminant(self) == std::mem::discriminant(o)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Int(n) => write!(f, "{n}"),
            Element::Quad(q) => write!(f, "{q}"),
            Element::Poly(p) => write!(f, "{p}"),
        }
    }
}

/// A nonnegative, subadditive, submultiplicative, symmetric function with
/// `V(0) = 0`. Values are exact elements of `Q(√2)`.
pub trait PseudoValuation: Send + Sync {
    fn id(&self) -> String;
    fn context(&self) -> &RingContext;
    fn evaluate(&self, x: &Element) -> Result<QSqrt2>;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValuationKind {
    /// The context's own valuation (`V_p`, `|·|`, or `V_R`).
    Standard,
    /// `max_k |f(z_k)|₁` over a finite sample set (poly contexts only).
    PointSup(Vec<CRational>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Valuation {
    ctx: RingContext,
    kind: ValuationKind,
}

impl Valuation {
    pub fn standard(ctx: &RingContext) -> Self {
        Valuation {
            ctx: ctx.clone(),
            kind: ValuationKind::Standard,
        }
    }

    pub fn point_sup(ctx: &RingContext, points: Vec<CRational>) -> Result<Self> {
        ctx.radius()?;
        Ok(Valuation {
            ctx: ctx.clone(),
            kind: ValuationKind::PointSup(points),
        })
    }
}

impl PseudoValuation for Valuation {
    fn id(&self) -> String {
        match &self.kind {
            ValuationKind::Standard => self.ctx.id(),
            ValuationKind::PointSup(pts) => {
                let pts: Vec<String> = pts.iter().map(|z| z.to_string()).collect();
                format!("V_K{{{}}}", pts.join(", "))
            }
        }
    }

    fn context(&self) -> &RingContext {
        &self.ctx
    }

    fn evaluate(&self, x: &Element) -> Result<QSqrt2> {
        match &self.kind {
            ValuationKind::Standard => self.ctx.valuation(x),
            ValuationKind::PointSup(pts) => {
                self.ctx.check(x)?;
                let f = x.as_poly().expect("checked poly element");
                let best = pts.iter().map(|z| f.eval(z).norm1()).max();
                Ok(QSqrt2::from_rational(
                    best.unwrap_or_else(BigRational::zero),
                ))
            }
        }
    }
}

/// Open ball `{x : V(x - center) < radius}`.
pub struct Ball<'a> {
    pub valuation: &'a dyn PseudoValuation,
    pub radius: BigRational,
    pub center: Element,
}

impl<'a> Ball<'a> {
    pub fn around_zero(valuation: &'a dyn PseudoValuation, radius: BigRational) -> Self {
        let center = valuation.context().zero();
        Ball {
            valuation,
            radius,
            center,
        }
    }
}

pub fn ball_contains(b: &Ball<'_>, x: &Element) -> Result<bool> {
    if !x.same_ring(&b.center) {
        return Err(Error::MixedRings);
    }
    let v = b.valuation.evaluate(&x.sub(&b.center)?)?;
    Ok(v < QSqrt2::from_rational(b.radius.clone()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    SubAdditive = 1,
    SubMultiplicative = 2,
    Symmetric = 3,
    ZeroAtZero = 4,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub x: Element,
    pub y: Element,
}

fn check_sample_rings(v: &dyn PseudoValuation, samples: &[(Element, Element)]) -> Result<()> {
    let ctx = v.context();
    for (x, y) in samples {
        if !ctx.contains(x) || !ctx.contains(y) {
            return Err(Error::MixedRings);
        }
    }
    Ok(())
}

/// Checks the four pseudo-valuation axioms on every sample pair. An empty
/// result means no violation was found.
pub fn pv_axiom_check(
    v: &dyn PseudoValuation,
    samples: &[(Element, Element)],
) -> Result<Vec<AxiomViolation>> {
    check_sample_rings(v, samples)?;
    let mut out = Vec::new();
    let zero = v.context().zero();
    if !v.evaluate(&zero)?.is_zero() {
        out.push(AxiomViolation {
            axiom: Axiom::ZeroAtZero,
            x: zero.clone(),
            y: zero,
        });
    }
    for (x, y) in samples {
        let vx = v.evaluate(x)?;
        let vy = v.evaluate(y)?;
        let mut flag = |axiom| {
            out.push(AxiomViolation {
                axiom,
                x: x.clone(),
                y: y.clone(),
            })
        };
        if v.evaluate(&x.add(y)?)? > &vx + &vy {
            flag(Axiom::SubAdditive);
        }
        if v.evaluate(&x.mul(y)?)? > &vx * &vy {
            flag(Axiom::SubMultiplicative);
        }
        if v.evaluate(&x.neg())? != vx || v.evaluate(&y.neg())? != vy {
            flag(Axiom::Symmetric);
        }
        if !v.evaluate(&x.sub(x)?)?.is_zero() {
            flag(Axiom::ZeroAtZero);
        }
    }
    out.dedup();
    Ok(out)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BallArithmeticReport {
    /// Pairs with `x ∈ B(ε)` and `y ∈ B(δ)`, on which the inclusions were tested.
    pub checked: usize,
    /// Pairs outside the hypothesis.
    pub vacuous: usize,
    pub violations: Vec<(Element, Element)>,
}

/// Tests `B(ε) + B(δ) ⊆ B(ε + δ)` and `B(ε)·B(δ) ⊆ B(εδ)` on the samples.
pub fn ball_arithmetic_check(
    v: &dyn PseudoValuation,
    eps: &BigRational,
    delta: &BigRational,
    samples: &[(Element, Element)],
) -> Result<BallArithmeticReport> {
    if !eps.is_positive() || !delta.is_positive() {
        return Err(Error::InvalidInput("radii must be positive".into()));
    }
    check_sample_rings(v, samples)?;
    let be = Ball::around_zero(v, eps.clone());
    let bd = Ball::around_zero(v, delta.clone());
    let bsum = Ball::around_zero(v, eps + delta);
    let bprod = Ball::around_zero(v, eps * delta);
    let mut report = BallArithmeticReport::default();
    for (x, y) in samples {
        if !(ball_contains(&be, x)? && ball_contains(&bd, y)?) {
            report.vacuous += 1;
            continue;
        }
        report.checked += 1;
        if !ball_contains(&bsum, &x.add(y)?)? || !ball_contains(&bprod, &x.mul(y)?)? {
            report.violations.push((x.clone(), y.clone()));
        }
    }
    Ok(report)
}
