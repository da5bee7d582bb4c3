use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::{CRational, QuadInt};
use crate::ring::{CPoly, Element, RingContext, RingKind};

/// One factor `(z - root)^mult` of a polynomial generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootPower {
    pub root: CRational,
    pub mult: u32,
}

impl RootPower {
    pub fn new(root: CRational, mult: u32) -> Self {
        RootPower { root, mult }
    }

    pub fn poly(&self) -> CPoly {
        CPoly::linear(self.root.clone()).pow(self.mult)
    }
}

/// An ideal generated by a single element.
///
/// Integer generators are kept nonnegative, polynomial generators monic;
/// the zero ideal has generator `0`. Polynomial ideals built from roots keep
/// their factored form sorted by root.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrincipalIdeal {
    pub generator: Element,
    pub factors: Option<Vec<RootPower>>,
}

impl PrincipalIdeal {
    pub fn int(n: impl Into<BigInt>) -> Self {
        PrincipalIdeal {
            generator: Element::Int(n.into().abs()),
            factors: None,
        }
    }

    pub fn quad(q: QuadInt) -> Self {
        PrincipalIdeal {
            generator: Element::Quad(q),
            factors: None,
        }
    }

    /// `Π (z - root)^mult`; repeated roots are merged and zero multiplicities dropped.
    pub fn from_roots(factors: impl IntoIterator<Item = RootPower>) -> Self {
        let mut merged: BTreeMap<CRational, u32> = BTreeMap::new();
        for f in factors {
            if f.mult > 0 {
                *merged.entry(f.root).or_insert(0) += f.mult;
            }
        }
        let factors: Vec<RootPower> = merged
            .into_iter()
            .map(|(root, mult)| RootPower { root, mult })
            .collect();
        let generator = factors.iter().fold(CPoly::one(), |acc, f| &acc * &f.poly());
        PrincipalIdeal {
            generator: Element::Poly(generator),
            factors: Some(factors),
        }
    }

    /// `⟨(z - root)^mult⟩`.
    pub fn root_power(root: CRational, mult: u32) -> Self {
        Self::from_roots([RootPower::new(root, mult)])
    }

    /// A polynomial ideal given only by its generator (normalized to be monic).
    pub fn poly(f: CPoly) -> Self {
        PrincipalIdeal {
            generator: Element::Poly(f.monic()),
            factors: None,
        }
    }

    pub fn whole(ctx: &RingContext) -> Self {
        match ctx.kind {
            RingKind::Poly { .. } => Self::from_roots([]),
            _ => PrincipalIdeal {
                generator: ctx.one(),
                factors: None,
            },
        }
    }

    pub fn zero(ctx: &RingContext) -> Self {
        PrincipalIdeal {
            generator: ctx.zero(),
            factors: None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.generator.is_zero()
    }

    /// True when the generator is a unit, i.e. the ideal is the whole ring.
    pub fn is_whole(&self) -> bool {
        match &self.generator {
            Element::Int(n) => n.is_one(),
            Element::Quad(q) => q.is_unit(),
            Element::Poly(f) => f.degree() == Some(0),
        }
    }

    pub fn check(&self, ctx: &RingContext) -> Result<()> {
        ctx.check(&self.generator)
    }

    pub fn int_generator(&self) -> Result<&BigInt> {
        self.generator
            .as_int()
            .ok_or_else(|| Error::WrongRing(format!("ideal {self} is not an integer ideal")))
    }

    pub fn poly_generator(&self) -> Result<&CPoly> {
        self.generator
            .as_poly()
            .ok_or_else(|| Error::WrongRing(format!("ideal {self} is not a polynomial ideal")))
    }

    /// Factored form, or an error when the ideal was given by generator only.
    pub fn root_powers(&self) -> Result<&[RootPower]> {
        self.factors.as_deref().ok_or_else(|| {
            Error::InvalidInput(format!(
                "ideal {self} needs a factored form (list of roots)"
            ))
        })
    }

    /// Membership by exact division by the generator.
    pub fn contains(&self, x: &Element) -> Result<bool> {
        match (&self.generator, x) {
            (Element::Int(g), Element::Int(n)) => Ok(if g.is_zero() {
                n.is_zero()
            } else {
                n.is_multiple_of(g)
            }),
            (Element::Quad(g), Element::Quad(q)) => Ok(if g.is_zero() {
                q.is_zero()
            } else {
                q.exact_div(g).is_some()
            }),
            (Element::Poly(g), Element::Poly(f)) => Ok(g.divides(f)),
            _ => Err(Error::MixedRings),
        }
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &PrincipalIdeal) -> Result<bool> {
        other.contains(&self.generator)
    }

    /// The product ideal.
    pub fn product(&self, other: &PrincipalIdeal) -> Result<PrincipalIdeal> {
        match (&self.factors, &other.factors) {
            (Some(a), Some(b)) => Ok(Self::from_roots(a.iter().chain(b).cloned())),
            _ => {
                let g = self.generator.mul(&other.generator)?;
                Ok(match g {
                    Element::Int(n) => Self::int(n),
                    Element::Quad(q) => Self::quad(q),
                    Element::Poly(f) => Self::poly(f),
                })
            }
        }
    }
}

impl fmt::Display for PrincipalIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.generator, &self.factors) {
            (Element::Int(n), _) => write!(f, "{n}Z"),
            (Element::Quad(q), _) => write!(f, "⟨{q}⟩"),
            (_, Some(fs)) if fs.is_empty() => write!(f, "⟨1⟩"),
            (_, Some(fs)) => {
                write!(f, "⟨")?;
                for (k, rp) in fs.iter().enumerate() {
                    if k > 0 {
                        write!(f, "·")?;
                    }
                    write!(f, "(z - ({}))", rp.root)?;
                    if rp.mult > 1 {
                        write!(f, "^{}", rp.mult)?;
                    }
                }
                write!(f, "⟩")
            }
            (g, None) => write!(f, "⟨{g}⟩"),
        }
    }
}

fn merge_roots(a: &[RootPower], b: &[RootPower], pick: impl Fn(u32, u32) -> u32) -> PrincipalIdeal {
    let mut m: BTreeMap<CRational, (u32, u32)> = BTreeMap::new();
    for f in a {
        m.entry(f.root.clone()).or_default().0 = f.mult;
    }
    for f in b {
        m.entry(f.root.clone()).or_default().1 = f.mult;
    }
    PrincipalIdeal::from_roots(m.into_iter().map(|(root, (x, y))| RootPower {
        root,
        mult: pick(x, y),
    }))
}

/// Join `I + J`: gcd of generators (minimum multiplicities for factored forms).
pub fn ideal_add(i: &PrincipalIdeal, j: &PrincipalIdeal) -> Result<PrincipalIdeal> {
    match (&i.generator, &j.generator) {
        (Element::Int(a), Element::Int(b)) => Ok(PrincipalIdeal::int(a.gcd(b))),
        (Element::Poly(a), Element::Poly(b)) => Ok(match (&i.factors, &j.factors) {
            (Some(x), Some(y)) => merge_roots(x, y, u32::min),
            _ if i.is_zero() => j.clone(),
            _ if j.is_zero() => i.clone(),
            _ => PrincipalIdeal::poly(CPoly::ext_gcd(a, b).0),
        }),
        (Element::Quad(_), Element::Quad(_)) => {
            Err(Error::UnsupportedRing("ideal join in Z[√2]".into()))
        }
        _ => Err(Error::MixedRings),
    }
}

/// Meet `I ∩ J`: lcm of generators (maximum multiplicities for factored forms).
pub fn ideal_meet(i: &PrincipalIdeal, j: &PrincipalIdeal) -> Result<PrincipalIdeal> {
    match (&i.generator, &j.generator) {
        (Element::Int(a), Element::Int(b)) => Ok(PrincipalIdeal::int(a.lcm(b))),
        (Element::Poly(a), Element::Poly(b)) => Ok(match (&i.factors, &j.factors) {
            (Some(x), Some(y)) => merge_roots(x, y, u32::max),
            _ if i.is_zero() || j.is_zero() => PrincipalIdeal::poly(CPoly::zero()),
            _ => {
                let g = CPoly::ext_gcd(a, b).0;
                let l = (a * b).exact_div(&g).expect("gcd divides the product");
                PrincipalIdeal::poly(l)
            }
        }),
        (Element::Quad(_), Element::Quad(_)) => {
            Err(Error::UnsupportedRing("ideal meet in Z[√2]".into()))
        }
        _ => Err(Error::MixedRings),
    }
}
