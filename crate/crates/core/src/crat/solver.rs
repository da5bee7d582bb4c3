//! Finite and finite-exception Chinese remainder approximation.

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::interp::product_density_certificate;
use crate::numeric::{centered_mod, mod_inverse, padic_level};
use crate::ring::{Element, RingContext, RingKind};
use crate::rings::polyring::in_closed_disk;
use crate::rings::{ideal_meet, PrincipalIdeal};

use super::{intersection_witness, TcmWitness};

/// Targets `r_k` modulo ideals `I_k`, to be matched within `ε` (exactly when
/// `ε = 0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueSystem {
    pub ring: RingContext,
    pub entries: Vec<(PrincipalIdeal, Element)>,
    pub eps: BigRational,
}

impl ResidueSystem {
    pub fn new(
        ring: RingContext,
        entries: Vec<(PrincipalIdeal, Element)>,
        eps: BigRational,
    ) -> Result<Self> {
        if eps < BigRational::zero() {
            return Err(Error::InvalidInput("tolerance must be nonnegative".into()));
        }
        for (k, (ideal, target)) in entries.iter().enumerate() {
            ideal.check(&ring)?;
            ring.check(target)?;
            if entries[..k].iter().any(|(other, _)| other == ideal) {
                return Err(Error::InvalidInput(format!("ideal {ideal} appears twice")));
            }
        }
        Ok(ResidueSystem { ring, entries, eps })
    }

    pub fn ideals(&self) -> Vec<PrincipalIdeal> {
        self.entries.iter().map(|(i, _)| i.clone()).collect()
    }
}

/// `V(solution − target − witness) <= bound` with `witness ∈ ideal`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residual {
    pub ideal: PrincipalIdeal,
    pub target: Element,
    pub bound: BigRational,
    pub witness: Element,
}

impl Residual {
    pub fn error(&self, solution: &Element) -> Result<Element> {
        solution.sub(&self.target)?.sub(&self.witness)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub solution: Element,
    pub residuals: Vec<Residual>,
    pub eps: BigRational,
}

/// Outcome of an independent re-check of a [`Certificate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateAudit {
    pub failures: Vec<String>,
}

impl CertificateAudit {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl Certificate {
    /// Recomputes every residual from scratch: witness membership, the exact
    /// valuation against the recorded bound, and the bound against `ε`.
    pub fn audit(&self, ctx: &RingContext) -> Result<CertificateAudit> {
        let mut failures = Vec::new();
        ctx.check(&self.solution)?;
        for (k, r) in self.residuals.iter().enumerate() {
            if !r.ideal.contains(&r.witness)? {
                failures.push(format!("residual {k}: witness is not in {}", r.ideal));
            }
            let v = ctx.value_bound(&r.error(&self.solution)?)?;
            if v > r.bound {
                failures.push(format!(
                    "residual {k}: valuation {v} exceeds bound {}",
                    r.bound
                ));
            }
            let ok = if self.eps.is_zero() {
                r.bound.is_zero()
            } else {
                r.bound < self.eps
            };
            if !ok {
                failures.push(format!(
                    "residual {k}: bound {} does not meet {}",
                    r.bound, self.eps
                ));
            }
        }
        Ok(CertificateAudit { failures })
    }
}

/// Solves the system with `r = Σ b_k`, where `(a_k', b_k')` witnesses
/// `I_k ⊥ ∩_{l≠k} I_l` at `ε/(n·max(1, V(r_k)))` and `b_k = b_k'·r_k`.
///
/// The solution is left unreduced; see [`reduce_certificate`].
pub fn finite_crat(sys: &ResidueSystem) -> Result<Certificate> {
    let ctx = &sys.ring;
    let n = sys.entries.len();
    if n == 0 {
        return Err(Error::EmptySystem);
    }
    if n == 1 {
        let (ideal, target) = &sys.entries[0];
        return Ok(Certificate {
            solution: target.clone(),
            residuals: vec![Residual {
                ideal: ideal.clone(),
                target: target.clone(),
                bound: BigRational::zero(),
                witness: ctx.zero(),
            }],
            eps: sys.eps.clone(),
        });
    }
    let ideals = sys.ideals();
    let one = BigRational::one();
    let mut parts = Vec::with_capacity(n);
    for (k, (ideal, target)) in sys.entries.iter().enumerate() {
        let scale = ctx.value_bound(target)?.max(one.clone());
        let eps_k = &sys.eps / (BigRational::from_integer(n.into()) * scale);
        parts.push(intersection_witness(
            ctx,
            ideal,
            &others(&ideals, k),
            &eps_k,
        )?);
    }
    assemble(ctx, &sys.entries, &parts, &sys.eps)
}

fn others(ideals: &[PrincipalIdeal], k: usize) -> Vec<PrincipalIdeal> {
    ideals
        .iter()
        .enumerate()
        .filter(|(l, _)| *l != k)
        .map(|(_, i)| i.clone())
        .collect()
}

fn assemble(
    ctx: &RingContext,
    entries: &[(PrincipalIdeal, Element)],
    parts: &[TcmWitness],
    eps: &BigRational,
) -> Result<Certificate> {
    let mut solution = ctx.zero();
    for ((_, target), w) in entries.iter().zip(parts) {
        solution = solution.add(&w.j.mul(target)?)?;
    }
    let mut residuals = Vec::with_capacity(entries.len());
    for ((ideal, target), w) in entries.iter().zip(parts) {
        // r − r_k = (Σ_{l≠k} b_l − i_k r_k) + (i_k + j_k − 1) r_k
        let defect = w.defect()?.neg().mul(target)?;
        let witness = solution.sub(target)?.sub(&defect)?;
        residuals.push(Residual {
            ideal: ideal.clone(),
            target: target.clone(),
            bound: ctx.value_bound(&defect)?,
            witness,
        });
    }
    Ok(Certificate {
        solution,
        residuals,
        eps: eps.clone(),
    })
}

/// Exact witnesses for a fixed list of pairwise co-maximal ideals, reusable
/// across target vectors. `solve` returns what [`finite_crat`] returns for
/// the same system at `ε = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactCrtBasis {
    pub ring: RingContext,
    pub ideals: Vec<PrincipalIdeal>,
    pub witnesses: Vec<TcmWitness>,
}

impl ExactCrtBasis {
    pub fn new(ring: RingContext, ideals: Vec<PrincipalIdeal>) -> Result<Self> {
        if ideals.len() < 2 {
            return Err(Error::InvalidInput(
                "a basis needs at least two ideals".into(),
            ));
        }
        let zero = BigRational::zero();
        let witnesses = (0..ideals.len())
            .map(|k| intersection_witness(&ring, &ideals[k], &others(&ideals, k), &zero))
            .collect::<Result<Vec<_>>>()?;
        Ok(ExactCrtBasis {
            ring,
            ideals,
            witnesses,
        })
    }

    pub fn solve(&self, targets: &[Element]) -> Result<Certificate> {
        if targets.len() != self.ideals.len() {
            return Err(Error::InvalidInput("one target per ideal".into()));
        }
        for t in targets {
            self.ring.check(t)?;
        }
        let entries: Vec<_> = self
            .ideals
            .iter()
            .cloned()
            .zip(targets.iter().cloned())
            .collect();
        assemble(&self.ring, &entries, &self.witnesses, &BigRational::zero())
    }
}

/// Representative of `x` modulo `m`: the least nonnegative residue for
/// integers, the remainder for polynomials.
pub fn reduce_element(x: &Element, modulus: &PrincipalIdeal) -> Result<Element> {
    Ok(match (x, &modulus.generator) {
        (Element::Int(a), Element::Int(m)) if !m.is_zero() => Element::Int(a.mod_floor(m)),
        (Element::Poly(f), Element::Poly(g)) if !g.is_zero() => Element::Poly(f.rem(g)),
        (Element::Quad(_), _) => {
            return Err(Error::UnsupportedRing(
                "reduction modulo Z[√2] ideals".into(),
            ))
        }
        _ => x.clone(),
    })
}

/// Replaces the solution by its reduction modulo the meet of all residual
/// ideals, shifting each witness by the same ideal element so every bound
/// stays valid.
pub fn reduce_certificate(cert: &Certificate) -> Result<Certificate> {
    let Some((first, rest)) = cert.residuals.split_first() else {
        return Ok(cert.clone());
    };
    let mut meet = first.ideal.clone();
    for r in rest {
        meet = ideal_meet(&meet, &r.ideal)?;
    }
    let reduced = reduce_element(&cert.solution, &meet)?;
    let shift = cert.solution.sub(&reduced)?;
    let residuals = cert
        .residuals
        .iter()
        .map(|r| {
            Ok(Residual {
                witness: r.witness.sub(&shift)?,
                ..r.clone()
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Certificate {
        solution: reduced,
        residuals,
        eps: cert.eps.clone(),
    })
}

/// Element `a ∈ I` with `V(1 − a) <= bound < ε`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityCertificate {
    pub ideal: PrincipalIdeal,
    pub a: Element,
    pub bound: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyReduction {
    /// Indices of the members that are not `ε`-dense.
    pub exceptional: Vec<usize>,
    /// One certificate for every other member, in family order.
    pub certificates: Vec<(usize, DensityCertificate)>,
}

/// Density certificate for a single ideal, or `None` when the ideal is not
/// dense (p-adic: `p` divides the generator; polynomial: a root lies in the
/// closed disk).
pub fn density_certificate(
    ctx: &RingContext,
    ideal: &PrincipalIdeal,
    eps: &BigRational,
) -> Result<Option<DensityCertificate>> {
    ideal.check(ctx)?;
    let cert = |a: Element| -> Result<Option<DensityCertificate>> {
        let bound = ctx.norm(&a.one_minus())?;
        Ok(Some(DensityCertificate {
            ideal: ideal.clone(),
            a,
            bound,
        }))
    };
    match &ctx.kind {
        RingKind::Padic { p } => {
            let g = ideal.int_generator()?;
            if g.is_multiple_of(p) {
                return Ok(None);
            }
            let modulus = num_traits::pow(p.clone(), padic_level(p, eps) as usize);
            let u = centered_mod(
                &mod_inverse(g, &modulus).expect("unit modulo p^N"),
                &modulus,
            );
            cert(Element::Int(g * u))
        }
        RingKind::Poly { radius } => {
            if ideal.is_whole() {
                return cert(ctx.one());
            }
            let factors = ideal.root_powers()?;
            if factors.iter().any(|f| in_closed_disk(&f.root, radius)) {
                return Ok(None);
            }
            let d = product_density_certificate(factors, radius, eps)?;
            cert(Element::Poly(d.a))
        }
        RingKind::Quad => Err(Error::UnsupportedRing(
            "density certificates in Z[√2]".into(),
        )),
    }
}

/// Splits a pairwise-TCM family into the finitely many members that are not
/// `ε`-dense and density certificates for all the others.
pub fn reduce_family(
    ctx: &RingContext,
    family: &[PrincipalIdeal],
    eps: &BigRational,
) -> Result<FamilyReduction> {
    if eps <= &BigRational::zero() {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let mut exceptional = Vec::new();
    let mut certificates = Vec::new();
    for (k, ideal) in family.iter().enumerate() {
        match density_certificate(ctx, ideal, eps)? {
            Some(c) => certificates.push((k, c)),
            None => exceptional.push(k),
        }
    }
    // non-dense members must still be pairwise co-maximal
    for (x, &a) in exceptional.iter().enumerate() {
        for &b in &exceptional[x + 1..] {
            check_exceptional_pair(ctx, &family[a], &family[b])?;
        }
    }
    Ok(FamilyReduction {
        exceptional,
        certificates,
    })
}

fn check_exceptional_pair(ctx: &RingContext, a: &PrincipalIdeal, b: &PrincipalIdeal) -> Result<()> {
    match &ctx.kind {
        RingKind::Padic { p } => Err(Error::NotTcm(format!(
            "{a} and {b} are both non-dense ({p} divides both generators)"
        ))),
        RingKind::Poly { radius } => {
            for fa in a.root_powers()? {
                if in_closed_disk(&fa.root, radius)
                    && b.root_powers()?.iter().any(|fb| fb.root == fa.root)
                {
                    return Err(Error::NotTcm(format!(
                        "{a} and {b} share the root {} inside the disk",
                        fa.root
                    )));
                }
            }
            Ok(())
        }
        RingKind::Quad => Ok(()),
    }
}

/// Certificate of a finite-exception solve, with the exceptional indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CratSolution {
    pub certificate: Certificate,
    pub exceptional: Vec<usize>,
    /// Density element used for each non-exceptional entry.
    pub density: Vec<(usize, Element)>,
}

/// Solves a possibly large family: the non-dense members go through
/// [`finite_crat`]; every other member is met by its density certificate at
/// tolerance `ε / max(1, V(r − r_I))`.
pub fn crat_infinite(sys: &ResidueSystem) -> Result<CratSolution> {
    let ctx = &sys.ring;
    if sys.entries.is_empty() {
        return Err(Error::EmptySystem);
    }
    if sys.eps.is_zero() {
        let cert = reduce_or_keep(finite_crat(sys)?)?;
        return Ok(CratSolution {
            certificate: cert,
            exceptional: (0..sys.entries.len()).collect(),
            density: Vec::new(),
        });
    }
    let family = sys.ideals();
    let red = reduce_family(ctx, &family, &sys.eps)?;
    let (solution, mut slots) = if red.exceptional.is_empty() {
        (sys.entries[0].1.clone(), vec![None; sys.entries.len()])
    } else {
        let sub = ResidueSystem {
            ring: ctx.clone(),
            entries: red
                .exceptional
                .iter()
                .map(|&k| sys.entries[k].clone())
                .collect(),
            eps: sys.eps.clone(),
        };
        let cert = reduce_or_keep(finite_crat(&sub)?)?;
        let mut slots = vec![None; sys.entries.len()];
        for (&k, r) in red.exceptional.iter().zip(cert.residuals) {
            slots[k] = Some(r);
        }
        (cert.solution, slots)
    };
    let one = BigRational::one();
    let mut density = Vec::new();
    for (k, (ideal, target)) in sys.entries.iter().enumerate() {
        if slots[k].is_some() {
            continue;
        }
        let gap = solution.sub(target)?;
        let scale = ctx.norm(&gap)?;
        let (witness, bound) = if scale.is_zero() {
            (ctx.zero(), BigRational::zero())
        } else {
            let tol = &sys.eps / scale.max(one.clone());
            let c =
                density_certificate(ctx, ideal, &tol)?.expect("non-exceptional members are dense");
            let witness = c.a.mul(&gap)?;
            let bound = ctx.norm(&c.a.one_minus().mul(&gap)?)?;
            density.push((k, c.a));
            (witness, bound)
        };
        slots[k] = Some(Residual {
            ideal: ideal.clone(),
            target: target.clone(),
            bound,
            witness,
        });
    }
    let residuals = slots
        .into_iter()
        .map(|r| r.expect("every slot filled"))
        .collect();
    Ok(CratSolution {
        certificate: Certificate {
            solution,
            residuals,
            eps: sys.eps.clone(),
        },
        exceptional: red.exceptional,
        density,
    })
}

fn reduce_or_keep(cert: Certificate) -> Result<Certificate> {
    match reduce_certificate(&cert) {
        Ok(c) => Ok(c),
        Err(Error::UnsupportedRing(_)) => Ok(cert),
        Err(e) => Err(e),
    }
}

/// Smallest nonnegative solution of a classical CRT system, by scanning.
/// Test oracle; `None` when no residue class works.
pub fn brute_force_crt(moduli: &[u64], targets: &[i64]) -> Option<u64> {
    let m: u64 = moduli.iter().product();
    (0..m).find(|x| {
        moduli
            .iter()
            .zip(targets)
            .all(|(&mi, &t)| (*x as i128 - t as i128).rem_euclid(mi as i128) == 0)
    })
}
