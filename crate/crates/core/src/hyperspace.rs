//! Entourage tests, gaps and net limits for principal ideals, with respect to
//! the standard valuation of a ring context.
//!
//! `(A, B)` lies in the entourage `H(ε)` when `A ⊆ B + B(ε)` and
//! `B ⊆ A + B(ε)`, where `B(ε) = {x : V(x) < ε}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::interp::product_density_within;
use crate::numeric::{padic_level, padic_order, rational_pow, sqrt_upper_bound, CRational};
use crate::ring::{disk_norm, CPoly, Element, RingContext, RingKind};
use crate::rings::polyring::in_closed_disk;
use crate::rings::{ideal_add, PrincipalIdeal, RootPower};

/// Degree budget for polynomial coverage searches.
pub const DEFAULT_DEGREE_BUDGET: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decision {
    Yes,
    No,
    Undecided,
}

impl Decision {
    pub fn and(self, o: Decision) -> Decision {
        match (self, o) {
            (Decision::No, _) | (_, Decision::No) => Decision::No,
            (Decision::Yes, Decision::Yes) => Decision::Yes,
            _ => Decision::Undecided,
        }
    }
}

/// `|c_k| · ρ^k` lower-bounds `V(element − a)` for every `a ∈ A`, because the
/// `k`-th Taylor coefficient of `a` at `root` vanishes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionalBound {
    pub element: CPoly,
    pub root: CRational,
    pub order: u32,
    /// `k`-th Taylor coefficient of `element` at `root`.
    pub coefficient: CRational,
    /// Rational lower bound on `R − |root|` (`1` when `order == 0`).
    pub rho: BigRational,
    pub lower_bound: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverCertificate {
    /// `A` is the whole ring or `B` is zero.
    Trivial,
    /// `p`-adic rule: `B ⊆ A + p^m Z` iff `gcd(gen A, p^m) | gen B`.
    GcdRule {
        level: u32,
        gcd: BigInt,
    },
    /// `value ∈ A` with `V(gen B − value) = bound < ε`; the same construction
    /// works at every tolerance.
    Approximant {
        value: Element,
        bound: BigRational,
        degree: usize,
    },
    Functional(Box<FunctionalBound>),
    /// `A = 0` and `V(element) >= ε` for `element ∈ B`.
    NormBound {
        element: Element,
        norm: BigRational,
    },
    Exhausted {
        budget: usize,
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coverage {
    pub decision: Decision,
    pub certificate: CoverCertificate,
}

impl Coverage {
    fn new(decision: Decision, certificate: CoverCertificate) -> Self {
        Coverage {
            decision,
            certificate,
        }
    }
}

/// Decides `B ⊆ A + B(ε)`. Exact for `p`-adic ideals; a semi-decision with a
/// degree budget for polynomial ideals.
pub fn covers(
    ctx: &RingContext,
    a: &PrincipalIdeal,
    b: &PrincipalIdeal,
    eps: &BigRational,
    budget: usize,
) -> Result<Coverage> {
    a.check(ctx)?;
    b.check(ctx)?;
    if !eps.is_positive() {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    if b.is_zero() || a.is_whole() {
        return Ok(Coverage::new(Decision::Yes, CoverCertificate::Trivial));
    }
    match &ctx.kind {
        RingKind::Padic { p } => {
            let level = padic_level(p, eps);
            let gcd = a.int_generator()?.gcd(&p.pow(level));
            let decision = if b.int_generator()?.is_multiple_of(&gcd) {
                Decision::Yes
            } else {
                Decision::No
            };
            Ok(Coverage::new(
                decision,
                CoverCertificate::GcdRule { level, gcd },
            ))
        }
        RingKind::Poly { radius } => poly_covers(a, b, radius, eps, budget),
        RingKind::Quad => Err(Error::UnsupportedRing("coverage over Z[√2]".into())),
    }
}

/// `k`-th Taylor coefficient of `f` at `w`.
pub fn taylor_coefficient(f: &CPoly, w: &CRational, k: u32) -> CRational {
    f.shift(w).coeff(k as usize)
}

fn vanishing_order(f: &CPoly, w: &CRational) -> u32 {
    let s = f.shift(w);
    s.coeffs()
        .iter()
        .position(|c| !c.is_zero())
        .unwrap_or(usize::MAX) as u32
}

/// Rational `ρ > 0` with `ρ <= R − |w|`, or `None` when `|w| >= R`.
pub fn disk_margin(w: &CRational, radius: &BigRational) -> Option<BigRational> {
    if w.modulus_sq() >= radius * radius {
        return None;
    }
    if w.re.is_zero() || w.im.is_zero() {
        return Some(radius - w.norm_inf());
    }
    let sq = w.modulus_sq();
    let mut bits = 8;
    loop {
        let u = sqrt_upper_bound(&sq, bits);
        if &u < radius {
            return Some(radius - u);
        }
        bits *= 2;
    }
}

fn functional_bound(
    g: &CPoly,
    w: &CRational,
    order: u32,
    rho: BigRational,
    eps: &BigRational,
) -> FunctionalBound {
    let c = taylor_coefficient(g, w, order);
    let base = c.norm_inf() * rational_pow(&rho, order);
    let lambda = if &base >= eps {
        BigRational::one()
    } else {
        eps / &base
    };
    let element = g.scale(&CRational::real(lambda.clone()));
    let coefficient = c.scale(&lambda);
    FunctionalBound {
        element,
        root: w.clone(),
        order,
        coefficient,
        rho,
        lower_bound: base * lambda,
    }
}

fn poly_covers(
    a: &PrincipalIdeal,
    b: &PrincipalIdeal,
    radius: &BigRational,
    eps: &BigRational,
    budget: usize,
) -> Result<Coverage> {
    let g = b.poly_generator()?;
    if a.is_zero() {
        let norm = disk_norm(g, radius);
        let lambda = if &norm >= eps {
            BigRational::one()
        } else {
            eps / &norm
        };
        let element = g.scale(&CRational::real(lambda.clone()));
        let cert = CoverCertificate::NormBound {
            element: Element::Poly(element),
            norm: norm * lambda,
        };
        return Ok(Coverage::new(Decision::No, cert));
    }
    if a.contains(&b.generator)? {
        let cert = CoverCertificate::Approximant {
            value: b.generator.clone(),
            bound: BigRational::zero(),
            degree: 0,
        };
        return Ok(Coverage::new(Decision::Yes, cert));
    }
    let Some(factors) = a.factors.as_deref() else {
        let reason = "ideal has no factored form and does not divide exactly".to_string();
        return Ok(Coverage::new(
            Decision::Undecided,
            CoverCertificate::Exhausted { budget, reason },
        ));
    };
    let (hard, soft): (Vec<RootPower>, Vec<RootPower>) = factors
        .iter()
        .cloned()
        .partition(|f| in_closed_disk(&f.root, radius));
    let mut blocked = None;
    for f in &hard {
        let k = vanishing_order(g, &f.root);
        if k >= f.mult {
            continue;
        }
        if let Some(rho) = disk_margin(&f.root, radius) {
            let fb = functional_bound(g, &f.root, k, rho, eps);
            return Ok(Coverage::new(
                Decision::No,
                CoverCertificate::Functional(Box::new(fb)),
            ));
        }
        if k == 0 {
            let fb = functional_bound(g, &f.root, 0, BigRational::one(), eps);
            return Ok(Coverage::new(
                Decision::No,
                CoverCertificate::Functional(Box::new(fb)),
            ));
        }
        blocked = Some(f.root.clone());
    }
    if let Some(w) = blocked {
        let reason = format!("boundary root {w} needs a derivative functional");
        return Ok(Coverage::new(
            Decision::Undecided,
            CoverCertificate::Exhausted { budget, reason },
        ));
    }
    let vg = disk_norm(g, radius);
    let Some(d) = product_density_within(&soft, radius, &(eps / &vg), Some(budget))? else {
        let reason = format!("density certificate needs degree above {budget}");
        return Ok(Coverage::new(
            Decision::Undecided,
            CoverCertificate::Exhausted { budget, reason },
        ));
    };
    let value = g * &d.a;
    let bound = disk_norm(&(g - &value), radius);
    if &bound >= eps {
        return Err(Error::ToleranceViolation(format!(
            "approximant error {bound} >= {eps}"
        )));
    }
    let cert = CoverCertificate::Approximant {
        value: Element::Poly(value),
        bound,
        degree: d.degree,
    };
    Ok(Coverage::new(Decision::Yes, cert))
}

/// Re-checks a coverage certificate for `B ⊆ A + B(ε)` from scratch.
pub fn check_coverage(
    ctx: &RingContext,
    a: &PrincipalIdeal,
    b: &PrincipalIdeal,
    eps: &BigRational,
    cov: &Coverage,
) -> Result<bool> {
    Ok(match (&cov.certificate, cov.decision) {
        (CoverCertificate::Trivial, Decision::Yes) => b.is_zero() || a.is_whole(),
        (CoverCertificate::GcdRule { level, gcd }, d) => {
            let p = ctx.prime()?;
            *level == padic_level(p, eps)
                && *gcd == a.int_generator()?.gcd(&p.pow(*level))
                && (d == Decision::Yes) == b.int_generator()?.is_multiple_of(gcd)
        }
        (CoverCertificate::Approximant { value, bound, .. }, Decision::Yes) => {
            let diff = b.generator.sub(value)?;
            a.contains(value)? && ctx.norm(&diff)? == *bound && bound < eps
        }
        (CoverCertificate::Functional(fb), Decision::No) => {
            let radius = ctx.radius()?;
            let in_b = b.contains(&Element::Poly(fb.element.clone()))?;
            let kills = a
                .root_powers()?
                .iter()
                .any(|f| f.root == fb.root && f.mult > fb.order);
            let margin_ok = if fb.order == 0 {
                in_closed_disk(&fb.root, radius)
            } else {
                disk_margin(&fb.root, radius).is_some_and(|m| m >= fb.rho) && fb.rho.is_positive()
            };
            let c = taylor_coefficient(&fb.element, &fb.root, fb.order);
            let lb = c.norm_inf() * rational_pow(&fb.rho, fb.order);
            in_b && kills && margin_ok && c == fb.coefficient && lb == fb.lower_bound && &lb >= eps
        }
        (CoverCertificate::NormBound { element, norm }, Decision::No) => {
            a.is_zero() && b.contains(element)? && ctx.norm(element)? == *norm && norm >= eps
        }
        (CoverCertificate::Exhausted { .. }, Decision::Undecided) => true,
        _ => false,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntourageDecision {
    pub decision: Decision,
    /// `B ⊆ A + B(ε)`.
    pub forward: Coverage,
    /// `A ⊆ B + B(ε)`.
    pub backward: Coverage,
}

pub fn entourage(
    ctx: &RingContext,
    a: &PrincipalIdeal,
    b: &PrincipalIdeal,
    eps: &BigRational,
    budget: usize,
) -> Result<EntourageDecision> {
    let forward = covers(ctx, a, b, eps, budget)?;
    let backward = covers(ctx, b, a, eps, budget)?;
    Ok(EntourageDecision {
        decision: forward.decision.and(backward.decision),
        forward,
        backward,
    })
}

fn one_sided_gap(a: &BigInt, b: &BigInt, p: &BigInt) -> BigRational {
    match (padic_order(a, p), padic_order(b, p)) {
        (_, None) => BigRational::zero(),
        (Some(va), Some(vb)) if va <= vb => BigRational::zero(),
        (_, Some(vb)) => BigRational::new(BigInt::one(), p.pow(vb as u32)),
    }
}

/// Infimum of the tolerances at which `(A, B)` lies in the entourage, in
/// closed form from the valuations of the generators.
pub fn padic_gap(ctx: &RingContext, a: &PrincipalIdeal, b: &PrincipalIdeal) -> Result<BigRational> {
    let p = ctx.prime()?;
    let (x, y) = (a.int_generator()?, b.int_generator()?);
    Ok(one_sided_gap(x, y, p).max(one_sided_gap(y, x, p)))
}

/// The same infimum found by testing the gcd rule at every level
/// `m = 0..=max_level`; `0` when no level up to `max_level` fails.
pub fn padic_gap_sweep(
    ctx: &RingContext,
    a: &PrincipalIdeal,
    b: &PrincipalIdeal,
    max_level: u32,
    exec: Execution,
) -> Result<BigRational> {
    let p = ctx.prime()?;
    let (x, y) = (a.int_generator()?, b.int_generator()?);
    let holds = exec.map_range(max_level as usize + 1, |m| {
        let pm = p.pow(m as u32);
        y.is_multiple_of(&x.gcd(&pm)) && x.is_multiple_of(&y.gcd(&pm))
    });
    Ok(match holds.iter().position(|h| !h) {
        Some(first_fail) => BigRational::new(BigInt::one(), p.pow(first_fail as u32 - 1)),
        None => BigRational::zero(),
    })
}

/// Ideals `A₁, B₁, A₂, B₂` for one instance of the join-continuity implication.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinCase {
    pub a1: PrincipalIdeal,
    pub b1: PrincipalIdeal,
    pub a2: PrincipalIdeal,
    pub b2: PrincipalIdeal,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct JoinReport {
    pub checked: usize,
    /// Cases where the hypothesis at `ε/3` fails.
    pub vacuous: usize,
    pub violations: Vec<usize>,
}

/// Checks that `(A₁,A₂), (B₁,B₂) ∈ H(ε/3)` implies
/// `(A₁ + B₁, A₂ + B₂) ∈ H(ε)` on every case.
pub fn join_continuity_test(
    ctx: &RingContext,
    cases: &[JoinCase],
    eps: &BigRational,
    exec: Execution,
) -> Result<JoinReport> {
    ctx.prime()?;
    let delta = eps / BigRational::from_integer(3.into());
    let outcomes = exec.map(cases, |c| -> Result<Option<bool>> {
        let hyp = entourage(ctx, &c.a1, &c.a2, &delta, 0)?.decision == Decision::Yes
            && entourage(ctx, &c.b1, &c.b2, &delta, 0)?.decision == Decision::Yes;
        if !hyp {
            return Ok(None);
        }
        let j1 = ideal_add(&c.a1, &c.b1)?;
        let j2 = ideal_add(&c.a2, &c.b2)?;
        Ok(Some(
            entourage(ctx, &j1, &j2, eps, 0)?.decision == Decision::Yes,
        ))
    });
    let mut report = JoinReport::default();
    for (k, o) in outcomes.into_iter().enumerate() {
        report.checked += 1;
        match o? {
            None => report.vacuous += 1,
            Some(true) => {}
            Some(false) => report.violations.push(k),
        }
    }
    Ok(report)
}

/// A descending chain `S₀ ⊇ S₁ ⊇ …` and an optional limit candidate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetSpec {
    pub chain: Vec<PrincipalIdeal>,
    /// Defaults to the last ideal when the chain ends on a repeat, and to the
    /// zero ideal otherwise.
    pub limit: Option<PrincipalIdeal>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NetVerdict {
    Converges,
    Stalls {
        floor: BigRational,
    },
    /// Gaps to the limit stay at `floor` while consecutive gaps fall below it.
    CauchyNotConvergent {
        floor: BigRational,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetReport {
    pub limit: PrincipalIdeal,
    /// `gap(S_n, limit)`.
    pub gaps: Vec<BigRational>,
    /// `gap(S_n, S_{n+1})`.
    pub consecutive: Vec<BigRational>,
    pub verdict: NetVerdict,
}

/// Gap profile of a descending `p`-adic chain against its limit.
///
/// Over the finite data the chain is classified from its tail (the last half
/// of the indices): convergent when the gaps never increase and either reach
/// 0 or are still shrinking across the tail; otherwise the tail minimum is
/// reported as a floor, as Cauchy-not-convergent when every consecutive gap
/// in the tail lies below it.
pub fn monotone_limit_check(ctx: &RingContext, net: &NetSpec) -> Result<NetReport> {
    ctx.prime()?;
    if net.chain.is_empty() {
        return Err(Error::EmptySystem);
    }
    for (n, w) in net.chain.windows(2).enumerate() {
        if !w[1].is_subset_of(&w[0])? {
            return Err(Error::NotDescending(n + 1));
        }
    }
    let limit = match &net.limit {
        Some(l) => l.clone(),
        None => match net.chain.as_slice() {
            [.., x, y] if x == y => y.clone(),
            [x] => x.clone(),
            _ => PrincipalIdeal::zero(ctx),
        },
    };
    let gaps = net
        .chain
        .iter()
        .map(|s| padic_gap(ctx, s, &limit))
        .collect::<Result<Vec<_>>>()?;
    let consecutive = net
        .chain
        .windows(2)
        .map(|w| padic_gap(ctx, &w[0], &w[1]))
        .collect::<Result<Vec<_>>>()?;
    let start = gaps.len() / 2;
    let tail = &gaps[start..];
    let last = tail.last().expect("nonempty chain");
    let monotone = gaps.windows(2).all(|w| w[1] <= w[0]);
    let verdict = if monotone && (last.is_zero() || (tail.len() > 1 && last < &tail[0])) {
        NetVerdict::Converges
    } else {
        let floor = tail.iter().min().expect("nonempty tail").clone();
        let ctail = &consecutive[start.min(consecutive.len())..];
        if !ctail.is_empty() && ctail.iter().all(|c| c < &floor) {
            NetVerdict::CauchyNotConvergent { floor }
        } else {
            NetVerdict::Stalls { floor }
        }
    };
    Ok(NetReport {
        limit,
        gaps,
        consecutive,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivergenceRow {
    pub n: u32,
    /// Certified lower bound on `gap(Iⁿ, Iⁿ⁺¹)`.
    pub lower_bound: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivergenceReport {
    pub center: CRational,
    pub radius: BigRational,
    /// Rational lower bound on `R − |z₀|`.
    pub rho: BigRational,
    pub rows: Vec<DivergenceRow>,
}

/// Lower bounds `gap(Iⁿ, Iⁿ⁺¹) >= ρⁿ` for `I = ⟨z − z₀⟩`: every `h ∈ Iⁿ⁺¹`
/// has vanishing `n`-th Taylor coefficient at `z₀`, while `(z − z₀)ⁿ` has
/// coefficient 1.
pub fn ideal_power_divergence_demo(
    center: &CRational,
    radius: &BigRational,
    n_max: u32,
) -> Result<DivergenceReport> {
    let rho = disk_margin(center, radius)
        .ok_or_else(|| Error::DegenerateDisk(format!("{center} is not inside |z| < {radius}")))?;
    let rows = (0..=n_max)
        .map(|n| {
            let f = CPoly::linear(center.clone()).pow(n);
            let c = taylor_coefficient(&f, center, n);
            DivergenceRow {
                n,
                lower_bound: c.norm_inf() * rational_pow(&rho, n),
            }
        })
        .collect();
    Ok(DivergenceReport {
        center: center.clone(),
        radius: radius.clone(),
        rho,
        rows,
    })
}
