use crat_core::exec::Execution;
use crat_core::hyperspace::{
    check_coverage, covers, entourage, ideal_power_divergence_demo, join_continuity_test,
    monotone_limit_check, padic_gap, padic_gap_sweep, Decision, JoinCase, NetSpec, NetVerdict,
    DEFAULT_DEGREE_BUDGET,
};
use crat_core::numeric::{rat, CRational};
use crat_core::ring::{disk_norm, CPoly};
use crat_core::rings::{ideal_add, ideal_meet};
use crat_core::{PrincipalIdeal, RingContext};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Tolerance whose ball is exactly `p^m Z`.
fn eps_at_level(p: i64, m: u32) -> BigRational {
    if m == 0 {
        rat(2, 1)
    } else {
        BigRational::new(BigInt::from(1), BigInt::from(p).pow(m - 1))
    }
}

/// `b ∈ aZ + p^m Z`, by scanning the multiples of `a` modulo `p^m`.
fn residue_scan(a: i64, b: i64, pm: i64) -> bool {
    (0..pm).any(|x| (a * x - b).rem_euclid(pm) == 0)
}

#[test]
fn covers_matches_residue_scan() {
    for p in [2i64, 3] {
        let ctx = RingContext::padic(p).unwrap();
        for m in 0..=5u32 {
            let eps = eps_at_level(p, m);
            let pm = p.pow(m);
            for a in 0..=30i64 {
                for b in 0..=30i64 {
                    let (ia, ib) = (PrincipalIdeal::int(a), PrincipalIdeal::int(b));
                    let c = covers(&ctx, &ia, &ib, &eps, 0).unwrap();
                    let want = if residue_scan(a, b, pm) {
                        Decision::Yes
                    } else {
                        Decision::No
                    };
                    assert_eq!(c.decision, want, "p={p} m={m} a={a} b={b}");
                    assert!(check_coverage(&ctx, &ia, &ib, &eps, &c).unwrap());
                    let both = residue_scan(a, b, pm) && residue_scan(b, a, pm);
                    let e = entourage(&ctx, &ia, &ib, &eps, 0).unwrap();
                    assert_eq!(e.decision == Decision::Yes, both);
                }
            }
        }
    }
}

#[test]
fn join_is_the_gcd_ideal_at_every_scale() {
    let ctx = RingContext::padic(3).unwrap();
    for a in 0..=40i64 {
        for b in 0..=40i64 {
            let j = ideal_add(&PrincipalIdeal::int(a), &PrincipalIdeal::int(b)).unwrap();
            let g = PrincipalIdeal::int(num_integer::gcd(a, b));
            assert_eq!(padic_gap(&ctx, &j, &g).unwrap(), rat(0, 1));
            let tiny = rat(1, 3i64.pow(20));
            assert_eq!(
                entourage(&ctx, &j, &g, &tiny, 0).unwrap().decision,
                Decision::Yes
            );
            let l = ideal_meet(&PrincipalIdeal::int(a), &PrincipalIdeal::int(b)).unwrap();
            assert_eq!(l, PrincipalIdeal::int(num_integer::lcm(a, b)));
        }
    }
}

#[test]
fn gap_closed_form_matches_sweep() {
    for p in [2i64, 3, 5] {
        let ctx = RingContext::padic(p).unwrap();
        for a in 0..=60i64 {
            for b in 0..=60i64 {
                let (ia, ib) = (PrincipalIdeal::int(a), PrincipalIdeal::int(b));
                let closed = padic_gap(&ctx, &ia, &ib).unwrap();
                let swept = padic_gap_sweep(&ctx, &ia, &ib, 16, Execution::available()).unwrap();
                assert_eq!(closed, swept, "p={p} a={a} b={b}");
            }
        }
    }
}

#[test]
fn join_continuity_on_random_quadruples() {
    let ctx = RingContext::padic(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let draw = |rng: &mut ChaCha8Rng| PrincipalIdeal::int(rng.random_range(1i64..=100));
    let mut cases: Vec<JoinCase> = (0..1000)
        .map(|_| JoinCase {
            a1: draw(&mut rng),
            b1: draw(&mut rng),
            a2: draw(&mut rng),
            b2: draw(&mut rng),
        })
        .collect();
    // half the cases perturb A₁, B₁ by a factor prime to 3 so the hypothesis holds
    for c in cases.iter_mut().step_by(2) {
        let k = [1i64, 2, 4, 5, 7][rng.random_range(0..5)];
        c.a2 = PrincipalIdeal::int(c.a1.int_generator().unwrap() * k);
        c.b2 = PrincipalIdeal::int(c.b1.int_generator().unwrap() * k);
    }
    for eps in [rat(1, 1), rat(1, 3), rat(1, 9)] {
        let r = join_continuity_test(&ctx, &cases, &eps, Execution::available()).unwrap();
        assert_eq!(r.checked, 1000);
        assert!(r.vacuous < 1000);
        assert!(r.violations.is_empty());
    }
}

#[test]
fn monotone_chains() {
    let ctx = RingContext::padic(3).unwrap();
    let chain: Vec<_> = (0..=16).map(|n| PrincipalIdeal::int(3i64.pow(n))).collect();
    let r = monotone_limit_check(&ctx, &NetSpec { chain, limit: None }).unwrap();
    assert_eq!(r.verdict, NetVerdict::Converges);
    assert_eq!(r.limit, PrincipalIdeal::int(0));
    for (n, g) in r.gaps.iter().enumerate() {
        assert_eq!(g, &rat(1, 3i64.pow(n as u32)));
    }
    let chain: Vec<_> = (0..=16).map(|n| PrincipalIdeal::int(2i64.pow(n))).collect();
    let r = monotone_limit_check(&ctx, &NetSpec { chain, limit: None }).unwrap();
    assert_eq!(
        r.verdict,
        NetVerdict::CauchyNotConvergent { floor: rat(1, 1) }
    );
    assert!(r.gaps.iter().all(|g| g == &rat(1, 1)));
    assert!(r.consecutive.iter().all(|g| g == &rat(0, 1)));
    let p2 = RingContext::padic(2).unwrap();
    let chain: Vec<_> = (0..=10).map(|n| PrincipalIdeal::int(2i64.pow(n))).collect();
    let r = monotone_limit_check(&p2, &NetSpec { chain, limit: None }).unwrap();
    assert!(r
        .gaps
        .iter()
        .enumerate()
        .all(|(n, g)| g == &rat(1, 2i64.pow(n as u32))));
}

#[test]
fn divergence_bounds_survive_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (z0, radius) in [
        (CRational::from_int(0), rat(1, 1)),
        (CRational::real(rat(1, 2)), rat(1, 1)),
    ] {
        let report = ideal_power_divergence_demo(&z0, &radius, 10).unwrap();
        for row in &report.rows {
            let target = CPoly::linear(z0.clone()).pow(row.n);
            let ideal = CPoly::linear(z0.clone()).pow(row.n + 1);
            for _ in 0..100 {
                let deg = rng.random_range(0..=20 - (row.n as usize + 1).min(20));
                let q = CPoly::new(
                    (0..=deg)
                        .map(|_| {
                            CRational::new(
                                rat(rng.random_range(-50..=50), rng.random_range(1..=8)),
                                rat(rng.random_range(-50..=50), rng.random_range(1..=8)),
                            )
                        })
                        .collect(),
                );
                let h = &ideal * &q;
                assert!(disk_norm(&(&target - &h), &radius) >= row.lower_bound);
            }
        }
    }
}

#[test]
fn polynomial_coverage_certificates_recheck() {
    let radius = rat(1, 1);
    let ctx = RingContext::poly(radius).unwrap();
    let root = |re: i64, im: i64, m: u32| {
        PrincipalIdeal::root_power(CRational::new(rat(re, 2), rat(im, 2)), m)
    };
    let ideals = [
        root(0, 0, 1),
        root(0, 0, 2),
        root(1, 1, 1),
        root(6, 0, 1),
        root(-5, 3, 2),
        PrincipalIdeal::whole(&ctx),
    ];
    for a in &ideals {
        for b in &ideals {
            let c = covers(&ctx, a, b, &rat(1, 10), DEFAULT_DEGREE_BUDGET).unwrap();
            assert!(
                check_coverage(&ctx, a, b, &rat(1, 10), &c).unwrap(),
                "{a} vs {b}: {c:?}"
            );
            if a.is_subset_of(b).unwrap() && b.is_subset_of(a).unwrap() {
                assert_eq!(c.decision, Decision::Yes);
            }
        }
    }
}
