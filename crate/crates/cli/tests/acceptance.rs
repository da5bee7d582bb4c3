//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Every criterion is checked against the library with an independent oracle
//! and, where a CLI command exists, through the `crat` binary; the CLI
//! outputs are collected for the end-to-end audit in criterion 11.

use std::io::Write;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use crat::codec::parse_surd;
use crat_core::crat::{
    brute_force_crt, crat_infinite, densify_trace, finite_crat, reduce_certificate, ExactCrtBasis,
    ResidueSystem,
};
use crat_core::exec::Execution;
use crat_core::hyperspace::{
    entourage, ideal_power_divergence_demo, join_continuity_test, monotone_limit_check, Decision,
    JoinCase, NetSpec, NetVerdict,
};
use crat_core::interp::{
    hermite_jets, ideal_density_certificate, jets_match, lagrange_dense, lagrange_recheck,
    runge_tail_bound, Jet,
};
use crat_core::numeric::{rat, CRational, QuadInt};
use crat_core::ring::{disk_norm, CPoly};
use crat_core::rings::{ideal_add, ideal_meet, padic_tcm};
use crat_core::{Element, PrincipalIdeal, RingContext};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn crat(args: &[&str], input: &Value) -> (Value, i32) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_crat"))
        .args(args)
        .env_remove("CRAT_DEGREE_BUDGET")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .expect("crat binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.to_string().as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (v, out.status.code().unwrap_or(-1))
}

/// Runs a job through the binary and keeps its output for the audit.
fn cli(outputs: &mut Vec<Value>, args: &[&str], job: Value) -> Result<Value, String> {
    let (v, code) = crat(args, &job);
    ensure(code == 0, || {
        format!("crat {} exited {code}: {v}", args.join(" "))
    })?;
    outputs.push(v.clone());
    Ok(v)
}

fn c(n: i64) -> CRational {
    CRational::from_int(n)
}

fn classical_crt(outputs: &mut Vec<Value>) -> Check {
    let ctx = RingContext::padic(7).unwrap();
    let ideals = [3, 5, 7].map(PrincipalIdeal::int).to_vec();
    let targets = [2, 3, 2].map(Element::int);
    let sys = ResidueSystem::new(
        ctx.clone(),
        ideals.iter().cloned().zip(targets).collect(),
        rat(0, 1),
    )
    .map_err(|e| e.to_string())?;
    let cert = reduce_certificate(&finite_crat(&sys).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let x = cert
        .solution
        .as_int()
        .unwrap()
        .mod_floor(&BigInt::from(105));
    ensure(x == BigInt::from(23), || format!("solution class {x}"))?;
    ensure(cert.residuals.iter().all(|r| r.bound.is_zero()), || {
        "nonzero residual bound".into()
    })?;
    ensure(cert.audit(&ctx).unwrap().passed(), || "audit failed".into())?;

    // exhaustive sweep against a residue table
    let mut triples = Vec::new();
    for a in 2..=15u64 {
        for b in a + 1..=15 {
            for c in b + 1..=15 {
                if a.gcd(&b) == 1 && a.gcd(&c) == 1 && b.gcd(&c) == 1 {
                    triples.push([a, b, c]);
                }
            }
        }
    }
    let ctx2 = RingContext::padic(2).unwrap();
    let counts: Vec<(usize, usize)> = Execution::available().map(&triples, |m| {
        let total = m[0] * m[1] * m[2];
        let mut table = vec![0u64; total as usize];
        for x in 0..total {
            table[((x % m[0]) * m[1] * m[2] + (x % m[1]) * m[2] + x % m[2]) as usize] = x;
        }
        let basis = ExactCrtBasis::new(
            ctx2.clone(),
            m.iter().map(|&k| PrincipalIdeal::int(k)).collect(),
        )
        .unwrap();
        let mut bad = 0;
        for (idx, want) in table.iter().enumerate() {
            let idx = idx as u64;
            let t = [idx / (m[1] * m[2]), (idx / m[2]) % m[1], idx % m[2]];
            let cert = reduce_certificate(&basis.solve(&t.map(Element::int)).unwrap()).unwrap();
            let got = cert
                .solution
                .as_int()
                .unwrap()
                .mod_floor(&BigInt::from(total));
            if got != BigInt::from(*want) || cert.residuals.iter().any(|r| !r.bound.is_zero()) {
                bad += 1;
            }
        }
        (table.len(), bad)
    });
    let systems: usize = counts.iter().map(|c| c.0).sum();
    let bad: usize = counts.iter().map(|c| c.1).sum();
    ensure(bad == 0, || {
        format!("{bad} of {systems} systems disagree with the scan")
    })?;
    ensure(brute_force_crt(&[3, 5, 7], &[2, 3, 2]) == Some(23), || {
        "scan oracle".into()
    })?;

    let v = cli(
        outputs,
        &["crt"],
        json!({"ring": {"kind": "padic", "p": 7},
        "payload": {"ideals": [3, 5, 7], "targets": [2, 3, 2], "eps": "0"}}),
    )?;
    ensure(v["solution"] == json!(23), || {
        format!("CLI solution {}", v["solution"])
    })?;
    // the 3-adic system 3Z -> 1, 2Z -> 0, 5Z -> 2 at eps = 1/9
    let v = cli(
        outputs,
        &["crt"],
        json!({"ring": {"kind": "padic", "p": 3},
            "payload": {"ideals": [3, 2, 5], "targets": [1, 0, 2], "eps": "1/9"}}),
    )?;
    let x = v["solution"].as_i64().unwrap_or(-1).rem_euclid(30);
    ensure(x == 22, || format!("3-adic example gave {x} mod 30"))?;
    Ok(format!(
        "23 mod 105, 22 mod 30; {} triples, {systems} systems exact",
        triples.len()
    ))
}

fn densification_rate(outputs: &mut Vec<Value>) -> Check {
    let ctx = RingContext::padic(3).unwrap();
    let steps = densify_trace(
        &ctx,
        &PrincipalIdeal::int(2),
        &Element::int(4),
        &Element::int(1),
        20,
    )
    .map_err(|e| e.to_string())?;
    for (n, s) in steps.iter().enumerate() {
        let cap = rat(1, 3i64.pow(n as u32));
        ensure(s.error <= cap, || {
            format!("step {n}: V = {} > {cap}", s.error)
        })?;
    }
    let head: Vec<_> = steps.iter().take(5).map(|s| s.iterate.clone()).collect();
    ensure(head == [0, 4, -8, 28, -80].map(Element::int), || {
        format!("iterates {head:?}")
    })?;
    let v = cli(
        outputs,
        &["demo", "densify"],
        json!({"ring": {"kind": "padic", "p": 3},
        "payload": {"ideal": 2, "a": 4, "r": 1, "count": 20}}),
    )?;
    let cli_head: Vec<_> = v["steps"]
        .as_array()
        .unwrap()
        .iter()
        .take(5)
        .map(|s| s["iterate"].clone())
        .collect();
    ensure(
        cli_head == vec![json!(0), json!(4), json!(-8), json!(28), json!(-80)],
        || "CLI iterates".into(),
    )?;
    Ok("V3(r - r_n) <= 3^-n for n <= 20; iterates 0, 4, -8, 28, -80".into())
}

fn tcm_characterization(outputs: &mut Vec<Value>) -> Check {
    let mut checked = 0;
    for p in [2u64, 3, 5] {
        let ctx = RingContext::padic(p).unwrap();
        let p8 = p.pow(8);
        for a in 1..=50u64 {
            for b in 1..=50u64 {
                // 1 ∈ gcd(a,b)Z + p^8 Z, by scanning multiples of the gcd
                let g = a.gcd(&b);
                let oracle = (0..p8).any(|x| (g * x) % p8 == 1 % p8);
                let got = padic_tcm(&PrincipalIdeal::int(a), &PrincipalIdeal::int(b), &ctx)
                    .map_err(|e| e.to_string())?;
                ensure(got == oracle, || format!("p={p} a={a} b={b}"))?;
                checked += 1;
            }
        }
    }
    let v = cli(
        outputs,
        &["tcm"],
        json!({"ring": {"kind": "padic", "p": 3}, "payload": {"a": 3, "b": 9}}),
    )?;
    ensure(v["tcm"] == json!(false), || {
        "CLI tcm(3, 9) should be false".into()
    })?;
    let v = cli(
        outputs,
        &["tcm"],
        json!({"ring": {"kind": "padic", "p": 3}, "payload": {"a": 4, "b": 10, "eps": "1/243"}}),
    )?;
    ensure(v["tcm"] == json!(true), || {
        "CLI tcm(4, 10) should be true".into()
    })?;
    Ok(format!("{checked} pairs agree with the closure oracle"))
}

fn lagrange(outputs: &mut Vec<Value>) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let eps = rat(1, 1_000_000);
    let mut worst = BigRational::zero();
    for _ in 0..5 {
        let n = rng.random_range(2..=4);
        let mut points: Vec<i64> = Vec::new();
        while points.len() < n {
            let x = rng.random_range(-6i64..=6);
            if !points.contains(&x) {
                points.push(x);
            }
        }
        let values: Vec<i64> = (0..n).map(|_| rng.random_range(-9i64..=9)).collect();
        let res = lagrange_dense(
            &points
                .iter()
                .map(|&x| QuadInt::from_int(x))
                .collect::<Vec<_>>(),
            &values
                .iter()
                .map(|&y| QuadInt::from_int(y))
                .collect::<Vec<_>>(),
            &eps,
        )
        .map_err(|e| e.to_string())?;
        ensure(lagrange_recheck(&res, 10), || {
            format!("recheck failed for {points:?}")
        })?;
        for r in &res.residuals {
            worst = worst.max(r.residual.upper_bound(256));
        }
        cli(
            outputs,
            &["interp", "lagrange"],
            json!({"ring": {"kind": "quad"},
            "payload": {"points": points, "values": values, "eps": "1/1000000"}}),
        )?;
    }
    ensure(worst < eps, || format!("residual {worst}"))?;
    let v = cli(
        outputs,
        &["interp", "lagrange"],
        json!({"ring": {"kind": "quad"},
        "payload": {"points": [0, 3], "values": [1, 0], "eps": "1/100"}}),
    )?;
    let r0 = parse_surd("residual", &v["residuals"][0]["residual"]).map_err(|e| e.to_string())?;
    let r1 = parse_surd("residual", &v["residuals"][1]["residual"]).map_err(|e| e.to_string())?;
    let approx = r0.upper_bound(128).to_f64().unwrap();
    ensure((approx - 8.7e-4).abs() < 0.05e-4, || {
        format!("residual at 0 is {approx:e}")
    })?;
    ensure(r1.is_zero(), || "residual at 3 is not 0".into())?;
    Ok(format!(
        "5 problems, worst residual {:.2e}; worked example {approx:.3e} at 0, 0 at 3",
        worst.to_f64().unwrap()
    ))
}

/// Gauss-Jordan on `Σ_j a_j · j!/(j−k)! · z^(j−k) = k!·w_k`.
fn confluent_vandermonde(jets: &[Jet]) -> CPoly {
    let n: usize = jets.iter().map(|j| j.values.len()).sum();
    let mut rows: Vec<Vec<CRational>> = Vec::with_capacity(n);
    for jet in jets {
        let mut fact = BigInt::one();
        for (k, w) in jet.values.iter().enumerate() {
            if k > 0 {
                fact *= BigInt::from(k);
            }
            let mut row = vec![CRational::zero(); n + 1];
            for (j, cell) in row.iter_mut().enumerate().take(n).skip(k) {
                let falling: BigInt = ((j - k + 1)..=j).map(BigInt::from).product();
                let mut zp = CRational::one();
                for _ in 0..(j - k) {
                    zp = zp * jet.point.clone();
                }
                *cell = zp.scale(&BigRational::from_integer(falling));
            }
            row[n] = w.scale(&BigRational::from_integer(fact.clone()));
            rows.push(row);
        }
    }
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !rows[r][col].is_zero())
            .expect("nonsingular");
        rows.swap(col, pivot);
        let inv = rows[col][col].inv().unwrap();
        for x in rows[col].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let pivot_row = rows[col].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x = x.clone() - f.clone() * p.clone();
                }
            }
        }
    }
    CPoly::new(rows.into_iter().map(|r| r[n].clone()).collect())
}

fn hermite(outputs: &mut Vec<Value>) -> Check {
    let classic = [
        Jet {
            point: c(0),
            values: vec![c(0), c(0)],
        },
        Jet {
            point: c(1),
            values: vec![c(1), c(0)],
        },
    ];
    let f = hermite_jets(&classic).map_err(|e| e.to_string())?;
    ensure(f == CPoly::new(vec![c(0), c(0), c(3), c(-2)]), || {
        format!("classic gave {f}")
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let q = |rng: &mut ChaCha8Rng| rat(rng.random_range(-20..=20), rng.random_range(1..=6));
    let problems = 100;
    for _ in 0..problems {
        let total = rng.random_range(1..=8usize);
        let mut jets: Vec<Jet> = Vec::new();
        let mut left = total;
        while left > 0 {
            let len = rng.random_range(1..=left.min(4));
            let point = loop {
                let p = CRational::new(q(&mut rng), q(&mut rng));
                if jets.iter().all(|j| j.point != p) {
                    break p;
                }
            };
            jets.push(Jet {
                point,
                values: (0..len)
                    .map(|_| CRational::new(q(&mut rng), q(&mut rng)))
                    .collect(),
            });
            left -= len;
        }
        let f = hermite_jets(&jets).map_err(|e| e.to_string())?;
        ensure(
            jets_match(&f, &jets) && f == confluent_vandermonde(&jets),
            || format!("mismatch on {jets:?}"),
        )?;
    }
    let v = cli(
        outputs,
        &["interp", "hermite"],
        json!({"ring": {"kind": "poly", "R": "1"},
        "payload": {"jets": [{"point": "0", "values": ["0", "0"]}, {"point": "1", "values": ["1", "0"]}]}}),
    )?;
    let coeffs: Vec<_> = v["poly"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["re"].clone())
        .collect();
    ensure(
        coeffs == vec![json!("0/1"), json!("0/1"), json!("3/1"), json!("-2/1")],
        || format!("CLI poly {coeffs:?}"),
    )?;
    Ok(format!(
        "3z^2 - 2z^3; {problems} random problems match the linear-system oracle"
    ))
}

fn hyperspace_lattice(outputs: &mut Vec<Value>) -> Check {
    for a in 0..=100i64 {
        for b in 0..=100i64 {
            let (i, j) = (PrincipalIdeal::int(a), PrincipalIdeal::int(b));
            ensure(
                ideal_add(&i, &j).unwrap() == PrincipalIdeal::int(a.gcd(&b)),
                || format!("join {a} {b}"),
            )?;
            ensure(
                ideal_meet(&i, &j).unwrap() == PrincipalIdeal::int(a.lcm(&b)),
                || format!("meet {a} {b}"),
            )?;
        }
    }
    let scan = |a: i64, b: i64, pm: i64| (0..pm).any(|x| (a * x - b).rem_euclid(pm) == 0);
    let mut decisions = 0;
    for p in [2i64, 3] {
        let ctx = RingContext::padic(p).unwrap();
        for m in 0..=5u32 {
            // the open ball of this radius is exactly p^m Z
            let eps = if m == 0 {
                rat(2, 1)
            } else {
                rat(1, p.pow(m - 1))
            };
            let pm = p.pow(m);
            for a in 0..=30i64 {
                for b in 0..=30i64 {
                    let want = scan(a, b, pm) && scan(b, a, pm);
                    let got = entourage(
                        &ctx,
                        &PrincipalIdeal::int(a),
                        &PrincipalIdeal::int(b),
                        &eps,
                        0,
                    )
                    .unwrap();
                    ensure((got.decision == Decision::Yes) == want, || {
                        format!("p={p} m={m} a={a} b={b}")
                    })?;
                    decisions += 1;
                }
            }
        }
    }
    let ctx = RingContext::padic(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    let draw = |rng: &mut ChaCha8Rng| PrincipalIdeal::int(rng.random_range(1i64..=100));
    let mut cases: Vec<JoinCase> = (0..1000)
        .map(|_| JoinCase {
            a1: draw(&mut rng),
            b1: draw(&mut rng),
            a2: draw(&mut rng),
            b2: draw(&mut rng),
        })
        .collect();
    for case in cases.iter_mut().step_by(2) {
        let k = [1i64, 2, 4, 5, 7][rng.random_range(0..5)];
        case.a2 = PrincipalIdeal::int(case.a1.int_generator().unwrap() * k);
        case.b2 = PrincipalIdeal::int(case.b1.int_generator().unwrap() * k);
    }
    let mut vacuous = 0;
    for eps in [rat(1, 1), rat(1, 3), rat(1, 9)] {
        let r = join_continuity_test(&ctx, &cases, &eps, Execution::available())
            .map_err(|e| e.to_string())?;
        ensure(r.checked == 1000 && r.violations.is_empty(), || {
            format!("violations {:?}", r.violations)
        })?;
        vacuous += r.vacuous;
    }
    cli(
        outputs,
        &["hyper", "gap"],
        json!({"ring": {"kind": "padic", "p": 3},
        "payload": {"pairs": [[6, 15], [9, 3], [12, 30], [0, 27]], "eps": "1/9"}}),
    )?;
    Ok(format!(
        "{decisions} entourage decisions; 3000 join checks ({vacuous} vacuous), 0 violations"
    ))
}

fn monotone_nets(outputs: &mut Vec<Value>) -> Check {
    let ctx = RingContext::padic(3).unwrap();
    let chain: Vec<_> = (0..=16).map(|n| PrincipalIdeal::int(3i64.pow(n))).collect();
    let r =
        monotone_limit_check(&ctx, &NetSpec { chain, limit: None }).map_err(|e| e.to_string())?;
    ensure(
        r.verdict == NetVerdict::Converges && r.limit == PrincipalIdeal::int(0),
        || format!("{:?}", r.verdict),
    )?;
    for (n, g) in r.gaps.iter().enumerate() {
        ensure(g == &rat(1, 3i64.pow(n as u32)), || {
            format!("3^n chain: gap {g} at {n}")
        })?;
    }
    let chain: Vec<_> = (0..=16).map(|n| PrincipalIdeal::int(2i64.pow(n))).collect();
    let r =
        monotone_limit_check(&ctx, &NetSpec { chain, limit: None }).map_err(|e| e.to_string())?;
    ensure(
        r.verdict == NetVerdict::CauchyNotConvergent { floor: rat(1, 1) },
        || format!("{:?}", r.verdict),
    )?;
    ensure(r.gaps.iter().all(|g| g == &rat(1, 1)), || {
        "2^n chain: a gap below 1".into()
    })?;
    let v = cli(
        outputs,
        &["hyper", "net"],
        json!({"ring": {"kind": "padic", "p": 3},
        "payload": {"chain": (0..=16).map(|n| 3i64.pow(n)).collect::<Vec<_>>()}}),
    )?;
    ensure(v["verdict"]["kind"] == "converges", || {
        "CLI 3^n verdict".into()
    })?;
    let v = cli(
        outputs,
        &["hyper", "net"],
        json!({"ring": {"kind": "padic", "p": 3},
        "payload": {"chain": (0..=16).map(|n| 2i64.pow(n)).collect::<Vec<_>>()}}),
    )?;
    ensure(
        v["verdict"] == json!({"kind": "cauchy_not_convergent", "floor": "1/1"}),
        || "CLI 2^n verdict".into(),
    )?;
    Ok("3^n Z converges with gaps 3^-n; 2^n Z is Cauchy, not convergent, floor 1".into())
}

fn far_ideals(outputs: &mut Vec<Value>) -> Check {
    let radius = rat(1, 1);
    let d =
        ideal_density_certificate(&c(2), 1, &radius, &rat(1, 100)).map_err(|e| e.to_string())?;
    ensure(d.degree <= 8 && d.bound == rat(3, 512), || {
        format!("degree {} bound {}", d.degree, d.bound)
    })?;
    ensure(
        disk_norm(&(&CPoly::one() - &d.a), &radius) <= d.bound,
        || "bound is not sound".into(),
    )?;
    let bounds: Vec<BigRational> = (2..=10)
        .map(|z| runge_tail_bound(&CPoly::one(), &c(z), 1, &radius, 8))
        .collect::<Option<_>>()
        .ok_or("ratio test does not apply at degree 8")?;
    ensure(bounds.windows(2).all(|w| w[1] < w[0]), || {
        "bounds are not decreasing".into()
    })?;
    let v = cli(
        outputs,
        &["demo", "densify"],
        json!({"ring": {"kind": "poly", "R": "1"},
        "payload": {"poles": (2..=10).map(|z| z.to_string()).collect::<Vec<_>>(), "eps": "1/100"}}),
    )?;
    ensure(v["rows"][0]["bound"] == "3/512", || "CLI bound at 2".into())?;
    Ok(format!(
        "degree {}, bound 3/512; degree-8 bounds fall from {} to {}",
        d.degree, bounds[0], bounds[8]
    ))
}

fn divergence(outputs: &mut Vec<Value>) -> Check {
    let radius = rat(1, 1);
    let report = ideal_power_divergence_demo(&c(0), &radius, 10).map_err(|e| e.to_string())?;
    ensure(
        report.rows.len() == 11 && report.rows.iter().all(|r| r.lower_bound == rat(1, 1)),
        || "lower bounds".into(),
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    let mut closest: Option<BigRational> = None;
    for row in &report.rows {
        let target = CPoly::monomial(c(1), row.n as usize);
        for _ in 0..100 {
            let deg = rng.random_range(0..=20 - (row.n as usize + 1));
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
            let h = &CPoly::monomial(c(1), row.n as usize + 1) * &q;
            let dist = disk_norm(&(&target - &h), &radius);
            ensure(dist >= row.lower_bound, || {
                format!("n={}: sample at distance {dist}", row.n)
            })?;
            closest = Some(closest.map_or(dist.clone(), |m: BigRational| m.min(dist)));
        }
    }
    cli(
        outputs,
        &["demo", "divergence"],
        json!({"ring": {"kind": "poly", "R": "1"},
        "payload": {"center": "0", "n_max": 10}}),
    )?;
    Ok(format!(
        "lower bound 1 for n <= 10; 1100 samples, closest at {}",
        closest.unwrap()
    ))
}

fn finite_exception(outputs: &mut Vec<Value>) -> Check {
    let ctx = RingContext::poly(rat(1, 1)).unwrap();
    let root = |n: i64| PrincipalIdeal::root_power(c(n), 1);
    let entries = vec![
        (root(0), Element::Poly(CPoly::constant(c(1)))),
        (root(5), Element::Poly(CPoly::zero())),
        (root(7), Element::Poly(CPoly::zero())),
    ];
    let sys = ResidueSystem::new(ctx.clone(), entries, rat(1, 100)).map_err(|e| e.to_string())?;
    let sol = crat_infinite(&sys).map_err(|e| e.to_string())?;
    ensure(sol.exceptional == vec![0], || {
        format!("exceptional {:?}", sol.exceptional)
    })?;
    let mut worst = BigRational::zero();
    for r in &sol.certificate.residuals {
        ensure(r.ideal.contains(&r.witness).unwrap(), || {
            "witness outside its ideal".into()
        })?;
        let f = r.error(&sol.certificate.solution).unwrap();
        let v = disk_norm(f.as_poly().unwrap(), &rat(1, 1));
        worst = worst.max(v);
    }
    ensure(worst < rat(1, 100), || format!("residual {worst}"))?;
    let v = cli(
        outputs,
        &["crt"],
        json!({"ring": {"kind": "poly", "R": "1"},
        "payload": {"ideals": [{"roots": [{"root": "0"}]}, {"roots": [{"root": "5"}]}, {"roots": [{"root": "7"}]}],
                    "targets": [["1"], [], []], "eps": "1/100", "exceptions": true}}),
    )?;
    ensure(v["exceptional"] == json!([0]), || {
        "CLI exceptional set".into()
    })?;
    Ok(format!("F = {{<z>}}, worst recomputed residual {worst}"))
}

/// Leaf paths of a JSON value.
fn leaves(v: &Value, path: &mut Vec<Value>, out: &mut Vec<Vec<Value>>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                path.push(json!(k));
                leaves(x, path, out);
                path.pop();
            }
        }
        Value::Array(a) => {
            for (k, x) in a.iter().enumerate() {
                path.push(json!(k));
                leaves(x, path, out);
                path.pop();
            }
        }
        _ => out.push(path.clone()),
    }
}

fn leaf_mut<'a>(v: &'a mut Value, path: &[Value]) -> &'a mut Value {
    path.iter().fold(v, |v, seg| match seg {
        Value::String(k) => &mut v[k.as_str()],
        _ => &mut v[seg.as_u64().unwrap() as usize],
    })
}

/// Changes one scalar: numbers and numerators go up by one, booleans flip.
fn tamper(v: &mut Value) {
    *v = match v.clone() {
        Value::Number(n) => match n.as_i64() {
            Some(k) => json!(k + 1),
            None => json!(n.as_f64().unwrap_or(0.0) + 1.0),
        },
        Value::Bool(b) => json!(!b),
        Value::String(s) => match s.split_once('/') {
            Some((num, den)) => match num.parse::<BigInt>() {
                Ok(k) => json!(format!("{}/{den}", k + BigInt::one())),
                Err(_) => json!(format!("{s}x")),
            },
            None => match s.parse::<BigInt>() {
                Ok(k) => json!((k + BigInt::one()).to_string()),
                Err(_) => json!(format!("{s}x")),
            },
        },
        _ => json!("x"),
    };
}

fn audit(outputs: &mut Vec<Value>) -> Check {
    let outputs = &*outputs;
    let (report, code) = crat(&["verify"], &Value::Array(outputs.clone()));
    ensure(code == 0, || {
        format!("verify rejected a fresh output: {report}")
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(59);
    let mut by_recheck = 0;
    for t in 0..20 {
        let k = rng.random_range(0..outputs.len());
        let mut v = outputs[k].clone();
        let mut paths = Vec::new();
        leaves(&v, &mut Vec::new(), &mut paths);
        let path = &paths[rng.random_range(0..paths.len())];
        tamper(leaf_mut(&mut v, path));
        let (report, code) = crat(&["verify"], &v);
        ensure(code == 4, || {
            format!("tampering {t} at {path:?} of output {k} passed: {report}")
        })?;
        let failures = report["failures"].as_array().cloned().unwrap_or_default();
        if failures
            .iter()
            .any(|f| !f.as_str().unwrap_or("").starts_with("rerun differs"))
        {
            by_recheck += 1;
        }
    }
    Ok(format!("{} outputs verify; 20/20 tamperings rejected ({by_recheck} by the independent recheck alone)", outputs.len()))
}

struct Criterion {
    id: u32,
    title: &'static str,
    budget: Option<Duration>,
    run: fn(&mut Vec<Value>) -> Check,
}

fn main() {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria = [
        Criterion {
            id: 1,
            title: "classical CRT recovery",
            budget: secs(1),
            run: classical_crt,
        },
        Criterion {
            id: 2,
            title: "densification rate",
            budget: secs(1),
            run: densification_rate,
        },
        Criterion {
            id: 3,
            title: "p-adic TCM characterization",
            budget: secs(10),
            run: tcm_characterization,
        },
        Criterion {
            id: 4,
            title: "Lagrange over Z[sqrt 2]",
            budget: secs(5),
            run: lagrange,
        },
        Criterion {
            id: 5,
            title: "Hermite jets",
            budget: secs(5),
            run: hermite,
        },
        Criterion {
            id: 6,
            title: "hyperspace lattice and entourage",
            budget: secs(30),
            run: hyperspace_lattice,
        },
        Criterion {
            id: 7,
            title: "monotone net limits",
            budget: secs(5),
            run: monotone_nets,
        },
        Criterion {
            id: 8,
            title: "density of far ideals",
            budget: secs(5),
            run: far_ideals,
        },
        Criterion {
            id: 9,
            title: "non-convergence of ideal powers",
            budget: secs(30),
            run: divergence,
        },
        Criterion {
            id: 10,
            title: "finite-exception CRAT",
            budget: secs(10),
            run: finite_exception,
        },
        Criterion {
            id: 11,
            title: "end-to-end audit",
            budget: None,
            run: audit,
        },
    ];
    let mut outputs = Vec::new();
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = (c.run)(&mut outputs);
        let took = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) => match c.budget {
                Some(b) if took > b => (false, format!("{d}; over the {}s budget", b.as_secs())),
                _ => (true, d),
            },
            Err(e) => (false, e),
        };
        let budget = c
            .budget
            .map_or("-".to_string(), |b| format!("{}s", b.as_secs()));
        println!(
            "criterion {:>2} {} [{:.2}s / {budget}] {}: {detail}",
            c.id,
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            c.title
        );
        if !ok {
            failed += 1;
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
