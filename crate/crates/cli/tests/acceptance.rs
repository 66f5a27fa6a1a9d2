//! Acceptance criteria 1-10, one PASS/FAIL line each.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use commvar::format::{certificate_json, to_text};
use commvar_core::census::{count_commuting_nilpotent, enumerate_nilpotent, CountMethod, DEFAULT_BUDGET};
use commvar_core::certify::{certify, certify_gamma, Verdict, DEFAULT_SEARCH_BUDGET};
use commvar_core::geomdim::{commuting_tangent_dim, param_rank, MapSpec};
use commvar_core::linalg::span_dim;
use commvar_core::nilcore::{
    algebra_closure, centralizer, conjugate, is_commuting_tuple, is_nilpotent, regular_nilpotent,
};
use commvar_core::witnesses::{gamma_v, parabolic_nilradical, random_invertible, sample_regular_tuple};
use commvar_core::{Field, FieldSpec, Mat, MatTuple, PrimeField, Rationals, Rng};
use serde_json::Value;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let spent = start.elapsed();
    ensure(spent <= limit, || format!("took {spent:?}, limit {limit:?}"))
}

fn big_prime() -> PrimeField {
    PrimeField::new(1_000_003).unwrap()
}

fn commvar(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_commvar")).args(args).output().expect("run commvar");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn regular_centralizer<F: Field>(f: &F, n: usize) -> Result<(), String> {
    let x = regular_nilpotent(f, n);
    let z = centralizer(&x).map_err(|e| e.to_string())?;
    ensure(z.dim == n, || format!("n={n}: dim {}", z.dim))?;
    let powers: Vec<Mat<F>> = (0..n as u32).map(|k| x.pow(k).unwrap()).collect();
    let mut joint = powers.clone();
    joint.extend(z.basis);
    let (p, j) = (span_dim(&powers).unwrap(), span_dim(&joint).unwrap());
    ensure(p == n && j == n, || format!("n={n}: span mismatch ({p}, {j})"))
}

fn criterion_1() -> Check {
    let start = Instant::now();
    for n in 2..=10 {
        regular_centralizer(&Rationals, n)?;
        regular_centralizer(&big_prime(), n)?;
    }
    within(start, Duration::from_secs(5))?;
    Ok("dim z(x_reg) = n with span {I, x, ..., x^(n-1)}, n = 2..10, Q and F_1000003".into())
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let mut dims = Vec::new();
    for s in 1..=3 {
        let v = gamma_v(s, &big_prime()).unwrap();
        let d = centralizer(&v).unwrap().dim;
        ensure(d == 6 * s * s, || format!("s={s}: dim {d}"))?;
        dims.push(d);
    }
    within(start, Duration::from_secs(10))?;
    Ok(format!("dim z(v) = {dims:?}"))
}

fn criterion_3() -> Check {
    let f = big_prime();
    let mut draws = 0;
    for n in 2..=6 {
        for r in 2..=5 {
            for k in 0..500u64 {
                let seed = (n as u64) << 40 | (r as u64) << 32 | k;
                let t = sample_regular_tuple(n, r, &f, seed).map_err(|e| e.to_string())?;
                ensure(is_commuting_tuple(&t), || format!("({n},{r}) seed {seed}: not commuting"))?;
                ensure(t.mats().iter().all(is_nilpotent), || format!("({n},{r}) seed {seed}: not nilpotent"))?;
                let d = algebra_closure(&t).dim;
                ensure(d < n, || format!("({n},{r}) seed {seed}: algebra dim {d}"))?;
                draws += 1;
            }
        }
    }
    Ok(format!("{draws} regular-component draws, zero violations"))
}

fn criterion_4() -> Check {
    let f = big_prime();
    for n in 2..=20 {
        let (_, basis) = parabolic_nilradical(n, &f).unwrap();
        let d = span_dim(&basis).unwrap();
        ensure(basis.len() == n * n / 4 && d == n * n / 4, || format!("n={n}: dim {d}"))?;
        ensure((d > n - 1) == (n >= 4), || format!("n={n}: dim {d} vs n-1"))?;
        for a in &basis {
            for b in &basis {
                ensure(a.mul(b).unwrap().is_zero(), || format!("n={n}: nonzero product"))?;
            }
        }
    }
    Ok("u_P products vanish, dim = floor(n^2/4), dim > n-1 iff n >= 4 for n = 2..20".into())
}

fn criterion_5() -> Check {
    let start = Instant::now();
    let f = PrimeField::default();
    let mut got = Vec::new();
    for ((n, r), expected) in [(4, 2), (4, 6), (5, 3), (6, 4), (8, 4)].into_iter().zip([12, 28, 24, 45, 80]) {
        let spec = MapSpec::parabolic(n, r);
        let mut rank = 0;
        for k in 0..=3 {
            rank = param_rank(&spec, &f, 7 + k).unwrap().rank;
            if rank == expected {
                break;
            }
        }
        ensure(rank == expected, || format!("({n},{r}): rank {rank}, expected {expected}"))?;
        got.push(rank);
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("parabolic moment-map ranks {got:?}"))
}

fn certify_and_verify(dir: &Path, n: usize, r: usize) -> Result<Value, String> {
    let path = dir.join(format!("cert_{n}_{r}.json"));
    let p = path.to_str().unwrap();
    let (code, _) = commvar(&["certify", &n.to_string(), &r.to_string(), "--seed", "7", "--out", p]);
    ensure(code == 0, || format!("certify {n} {r} exited {code}"))?;
    let (code, _) = commvar(&["verify", p]);
    ensure(code == 0, || format!("verify of ({n},{r}) exited {code}"))?;
    serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).map_err(|e| e.to_string())
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let mut parts = Vec::new();
    for (n, r, kind, q, t) in [
        (4, 4, "AlgebraDim", 4, 3),
        (4, 6, "ComponentDim", 28, 27),
        (8, 4, "ComponentDim", 80, 77),
        (16, 3, "GammaDim", 272, 270),
    ] {
        let c = certify_and_verify(dir.path(), n, r)?;
        let (k, cq, ct, v) = (&c["kind"], &c["quantity"], &c["threshold"], &c["verdict"]);
        ensure(k == kind && cq == q && ct == t && v == "REDUCIBLE", || {
            format!("({n},{r}): {k} {cq} > {ct} {v}")
        })?;
        parts.push(format!("({n},{r}) {kind} {q}>{t}"));
    }
    within(start, Duration::from_secs(60))?;
    Ok(parts.join(", "))
}

fn criterion_7() -> Check {
    for (n, r) in [("3", "3"), ("2", "5")] {
        let (code, out) = commvar(&["certify", n, r, "--seed", "7"]);
        ensure(code == 2, || format!("certify {n} {r} exited {code}"))?;
        ensure(out.contains("\"NOT_FOUND\""), || format!("certify {n} {r}: verdict missing"))?;
    }
    let mut parts = Vec::new();
    for (s, threshold) in [(1, 18), (2, 70), (3, 154)] {
        let c = certify_gamma(s, FieldSpec::default_prime(), 7).unwrap();
        ensure(c.verdict == Verdict::NotFound, || format!("s={s}: {:?}", c.verdict))?;
        ensure(c.threshold == threshold && c.quantity <= c.threshold, || {
            format!("s={s}: {} vs {}", c.quantity, c.threshold)
        })?;
        parts.push(format!("s={s} {}<={}", c.quantity, c.threshold));
    }
    Ok(format!("certify 3 3 / 2 5 NOT_FOUND; gamma {}", parts.join(", ")))
}

fn criterion_8() -> Check {
    let start = Instant::now();
    for ((n, q), expected) in [(2, 2), (2, 3), (3, 2)].into_iter().zip([4, 9, 64]) {
        let got = enumerate_nilpotent(n, q, DEFAULT_BUDGET).unwrap().len();
        ensure(got == expected, || format!("|N_{n}(F_{q})| = {got}"))?;
    }
    for method in [CountMethod::CentralizerPruned, CountMethod::FullEnumeration] {
        for (q, expected) in [(2, 10), (3, 33)] {
            let got = count_commuting_nilpotent(2, 2, q, method, DEFAULT_BUDGET).unwrap();
            ensure(got == expected, || format!("{}: q={q} count {got}", method.name()))?;
        }
    }
    within(start, Duration::from_secs(10))?;
    Ok("nilpotent counts 4, 9, 64; pair counts 10, 33".into())
}

fn criterion_9() -> Check {
    let f = big_prime();
    for n in 2..=6 {
        let t = MatTuple::new(vec![regular_nilpotent(&f, n), Mat::zeros(&f, n, n)]).unwrap();
        let d = commuting_tangent_dim(&t).unwrap();
        ensure(d == n * n + n, || format!("n={n}: tangent dim {d}"))?;
    }
    let mut rng = Rng::new(2024);
    for k in 0..100u64 {
        let n = rng.range_inclusive(2, 5);
        let t = sample_regular_tuple(n, 2, &f, 1000 + k).unwrap();
        let g = random_invertible(&f, n, &mut rng, 64).unwrap();
        let c = conjugate(&g, &t).unwrap();
        let (a, b) = (commuting_tangent_dim(&t).unwrap(), commuting_tangent_dim(&c).unwrap());
        ensure(a == b, || format!("pair {k}: {a} vs {b}"))?;
    }
    Ok("tangent dim at (x_reg, 0) = n^2 + n for n = 2..6; 100 conjugated pairs agree".into())
}

fn criterion_10() -> Check {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = Rng::new(10);
    let mut reducible = 0;
    for k in 0..100 {
        let n = rng.range_inclusive(2, 8);
        let r = rng.range_inclusive(2, 8);
        let seed = rng.next_u64();
        let c = certify(n, r, FieldSpec::default_prime(), seed, DEFAULT_SEARCH_BUDGET).unwrap();
        reducible += (c.verdict == Verdict::Reducible) as usize;
        let mut doc = certificate_json(&c);
        let path = dir.path().join(format!("run_{k}.json"));
        let p = path.to_str().unwrap();
        std::fs::write(&path, to_text(&doc)).unwrap();
        let (code, _) = commvar(&["verify", p]);
        ensure(code == 0, || format!("run {k} ({n},{r}) seed {seed}: verify exited {code}"))?;
        let q = doc["quantity"].as_u64().unwrap();
        doc["quantity"] = Value::from(q ^ 1);
        std::fs::write(&path, to_text(&doc)).unwrap();
        let (code, _) = commvar(&["verify", p]);
        ensure(code == 3, || format!("run {k} ({n},{r}): tampered verify exited {code}"))?;
    }
    Ok(format!("100 certificates re-verify ({reducible} REDUCIBLE); tampered quantities exit 3"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("centralizer of the regular nilpotent", criterion_1),
        ("centralizer of v", criterion_2),
        ("regular-component algebra bound", criterion_3),
        ("u_P facts", criterion_4),
        ("parabolic moment-map rank", criterion_5),
        ("reducibility certificates", criterion_6),
        ("negative controls", criterion_7),
        ("census oracle", criterion_8),
        ("tangent probe", criterion_9),
        ("certificate round-trip", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS [{ms} ms] {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL [{ms} ms] {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
