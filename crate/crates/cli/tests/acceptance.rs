//! One line per acceptance criterion; the test fails if any criterion does.

use std::process::Command;
use std::time::{Duration, Instant};

use torsionlab_core::special_maps::{self, Condition, PeriodicMap, VerifyOptions};
use torsionlab_core::symplectic::{self, Parity};
use torsionlab_core::zmod_linalg::in_span_fp;
use torsionlab_core::{bounds, picard, poly, Outcome, Status};

const BIN: &str = env!("CARGO_BIN_EXE_torsionlab");

struct Line {
    id: u32,
    ok: bool,
    detail: String,
}

fn passed(o: &Outcome) -> bool {
    o.status == Status::Pass
}

fn timed(limit: Duration, f: impl FnOnce() -> (bool, String)) -> (bool, String) {
    let start = Instant::now();
    let (ok, detail) = f();
    let took = start.elapsed();
    (ok && took < limit, format!("{detail}; {:.2}s (limit {}s)", took.as_secs_f64(), limit.as_secs()))
}

fn c1() -> (bool, String) {
    timed(Duration::from_secs(1), || {
        let mut ok = true;
        for p in [3u64, 5, 7, 11, 13] {
            let val = poly::verify_lemma_val(p).unwrap();
            let expected: Vec<u64> = (0..p).map(|r| p - 1 - r).collect();
            ok &= val.witness["valuations"] == serde_json::json!(expected);
            ok &= passed(&val);
            ok &= passed(&poly::verify_sr_congruence(p).unwrap());
            ok &= passed(&poly::verify_sr_identities(p, 3 * p).unwrap());
        }
        (ok, "valuations, congruence and recursions for p in {3,5,7,11,13}".into())
    })
}

fn c2() -> (bool, String) {
    timed(Duration::from_secs(10), || {
        let mut ok = true;
        let mut sizes = Vec::new();
        for (p, g, k, n) in [(5u64, 2u32, 1u32, 2u32), (7, 2, 1, 2), (7, 3, 1, 2), (5, 2, 2, 2)] {
            let kern = special_maps::special_kernel(p, k, n, g).unwrap();
            let mono = PeriodicMap::monomial(p, k, n, g).unwrap();
            let q = p.pow(k) as i128;
            let mut expected: Vec<PeriodicMap> = (0..q).map(|l| mono.scale(l)).collect();
            expected.sort_by(|a, b| a.values().cmp(b.values()));
            let got = kern.elements(1 << 20).unwrap();
            ok &= got == expected;
            ok &= passed(&special_maps::verify_lemma_ar1(p, k, n, g, &VerifyOptions::default()).unwrap().to_outcome());
            sizes.push(got.len());
        }
        (ok, format!("kernel = multiples of n^g, sizes {sizes:?}"))
    })
}

fn c3() -> (bool, String) {
    let mut ok = true;
    for (p, g) in [(5u64, 3u32), (5, 4), (7, 5)] {
        let period = p.pow(2) as i128;
        let shift = g - ((p - 1) / 2) as u32;
        let table = |e: u32| -> Vec<u64> {
            (0..period).map(|n| PeriodicMap::monomial(p, 1, 2, e).unwrap().eval(n)).collect()
        };
        let basis = vec![table(g), table(shift)];
        for v in special_maps::special_kernel_fp(p, 2, g, Condition::Special).unwrap() {
            let v: Vec<u64> = v.values().to_vec();
            ok &= in_span_fp(&basis, &v, p);
        }
        ok &= passed(&special_maps::verify_lemma_modp(p, 2, g, &VerifyOptions::default()).unwrap().to_outcome());
    }
    (ok, "kernel over F_p inside span{n^g, n^(g-(p-1)/2)} for (5,3),(5,4),(7,5)".into())
}

fn c4() -> (bool, String) {
    let mut ok = true;
    let mut counted = 0;
    for g in [4u32, 5, 6] {
        let kern = special_maps::special_kernel(5, 2, 2, g).unwrap();
        for phi in kern.elements(1 << 20).unwrap() {
            let dev = phi.deviation_from_monomial(g).scale(5);
            ok &= dev.is_zero();
            counted += 1;
        }
        ok &= passed(&special_maps::verify_theorem_ar2(5, 2, 2, g, &VerifyOptions::default()).unwrap().to_outcome());
    }
    (ok, format!("5*(phi(n) - n^g phi(1)) = 0 on all {counted} kernel elements, g in {{4,5,6}}"))
}

fn c5() -> (bool, String) {
    let mut ok = true;
    for p in [5u64, 7] {
        ok &= passed(&special_maps::verify_p2_annihilation(p, 3, 2, &VerifyOptions::default()).unwrap().to_outcome());
        ok &= bounds::variant_n_p_g_with_zero(p).unwrap() == 2;
    }
    (ok, "p^2 annihilation at g=(p+1)/2 and Vandermonde-with-0 valuation 2 for p in {5,7}".into())
}

fn c6() -> (bool, String) {
    let mut ok = true;
    let mut exps = Vec::new();
    for (p, k, n, g) in [(5u64, 2u32, 2u32, 2u32), (3, 2, 2, 2)] {
        let e = bounds::n_p_g(p, g).unwrap();
        exps.push(e);
        let kern = special_maps::weak_kernel(p, k, n, g).unwrap();
        let factor = (p as i128).pow(e.min(k));
        for phi in kern.elements(1 << 20).unwrap() {
            ok &= phi.deviation_from_monomial(g).scale(factor).is_zero();
        }
        ok &= passed(&special_maps::verify_weak_proposition(p, k, n, g, &VerifyOptions::default()).unwrap().to_outcome());
    }
    (ok, format!("weakly special annihilation with n(p,g) = {exps:?}"))
}

fn c7() -> (bool, String) {
    let o = bounds::verify_bound_engine(100, 10).unwrap();
    (passed(&o), format!("bound engine, {} (d,g) pairs, N(2) = {}", o.witness["pairs_checked"], o.witness["N2"]))
}

fn c8() -> (bool, String) {
    timed(Duration::from_secs(30), || {
        let action = symplectic::sp4_s6_action().unwrap();
        let forms = symplectic::enumerate_forms(2).unwrap();
        let odd = forms.iter().filter(|(_, p)| *p == Parity::Odd).count();
        let even = forms.iter().filter(|(_, p)| *p == Parity::Even).count();
        let action_ok = passed(&symplectic::verify_sp4_s6().unwrap());
        let e11 = symplectic::verify_e11_fixed_odd_form().unwrap();
        let ok = action.order() == 720 && odd == 6 && even == 10 && action_ok && passed(&e11);
        let detail = format!(
            "|Sp4(F2)|={}, {odd} odd / {even} even, action+signs {}, E11 fixes printed form: {}",
            action.order(),
            if action_ok { "ok" } else { "FAIL" },
            if passed(&e11) { "yes".to_string() } else { format!("no ({})", e11.counterexample.unwrap_or_default()) }
        );
        (ok, detail)
    })
}

fn c9() -> (bool, String) {
    let r2 = symplectic::verify_commutator_relations(2).unwrap();
    let r3 = symplectic::verify_commutator_relations(3).unwrap();
    let d3 = symplectic::verify_delta_in_commutators(3).unwrap();
    (
        passed(&r2) && passed(&r3) && passed(&d3),
        "both commutator relations at g in {2,3}; Delta generators at g=3 have commutator witnesses".into(),
    )
}

fn c10() -> (bool, String) {
    let mut ok = true;
    let mut counts = Vec::new();
    for (p, r) in [(2u64, 1usize), (2, 2), (3, 1), (3, 2)] {
        let o = symplectic::verify_lagrangian_count(p, r, symplectic::DEFAULT_LAGRANGIAN_LIMIT).unwrap();
        ok &= passed(&o);
        ok &= passed(&symplectic::covering_degree_prime_check(p, r, symplectic::DEFAULT_LAGRANGIAN_LIMIT).unwrap());
        counts.push(o.witness["count"].to_string());
    }
    (ok, format!("Lagrangian counts [{}], each prime to p", counts.join(", ")))
}

fn c11() -> (bool, String) {
    let o = picard::verify_m2bar_chain().unwrap();
    (
        passed(&o),
        format!(
            "Pic(Mbar2) = {}, Pic(M2) = {}, order(5 lambda - delta1) = {}",
            o.witness["pic_mbar2"], o.witness["pic_m2"], o.witness["order_5lambda_minus_delta1"]
        ),
    )
}

fn c12() -> (bool, String) {
    let m = picard::verify_elliptic_model().unwrap();
    let r = picard::verify_62_relations_elliptic(25).unwrap();
    (passed(&m) && passed(&r), "Delta(L3(e)) = -omega, order 4, relations for n <= 25 in Z/12".into())
}

fn c13() -> (bool, String) {
    let i2 = picard::verify_interpolation(2, 20).unwrap();
    let i3 = picard::verify_interpolation(3, 20).unwrap();
    let a = picard::verify_annihilator(2, 18, 12).unwrap();
    (
        passed(&i2) && passed(&i3) && passed(&a),
        format!(
            "closed forms for |n| <= 20 at g in {{2,3}}; g=2 exponents 2^{} and 3^{}",
            a.witness["two_primary"]["q_exponent"], a.witness["three_primary"]["q_exponent"]
        ),
    )
}

fn c14() -> (bool, String) {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.toml");
    let bad = dir.path().join("bad.toml");
    let entry = |count: u32| format!("[[check]]\nid = \"lagrangian-count\"\ngrid = {{ p = 2, r = 2 }}\nexpect = {{ count = {count} }}\n");
    std::fs::write(&good, entry(15)).unwrap();
    std::fs::write(&bad, entry(16)).unwrap();
    let code = |path: &std::path::Path| {
        Command::new(BIN).args(["suite", "--config"]).arg(path).output().unwrap().status.code()
    };
    let (g, b) = (code(&good), code(&bad));
    (g == Some(0) && b == Some(1), format!("uncorrupted exit {g:?}, corrupted exit {b:?}"))
}

#[test]
fn acceptance_criteria() {
    type Criterion = fn() -> (bool, String);
    let checks: Vec<(u32, Criterion)> = vec![
        (1, c1),
        (2, c2),
        (3, c3),
        (4, c4),
        (5, c5),
        (6, c6),
        (7, c7),
        (8, c8),
        (9, c9),
        (10, c10),
        (11, c11),
        (12, c12),
        (13, c13),
        (14, c14),
    ];
    let mut lines = Vec::new();
    for (id, f) in checks {
        let (ok, detail) = f();
        let line = Line { id, ok, detail };
        println!("criterion {:>2}: {} — {}", line.id, if line.ok { "PASS" } else { "FAIL" }, line.detail);
        lines.push(line);
    }
    let start = Instant::now();
    let suite = Command::new(BIN).args(["suite", "--jobs", "4"]).output().unwrap();
    let took = start.elapsed();
    let summary = String::from_utf8_lossy(&suite.stdout).lines().last().unwrap_or_default().to_string();
    println!(
        "default suite: {summary}; exit {:?}; {:.2}s (limit 120s)",
        suite.status.code(),
        took.as_secs_f64()
    );
    let failed: Vec<u32> = lines.iter().filter(|l| !l.ok).map(|l| l.id).collect();
    assert!(took < Duration::from_secs(120), "default suite too slow");
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
