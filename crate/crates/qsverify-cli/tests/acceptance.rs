//! Acceptance run: one PASS/FAIL line per criterion. All comparisons are exact
//! (integer or rational equality); the only tolerances are the wall-clock limits
//! for criteria 1 (30 s) and 5 (5 s).

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use qsverify::casecheck::{rr_h0, rr_m};
use qsverify::chartab::DecomposeMode;
use qsverify::hurwitz::{Feasibility, HurwitzInstance};
use qsverify::repring::{constituent_degrees, ext_power, invariant_counts, plethysm_residuals, sym_power, tensor};
use qsverify::validation::validate_dataset;
use qsverify::{CharacterTable, Cyclotomic, DataSet, Rational};
use serde_json::Value;

type Outcome = Result<String, String>;

const TABLES_LIMIT: Duration = Duration::from_secs(30);
const HURWITZ_LIMIT: Duration = Duration::from_secs(5);

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

/// Runs the binary with JSON output; returns (exit code, envelope, elapsed).
fn cli(args: &[&str]) -> Result<(i32, Value, Duration), String> {
    let t = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_qsverify"))
        .arg("--data")
        .arg(data_dir())
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    let v: Value = serde_json::from_slice(&out.stdout)
        .map_err(|e| format!("{args:?}: {e}; stderr: {}", String::from_utf8_lossy(&out.stderr)))?;
    Ok((out.status.code().unwrap_or(-1), v, elapsed))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

fn table_regeneration() -> Outcome {
    let (code, v, t) = cli(&["tables"])?;
    let c = &v["result"]["comparison"];
    let (matched, expected) = (c["matched_rows"].as_u64(), c["expected_rows"].as_u64());
    ensure(code == 0 && v["passed"] == true, || format!("exit {code}"))?;
    ensure(matched == expected && c["mismatched_blocks"] == 0, || format!("{matched:?}/{expected:?} rows"))?;
    ensure(t < TABLES_LIMIT, || format!("took {t:?}"))?;
    Ok(format!("{}/{} rows, degrees 1-10, {:.2?}", matched.unwrap(), expected.unwrap(), t))
}

fn oracle_cross_check(ds: &DataSet) -> Outcome {
    let report = validate_dataset(ds);
    let mut rows = Vec::new();
    for g in ["A5", "A6", "A7", "PSL2(7)", "PSL2(11)"] {
        let o = report
            .oracles
            .iter()
            .find(|o| o.report.subject == format!("permutation oracle {g}"))
            .ok_or(format!("no oracle for {g}"))?;
        ensure(o.report.passed(), || format!("{g}: {:?}", o.report.failures().map(|c| &c.name).collect::<Vec<_>>()))?;
        let d = o.deleted_standard.as_ref().ok_or(format!("{g}: action not 2-transitive"))?;
        ensure(d.polya_counts == d.character_counts, || format!("{g}: telescoping differs"))?;
        if g != "A5" {
            ensure(o.report.checks.iter().any(|c| c.name.ends_with("match the expected row") && c.passed), || {
                format!("{g}: expected row not compared")
            })?;
        }
        if g == "A7" {
            ensure(d.polya_counts == [0, 1, 1, 2, 2, 4, 4, 6, 7, 10], || format!("A7 row {:?}", d.polya_counts))?;
        }
        rows.push(format!("{g}/{}", d.dimension));
    }
    Ok(format!("classes, power maps and telescoped counts agree for {}", rows.join(", ")))
}

fn decomposition_claims(ds: &DataSet) -> Outcome {
    let err = |e: qsverify::ChartabError| e.to_string();
    let l211 = ds.table("PSL2(11)").ok_or(format!("no table {}", "PSL2(11)"))?;
    let v = l211.character("chi5a").map_err(err)?;
    let e2 = ext_power(l211, &v, 2).map_err(err)?;
    ensure(l211.inner_product(&e2, &e2).map_err(err)? == q("1"), || "exterior square reducible".into())?;
    let s3 = constituent_degrees(l211, &sym_power(l211, &v, 3).map_err(err)?).map_err(err)?;
    ensure(s3 == [1, 10, 12, 12], || format!("S^3 degrees {s3:?}"))?;

    let sp = ds.table("Sp4(3)").ok_or(format!("no table {}", "Sp4(3)"))?;
    let w = sp.character("chi4a").map_err(err)?;
    let s5 = constituent_degrees(sp, &sym_power(sp, &w, 5).map_err(err)?).map_err(err)?;
    ensure(s5 == [20, 36], || format!("S^5 degrees {s5:?}"))?;

    let a7 = ds.table("3.A7").ok_or(format!("no table {}", "3.A7"))?;
    let sixes: Vec<_> = a7.irreducibles.iter().filter(|c| c.degree() == 6).collect();
    let faithful: Vec<_> = sixes.iter().filter(|c| a7.is_faithful(&c.values)).collect();
    let plain = sixes.iter().find(|c| !a7.is_faithful(&c.values)).ok_or("no 6-dim of A7")?;
    ensure(faithful.len() >= 2, || "fewer than two faithful 6-dims".into())?;
    let vp = a7.virtual_of(&faithful[0].values);
    let vpp = a7.virtual_of(&faithful[1].values);
    let u = a7.virtual_of(&plain.values);
    let checks = [
        ("S^2 faithful", sym_power(a7, &vp, 2), vec![6, 15]),
        ("S^2 plain", sym_power(a7, &u, 2), vec![1, 6, 14]),
        ("faithful x dual", tensor(a7, &vp, &vpp), vec![1, 14, 21]),
        ("faithful x plain", tensor(a7, &vp, &u), vec![15, 21]),
    ];
    for (name, phi, want) in checks {
        let got = constituent_degrees(a7, &phi.map_err(err)?).map_err(err)?;
        ensure(got == want, || format!("{name}: {got:?}"))?;
    }
    Ok("exterior square irreducible; S^3 {1,10,12,12}; S^5 {20,36}; two S^2 and two tensor displays".into())
}

fn riemann_roch(cases: &Value) -> Outcome {
    let want = [
        ("A7-23", 5, 20),
        ("A7-P3", 3, 56),
        ("PSp43-P3", 3, 56),
        ("PSp43-B", 4, 15),
        ("PSL211-K", 4, 34),
        ("PSL211-g8", 9, 40),
    ];
    let reports = cases["result"]["cases"].as_array().ok_or("no case reports")?;
    for (id, m, h0) in want {
        let r = reports.iter().find(|r| r["id"] == id).ok_or(format!("missing {id}"))?;
        let (n, h3) = (r["n"].as_u64().unwrap(), r["h3"].as_u64().unwrap());
        let lib = (rr_m(n, h3).map_err(|e| e.to_string())?, rr_h0(n, h3).map_err(|e| e.to_string())?);
        ensure(lib == (m, h0) && r["m"] == m && r["h0"] == h0, || format!("{id}: {lib:?}, report {} {}", r["m"], r["h0"]))?;
    }
    Ok("(m, h0) exact for all six cases".into())
}

fn hurwitz_suite() -> Outcome {
    let start = Instant::now();
    let batch = data_dir().join("hurwitz/a7_cover.txt");
    let (code, v, _) = cli(&["hurwitz", "--batch", batch.to_str().unwrap()])?;
    ensure(code == 0, || format!("batch exit {code}"))?;
    let recs = v["result"].as_array().ok_or("no records")?;
    let lhs: Vec<&str> = recs.iter().map(|r| r["lhs"].as_str().unwrap_or("")).collect();
    ensure(lhs == ["169/84", "5071/2520", "634/315"], || format!("lhs {lhs:?}"))?;
    ensure(recs.iter().all(|r| r["verdict"] == "INFEASIBLE"), || "a 5040 instance is feasible".into())?;

    let (_, v, _) = cli(&["hurwitz", "--order", "2520", "--genus", "0..4", "--orders", "2,3,4,5,6,7", "--bound-order", "2520"])?;
    let recs = v["result"].as_array().ok_or("no records")?;
    ensure(recs.len() == 5 && recs.iter().all(|r| r["verdict"] == "ELIMINATED_BOUND"), || "2520 bound".into())?;

    let mut boxed = 0;
    for (order, orders) in [("660", "2,3,5,6,11"), ("25920", "2,3,4,5,6,9,12")] {
        let (_, v, _) = cli(&["hurwitz", "--order", order, "--genus", "9..13", "--orders", orders])?;
        let recs = v["result"].as_array().ok_or("no records")?;
        ensure(recs.len() == 5 && recs.iter().all(|r| r["verdict"] == "INFEASIBLE"), || format!("{order}: {recs:?}"))?;
        for r in recs.iter().filter(|r| r.get("box_agrees").is_some()) {
            ensure(r["box_agrees"] == true, || format!("{order}: box disagrees"))?;
            boxed += 1;
        }
    }

    // exhaustive grid of instances with at most six orders
    let groups: [(u64, &[u64]); 4] = [(60, &[2, 3, 5]), (168, &[2, 3, 4, 7]), (360, &[2, 3, 4, 5]), (660, &[2, 3, 5, 6, 11])];
    for (order, rs) in groups {
        for mask in 1..(1u32 << rs.len()) {
            let sub: Vec<u64> = (0..rs.len()).filter(|i| mask & (1 << i) != 0).map(|i| rs[i]).collect();
            for g in 0..12 {
                let inst = HurwitzInstance::new(order, &sub, g).map_err(|e| e.to_string())?;
                let first = inst.box_solutions().into_iter().next();
                let agree = match inst.feasible().map_err(|e| e.to_string())? {
                    Feasibility::Feasible { witness } => first == Some(witness),
                    Feasibility::Infeasible { .. } => first.is_none(),
                };
                ensure(agree, || format!("box disagrees at {order} {sub:?} g={g}"))?;
                boxed += 1;
            }
        }
    }
    let t = start.elapsed();
    ensure(t < HURWITZ_LIMIT, || format!("took {t:?}"))?;
    Ok(format!("lhs exact, all verdicts as required, box agrees on {boxed} instances, {t:.2?}"))
}

fn case_verdicts(ds: &DataSet, cases: &Value, code: i32) -> Outcome {
    ensure(code == 0 && cases["passed"] == true, || format!("exit {code}"))?;
    let exps = cases["result"]["expectations"].as_array().ok_or("no expectations")?;
    ensure(exps.len() == 8, || format!("{} reports", exps.len()))?;
    for e in exps {
        ensure(e["verdict"] == "AllEliminated" && e["matches"] == true, || format!("{e}"))?;
    }
    let t = ds.table("2.A7").ok_or(format!("no table {}", "2.A7"))?;
    let chi = t.character("chi4a").map_err(|e| e.to_string())?;
    let counts = invariant_counts(t, &chi, 10).map_err(|e| e.to_string())?;
    let first = counts.iter().position(|&c| c > 0).map(|i| i + 1);
    ensure(first == Some(8), || format!("first 2.A7 invariant at {first:?}"))?;
    Ok("8 reports AllEliminated with expected assumed-step counts; first 2.A7 invariant at degree 8".into())
}

fn cyclotomic() -> impl Strategy<Value = Cyclotomic> {
    prop::sample::select(vec![1u32, 3, 4, 5, 6, 8, 10, 12, 15, 24])
        .prop_flat_map(|n| (Just(n), prop::collection::vec((0..n as i64, -6i64..=6, 1i64..=4), 0..5)))
        .prop_map(|(n, terms)| {
            let terms: Vec<(i64, Rational)> = terms.into_iter().map(|(k, a, b)| (k, q(&format!("{a}/{b}")))).collect();
            Cyclotomic::new(n, &terms).unwrap()
        })
}

fn run<S: Strategy>(cases: u32, s: S, f: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() })
        .run(&s, f)
        .map_err(|e| e.to_string())
}

fn property_suites(ds: &DataSet) -> Outcome {
    run(10_000, (cyclotomic(), cyclotomic(), cyclotomic()), |(a, b, c)| {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a + &(-&a)).is_zero());
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inv().unwrap(), Cyclotomic::one());
        }
        Ok(())
    })
    .map_err(|e| format!("field axioms: {e}"))?;

    let tables: Vec<&CharacterTable> = ds.tables.values().collect();
    for t in &tables {
        let r = qsverify::chartab::validate(t);
        for name in ["first orthogonality", "column orthogonality"] {
            ensure(r.checks.iter().any(|c| c.name == name && c.passed), || format!("{}: {name}", t.group))?;
        }
    }

    run(3, 0..tables.len(), |i| {
        let t = tables[i];
        for chi in &t.irreducibles {
            let r = plethysm_residuals(t, &t.virtual_of(&chi.values), 10).unwrap();
            prop_assert!(r.iter().all(|x| x.is_zero()), "{} {}", t.group, chi.label);
        }
        Ok(())
    })
    .map_err(|e| format!("plethysm: {e}"))?;

    let combos = (0..tables.len()).prop_flat_map(|i| (Just(i), prop::collection::vec(0i64..4, tables[i].class_count())));
    run(1_000, combos, |(i, mults)| {
        let t = tables[i];
        let dec = t.decompose(&t.combination(&mults), DecomposeMode::Strict).unwrap();
        let got: Vec<Rational> = dec.multiplicities.iter().map(|(_, m)| m.clone()).collect();
        let want: Vec<Rational> = mults.iter().map(|m| q(&m.to_string())).collect();
        prop_assert_eq!(got, want);
        Ok(())
    })
    .map_err(|e| format!("decompose round-trip: {e}"))?;

    let mut triples = 0;
    for t in &tables {
        for c in 0..t.class_count() {
            for chi in &t.irreducibles {
                let m = t.restrict_to_cyclic(c, &t.virtual_of(&chi.values)).map_err(|e| format!("{}: {e}", t.group))?;
                let total = m.iter().fold(q("0"), |a, b| a + b);
                ensure(m.iter().all(|x| x.is_integer() && *x >= q("0")), || format!("{} {} {c}", t.group, chi.label))?;
                ensure(total == q(&chi.degree().to_string()), || format!("{} {} {c} sum", t.group, chi.label))?;
                triples += 1;
            }
        }
    }
    Ok(format!(
        "10^4 field triples, orthogonality on {} tables, plethysm on 3 tables, 10^3 round-trips, {triples} cyclic restrictions",
        tables.len()
    ))
}

fn main() -> ExitCode {
    let ds = match DataSet::load(data_dir()) {
        Ok(ds) => ds,
        Err(e) => {
            println!("FAIL data: {e}");
            return ExitCode::FAILURE;
        }
    };
    let cases = cli(&["case", "--all"]);
    let results: Vec<(&str, Outcome)> = vec![
        ("1 table regeneration", table_regeneration()),
        ("2 oracle cross-check", oracle_cross_check(&ds)),
        ("3 decomposition claims", decomposition_claims(&ds)),
        ("4 Riemann-Roch bookkeeping", cases.as_ref().map_err(Clone::clone).and_then(|(_, v, _)| riemann_roch(v))),
        ("5 Hurwitz suite", hurwitz_suite()),
        ("6 case verdicts", cases.as_ref().map_err(Clone::clone).and_then(|(c, v, _)| case_verdicts(&ds, v, *c))),
        ("7 property suites", property_suites(&ds)),
    ];
    let mut ok = true;
    for (name, r) in &results {
        match r {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                ok = false;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
