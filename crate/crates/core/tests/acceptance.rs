//! Acceptance criteria, one line each. Exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use twistkit::catalog;
use twistkit::exprs::{parse_scalar, Chart, ScalarExpr};
use twistkit::fields::{
    exterior_derivative, invert_two_form, schouten_half, triple_contraction, KForm, KVector,
};
use twistkit::loopspace::{closure_study, flow_study, ClosureTable, DifferenceScheme};
use twistkit::twistcheck::{check, induced_bracket, is_closed, twist_residual, CALIBRATED_SIGN};

type Verdict = (bool, String);
type Criterion = (&'static str, &'static str, fn() -> Verdict);

/// Raw component matrix; `entries` are `(i, j, text)` with 1-based indices.
fn raw_matrix(dim: usize, entries: &[(usize, usize, &str)]) -> Vec<Vec<ScalarExpr>> {
    let chart = Chart::standard(dim);
    let mut m = vec![vec![ScalarExpr::zero(); dim]; dim];
    for &(i, j, s) in entries {
        let v = parse_scalar(s, &chart).unwrap();
        m[j - 1][i - 1] = -&v;
        m[i - 1][j - 1] = v;
    }
    m
}

/// `Pi^{il} d_l Pi^{jk} + cyclic`, summed by hand.
fn oracle_jacobiator(m: &[Vec<ScalarExpr>], i: usize, j: usize, k: usize) -> ScalarExpr {
    let mut acc = ScalarExpr::zero();
    for l in 0..m.len() {
        for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
            acc = &acc + &(&m[a][l] * &m[b][c].differentiate(l));
        }
    }
    acc
}

fn ac1() -> Verdict {
    let su2 = raw_matrix(3, &[(1, 2, "x3"), (2, 3, "x1"), (3, 1, "x2")]);
    let r3 = raw_matrix(3, &[(1, 2, "1"), (2, 3, "x2")]);
    let su2_report = check(&catalog::su2()).unwrap();
    let r3_report = check(&catalog::r3_nonexample()).unwrap();
    let mut ok = true;
    for t in (0..3).permutations(3) {
        let (i, j, k) = (t[0], t[1], t[2]);
        ok &= oracle_jacobiator(&su2, i, j, k).is_zero();
        ok &= su2_report.jacobiator.get(&t).is_zero();
        ok &= r3_report.residual.get(&t) == oracle_jacobiator(&r3, i, j, k);
    }
    let r123 = r3_report.residual.get(&[0, 1, 2]);
    ok &= r123 == ScalarExpr::one() && oracle_jacobiator(&r3, 0, 1, 2) == ScalarExpr::one();
    (
        ok,
        format!(
            "su2 jacobiator zero, r3 residual^123 = {}",
            r123.display_with(&Chart::standard(3))
        ),
    )
}

fn ac2() -> Verdict {
    let w = catalog::twisted_symplectic_form();
    let pi = invert_two_form(&w).unwrap();
    let dw = exterior_derivative(&w);
    let vanishing: Vec<i64> = [1i64, -1]
        .into_iter()
        .filter(|&s| {
            twist_residual(&pi, &dw.scale(&ScalarExpr::from_int(s)))
                .unwrap()
                .is_zero()
        })
        .collect();
    let golden = std::fs::read_to_string(catalog_dir().join("twisted-r4.report.json")).unwrap();
    let golden: serde_json::Value = serde_json::from_str(&golden).unwrap();
    let ok = vanishing == [CALIBRATED_SIGN as i64]
        && golden["calibrated_sign"] == CALIBRATED_SIGN
        && golden["is_twisted_poisson"] == true
        && golden["is_poisson"] == false;
    (
        ok,
        format!(
            "signs with R = 0: {vanishing:?}; golden sign {}",
            golden["calibrated_sign"]
        ),
    )
}

fn random_poly(rng: &mut ChaCha8Rng, dim: usize, max_deg: u32, max_terms: usize) -> ScalarExpr {
    let terms = rng.gen_range(0..=max_terms);
    (0..terms)
        .map(|_| {
            let c = ScalarExpr::from_int(rng.gen_range(-9..=9));
            let mut budget = rng.gen_range(0..=max_deg);
            let mut t = c;
            while budget > 0 {
                t = &t * &ScalarExpr::var(rng.gen_range(0..dim));
                budget -= 1;
            }
            t
        })
        .sum()
}

fn random_tensor<V>(
    rng: &mut ChaCha8Rng,
    degree: usize,
    dim: usize,
    max_deg: u32,
) -> twistkit::fields::Alternating<V> {
    let entries: Vec<_> = (0..dim)
        .combinations(degree)
        .map(|t| (t, random_poly(rng, dim, max_deg, 3)))
        .collect();
    twistkit::fields::Alternating::from_entries(degree, dim, entries).unwrap()
}

fn ac3() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut failures = 0;
    for _ in 0..100 {
        let dim = rng.gen_range(2..=5);
        let degree = rng.gen_range(0..=3usize).min(dim);
        let w: KForm = random_tensor(&mut rng, degree, dim, 3);
        if !exterior_derivative(&exterior_derivative(&w)).is_zero() {
            failures += 1;
        }
    }
    (failures == 0, format!("100 forms, {failures} with dd != 0"))
}

fn ac4() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut failures = 0;
    for _ in 0..50 {
        let dim = rng.gen_range(2..=4);
        let pi: KVector = random_tensor(&mut rng, 2, dim, 2);
        let f = random_poly(&mut rng, dim, 2, 4);
        let g = random_poly(&mut rng, dim, 2, 4);
        let h = random_poly(&mut rng, dim, 2, 4);
        let b = |a: &ScalarExpr, c: &ScalarExpr| induced_bracket(a, c, &pi);
        let lhs = &(&b(&f, &b(&g, &h)) + &b(&g, &b(&h, &f))) + &b(&h, &b(&f, &g));
        let j = schouten_half(&pi).unwrap();
        let mut rhs = ScalarExpr::zero();
        for t in (0..3).map(|_| 0..dim).multi_cartesian_product() {
            rhs = &rhs
                + &(&(&j.get(&t) * &f.differentiate(t[0]))
                    * &(&g.differentiate(t[1]) * &h.differentiate(t[2])));
        }
        if lhs != rhs {
            failures += 1;
        }
    }
    (failures == 0, format!("50 triples, {failures} mismatches"))
}

fn ac5() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failures = 0;
    for _ in 0..25 {
        let pi: KVector = random_tensor(&mut rng, 2, 3, 2);
        let h: KForm = random_tensor(&mut rng, 3, 3, 2);
        if !is_closed(&h) || !triple_contraction(&h, &pi).unwrap().is_zero() {
            failures += 1;
        }
    }
    (
        failures == 0,
        format!("25 pairs, {failures} nonzero contractions"),
    )
}

fn table_line(t: &ClosureTable) -> String {
    t.rows
        .iter()
        .map(|r| match r.ratio {
            Some(q) => format!("N={} r={:.3e} ({:.2}x)", r.sites, r.residual, q),
            None => format!("N={} r={:.3e}", r.sites, r.residual),
        })
        .join(", ")
}

fn ac6() -> Verdict {
    let start = Instant::now();
    let sites = [16, 32, 64];
    let tw = closure_study(&catalog::twisted_r4(), &sites, 0, DifferenceScheme::Central).unwrap();
    let flat = closure_study(
        &catalog::constant_canonical(),
        &sites,
        0,
        DifferenceScheme::Central,
    )
    .unwrap();
    let wrong = closure_study(
        &catalog::twisted_r4_wrong_sign(),
        &sites,
        0,
        DifferenceScheme::Central,
    )
    .unwrap();
    let secs = start.elapsed().as_secs_f64();
    let ok = tw.passed && flat.passed && !wrong.passed && secs <= 60.0;
    (
        ok,
        format!(
            "twisted: {}; constant: max r={:.1e}; wrong sign passes: {}; {secs:.1}s",
            table_line(&tw),
            flat.rows.iter().map(|r| r.residual).fold(0.0, f64::max),
            wrong.passed
        ),
    )
}

fn ac7() -> Verdict {
    let t = closure_study(
        &catalog::r3_nonexample(),
        &[16, 32, 64],
        0,
        DifferenceScheme::Central,
    )
    .unwrap();
    let (r16, r64) = (t.rows[0].residual, t.rows[2].residual);
    (
        r64 >= 0.5 * r16,
        format!("{}; r64/r16 = {:.3}", table_line(&t), r64 / r16),
    )
}

fn ac8() -> Verdict {
    let spec = catalog::twisted_r4();
    let coarse = flow_study(&spec, 32, 2e-3, 100, 0, 1.0).unwrap();
    let fine = flow_study(&spec, 32, 1e-3, 100, 0, 1.0).unwrap();
    let ratio = coarse.drift / fine.drift;
    (
        ratio >= 8.0,
        format!(
            "drift {:.3e} (dt=2e-3) vs {:.3e} (dt=1e-3), ratio {ratio:.2}, need >= 8",
            coarse.drift, fine.drift
        ),
    )
}

fn catalog_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../catalog")
}

fn ac9() -> Verdict {
    let bin = env!("CARGO_BIN_EXE_twistkit");
    let run = |args: &[&str]| {
        Command::new(bin)
            .args(args)
            .env_remove("TWISTKIT_FORMAT")
            .output()
            .unwrap()
    };
    let mut mismatched = vec![];
    for (name, _) in catalog::ENTRIES {
        let spec = catalog_dir().join(format!("{name}.json"));
        let golden = std::fs::read(catalog_dir().join(format!("{name}.report.json"))).unwrap();
        let out = run(&["--format", "json", "check", spec.to_str().unwrap()]);
        if out.stdout != golden {
            mismatched.push(name);
        }
    }
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, body: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p.display().to_string()
    };
    let tw = catalog_dir().join("twisted-r4.json").display().to_string();
    let r3 = catalog_dir()
        .join("r3-nonexample.json")
        .display()
        .to_string();
    let malformed = [
        write(
            "repeat.json",
            r#"{"dimension":1,"coordinates":["x1"],"bivector":{"1,1":"x1"},"two_form":{}}"#,
        ),
        write(
            "both.json",
            r#"{"dimension":2,"coordinates":["x1","x2"],"bivector":{},"two_form":{},"three_form":{}}"#,
        ),
        write(
            "syntax.json",
            r#"{"dimension":2,"coordinates":["x1","x2"],"bivector":{"1,2":"(x1"},"two_form":{}}"#,
        ),
        write(
            "unknown.json",
            r#"{"dimension":2,"coordinates":["x1","x2"],"bivector":{"1,2":"z"},"two_form":{}}"#,
        ),
        write(
            "extra.json",
            r#"{"dimension":2,"coordinates":["x1","x2"],"bivector":{},"two_form":{},"x":0}"#,
        ),
        write("broken.json", "[1,"),
    ];
    let mut cases: Vec<(Vec<&str>, i32)> = malformed
        .iter()
        .map(|p| (vec!["check", p.as_str()], 2))
        .collect();
    cases.extend([
        (vec!["check", "/nonexistent/spec.json"], 2),
        (vec!["lattice", tw.as_str(), "--sites", "2"], 2),
        (vec!["flow", tw.as_str(), "--dt", "0"], 2),
        (vec!["check", tw.as_str()], 0),
        (vec!["check", r3.as_str()], 1),
    ]);
    let wrong_codes: Vec<String> = cases
        .iter()
        .filter_map(|(args, want)| {
            let got = run(args).status.code();
            (got != Some(*want)).then(|| format!("{args:?} gave {got:?}"))
        })
        .collect();
    (
        mismatched.is_empty() && wrong_codes.is_empty(),
        format!(
            "golden mismatches: {mismatched:?}; {} exit-code cases, wrong: {wrong_codes:?}",
            cases.len()
        ),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("AC1", "symbolic exactness (Poisson reduction)", ac1),
        ("AC2", "twisted-symplectic sign calibration", ac2),
        ("AC3", "d(d(w)) = 0 on 100 random forms", ac3),
        ("AC4", "jacobiator identity on 50 random triples", ac4),
        ("AC5", "dimension-3 collapse on 25 random pairs", ac5),
        ("AC6", "lattice first-class closure", ac6),
        ("AC7", "closure failure for the R^3 non-example", ac7),
        ("AC8", "gauge-flow drift order check", ac8),
        ("AC9", "CLI goldens and exit codes", ac9),
    ];
    let mut failed = 0;
    for (id, name, f) in criteria {
        let (ok, detail) =
            catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| (false, "panicked".into()));
        println!(
            "[{}] {id} {name}: {detail}",
            if ok { "PASS" } else { "FAIL" }
        );
        failed += usize::from(!ok);
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
