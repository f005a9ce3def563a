use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kflip::clifford::{omega, twisted_projection, QMatrix};
use kflip::exact_core::{gcd_list, unimodular_completion, QSqrt2};
use kflip::intlinalg::{hermite_normal_form, pivots, smith_normal_form, IntMatrix};
use kflip::koszul::{
    build_koszul, grid, grobner_select, homology_h0, homology_h2, listed_table_tally,
    standard_kernel_generators, standard_leading_positions, verify_h1, verify_relations,
    verify_solution_tables, Level, RowStatus,
};
use kflip::presentation::{cross_check, errata_ledger};
use kflip::repring::{build_case, laurent_oracle, Case};

type Criterion = (u32, Duration, fn() -> (bool, String));

struct Outcome {
    ok: bool,
    detail: String,
    elapsed: Duration,
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn timed(limit: Duration, f: impl FnOnce() -> (bool, String)) -> Outcome {
    let t = Instant::now();
    let (ok, detail) = f();
    let elapsed = t.elapsed();
    let in_time = elapsed < limit;
    Outcome {
        ok: ok && in_time,
        detail: if in_time {
            detail
        } else {
            format!("{detail}; exceeded {limit:?}")
        },
        elapsed,
    }
}

fn criterion_1() -> (bool, String) {
    let mut bad = vec![];
    for s in [2usize, 4, 6, 8] {
        let w = omega(s, 2 * s).unwrap();
        let sq = w.mul(&w).unwrap().as_scalar();
        let expected = QSqrt2::from_int(if s % 4 == 0 { 1 } else { -1 });
        if sq.as_ref() != Some(&expected) {
            bad.push(format!("ω² for s = {s}"));
        }
    }
    for s in [2usize, 4] {
        let w = omega(s, 2 * s).unwrap();
        if twisted_projection(&w).unwrap() != QMatrix::flip_blocks(s, 2 * s) {
            bad.push(format!("p(ω) for s = {s}"));
        }
    }
    (
        bad.is_empty(),
        if bad.is_empty() {
            "ω² = ∓1 for s = 2..8, p(ω) = diag(f,…,f) for s = 2, 4".into()
        } else {
            bad.join(", ")
        },
    )
}

fn criterion_2() -> (bool, String) {
    let cases = grid(16, 4);
    let mut total = 0;
    let mut bad = vec![];
    for p in &cases {
        for r in laurent_oracle(p) {
            total += 1;
            if !r.passed {
                bad.push(format!("{} {}", p.label(), r.what));
            }
        }
    }
    (
        bad.is_empty(),
        format!(
            "{} cases, {total} comparisons, {} mismatches {}",
            cases.len(),
            bad.len(),
            bad.join(", ")
        ),
    )
}

fn criterion_3() -> (bool, String) {
    let mut bad = vec![];
    let mut even_ranks = vec![];
    for p in grid(16, 4) {
        let Ok(kd) = build_koszul(&p) else {
            bad.push(format!("{} D1·D2", p.label()));
            continue;
        };
        let h2 = homology_h2(&kd);
        if p.is_odd() {
            if !(h2.z_rank == 1 && h2.equals_zv) {
                bad.push(format!("{} H2 ≠ Z·v", p.label()));
            }
        } else {
            even_ranks.push(h2.z_rank);
            if !h2.spanned_by_v {
                bad.push(format!("{} H2 ≠ B·v", p.label()));
            }
        }
        if !verify_h1(&kd, &standard_kernel_generators(&p)).passed() {
            bad.push(format!("{} u-generators", p.label()));
        }
        let h0 = homology_h0(&kd);
        let h0_rel = verify_relations(&kd)
            .into_iter()
            .filter(|r| r.id == "H0-2")
            .all(|r| r.passed);
        if !(h0.y_order_ok() && h0_rel) {
            bad.push(format!("{} H0", p.label()));
        }
    }
    even_ranks.sort();
    even_ranks.dedup();
    (
        bad.is_empty(),
        format!(
            "D1·D2 = 0, u-generators span Ker(d1) mod Im(d2), ord(y) = 2^α; H2 = Z·v (odd m), H2 = B·v with Z-rank {even_ranks:?} (even m) {}",
            bad.join(", ")
        ),
    )
}

fn criterion_4() -> (bool, String) {
    let text = std::fs::read_to_string(golden("errata.json")).unwrap_or_default();
    let frozen: serde_json::Value = serde_json::from_str(&text).unwrap_or(serde_json::Value::Null);
    let listed = |case: &str, loc: &str| {
        frozen[case]
            .as_array()
            .is_some_and(|es| es.iter().any(|e| e["location"] == loc))
    };
    let mut bad = vec![];
    let mut traced = 0;
    for p in grid(16, 4) {
        let kd = build_koszul(&p).unwrap();
        for r in verify_relations(&kd) {
            if r.passed {
                continue;
            }
            match r.level {
                Level::B | Level::H0 => bad.push(format!("{} {}", p.label(), r.id)),
                _ if listed(&p.label(), &format!("relation {}", r.id)) => traced += 1,
                _ => bad.push(format!("{} {} unexplained", p.label(), r.id)),
            }
        }
    }
    let current = serde_json::to_value(errata_ledger(16, 8)).unwrap();
    let frozen_ok = current == frozen;
    if !frozen_ok {
        bad.push("erratum ledger differs from the frozen golden file".into());
    }
    (
        bad.is_empty(),
        format!(
            "{traced} failures traced to errata, ledger frozen {frozen_ok} {}",
            bad.join(", ")
        ),
    )
}

fn criterion_5() -> (bool, String) {
    let mut bad = vec![];
    let mut done = vec![];
    for p in grid(16, 4).into_iter().filter(|p| p.case == Case::OddZero) {
        let t = Instant::now();
        let kd = build_koszul(&p).unwrap();
        let gb = grobner_select(&kd);
        let leads: std::collections::BTreeSet<usize> = gb
            .candidates
            .iter()
            .filter(|c| c.redundant_by.is_none())
            .map(|c| c.lead)
            .collect();
        let ok = gb.lt_module_ok && gb.span_ok && leads == standard_leading_positions(&p);
        let el = t.elapsed();
        if !ok || el >= Duration::from_secs(1) {
            bad.push(format!("{} ({el:?})", p.label()));
        }
        done.push(format!(
            "{} [{}]",
            p.label(),
            gb.selected.leading_terms.join(", ")
        ));
    }
    (
        bad.is_empty(),
        format!("{} {}", done.join("; "), bad.join(", ")),
    )
}

fn criterion_6() -> (bool, String) {
    let p = build_case(13, 4).unwrap();
    let kd = build_koszul(&p).unwrap();
    let rows = verify_solution_tables(&kd).unwrap();
    let (pass, inst) = listed_table_tally(&rows);
    let report = cross_check(&p, false);
    let mut bad = vec![];
    for r in rows.iter().filter(|r| r.status == RowStatus::Fail) {
        let has_residual = r.detail.starts_with("d1 = ") && r.detail != "d1 = 0";
        let has_erratum = report
            .errata
            .iter()
            .any(|e| e.location == format!("solution table row {}", r.id));
        if !(has_residual && has_erratum) {
            bad.push(r.id.clone());
        }
    }
    let failing: Vec<&str> = rows
        .iter()
        .filter(|r| r.status == RowStatus::Fail)
        .map(|r| r.id.as_str())
        .collect();
    (
        pass * 10 >= inst * 9 && bad.is_empty(),
        format!("(13,4): {pass}/{inst} listed rows in Ker(d1); failing rows {failing:?} all with residual and erratum {}", bad.join(", ")),
    )
}

fn random_primitive_row(rng: &mut ChaCha8Rng) -> Vec<BigInt> {
    loop {
        let len = rng.gen_range(2..=6);
        let row: Vec<BigInt> = (0..len)
            .map(|_| BigInt::from(rng.gen_range(-1_000_000i64..=1_000_000)))
            .collect();
        if gcd_list(&row).is_ok_and(|g| g.is_one()) {
            return row;
        }
    }
}

fn criterion_7() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut bad = 0;
    for _ in 0..1000 {
        let row = random_primitive_row(&mut rng);
        match unimodular_completion(&row) {
            Ok(m) if m.row(0) == row.as_slice() && m.det().abs().is_one() => {}
            _ => bad += 1,
        }
    }
    (bad == 0, format!("1000 rows, {bad} failures"))
}

fn random_matrix(rng: &mut ChaCha8Rng) -> IntMatrix {
    let (r, c) = (rng.gen_range(1..=8), rng.gen_range(1..=16));
    let rows = (0..r)
        .map(|_| {
            (0..c)
                .map(|_| BigInt::from(rng.gen_range(-1_000_000_000i64..=1_000_000_000)))
                .collect()
        })
        .collect();
    IntMatrix::from_rows_with_cols(rows, c)
}

fn snf_ok(m: &IntMatrix) -> bool {
    let (s, u, v) = smith_normal_form(m);
    if &(&u * m) * &v != s || !u.det().abs().is_one() || !v.det().abs().is_one() {
        return false;
    }
    let k = s.nrows().min(s.ncols());
    let off_diag_zero =
        (0..s.nrows()).all(|i| (0..s.ncols()).all(|j| i == j || s[(i, j)].is_zero()));
    let diag: Vec<BigInt> = (0..k).map(|i| s[(i, i)].clone()).collect();
    let chain = diag.windows(2).all(|w| {
        if w[0].is_zero() {
            w[1].is_zero()
        } else {
            w[1].is_multiple_of(&w[0])
        }
    });
    off_diag_zero && chain && diag.iter().all(|d| !d.is_negative())
}

fn hnf_ok(m: &IntMatrix) -> bool {
    let (h, u) = hermite_normal_form(m);
    if &u * m != h || !u.det().abs().is_one() {
        return false;
    }
    let piv = pivots(&h);
    let nonzero_rows = (0..h.nrows())
        .filter(|&i| h.row(i).iter().any(|x| !x.is_zero()))
        .count();
    let echelon = piv.windows(2).all(|w| w[0] < w[1]) && piv.len() == nonzero_rows;
    let zero_rows_last = (nonzero_rows..h.nrows()).all(|i| h.row(i).iter().all(Zero::is_zero));
    let reduced = piv.iter().enumerate().all(|(r, &j)| {
        h[(r, j)].is_positive() && (0..r).all(|i| !h[(i, j)].is_negative() && h[(i, j)] < h[(r, j)])
    });
    echelon && zero_rows_last && reduced
}

fn criterion_8() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut bad_snf, mut bad_hnf) = (0, 0);
    for _ in 0..1000 {
        let m = random_matrix(&mut rng);
        bad_snf += usize::from(!snf_ok(&m));
        bad_hnf += usize::from(!hnf_ok(&m));
    }
    (
        bad_snf + bad_hnf == 0,
        format!("1000 matrices, SNF failures {bad_snf}, HNF failures {bad_hnf}"),
    )
}

fn criterion_9() -> (bool, String) {
    let bin = env!("CARGO_BIN_EXE_kflip");
    let present = || {
        Command::new(bin)
            .args(["present", "--m", "13", "--s", "4", "--format", "json"])
            .output()
            .unwrap()
    };
    let (a, b) = (present(), present());
    let identical = a.status.success() && a.stdout == b.stdout;
    let matches_golden = std::fs::read(golden("present_13_4.json")).is_ok_and(|g| g == a.stdout);
    let verify = Command::new(bin)
        .args(["verify", "--m", "13", "--s", "4", "--deep"])
        .output()
        .unwrap()
        .status;
    (
        identical && matches_golden && verify.success(),
        format!(
            "byte-identical {identical}, golden match {matches_golden}, verify --deep exit {}",
            verify.code().map_or("signal".into(), |c| c.to_string())
        ),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        (1, Duration::from_secs(10), criterion_1),
        (2, Duration::from_secs(60), criterion_2),
        (3, Duration::from_secs(60), criterion_3),
        (4, Duration::from_secs(600), criterion_4),
        (5, Duration::from_secs(600), criterion_5),
        (6, Duration::from_secs(600), criterion_6),
        (7, Duration::from_secs(5), criterion_7),
        (8, Duration::from_secs(30), criterion_8),
        (9, Duration::from_secs(600), criterion_9),
    ];
    let mut results = BTreeMap::new();
    for (n, limit, f) in criteria {
        let o = timed(limit, f);
        println!(
            "criterion {n}: {}  ({:.2?})  {}",
            if o.ok { "PASS" } else { "FAIL" },
            o.elapsed,
            o.detail.trim_end()
        );
        results.insert(n, o.ok);
    }
    let failed: Vec<_> = results
        .iter()
        .filter(|(_, ok)| !**ok)
        .map(|(n, _)| n)
        .collect();
    if failed.is_empty() {
        println!("acceptance: all 9 criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
