//! One PASS/FAIL line per acceptance criterion. Runs without the test
//! harness so the lines always reach the output; exits nonzero if any
//! gating criterion fails. Set TROPICOUNT_SLOW=1 to include the degree-4
//! plane count (non-gating).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};
use tropicount::cli::{cmd_decompose, Overrides};
use tropicount::combinatorics::Degree;
use tropicount::constraints::random_points;
use tropicount::count::{count_tropical, CountError, CountOptions, CountResult};
use tropicount::io::ProblemJson;
use tropicount::linalg::{cokernel_order, smith_normal_form, CokernelOrder, IntegerMatrix};
use tropicount::multiplicity::{check_2d_equivalence, coset_oracle, kontsevich_oracle};
use tropicount::polyhedral::{asymptotic_fan, check_complex, edge_decomposition, Fan};

const LIMIT_EX1: Duration = Duration::from_secs(60);
const LIMIT_EX2: Duration = Duration::from_secs(60);
const LIMIT_EX3: Duration = Duration::from_secs(120);
const LIMIT_EX4: Duration = Duration::from_secs(15 * 60);
const LIMIT_DEG4: Duration = Duration::from_secs(60 * 60);
const ORACLE_MATRICES: usize = 200;
const SNF_MATRICES: usize = 500;
const EXTRA_PLANE_CONFIGS: u64 = 50;

fn problem(name: &str) -> String {
    let path = format!("{}/../../problems/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

fn run_file(name: &str, params: &[(&str, i64)]) -> Result<CountResult, CountError> {
    let p = ProblemJson::parse(&problem(name)).expect("problem parses");
    let params: BTreeMap<String, i64> = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    let prob = p.resolve(&params).expect("problem resolves");
    count_tropical(&prob.degree, &prob.constraints, &prob.options)
}

struct Report {
    failed: Vec<String>,
}

impl Report {
    fn line(&mut self, id: &str, ok: bool, detail: String) {
        println!("criterion {id}: {} ({detail})", if ok { "PASS" } else { "FAIL" });
        if !ok {
            self.failed.push(id.to_string());
        }
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let r = f();
    (r, t.elapsed())
}

fn small_example(rep: &mut Report, id: &str, file: &str, expected: i64, limit: Duration) {
    let (r, dt) = timed(|| run_file(file, &[]));
    match r {
        Ok(r) => rep.line(
            id,
            r.total == BigInt::from(expected) && dt < limit,
            format!("total {} expected {expected}, {:.1?} of {:?}", r.total, dt, limit),
        ),
        Err(e) => rep.line(id, false, format!("error: {e}")),
    }
}

fn criterion_4(rep: &mut Report) {
    let (nu, mu, la) = (2i64, 1i64, 3i64);
    let (r, dt) = timed(|| run_file("p3-quadric-8lines-nu2-mu1-la3.json", &[]));
    match r {
        Ok(r) => {
            let mut got: Vec<BigInt> = r.curves.iter().map(|c| c.record.d_tilde.clone()).collect();
            got.sort();
            let table = [
                mu * nu,
                la * mu * nu,
                (1 + la) * mu * nu,
                (1 + mu) * nu,
                la * (1 + mu) * nu,
                (1 + la) * (1 + mu) * nu,
                nu,
                la * nu,
                (1 + la) * nu,
            ];
            let mut want: Vec<BigInt> = table.iter().flat_map(|&x| [BigInt::from(x), BigInt::from(x)]).collect();
            want.sort();
            let ok = r.total == BigInt::from(128) && r.curves.len() == 18 && got == want && dt < LIMIT_EX4;
            rep.line(
                "4a",
                ok,
                format!(
                    "lambda=3: total {}, {} curves, D~ table {}, {:.1?} of {:?}",
                    r.total,
                    r.curves.len(),
                    if got == want { "matches" } else { "differs" },
                    dt,
                    LIMIT_EX4
                ),
            );
        }
        Err(e) => rep.line("4a", false, format!("error: {e}")),
    }

    let la = 4i64;
    let (r, dt) = timed(|| run_file("p3-quadric-8lines-nu2-mu1-la4.json", &[]));
    match r {
        Ok(r) => {
            // the two curves with D~ = lambda*nu that pick up the torsion factor
            let special: Vec<_> = r
                .curves
                .iter()
                .filter(|c| c.record.d_tilde == BigInt::from(la * nu))
                .filter(|c| c.record.deltas.iter().product::<BigInt>() == BigInt::from(2))
                .collect();
            let d_ok = special.len() == 2 && special.iter().all(|c| c.record.d_index == BigInt::from(la * nu / 2));
            let ok = r.total == BigInt::from(160) && d_ok && dt < LIMIT_EX4;
            rep.line(
                "4b",
                ok,
                format!(
                    "lambda=4: total {}, {} curves with D={} and delta product 2, {:.1?} of {:?}",
                    r.total,
                    special.len(),
                    la * nu / 2,
                    dt,
                    LIMIT_EX4
                ),
            );
        }
        Err(e) => rep.line("4b", false, format!("error: {e}")),
    }
}

fn plane_run(d: usize, seed: u64) -> Result<CountResult, CountError> {
    let pts = random_points(2, 3 * d - 1, seed, 10_000, 97);
    let opts = CountOptions {
        seed,
        ..CountOptions::default()
    };
    count_tropical(&Degree::plane(d), &pts, &opts)
}

struct Identity {
    checked: usize,
    /// Rows where inner weight times the index differs from the vertex product.
    bad: usize,
    /// Rows where total marked weight times the index differs.
    bad_marked: usize,
}

fn plane_identity(r: &CountResult, acc: &mut Identity) {
    for c in &r.curves {
        acc.checked += 1;
        match check_2d_equivalence(&c.ty, &r.constraints_used) {
            Ok(chk) => {
                acc.bad += !chk.equal as usize;
                acc.bad_marked += (chk.lhs_marked != chk.rhs) as usize;
            }
            Err(_) => {
                acc.bad += 1;
                acc.bad_marked += 1;
            }
        }
    }
}

fn criteria_5_and_6(rep: &mut Report) {
    let oracle = kontsevich_oracle(4);
    let mut id = Identity {
        checked: 0,
        bad: 0,
        bad_marked: 0,
    };
    let mut totals = Vec::new();
    let mut ok5 = true;
    for d in 1..=3 {
        match plane_run(d, 2024) {
            Ok(r) => {
                ok5 &= r.total == oracle[d - 1];
                totals.push(r.total.to_string());
                plane_identity(&r, &mut id);
            }
            Err(e) => {
                ok5 = false;
                totals.push(format!("error: {e}"));
            }
        }
    }
    rep.line("5", ok5, format!("degrees 1..3 give [{}], oracle {:?}", totals.join(", "), &oracle[..3]));

    let mut total_mismatch = 0;
    let mut errors = 0;
    for k in 0..EXTRA_PLANE_CONFIGS {
        let d = 1 + (k % 3) as usize;
        match plane_run(d, 1000 + k) {
            Ok(r) => {
                if r.total != oracle[d - 1] {
                    total_mismatch += 1;
                }
                plane_identity(&r, &mut id);
            }
            Err(_) => errors += 1,
        }
    }
    rep.line(
        "6",
        id.bad == 0 && errors == 0 && total_mismatch == 0 && id.checked > 0,
        format!(
            "{} curves over {} configurations, {} failures with inner weight, {} with total marked weight, {errors} errors, {total_mismatch} wrong totals",
            id.checked,
            3 + EXTRA_PLANE_CONFIGS,
            id.bad,
            id.bad_marked
        ),
    );

    if std::env::var_os("TROPICOUNT_SLOW").is_some() {
        let (r, dt) = timed(|| plane_run(4, 2024));
        let detail = match &r {
            Ok(r) => format!("total {} expected {}, {:.1?}", r.total, oracle[3], dt),
            Err(e) => format!("error: {e}"),
        };
        let ok = matches!(&r, Ok(r) if r.total == oracle[3]) && dt < LIMIT_DEG4;
        println!("criterion 5 (degree 4, non-gating): {} ({detail})", if ok { "PASS" } else { "FAIL" });
    } else {
        println!("criterion 5 (degree 4, non-gating): SKIPPED (set TROPICOUNT_SLOW=1)");
    }
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> IntegerMatrix {
    let data: Vec<Vec<i64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect())
        .collect();
    IntegerMatrix::from_rows(&data)
}

fn max_minor(m: &IntegerMatrix) -> BigInt {
    let (r, c) = (m.rows(), m.cols());
    let mut best = BigInt::zero();
    let mut pick = vec![0usize; r];
    fn rec(m: &IntegerMatrix, start: usize, k: usize, pick: &mut Vec<usize>, best: &mut BigInt) {
        if k == pick.len() {
            let cols: Vec<Vec<BigInt>> = pick.iter().map(|&j| m.column(j)).collect();
            let d = IntegerMatrix::from_columns(pick.len(), &cols).determinant().abs();
            if d > *best {
                *best = d;
            }
            return;
        }
        for j in start..m.cols() {
            pick[k] = j;
            rec(m, j + 1, k + 1, pick, best);
        }
    }
    if c >= r {
        rec(m, 0, 0, &mut pick, &mut best);
    }
    best
}

fn criterion_7(rep: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut agree = 0;
    let mut tried = 0;
    let mut infinite = 0;
    while tried < ORACLE_MATRICES {
        let rows: usize = rng.gen_range(1..=4);
        let cols = rng.gen_range(rows.saturating_sub(1).max(1)..=rows + 2);
        let m = random_matrix(&mut rng, rows, cols, 3);
        if max_minor(&m) > BigInt::from(24) {
            continue;
        }
        tried += 1;
        let fast = cokernel_order(&m);
        let slow = coset_oracle(&m);
        let same = match (&fast, &slow) {
            (CokernelOrder::Finite(a), Some(b)) => a == b,
            (CokernelOrder::Infinite, None) => {
                infinite += 1;
                true
            }
            _ => false,
        };
        agree += same as usize;
    }

    let mut snf_ok = 0;
    for _ in 0..SNF_MATRICES {
        let rows: usize = rng.gen_range(1..=5);
        let cols = rng.gen_range(1..=5);
        let m = random_matrix(&mut rng, rows, cols, 9);
        let s = smith_normal_form(&m);
        let mut ok = s.u.mul(&m).mul(&s.v) == s.d;
        ok &= s.u.determinant().abs().is_one() && s.v.determinant().abs().is_one();
        ok &= s.rank == m.rank();
        for i in 0..rows {
            for j in 0..cols {
                let x = s.d.get(i, j);
                if i != j || i >= s.rank {
                    ok &= x.is_zero();
                } else {
                    ok &= x.is_positive();
                }
            }
        }
        let f = s.invariant_factors();
        ok &= f.windows(2).all(|w| (&w[1] % &w[0]).is_zero());
        snf_ok += ok as usize;
    }
    rep.line(
        "7",
        agree == ORACLE_MATRICES && snf_ok == SNF_MATRICES,
        format!(
            "cokernel vs cosets {agree}/{ORACLE_MATRICES} agree ({infinite} infinite), Smith form invariants {snf_ok}/{SNF_MATRICES}"
        ),
    );
}

fn criterion_8(rep: &mut Report) {
    let p2 = Fan::projective(2);
    let q = |x: i64| tropicount::linalg::Rational::from_integer(x.into());
    let dec = edge_decomposition(&p2, &[q(0), q(0)], &[q(1), q(1)]);
    let (cells, checked, fan_ok) = match &dec {
        Ok(d) => (
            d.cells.len(),
            check_complex(d).ok(),
            asymptotic_fan(d).map(|f| f.same_as(&p2)).unwrap_or(false),
        ),
        Err(_) => (0, false, false),
    };
    let conic = cmd_decompose(&problem("decompose-conic.json"), &Overrides::default());
    let (skeleton, edges, conic_ok) = match &conic {
        Ok(v) => (
            v["checks"]["skeleton_contains_curves"] == serde_json::json!(true),
            v["checks"]["edges"].as_array().map_or(0, Vec::len),
            v["checks"]["face_fitting"] == serde_json::json!(true) && v["checks"]["complete"] == serde_json::json!(true),
        ),
        Err(_) => (false, 0, false),
    };
    rep.line(
        "8",
        cells == 5 && checked && fan_ok && skeleton && conic_ok && edges > 0,
        format!(
            "segment: {cells} cells, complex ok {checked}, fan matches {fan_ok}; conic: {edges} edges in 1-skeleton {skeleton}, complex ok {conic_ok}"
        ),
    );
}

fn exit_code(args: &[&str]) -> Option<i32> {
    Command::new(env!("CARGO_BIN_EXE_tropicount"))
        .args(args)
        .output()
        .ok()
        .and_then(|o| o.status.code())
}

fn criterion_9(rep: &mut Report) {
    let clean = run_file("plane-line-2pts.json", &[]).map(|r| r.total);
    let p = ProblemJson::parse(&problem("line-point-on-vertex.json")).unwrap();
    let prob = p.resolve(&BTreeMap::new()).unwrap();
    let strict = CountOptions {
        allow_resample: false,
        ..prob.options.clone()
    };
    let aborted = matches!(
        count_tropical(&prob.degree, &prob.constraints, &strict),
        Err(CountError::NonGenericConstraints { .. })
    );
    let loose = CountOptions {
        allow_resample: true,
        ..prob.options.clone()
    };
    let resampled = count_tropical(&prob.degree, &prob.constraints, &loose);
    let same_total = match (&clean, &resampled) {
        (Ok(a), Ok(b)) => a == &b.total && b.attempts > 1,
        _ => false,
    };
    let dir = format!("{}/../../problems", env!("CARGO_MANIFEST_DIR"));
    let codim = exit_code(&["count", &format!("{dir}/line-3pts-wrong-codim.json")]);
    let vertex = exit_code(&["count", "--no-resample", &format!("{dir}/line-point-on-vertex.json")]);
    rep.line(
        "9",
        aborted && same_total && codim == Some(1) && vertex == Some(2),
        format!(
            "abort without resampling {aborted}, same total after resampling {same_total}, exit codes: wrong codimension {codim:?}, special {vertex:?}"
        ),
    );
}

fn main() {
    let mut rep = Report { failed: Vec::new() };
    small_example(&mut rep, "1", "p3-quadric-4pts.json", 0, LIMIT_EX1);
    small_example(&mut rep, "2", "p1p1p1-deg112-4pts.json", 0, LIMIT_EX2);
    small_example(&mut rep, "3", "p1p2-deg12-4pts.json", 1, LIMIT_EX3);
    criterion_4(&mut rep);
    criteria_5_and_6(&mut rep);
    criterion_7(&mut rep);
    criterion_8(&mut rep);
    criterion_9(&mut rep);
    if rep.failed.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!("acceptance: failing {}", rep.failed.join(", "));
        std::process::exit(1);
    }
}
