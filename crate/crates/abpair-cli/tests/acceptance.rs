//! Acceptance gate: one test per criterion, each printing a single
//! pass/fail line (visible with --nocapture) and enforcing its runtime
//! budget. Tests serialize on a mutex so budgets measure an unloaded
//! machine even when the harness runs threads.

use std::process::Command;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use abpair::oracle::{
    abelian_classes, presentations_up_to, verify_bil_hom_count, verify_nondeg_theorems,
    verify_pairing_counts, verify_universal_property, CountBounds, NondegBounds, UniversalBounds,
};
use abpair::{
    bilinear_count, dual_group, duality_pairing, primary_tensor_formula, tensor_product,
    visit_bilinear, BilinearMap, FinAbGroup, QuotientScratch, DEFAULT_MAX_ENUM,
};

static GATE: Mutex<()> = Mutex::new(());

fn serialized() -> std::sync::MutexGuard<'static, ()> {
    GATE.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
}

fn finish(criterion: u32, budget: Duration, started: Instant, summary: &str) {
    let elapsed = started.elapsed();
    println!("criterion {criterion}: pass - {summary} ({elapsed:.2?})");
    assert!(
        elapsed <= budget,
        "criterion {criterion} overran its budget: {elapsed:.2?} > {budget:?}"
    );
}

#[test]
fn criterion_1_cyclic_tensor_law() {
    let _gate = serialized();
    let started = Instant::now();
    let mut checked = 0u64;
    for a in 1..=50u64 {
        for b in 1..=50u64 {
            let t = tensor_product(
                &FinAbGroup::cyclic(a).unwrap(),
                &FinAbGroup::cyclic(b).unwrap(),
            );
            let g = {
                let (mut x, mut y) = (a, b);
                while y != 0 {
                    (x, y) = (y, x % y);
                }
                x
            };
            assert!(
                t.product().is_isomorphic(&FinAbGroup::cyclic(g).unwrap()),
                "Z{a} tensor Z{b} is {} not Z{g}",
                t.product()
            );
            checked += 1;
        }
    }
    finish(1, Duration::from_secs(1), started, &format!("{checked} cyclic products match the gcd rule"));
}

#[test]
fn criterion_2_general_vs_primary_formula() {
    let _gate = serialized();
    let started = Instant::now();
    let pool = presentations_up_to(512, None);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2026);
    for _ in 0..200 {
        let a = &pool[rng.random_range(0..pool.len())];
        let b = &pool[rng.random_range(0..pool.len())];
        let direct = tensor_product(a, b);
        let formula = primary_tensor_formula(a, b);
        assert!(
            direct.product().is_isomorphic(&formula),
            "{a} tensor {b}: cell construction gives {}, primary formula {formula}",
            direct.product()
        );
    }
    finish(2, Duration::from_secs(10), started, &format!(
        "200 sampled pairs from {} presentations agree with the primary formula",
        pool.len()
    ));
}

#[test]
fn criterion_3_counting_identity() {
    let _gate = serialized();
    let started = Instant::now();
    let report = verify_bil_hom_count(&CountBounds {
        side_max: 36,
        factor_set: Some(vec![2, 3, 4, 6, 8, 9, 12]),
        target_min: 2,
        target_max: 12,
        max_enum: 1 << 26,
    })
    .unwrap();
    assert!(report.passed(), "counting failures: {:?}", report.failures());
    finish(3, Duration::from_secs(60), started, &format!(
        "{} triples: enumerated map and hom counts both match the gcd product",
        report.instances_checked()
    ));
}

#[test]
fn criterion_4_nondegeneracy_criteria() {
    let _gate = serialized();
    let started = Instant::now();
    let reports = verify_nondeg_theorems(&NondegBounds::default()).unwrap();
    let mut parts = Vec::new();
    for r in &reports {
        assert!(r.passed(), "{} failures: {:?}", r.claim_id(), r.failures());
        parts.push(format!("{} {}", r.claim_id(), r.instances_checked()));
    }
    finish(4, Duration::from_secs(120), started, &format!("instances: {}", parts.join(", ")));
}

#[test]
fn criterion_5_pairing_census() {
    let _gate = serialized();
    let started = Instant::now();
    let report = verify_pairing_counts(30).unwrap();
    assert!(report.passed(), "census failures: {:?}", report.failures());
    finish(5, Duration::from_secs(30), started, &format!(
        "{} cyclic censuses: phi count, unit set, and group closure all hold",
        report.instances_checked()
    ));
}

/// Addition table of a small group, elements named by lex index.
fn add_table(c: &FinAbGroup) -> Vec<u16> {
    let n = c.order() as usize;
    let mut add = vec![0u16; n * n];
    for i in 0..n {
        let x = c.element_at(i as u128).unwrap();
        for j in 0..n {
            let y = c.element_at(j as u128).unwrap();
            add[i * n + j] = c.lex_index(&c.add(&x, &y).unwrap()).unwrap() as u16;
        }
    }
    add
}

/// Scratch space reused across every map of a triple.
#[derive(Default)]
struct TableScratch {
    cells: Vec<u16>,
    gen_rows: Vec<u16>,
    cum_rows: Vec<u16>,
    digits: Vec<u64>,
    cum: Vec<u16>,
}

/// Full value table of a bilinear map, `out[x * |B| + y]` holding the lex
/// index of f(x, y) in the target. Built by accumulating generator
/// contributions along the lex walk, so it never calls the map's own eval.
fn bilinear_table(f: &BilinearMap, n: usize, add: &[u16], s: &mut TableScratch, out: &mut Vec<u16>) {
    let (a, b, c) = (f.left(), f.right(), f.target());
    let (na, nb) = (a.order() as usize, b.order() as usize);
    let (ma, mb) = (a.arity(), b.arity());
    out.clear();
    out.resize(na * nb, 0);

    s.cells.clear();
    for i in 0..ma {
        for j in 0..mb {
            s.cells.push(c.lex_index(f.cell(i, j)).unwrap() as u16);
        }
    }

    // row of each left generator: g_i[y] = f(e_i, y)
    s.gen_rows.clear();
    s.gen_rows.resize(ma * nb, 0);
    let bf = b.factors();
    for i in 0..ma {
        let row = &mut s.gen_rows[i * nb..(i + 1) * nb];
        let cells_i = &s.cells[i * mb..(i + 1) * mb];
        s.digits.clear();
        s.digits.resize(mb, 0);
        s.cum.clear();
        s.cum.resize(mb + 1, 0);
        for y in 1..nb {
            let mut k = mb - 1;
            loop {
                s.digits[k] += 1;
                if s.digits[k] < bf[k] {
                    break;
                }
                s.digits[k] = 0;
                k -= 1;
            }
            s.cum[k + 1] = add[s.cum[k + 1] as usize * n + cells_i[k] as usize];
            for t in k + 1..mb {
                s.cum[t + 1] = s.cum[t];
            }
            row[y] = s.cum[mb];
        }
    }

    // rows of the table: accumulate generator rows along the lex walk of A
    let af = a.factors();
    s.cum_rows.clear();
    s.cum_rows.resize((ma + 1) * nb, 0);
    s.digits.clear();
    s.digits.resize(ma, 0);
    for x in 1..na {
        let mut k = ma - 1;
        loop {
            s.digits[k] += 1;
            if s.digits[k] < af[k] {
                break;
            }
            s.digits[k] = 0;
            k -= 1;
        }
        for y in 0..nb {
            s.cum_rows[(k + 1) * nb + y] = add
                [s.cum_rows[(k + 1) * nb + y] as usize * n + s.gen_rows[k * nb + y] as usize];
        }
        for t in k + 1..ma {
            let (head, tail) = s.cum_rows.split_at_mut((t + 1) * nb);
            tail[..nb].copy_from_slice(&head[t * nb..(t + 1) * nb]);
        }
        out[x * nb..(x + 1) * nb].copy_from_slice(&s.cum_rows[ma * nb..(ma + 1) * nb]);
    }
}

#[test]
fn criterion_6_divide_out_kernels() {
    let _gate = serialized();
    let started = Instant::now();
    let sides = abelian_classes(16, None);
    let targets = abelian_classes(8, None);
    let mut maps_checked = 0u64;
    let mut triples = 0u64;
    let mut skipped = 0u64;
    let mut quot_scratch = QuotientScratch::new();
    for a in &sides {
        for b in &sides {
            let (na, nb) = (a.order() as usize, b.order() as usize);
            for c in &targets {
                if bilinear_count(a, b, c) > DEFAULT_MAX_ENUM as u128 {
                    skipped += 1;
                    continue;
                }
                triples += 1;
                let n = c.order() as usize;
                let add = add_table(c);
                let mut scratch = TableScratch::default();
                let mut t_base: Vec<u16> = Vec::new();
                let mut t_ind: Vec<u16> = Vec::new();
                let mut verified = 0u64;
                let count = visit_bilinear(a, b, c, DEFAULT_MAX_ENUM, |f| {
                    bilinear_table(f, n, &add, &mut scratch, &mut t_base);
                    let q = f.quotient_pairing_with(&mut quot_scratch, DEFAULT_MAX_ENUM).unwrap();
                    let (r, sq) = (
                        q.quotient_left().order() as usize,
                        q.quotient_right().order() as usize,
                    );

                    // kernel sizes read straight off the base value table
                    let kl = (0..na)
                        .filter(|&x| t_base[x * nb..(x + 1) * nb].iter().all(|&v| v == 0))
                        .count();
                    let kr = (0..nb)
                        .filter(|&y| (0..na).all(|x| t_base[x * nb + y] == 0))
                        .count();
                    assert_eq!(r * kl, na, "left quotient order is off for {a} x {b} -> {c}");
                    assert_eq!(sq * kr, nb, "right quotient order is off for {a} x {b} -> {c}");

                    bilinear_table(q.induced(), n, &add, &mut scratch, &mut t_ind);

                    // the induced map on quotient elements must equal the
                    // base map on the matching representatives
                    for (qi, rep_a) in q.left_representatives().iter().enumerate() {
                        let xi = a.lex_index(rep_a).unwrap() as usize;
                        for (qj, rep_b) in q.right_representatives().iter().enumerate() {
                            let yj = b.lex_index(rep_b).unwrap() as usize;
                            assert_eq!(
                                t_ind[qi * sq + qj],
                                t_base[xi * nb + yj],
                                "induced map disagrees with the base at reps ({qi},{qj}) for {a} x {b} -> {c}"
                            );
                        }
                    }

                    // trivial kernels: beyond the zero coset, no all-zero row or column
                    for qi in 1..r {
                        assert!(
                            t_ind[qi * sq..(qi + 1) * sq].iter().any(|&v| v != 0),
                            "left kernel of the quotient is not trivial for {a} x {b} -> {c}"
                        );
                    }
                    for qj in 1..sq {
                        assert!(
                            (0..r).any(|qi| t_ind[qi * sq + qj] != 0),
                            "right kernel of the quotient is not trivial for {a} x {b} -> {c}"
                        );
                    }
                    verified += 1;
                })
                .unwrap();
                assert_eq!(count, verified, "every enumerated map must be verified");
                maps_checked += verified;
            }
        }
    }
    finish(6, Duration::from_secs(60), started, &format!(
        "{maps_checked} maps over {triples} class triples quotient cleanly ({skipped} over-cap triples skipped)"
    ));
}

#[test]
fn criterion_7_duality() {
    let _gate = serialized();
    let started = Instant::now();
    let groups = presentations_up_to(100, None);
    let count = groups.len();
    for a in &groups {
        let n = a.exponent();
        let f = duality_pairing(a, n).unwrap();
        assert!(
            f.is_left_nondegenerate(DEFAULT_MAX_ENUM).unwrap()
                && f.is_right_nondegenerate(DEFAULT_MAX_ENUM).unwrap(),
            "duality pairing on {a} is degenerate"
        );
        let order = a.order();
        for xi in 0..order {
            let x = a.element_at(xi).unwrap();
            for yi in xi + 1..order {
                let y = a.element_at(yi).unwrap();
                assert_eq!(
                    f.eval(&x, &y).unwrap(),
                    f.eval(&y, &x).unwrap(),
                    "duality pairing on {a} is not symmetric at ({x}, {y})"
                );
            }
        }
        let dual = dual_group(a, n).unwrap();
        assert_eq!(
            dual.characters().count() as u128,
            order,
            "character count is off for {a}"
        );
    }
    finish(7, Duration::from_secs(30), started, &format!(
        "{count} presentations: duality pairing symmetric and non-degenerate, characters = |A|"
    ));
}

#[test]
fn criterion_8_universal_property() {
    let _gate = serialized();
    let started = Instant::now();
    let report = verify_universal_property(&UniversalBounds::default()).unwrap();
    assert!(report.passed(), "universal property failures: {:?}", report.failures());
    finish(8, Duration::from_secs(30), started, &format!(
        "{} class triples: factoring through the tensor product is a bijection",
        report.instances_checked()
    ));
}

#[test]
fn criterion_9_cli_golden() {
    let _gate = serialized();
    let started = Instant::now();
    let bin = env!("CARGO_BIN_EXE_abpair");
    let run = |args: &[&str]| {
        Command::new(bin)
            .args(args)
            .env_remove("ABPAIR_MAX_ENUM")
            .output()
            .expect("binary runs")
    };

    let o = run(&["tensor", "Z6", "Z4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        String::from_utf8_lossy(&o.stdout).lines().next(),
        Some("Z2"),
        "tensor Z6 Z4 must print Z2 first"
    );

    let o = run(&["pairings", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&o.stdout), "2\n");

    let o = run(&["nondeg", "Z4", "Z2"]);
    assert_eq!(o.status.code(), Some(1), "nondeg Z4 Z2 must exit 1");
    assert!(String::from_utf8_lossy(&o.stdout).contains("degenerate"));

    // a pairing round-trips through quotient without loss
    let pairing = serde_json::json!({
        "left": [2, 4],
        "right": [2, 4],
        "target": [2, 2, 2, 4],
        "grid": [
            [[1, 0, 0, 0], [0, 1, 0, 0]],
            [[0, 0, 1, 0], [0, 0, 0, 1]],
        ],
    });
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("pairing.json");
    std::fs::write(&path, pairing.to_string()).expect("write map file");
    let o = run(&["--json", "quotient", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_slice(&o.stdout).expect("quotient emits valid JSON");
    assert_eq!(v["induced"], pairing, "quotient of a pairing must be lossless");

    finish(9, Duration::from_secs(30), started, "golden outputs and the lossless quotient round trip hold");
}
