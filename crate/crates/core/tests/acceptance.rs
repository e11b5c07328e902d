//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; the process exits non-zero
//! if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{class, projective_line, BottOracle};
use toric_skt::bott::build_bott;
use toric_skt::cli;
use toric_skt::cohomology::Cohomology;
use toric_skt::corpus::Corpus;
use toric_skt::fan::{parse_fan, validate_fan, Fan};
use toric_skt::skt::{
    check_isolation_implies_square_zero, find_skt_bundle, isolation_decompose, parse_certificate,
    square_zero_search, transport_witness, validate_witness, verify_certificate,
};
use toric_skt::wedge::{equivalence_by_traces, wedge_atomic, wedge_sequence};

struct Outcome {
    failures: Vec<String>,
    checked: usize,
}

impl Outcome {
    fn new() -> Outcome {
        Outcome { failures: Vec::new(), checked: 0 }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

fn report(id: u32, title: &str, budget: Duration, body: impl FnOnce(&mut Outcome)) -> bool {
    let start = Instant::now();
    let mut outcome = Outcome::new();
    body(&mut outcome);
    let elapsed = start.elapsed();
    let in_time = elapsed <= budget;
    let pass = outcome.failures.is_empty() && in_time;
    println!(
        "[{}] criterion {id}: {title} ({} checks, {} failed, {:.2}s of {}s)",
        if pass { "PASS" } else { "FAIL" },
        outcome.checked,
        outcome.failures.len(),
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    for f in outcome.failures.iter().take(5) {
        println!("       {f}");
    }
    if outcome.failures.len() > 5 {
        println!("       ... and {} more", outcome.failures.len() - 5);
    }
    if !in_time {
        println!("       over the time budget");
    }
    pass
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn square_zero_suite(o: &mut Outcome) {
    let mut corpus = Corpus::new(0x31);
    for _ in 0..200 {
        let spec = corpus.bott_spec(1..=6, 5);
        let coh = Cohomology::new(&build_bott(&spec).unwrap()).unwrap();
        let m = coh.num_rays();
        let w1 = coh.square(&coh.generator(0)).unwrap();
        o.check(w1.is_zero(), || format!("w1^2 != 0 for {spec:?}"));
        if spec.height() >= 2 {
            let mut v = vec![0; m];
            v[0] = spec.c(1, 2);
            v[1] = 2;
            let sq = coh.square(&class(&v)).unwrap();
            o.check(sq.is_zero(), || format!("(c12 w1 + 2 w2)^2 != 0 for {spec:?}"));
        }
    }
}

fn three_conditions(c12: i64, c13: i64, c23: i64, x: i64, y: i64, z: i64) -> bool {
    2 * x == c12 * y && 2 * y == c23 * z && 2 * x == (c13 + c12 * c23) * z
}

fn m3_suite(o: &mut Outcome) {
    let mut corpus = Corpus::new(0x32);
    for _ in 0..100 {
        let spec = corpus.bott_spec_of_height(3, 5);
        let (c12, c13, c23) = (spec.c(1, 2), spec.c(1, 3), spec.c(2, 3));
        let coh = Cohomology::new(&build_bott(&spec).unwrap()).unwrap();
        let found = square_zero_search(&coh, 12, Some(&[0, 1, 2])).unwrap();
        let has_z = found.iter().any(|c| c.class().coeffs()[2] != 0);
        let condition = 2 * c13 + c12 * c23 == 0;
        o.check(has_z == condition, || {
            format!("c=({c12},{c13},{c23}): z-coefficient class found = {has_z}, 2c13+c12c23=0 is {condition}")
        });
        for c in &found {
            let v = c.class().coeffs();
            o.check(three_conditions(c12, c13, c23, v[0], v[1], v[2]), || {
                format!("c=({c12},{c13},{c23}): class ({},{},{}) violates the three linear conditions", v[0], v[1], v[2])
            });
        }
    }
}

fn oracle_suite(o: &mut Outcome) {
    let mut corpus = Corpus::new(0x33);
    for _ in 0..50 {
        let spec = corpus.bott_spec(1..=5, 5);
        let coh = Cohomology::new(&build_bott(&spec).unwrap()).unwrap();
        let oracle = BottOracle::new(&spec);
        o.check(coh.h4().basis_labels() == oracle.labels(), || {
            format!("H4 basis {:?} differs from {:?}", coh.h4().basis_labels(), oracle.labels())
        });
        let m = coh.num_rays();
        for _ in 0..20 {
            let (u, v) = (corpus.class(m, 10), corpus.class(m, 10));
            let got: Vec<String> = coh.product(&u, &v).unwrap().coords().iter().map(ToString::to_string).collect();
            let want: Vec<String> = oracle.product(u.coeffs(), v.coeffs()).iter().map(ToString::to_string).collect();
            o.check(got == want, || format!("{spec:?}: ({u})({v}) = {got:?}, oracle {want:?}"));
        }
    }
}

fn wedge_suite(o: &mut Outcome) {
    let mut corpus = Corpus::new(0x34);
    for _ in 0..50 {
        let spec = corpus.bott_spec(1..=4, 5);
        let base = build_bott(&spec).unwrap();
        let m = base.num_rays();
        let i = corpus.index(m);
        let (out, _) = wedge_atomic(&base, i).unwrap();

        o.check(validate_fan(&out).is_valid(), || format!("{spec:?} wedge {}: output invalid", i + 1));
        let r_in = Cohomology::new(&base).unwrap().h2().rank;
        let r_out = Cohomology::new(&out).unwrap().h2().rank;
        o.check(r_in == r_out && r_in == m - base.dim(), || {
            format!("{spec:?} wedge {}: H2 rank {r_in} -> {r_out}", i + 1)
        });

        let pair = |f: &Fan, a: usize, b: usize| f.is_cone_pair(a, b).unwrap();
        for a in 0..m {
            for b in 0..m {
                o.check(pair(&out, a, b) == pair(&base, a, b), || {
                    format!("{spec:?} wedge {}: pair ({},{}) changed", i + 1, a + 1, b + 1)
                });
            }
            if a != i {
                o.check(pair(&out, m, a) == pair(&base, i, a), || {
                    format!("{spec:?} wedge {}: new ray vs {} disagrees with ray {}", i + 1, a + 1, i + 1)
                });
                o.check(pair(&out, a, m) == pair(&out, m, a), || "asymmetric cone pair".into());
            }
        }
        o.check(pair(&out, i, m) && pair(&out, m, i), || format!("{spec:?}: wedged ray and new ray not a cone pair"));

        let with_i = base.max_cones().iter().filter(|c| c.contains(&i)).count();
        let without_i = base.max_cones().len() - with_i;
        o.check(out.max_cones().len() == 2 * without_i + with_i, || {
            format!("{spec:?} wedge {}: {} max cones", i + 1, out.max_cones().len())
        });
    }
}

fn order_suite(o: &mut Outcome) {
    let mut corpus = Corpus::new(0x35);
    for _ in 0..20 {
        let spec = corpus.bott_spec(1..=3, 5);
        let base = build_bott(&spec).unwrap();
        let j = corpus.j_vector(base.num_rays(), 3);
        let mut first = j.default_steps();
        let mut second = first.clone();
        corpus.shuffle(&mut first);
        corpus.shuffle(&mut second);
        let (f1, t1) = wedge_sequence(&base, &first).unwrap();
        let (f2, t2) = wedge_sequence(&base, &second).unwrap();
        o.check(f1.dim() == j.output_dim(base.dim()) && f2.dim() == f1.dim(), || "dimension bookkeeping".into());
        let eq = equivalence_by_traces(&f1, &t1, &f2, &t2);
        o.check(eq.is_some(), || format!("{spec:?} J={:?}: orders {first:?} and {second:?} not equivalent", j.entries()));
    }
}

fn isolation_suite(o: &mut Outcome) {
    let mut corpus = Corpus::new(0x36);
    let mut witnesses = 0;
    for _ in 0..20 {
        let spec = corpus.bott_spec(1..=4, 3);
        let mut fan = build_bott(&spec).unwrap();
        for _ in 0..corpus.index(2) {
            let i = corpus.index(fan.num_rays());
            fan = wedge_atomic(&fan, i).unwrap().0;
        }
        let coh = Cohomology::new(&fan).unwrap();
        for p in 0..coh.num_rays() {
            let Some(witness) = isolation_decompose(&coh, p).unwrap() else { continue };
            witnesses += 1;
            o.check(check_isolation_implies_square_zero(&coh, &witness).unwrap(), || format!("{spec:?} p={}: check false", p + 1));
            o.check(coh.square(&coh.generator(p)).unwrap().is_zero(), || format!("{spec:?} p={}: w_p^2 != 0", p + 1));

            let mut current = fan.clone();
            let mut carried = witness.clone();
            let mut touched = false;
            for _ in 0..=corpus.index(3) {
                let i = corpus.index(current.num_rays());
                touched |= i == carried.p || carried.support().contains(&i);
                let (next, trace) = wedge_atomic(&current, i).unwrap();
                carried = transport_witness(&carried, &trace).unwrap();
                let next_coh = Cohomology::new(&next).unwrap();
                let context = || {
                    format!(
                        "{spec:?} p={} wedged along {} ({})",
                        p + 1,
                        i + 1,
                        if touched { "some wedge touched the witness" } else { "no wedge touched the witness" }
                    )
                };
                o.check(validate_witness(&next_coh, &carried).is_ok(), || format!("{}: transported witness invalid", context()));
                o.check(next_coh.square(&next_coh.generator(carried.p)).unwrap().is_zero(), || {
                    format!("{}: w_p^2 != 0 after the wedge", context())
                });
                o.check(isolation_decompose(&next_coh, carried.p).unwrap().is_some(), || {
                    format!("{}: no witness after the wedge", context())
                });
                current = next;
            }
        }
    }
    o.check(witnesses > 0, || "corpus produced no witnesses".into());
}

fn certificate_suite(o: &mut Outcome) {
    let mut corpus = Corpus::new(0x37);
    for _ in 0..10 {
        let spec = corpus.bott_spec(1..=3, 3);
        let base = build_bott(&spec).unwrap();
        let j = corpus.j_vector(base.num_rays(), 2);
        let (fan, _) = toric_skt::wedge_j(&base, &j).unwrap();
        let coh = Cohomology::new(&fan).unwrap();
        let certs = find_skt_bundle(&coh, 2, 2).unwrap();
        o.check(certs.iter().any(|c| c.verified), || format!("{spec:?} J={:?}: no verified certificate", j.entries()));

        let fan_text = fan.to_json();
        for cert in &certs {
            let reread = parse_fan(&fan_text).unwrap();
            let doc = parse_certificate(&cert.to_json().unwrap()).unwrap();
            let check = verify_certificate(&reread, &doc).unwrap();
            o.check(check.verified, || format!("{spec:?}: re-verification failed: {:?}", check.problems));
        }
    }

    let (plane, _) = wedge_atomic(&projective_line(), 0).unwrap();
    let coh = Cohomology::new(&plane).unwrap();
    o.check(square_zero_search(&coh, 10, None).unwrap().is_empty(), || "projective plane has square-zero classes".into());
    let certs = find_skt_bundle(&coh, 2, 10).unwrap();
    o.check(certs.iter().all(|c| c.classes.iter().all(|u| u.is_zero())), || {
        "projective plane yields a certificate with nonzero classes".into()
    });
}

fn run_cli(args: &[&str]) -> cli::CommandResult {
    let argv: Vec<&str> = std::iter::once("toric-skt").chain(args.iter().copied()).collect();
    cli::run(argv)
}

fn pipeline(dir: &Path) -> Vec<Vec<u8>> {
    let p = |name: &str| dir.join(name).to_string_lossy().into_owned();
    let (fan, wedged, trace, bundle) = (p("fan.json"), p("wedged.json"), p("trace.json"), p("bundle.json"));
    for args in [
        vec!["bott", "--k", "4", "--random", "--seed", "2024", "--max-c", "3", "--out", &fan],
        vec!["wedge", "--fan", &fan, "--J", "2,1,1,1,1,1,1,2", "--out", &wedged, "--trace", &trace],
        vec!["find-bundle", "--fan", &wedged, "--rank", "2", "--bound", "3", "--out", &bundle],
    ] {
        let r = run_cli(&args);
        assert_eq!(r.exit_code, 0, "{args:?}: {}", r.stderr);
    }
    [fan, wedged, trace, bundle].iter().map(|f| std::fs::read(f).unwrap()).collect()
}

fn determinism_suite(o: &mut Outcome) {
    let mut runs = Vec::new();
    for threads in [1, 4, 4] {
        let dir = tempfile::tempdir().unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        runs.push((threads, pool.install(|| pipeline(dir.path()))));
    }
    let reference = &runs[0].1;
    o.check(reference.iter().all(|a| !a.is_empty()), || "empty artifact".into());
    for (threads, artifacts) in &runs[1..] {
        o.check(artifacts == reference, || format!("artifacts differ with {threads} threads"));
    }
    let distinct: BTreeSet<&Vec<Vec<u8>>> = runs.iter().map(|(_, a)| a).collect();
    o.check(distinct.len() == 1, || format!("{} distinct artifact sets", distinct.len()));
}

fn main() -> ExitCode {
    let results = [
        report(1, "w1 and c12*w1 + 2*w2 square to zero on 200 Bott towers", secs(5), square_zero_suite),
        report(2, "M3 z-coefficient classes and the three linear conditions", secs(10), m3_suite),
        report(3, "generic H4 products agree with the squarefree Bott oracle", secs(30), oracle_suite),
        report(4, "atomic wedge validity, rank, cone-pair transfer and cone count", secs(20), wedge_suite),
        report(5, "atomic step order independence up to unimodular change of basis", secs(20), order_suite),
        report(6, "isolation witnesses square to zero and survive transport", secs(20), isolation_suite),
        report(7, "rank-2 certificates on wedges of Bott towers, projective plane control", secs(10), certificate_suite),
        report(8, "byte-identical pipeline artifacts across runs and thread counts", secs(5), determinism_suite),
    ];
    let failed = results.iter().filter(|&&ok| !ok).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
