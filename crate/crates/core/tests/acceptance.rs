//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any failed.

use std::sync::Arc;
use std::time::{Duration, Instant};

use qubit_algebras::bundle::{star_rep_check, REP_TOL};
use qubit_algebras::car::{self, CAR_TOL};
use qubit_algebras::cli;
use qubit_algebras::convolution::GroupAlgebraElement;
use qubit_algebras::equivalence::{decide_equivalence, EquivalenceStatus};
use qubit_algebras::flips::{FlipSet, SiteId};
use qubit_algebras::groupoid::{haar_invariance_check, GroupElement, GroupoidElement, PairElement, HAAR_TOL};
use qubit_algebras::oracle::{self, DenseMatrix};
use qubit_algebras::sampling;
use qubit_algebras::site::QubitVector;
use qubit_algebras::strings::full_algebra_rank;
use qubit_algebras::theta::ThetaFamily;
use qubit_algebras::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    summary: String,
}

fn outcome(passed: bool, summary: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        summary: summary.into(),
    }
}

fn sites(n: usize) -> Vec<SiteId> {
    (1..=n as u32).map(SiteId).collect()
}

fn cli_json(args: &[&str]) -> (i32, serde_json::Value) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("qalg").chain(args.iter().copied()).chain(["--json"]);
    let code = cli::run_with(argv, &mut out, &mut err);
    let value = serde_json::from_slice(&out).unwrap_or(serde_json::Value::Null);
    (code, value)
}

fn car_relations() -> Outcome {
    let (code, report) = cli_json(&["car-check", "--sites", "8"]);
    let residual = report["max_residual"].as_f64().unwrap_or(f64::NAN);
    let (neg_code, neg) = cli_json(&["car-check", "--sites", "8", "--negative-control"]);
    let neg_residual = neg["max_residual"].as_f64().unwrap_or(f64::NAN);
    let passed = code == 0 && residual < CAR_TOL && neg_code == 1 && neg_residual >= CAR_TOL;
    outcome(
        passed,
        format!("8 sites max residual {residual:.2e}; negative control residual {neg_residual:.2e} (exit {neg_code})"),
    )
}

fn ranks() -> Outcome {
    let mut found = Vec::new();
    let mut passed = true;
    for m in 1..=3usize {
        let full = full_algebra_rank(m).unwrap_or(0);
        let cyclic = car::cyclicity_rank(m).unwrap_or(0);
        passed &= full == 4usize.pow(m as u32) && cyclic == 2usize.pow(m as u32);
        found.push(format!("m={m}: {full}/{cyclic}"));
    }
    outcome(passed, format!("full/cyclic ranks {}", found.join(", ")))
}

fn equivalence() -> Outcome {
    let tail = QubitVector::bloch(0.8, 0.3);
    let finite = (
        ThetaFamily::new(tail, (1..=4).map(|s| (SiteId(s), QubitVector::bloch(0.5 * s as f64, 1.0)))).unwrap(),
        ThetaFamily::new(tail, [(SiteId(2), QubitVector::e2()), (SiteId(9), QubitVector::e1())]).unwrap(),
    );
    let plus = QubitVector::from_real(1.0, 1.0).normalized().unwrap();
    let tilted = (
        ThetaFamily::constant(QubitVector::e1()).unwrap(),
        ThetaFamily::constant(plus).unwrap(),
    );
    let phase = Complex::from_polar(1.0, std::f64::consts::FRAC_PI_3);
    let rotated = (
        ThetaFamily::constant(tail).unwrap(),
        ThetaFamily::constant(tail.scale(phase)).unwrap(),
    );
    let expected = [
        EquivalenceStatus::Equivalent,
        EquivalenceStatus::Inequivalent,
        EquivalenceStatus::Equivalent,
    ];
    let mut passed = true;
    for ((f, g), want) in [finite, tilted, rotated].iter().zip(expected) {
        passed &= decide_equivalence(f, g).map(|v| v.status == want).unwrap_or(false);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let pool = sites(8);
    let mut asymmetric = 0;
    for _ in 0..100 {
        let f = sampling::random_family(&mut rng, &pool);
        // half of the partners share f's tail so both verdicts occur
        let g = if rng.random_bool(0.5) {
            let mut overrides = Vec::new();
            for s in &pool {
                if rng.random_bool(0.3) {
                    overrides.push((*s, sampling::random_qubit(&mut rng)));
                }
            }
            ThetaFamily::new(f.tail(), overrides).unwrap()
        } else {
            sampling::random_family(&mut rng, &pool)
        };
        let ok = (|| -> qubit_algebras::Result<bool> {
            let ff = decide_equivalence(&f, &f)?;
            let fg = decide_equivalence(&f, &g)?;
            let gf = decide_equivalence(&g, &f)?;
            Ok(ff.status == EquivalenceStatus::Equivalent
                && fg.status == gf.status
                && (fg.partial_sum - gf.partial_sum).abs() < 1e-12)
        })()
        .unwrap_or(false);
        if !ok {
            asymmetric += 1;
        }
    }
    passed &= asymmetric == 0;
    outcome(passed, format!("3 examples; {asymmetric}/100 random families broke symmetry or reflexivity"))
}

fn groupoid_axioms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let pool = sites(6);
    let (mut failures, mut haar_residual) = (0usize, 0.0f64);
    for _ in 0..1000 {
        let baseline = if rng.random_bool(0.5) { "a" } else { "b" };
        let x = sampling::random_orbit(&mut rng, baseline, &pool, 1)[0].clone();
        let e1 = GroupoidElement::new(x, sampling::random_group_element(&mut rng, &pool));
        let e2 = GroupoidElement::new(e1.target_point(), sampling::random_group_element(&mut rng, &pool));
        let e3 = GroupoidElement::new(e2.target_point(), sampling::random_group_element(&mut rng, &pool));

        let assoc = e1.compose(&e2).and_then(|a| a.compose(&e3)).ok()
            == e2.compose(&e3).and_then(|b| e1.compose(&b)).ok();
        let inverse = e1.compose(&e1.inverse()).ok() == Some(e1.range())
            && e1.inverse().compose(&e1).ok() == Some(e1.domain())
            && e1.inverse().inverse() == e1;
        let pair = GroupoidElement::from_pair(&e1.to_pair()).ok() == Some(e1.clone())
            && e1.compose(&e2).map(|c| c.to_pair()).ok() == e1.to_pair().compose(&e2.to_pair()).ok()
            && PairElement::new(e1.point.clone(), e3.target_point()).is_ok();
        if !(assoc && inverse && pair) {
            failures += 1;
        }

        let points = sampling::random_orbit(&mut rng, baseline, &pool, 6);
        let f = sampling::random_conv_function(&mut rng, &points, &pool, 8);
        let check = haar_invariance_check(&f, &e1);
        haar_residual = haar_residual.max(check.residual);
        if !check.passed {
            failures += 1;
        }
    }
    outcome(
        failures == 0 && haar_residual < HAAR_TOL,
        format!("1000 instances, {failures} failures, Haar residual {haar_residual:.2e}"),
    )
}

fn convolution_algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let pool = sites(4);
    let (mut assoc, mut anti, mut submult, mut star) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..1000 {
        let mut points = sampling::random_orbit(&mut rng, "a", &pool, 6);
        if rng.random_bool(0.3) {
            points.extend(sampling::random_orbit(&mut rng, "b", &pool, 3));
        }
        let f = sampling::random_conv_function(&mut rng, &points, &pool, 6);
        let g = sampling::random_conv_function(&mut rng, &points, &pool, 6);
        let h = sampling::random_conv_function(&mut rng, &points, &pool, 6);
        let fg = f.convolve(&g);
        assoc = assoc.max(fg.convolve(&h).distance(&f.convolve(&g.convolve(&h))));
        anti = anti.max(fg.involution().distance(&g.involution().convolve(&f.involution())));
        submult = submult.max(fg.i_norm() - f.i_norm() * g.i_norm());
        star = star.max((f.involution().i_norm() - f.i_norm()).abs());
    }
    let tol = 1e-12;
    outcome(
        assoc < tol && anti < tol && submult < tol && star < tol,
        format!(
            "1000 triples: assoc {assoc:.2e}, anti-mult {anti:.2e}, submult excess {:.2e}, *-invariance {star:.2e}",
            submult.max(0.0)
        ),
    )
}

fn monomorphism() -> Outcome {
    let m = 6;
    let all: Vec<GroupElement> = FlipSet::subsets_of(&sites(m)).into_iter().map(GroupElement).collect();
    let dense: Vec<DenseMatrix> = all
        .iter()
        .map(|g| oracle::kron_string(m, &GroupAlgebraElement::delta(g.clone()).embed()).expect("within cap"))
        .collect();
    let mut mult = 0.0f64;
    for (i, g1) in all.iter().enumerate() {
        for (j, g2) in all.iter().enumerate() {
            let product = GroupAlgebraElement::delta(g1.clone()).group_convolve(&GroupAlgebraElement::delta(g2.clone()));
            let lhs = oracle::kron_string(m, &product.embed()).expect("within cap");
            mult = mult.max(lhs.max_abs_diff(&dense[i].matmul(&dense[j])));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut adjoint = 0.0f64;
    for _ in 0..100 {
        let u = sampling::random_group_algebra_element(&mut rng, &sites(m), 6);
        let v = sampling::random_group_algebra_element(&mut rng, &sites(m), 6);
        let lhs = oracle::kron_string(m, &u.group_involution().embed()).expect("within cap");
        let ku = oracle::kron_string(m, &u.embed()).expect("within cap");
        adjoint = adjoint.max(lhs.max_abs_diff(&ku.adjoint()));
        let uv = oracle::kron_string(m, &u.group_convolve(&v).embed()).expect("within cap");
        let kv = oracle::kron_string(m, &v.embed()).expect("within cap");
        mult = mult.max(uv.max_abs_diff(&ku.matmul(&kv)));
    }
    let vectors: Vec<Vec<Complex>> = dense.into_iter().map(DenseMatrix::into_entries).collect();
    let rank = oracle::rank(&vectors);
    let tol = 1e-10;
    outcome(
        mult < tol && adjoint < tol && rank == all.len(),
        format!("64 elements: multiplicative {mult:.2e}, adjoint {adjoint:.2e}, rank {rank}/64"),
    )
}

fn representation() -> Outcome {
    let (mut product, mut adjoint, mut dominated, mut failures) = (0.0f64, 0.0f64, 0usize, 0usize);
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let n_sites = rng.random_range(1..=4);
        let pool = sites(n_sites);
        let points = sampling::random_orbit(&mut rng, "x", &pool, 8);
        let f = sampling::random_conv_function(&mut rng, &points, &pool, 6);
        let h = sampling::random_conv_function(&mut rng, &points, &pool, 6);
        match star_rep_check(&f, &h, 1, seed) {
            Ok(r) => {
                product = product.max(r.product_residual);
                adjoint = adjoint.max(r.adjoint_residual);
                if r.i_norm_dominates {
                    dominated += 1;
                }
                if !r.passed {
                    failures += 1;
                }
            }
            Err(_) => failures += 1,
        }
    }
    outcome(
        failures == 0 && dominated == 200 && product < REP_TOL && adjoint < REP_TOL,
        format!("200 instances: product {product:.2e}, adjoint {adjoint:.2e}, I-norm dominates in {dominated}/200"),
    )
}

fn oracle_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut apply, mut isometry, mut errors) = (0.0f64, 0.0f64, 0usize);
    for _ in 0..500 {
        let m = rng.random_range(1..=6);
        let pool = sites(m);
        let family = Arc::new(sampling::random_family(&mut rng, &pool));
        let a = sampling::random_algebra_element(&mut rng, m, 4, m);
        let u = sampling::random_state(&mut rng, &family, &pool, 6);
        match (oracle::compare_apply(m, &a, &u), oracle::embed_state(m, &u)) {
            (Ok(r), Ok(v)) => {
                apply = apply.max(r);
                isometry = isometry.max((v.norm() - u.norm()).abs());
            }
            _ => errors += 1,
        }
    }
    outcome(
        errors == 0 && apply < 1e-10 && isometry < 1e-12,
        format!("500 pairs: apply residual {apply:.2e}, isometry residual {isometry:.2e}"),
    )
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("CAR relations", Duration::from_secs(10), car_relations),
        ("string and vacuum-orbit ranks", Duration::from_secs(5), ranks),
        ("equivalence decisions", Duration::from_secs(1), equivalence),
        ("groupoid axioms and Haar invariance", Duration::from_secs(5), groupoid_axioms),
        ("convolution algebra", Duration::from_secs(10), convolution_algebra),
        ("group algebra monomorphism", Duration::from_secs(10), monomorphism),
        ("representation on sections", Duration::from_secs(30), representation),
        ("sparse vs dense oracle", Duration::from_secs(30), oracle_agreement),
    ];
    let mut all_passed = true;
    for (k, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= *budget;
        let passed = result.passed && in_time;
        all_passed &= passed;
        println!(
            "{} [{}] {name}: {} ({:.2} s, budget {} s{})",
            if passed { "PASS" } else { "FAIL" },
            k + 1,
            result.summary,
            elapsed.as_secs_f64(),
            budget.as_secs(),
            if in_time { "" } else { ", over budget" }
        );
    }
    if !all_passed {
        std::process::exit(1);
    }
}
