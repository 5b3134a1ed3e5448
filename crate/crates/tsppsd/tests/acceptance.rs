//! Acceptance criteria, one line per criterion.
//!
//! Runs without the libtest harness so every line is printed even when the
//! output is captured; the process exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use rand::Rng;
use tsppsd::suites::{
    generator_specs, path_patterns, random_average_one, random_functional, random_zero_one_instance, rng,
};
use tsppsd_core::bounds::{counts, lemma_bound, oracle_values, proposition_bound, theorem1_constants};
use tsppsd_core::cycles::{
    all_edges, count_cycles_containing, cycle_masks, Edge, EdgeMask, HamiltonianCycle, PathSystem, Vertex,
};
use tsppsd_core::functionals::{FacetSpec, LinearFunctional};
use tsppsd_core::linalg::exact_rank;
use tsppsd_core::moment::{
    moment_matrix_closed_form_k1, moment_matrix_enumerated, quadratic_form_value, star_vector, AffineFunction,
};
use tsppsd_core::psd::{boundary_certificate, membership_p1, zero_one_collapse_check, CollapseVerdict, Mode};
use tsppsd_core::rational::{from_big, int, ratio};
use tsppsd_core::spectra::{
    combined_matrix, eigenvector_families, numeric_spectrum_delta, sqrt_n_nonpositivity, subtour_psd_from_spectrum,
    verify_eigenpairs_exact, Weight, SPECTRUM_TOL, SQRT_N_TOL,
};
use tsppsd_core::{Limits, Rational};

/// Residual pair against the numerical spectrum.
const RESIDUAL_TOL: f64 = 1e-9;
/// Scale for `λ₋ <= 0` at `a = √n`.
const SQRT_N_SCALE: f64 = 1e-12;

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

fn binom(n: usize, k: usize) -> BigUint {
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

fn masks(n: usize, lim: &Limits) -> Vec<EdgeMask> {
    cycle_masks(n, lim).expect("within caps").collect()
}

/// `(1/|X|) Σ_x f(x) p(x)²` with `p` evaluated from its monomial expansion.
fn q_by_expansion(f: &LinearFunctional, p: &tsppsd_core::psd::CertificatePolynomial, lim: &Limits) -> Rational {
    let n = f.n();
    let terms = p.expand();
    let ms = masks(n, lim);
    let mut acc = Rational::zero();
    for &x in &ms {
        let mut px = BigInt::zero();
        for (mono, coef) in &terms {
            if mono.edges(n).iter().all(|e| x.contains(*e)) {
                px += coef;
            }
        }
        acc += f.evaluate_mask(x) * from_big(&px * &px);
    }
    acc / int(ms.len() as i64)
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn criterion_1(lim: &Limits) -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for n in 4..=9usize {
        let ms = masks(n, lim);
        let mut r = rng(0, n as u64);
        for lengths in path_patterns(n) {
            let (k, m) = (lengths.iter().sum::<usize>(), lengths.len());
            assert!(k + m <= n);
            let mut verts: Vec<Vertex> = (1..=n as Vertex).collect();
            rand::seq::SliceRandom::shuffle(verts.as_mut_slice(), &mut r);
            let mut paths = Vec::new();
            let mut at = 0;
            for &l in &lengths {
                paths.push(verts[at..=at + l].to_vec());
                at += l + 1;
            }
            let ps = PathSystem::new(n, paths).expect("disjoint paths");
            let want = EdgeMask::from_edges(&ps.edges());
            let enumerated = BigUint::from(ms.iter().filter(|x| x.contains_all(want)).count());
            let formula = (BigUint::one() << (m - 1)) * factorial(n - k - 1);
            checked += 1;
            if formula != enumerated || count_cycles_containing(&ps) != enumerated {
                bad.push(format!("n={n} {lengths:?}"));
            }
        }
    }
    outcome(bad.is_empty(), format!("{checked} patterns, mismatches {bad:?}"))
}

fn criterion_2(lim: &Limits) -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for n in 6..=9usize {
        for (name, spec) in generator_specs(n) {
            let f = spec.build().expect("valid facet");
            let closed = moment_matrix_closed_form_k1(&f, lim).expect("closed form");
            let counted = moment_matrix_enumerated(&f, 1, lim).expect("enumeration");
            checked += 1;
            if closed.basis != counted.basis || closed.entries != counted.entries {
                bad.push(format!("n={n} {name}"));
            }
        }
    }
    outcome(bad.is_empty(), format!("{checked} matrices, mismatches {bad:?}"))
}

fn criterion_3(lim: &Limits) -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    let mut r = rng(0, 3);
    for n in 4..=8usize {
        let mut fs: Vec<(String, LinearFunctional)> = generator_specs(n)
            .into_iter()
            .map(|(name, s)| (name, s.build().expect("valid facet")))
            .collect();
        fs.push(("random".into(), random_average_one(n, &mut r)));
        for (name, f) in fs {
            for k in 1..=2usize {
                let m = moment_matrix_enumerated(&f, k, lim).expect("enumeration");
                checked += 1;
                if m.entries.trace() != from_big(binom(n + k, k).into()) {
                    bad.push(format!("n={n} k={k} {name}"));
                }
            }
        }
    }
    for i in 0..20 {
        let n = 5 + i % 4;
        let k = 1 + i % 2;
        let f = random_functional(n, &mut r);
        let ms = masks(n, lim);
        let avg = ms.iter().fold(Rational::zero(), |acc, x| acc + f.evaluate_mask(*x)) / int(ms.len() as i64);
        let m = moment_matrix_enumerated(&f, k, lim).expect("enumeration");
        checked += 1;
        if m.entries.trace() != from_big(binom(n + k, k).into()) * &avg {
            bad.push(format!("random {i}: n={n} k={k}"));
        }
    }
    outcome(bad.is_empty(), format!("{checked} traces, mismatches {bad:?}"))
}

fn criterion_4(lim: &Limits) -> Outcome {
    let mut specs: Vec<FacetSpec> = Vec::new();
    for n in 4..=8usize {
        for edge in all_edges(n) {
            specs.push(FacetSpec::EdgeUpper { n, edge });
            specs.push(FacetSpec::EdgeLower { n, edge });
        }
        for m in 2..=n / 2 {
            specs.push(FacetSpec::Subtour {
                n,
                u: (1..=m as Vertex).collect(),
            });
        }
    }
    for n in [7usize, 8] {
        for a in 4..=n as Vertex {
            for b in 4..=n as Vertex {
                for c in 4..=n as Vertex {
                    if a != b && b != c && a != c {
                        let e = |x, y| Edge::new(x, y).expect("distinct");
                        specs.push(FacetSpec::TwoMatching {
                            n,
                            u: vec![1, 2, 3],
                            matching: vec![e(1, a), e(2, b), e(3, c)],
                        });
                    }
                }
            }
        }
    }
    let mut bad = Vec::new();
    for spec in &specs {
        let f = spec.build().expect("valid facet");
        let p = boundary_certificate(spec).expect("certificate");
        let q = q_by_expansion(&f, &p, lim);
        let lib = quadratic_form_value(&f, &p, lim).expect("enumeration");
        if !q.is_zero() || lib != q {
            bad.push(format!("{spec:?}"));
        }
    }
    outcome(bad.is_empty(), format!("{} certificates, nonzero {bad:?}", specs.len()))
}

fn criterion_5(lim: &Limits) -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    for n in 6..=10usize {
        for m in 3..=n / 2 {
            let families = eigenvector_families(n, m).expect("in range");
            for a in [0i64, 1, 5] {
                let v = verify_eigenpairs_exact(n, m, &int(a), lim).expect("in range");
                let mat = combined_matrix(n, m, &int(a), lim).expect("in range");
                let mut direct = true;
                for (fam, (_, vectors)) in v.families.iter().zip(&families) {
                    direct &= vectors
                        .iter()
                        .all(|x| mat.mul_vec(x).iter().zip(x).all(|(ax, xi)| *ax == &fam.eigenvalue * xi));
                    direct &= fam.multiplicity == 0 || exact_rank(vectors) as u64 == fam.multiplicity;
                }
                checked += 1;
                if !(direct && v.passed() && v.multiplicity_sum == (n * (n - 1) / 2 - 1) as u64) {
                    bad.push(format!("n={n} m={m} a={a}"));
                }
            }
        }
    }
    let mut worst = 0f64;
    for n in 6..=14usize {
        for m in 3..=n / 2 {
            for a in [0i64, 1, 5] {
                match numeric_spectrum_delta(n, m, &Weight::Rational(int(a)), lim).expect("in range") {
                    Some(d) => {
                        worst = worst.max(d);
                        if d > RESIDUAL_TOL {
                            bad.push(format!("residual n={n} m={m} a={a} delta={d:e}"));
                        }
                    }
                    None => bad.push(format!("complex residual n={n} m={m} a={a}")),
                }
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("{checked} exact eigensystems, worst residual delta {worst:.2e}, failures {bad:?}"),
    )
}

fn criterion_6(lim: &Limits) -> Outcome {
    let mut bad = Vec::new();
    let mut rows = 0;
    let mut most = f64::NEG_INFINITY;
    for n in 6..=40usize {
        let report = sqrt_n_nonpositivity(n, lim).expect("in range");
        for row in &report.rows {
            rows += 1;
            let Some(lm) = row.lambda_minus else {
                bad.push(format!("n={n} m={} complex pair", row.m));
                continue;
            };
            most = most.max(lm).max(row.numeric_lambda_minus);
            let formula_ok = lm <= SQRT_N_SCALE * lm.abs().max(1.0) && row.exact_nonpositive == Some(true);
            let numeric_ok = row.numeric_lambda_minus <= SQRT_N_SCALE * row.numeric_lambda_minus.abs().max(1.0)
                && row.numeric_delta <= RESIDUAL_TOL;
            if !(formula_ok && numeric_ok) {
                bad.push(format!("n={n} m={} lambda_minus={lm:e}", row.m));
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("{rows} (n, m) pairs, largest lambda_minus {most:.3e}, failures {bad:?}"),
    )
}

fn criterion_7(lim: &Limits) -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    for n in 4..=9usize {
        let y = HamiltonianCycle::canonical(n).expect("n >= 3");
        for k in 1..=n / 2 {
            let (b, c) = counts(n, k).expect("valid k");
            let oracle = oracle_values(n, k, &y, lim).expect("within caps");
            let bound = lemma_bound(&b.clone().into(), &c.clone().into(), n).expect("0 < b < c");
            let closed = proposition_bound(n, k).expect("valid k");
            checked += 1;
            if oracle.two_valued() != Some((b, c)) || bound != closed {
                bad.push(format!("n={n} k={k}"));
            }
            if k == 1 && closed != int(1 - n as i64) {
                bad.push(format!("n={n} k=1 bound {closed}"));
            }
        }
    }
    outcome(bad.is_empty(), format!("{checked} (n, k) pairs, failures {bad:?}"))
}

fn criterion_8() -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    for n in 9..=200usize {
        for k in 1..=n / 2 {
            let a_k = int(1) - proposition_bound(n, k).expect("valid k");
            let alpha = &a_k - ratio(n as i64, k as i64);
            let r = theorem1_constants(n, k).expect("n >= 9");
            checked += 1;
            if alpha.abs() > ratio(10, n as i64) || r.a_k != a_k || r.alpha_k != alpha {
                bad.push(format!("n={n} k={k}"));
            }
        }
    }
    outcome(bad.is_empty(), format!("{checked} (n, k) pairs, failures {bad:?}"))
}

fn criterion_9() -> Outcome {
    let mut bad = Vec::new();
    let mut rejected = 0;
    let mut r = rng(0, 9);
    for d in 1..=4usize {
        let mut per_d = 0;
        let mut tries = 0;
        while per_d < 50 && tries < 10_000 {
            tries += 1;
            let (ground, mut f) = random_zero_one_instance(d, &mut r);
            // Shift so the minimum over X is negative.
            let values = f.values_on(&ground);
            let min = values.iter().min().expect("nonempty").clone();
            f.constant -= &min + ratio(r.gen_range(1..=5), r.gen_range(1..=3));
            let f = AffineFunction {
                constant: f.constant,
                coeffs: f.coeffs,
            };
            let size = int(ground.len() as i64);
            match zero_one_collapse_check(&ground, &f).expect("valid instance") {
                CollapseVerdict::Rejected {
                    y,
                    certificate,
                    f_y,
                    q_value,
                } => {
                    let direct = ground.points().iter().fold(Rational::zero(), |acc, x| {
                        let p = certificate.evaluate_point(x);
                        acc + f.evaluate(x) * &p * &p
                    }) / &size;
                    let ok = ground.position(&y).is_some()
                        && f_y == f.evaluate(&y)
                        && f_y.is_negative()
                        && q_value == &f_y / &size
                        && direct == q_value;
                    if !ok {
                        bad.push(format!("d={d} y={y:?}"));
                    }
                    per_d += 1;
                    rejected += 1;
                }
                CollapseVerdict::InQ { .. } => bad.push(format!("d={d}: negative minimum not rejected")),
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("{rejected} rejections checked, failures {bad:?}"),
    )
}

fn criterion_10(lim: &Limits) -> Outcome {
    let mut bad = Vec::new();
    let mut accepted = 0;
    let mut exact = 0;
    for n in 5..=40usize {
        for (name, spec) in generator_specs(n) {
            let f = spec.build().expect("valid facet");
            let v = membership_p1(&f, Mode::Auto, lim).expect("within caps");
            if v.method == tsppsd_core::psd::Method::Exact {
                exact += 1;
            }
            if v.is_psd() {
                accepted += 1;
            } else {
                bad.push(format!("n={n} {name}"));
            }
            if let FacetSpec::Subtour { u, .. } = &spec {
                if u.len() >= 3 && n >= 6 && !subtour_psd_from_spectrum(n, u.len()).expect("in range") {
                    bad.push(format!("n={n} {name} spectrum"));
                }
            }
        }
    }
    // U = {1, 2}: the x_12 row vanishes and e_12 joins the star kernel.
    for n in 6..=12usize {
        let f = FacetSpec::Subtour { n, u: vec![1, 2] }.build().expect("valid facet");
        let a = moment_matrix_closed_form_k1(&f, lim).expect("closed form");
        let idx = a
            .index_of(&tsppsd_core::moment::MonomialIndex::new(vec![Edge::new(1, 2)
                .expect("distinct")
                .lex_index(n)]))
            .expect("in basis");
        let row_zero = a.entries.row(idx).iter().all(Zero::is_zero);
        let mut span: Vec<Vec<Rational>> = (1..=n as Vertex).map(|i| star_vector(n, i)).collect();
        let stars = exact_rank(&span);
        let mut e = vec![Rational::zero(); a.dim()];
        e[idx] = Rational::one();
        span.push(e);
        if !(row_zero && stars == n && exact_rank(&span) == n + 1) {
            bad.push(format!("n={n} pair kernel"));
        }
    }
    outcome(
        bad.is_empty(),
        format!("{accepted} functionals accepted ({exact} exact), pair kernel n=6..12, failures {bad:?}"),
    )
}

fn main() -> ExitCode {
    assert_eq!(SPECTRUM_TOL, RESIDUAL_TOL);
    assert_eq!(SQRT_N_TOL, SQRT_N_SCALE);
    let lim = Limits::default();
    type Run<'a> = Box<dyn Fn() -> Outcome + 'a>;
    let criteria: Vec<(&str, Duration, Run)> = vec![
        (
            "path containment counts",
            Duration::from_secs(60),
            Box::new(|| criterion_1(&lim)),
        ),
        (
            "closed-form moment matrices",
            Duration::from_secs(300),
            Box::new(|| criterion_2(&lim)),
        ),
        (
            "trace identity",
            Duration::from_secs(60),
            Box::new(|| criterion_3(&lim)),
        ),
        (
            "boundary certificates",
            Duration::from_secs(120),
            Box::new(|| criterion_4(&lim)),
        ),
        (
            "subtour eigensystems",
            Duration::from_secs(300),
            Box::new(|| criterion_5(&lim)),
        ),
        (
            "lambda_minus at a = sqrt(n)",
            Duration::from_secs(600),
            Box::new(|| criterion_6(&lim)),
        ),
        (
            "count identities and bounds",
            Duration::from_secs(300),
            Box::new(|| criterion_7(&lim)),
        ),
        ("|alpha_k| <= 10/n", Duration::from_secs(60), Box::new(criterion_8)),
        ("zero-one collapse", Duration::from_secs(30), Box::new(criterion_9)),
        (
            "facet functionals in P_1",
            Duration::from_secs(120),
            Box::new(|| criterion_10(&lim)),
        ),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let ok = out.passed && elapsed <= *budget;
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {name} ({:.1}s of {}s) {}",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs(),
            out.detail
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
