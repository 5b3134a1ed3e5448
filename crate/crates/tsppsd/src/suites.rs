//! Verification suites: every closed form compared against its oracle.
//!
//! Each suite expands into independent tasks that run on the rayon pool.
//! Checks are sorted by id afterwards, so reports do not depend on the
//! schedule.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use tsppsd_core::bounds::{
    bound_report, counts, equation_one_holds, lemma_bound, oracle_values, proposition_bound, theorem1_constants,
};
use tsppsd_core::combinatorics::{binomial, cycle_count};
use tsppsd_core::cycles::{
    all_edges, count_cycles_containing, count_cycles_with_edge_set, cycle_masks, enumerate_cycles, Edge, EdgeMask,
    HamiltonianCycle, PathSystem, Vertex,
};
use tsppsd_core::functionals::{make_ones, FacetSpec, LinearFunctional};
use tsppsd_core::moment::{
    moment_matrix_closed_form, moment_matrix_closed_form_k1, moment_matrix_enumerated, moment_matrix_ground_set,
    quadratic_form_value, star_vector, trace_of, zero_one_certificate, AffineFunction, GroundSet,
};
use tsppsd_core::psd::{
    boundary_certificate, is_psd_exact, membership_p1, verify_certificate, zero_one_collapse_check,
    CertificatePolynomial, CollapseVerdict, Mode,
};
use tsppsd_core::rational::{int, ratio, to_pq};
use tsppsd_core::spectra::{
    numeric_spectrum_delta, ones_spectrum, pair_subtour_kernel, row4_lemma, row4_theorem, sqrt_n_nonpositivity,
    verify_eigenpairs_exact, Weight, SPECTRUM_TOL,
};
use tsppsd_core::{Limits, Rational};

use crate::error::{CliError, CliResult};
use crate::format::{float, pq, pq_int};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Paths,
    Moment,
    Certificates,
    Spectra,
    Bounds,
    ZeroOne,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] = [
        Suite::Paths,
        Suite::Moment,
        Suite::Certificates,
        Suite::Spectra,
        Suite::Bounds,
        Suite::ZeroOne,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Paths => "paths",
            Suite::Moment => "moment",
            Suite::Certificates => "certificates",
            Suite::Spectra => "spectra",
            Suite::Bounds => "bounds",
            Suite::ZeroOne => "zero-one",
            Suite::All => "all",
        }
    }

    /// Largest `n` of the suite's main grid.
    pub fn default_n_max(self) -> usize {
        match self {
            Suite::Paths | Suite::Moment | Suite::Bounds => 9,
            Suite::Certificates => 8,
            Suite::Spectra => 10,
            Suite::ZeroOne => 4,
            Suite::All => 0,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

#[derive(Clone, Debug, Default)]
pub struct SuiteConfig {
    /// Overrides the suite's main grid bound (dimension `d` for zero-one).
    pub n_max: Option<usize>,
    pub seed: u64,
    pub limits: Limits,
    /// Record wall time (makes reports run-dependent).
    pub timings: bool,
}

impl SuiteConfig {
    fn n_max(&self, suite: Suite) -> usize {
        self.n_max.unwrap_or(suite.default_n_max())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub id: String,
    pub passed: bool,
    pub detail: Value,
}

impl Check {
    fn new(id: String, passed: bool, detail: Value) -> Check {
        Check { id, passed, detail }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
    pub wall_time_ms: Option<u128>,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                json!({
                    "id": c.id,
                    "status": if c.passed { "pass" } else { "fail" },
                    "detail": c.detail,
                })
            })
            .collect();
        let mut v = json!({
            "suite": self.suite.name(),
            "total": self.checks.len(),
            "failed": self.failures().count(),
            "checks": checks,
        });
        if let Some(t) = self.wall_time_ms {
            v["wall_time_ms"] = json!(t);
        }
        v
    }
}

type Task = Box<dyn FnOnce() -> CliResult<Vec<Check>> + Send>;

fn task(f: impl FnOnce() -> CliResult<Vec<Check>> + Send + 'static) -> Task {
    Box::new(f)
}

fn run_tasks(tasks: Vec<Task>) -> CliResult<Vec<Check>> {
    let parts: Vec<Vec<Check>> = tasks.into_par_iter().map(|t| t()).collect::<CliResult<_>>()?;
    let mut checks: Vec<Check> = parts.into_iter().flatten().collect();
    checks.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(checks)
}

/// Independent deterministic stream per task.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> CliResult<Vec<SuiteReport>> {
    let list: Vec<Suite> = match suite {
        Suite::All => Suite::EACH.to_vec(),
        s => vec![s],
    };
    let mut out = Vec::with_capacity(list.len());
    for s in list {
        let start = Instant::now();
        let tasks = match s {
            Suite::Paths => paths_tasks(4, cfg.n_max(s), cfg),
            Suite::Moment => moment_tasks(6, cfg.n_max(s), cfg),
            Suite::Certificates => certificate_tasks(4, cfg.n_max(s), cfg),
            Suite::Spectra => spectra_tasks(6, cfg.n_max(s), cfg),
            Suite::Bounds => bounds_tasks(4, cfg.n_max(s), cfg),
            Suite::ZeroOne => zero_one_tasks(cfg.n_max(s), 25, cfg),
            Suite::All => unreachable!(),
        };
        let checks = run_tasks(tasks)?;
        out.push(SuiteReport {
            suite: s,
            checks,
            wall_time_ms: cfg.timings.then(|| start.elapsed().as_millis()),
        });
    }
    Ok(out)
}

// ----------------------------------------------------------------- paths

/// Non-increasing path lengths `l_1 >= ... >= l_m >= 1` with `k + m <= n`.
pub fn path_patterns(n: usize) -> Vec<Vec<usize>> {
    fn rec(budget: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        // Adding a path of length l uses l + 1 vertices.
        for l in (1..=max.min(budget.saturating_sub(1))).rev() {
            cur.push(l);
            rec(budget - l - 1, l, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

fn shuffled_vertices(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vertex> {
    let mut v: Vec<Vertex> = (1..=n as Vertex).collect();
    v.shuffle(rng);
    v
}

/// Graphs with at most `max_edges` edges and no isolated vertices, one per
/// isomorphism class, on vertices `0..`.
pub fn edge_set_classes(max_edges: usize) -> Vec<Vec<(u32, u32)>> {
    fn canonical(edges: &[(u32, u32)]) -> Vec<(u32, u32)> {
        let k = edges.len();
        let mut best: Option<Vec<(u32, u32)>> = None;
        let mut order: Vec<usize> = (0..k).collect();
        loop {
            for flips in 0u32..(1 << k) {
                let mut label: Vec<(u32, u32)> = Vec::new();
                let map = |x: u32, label: &mut Vec<(u32, u32)>| -> u32 {
                    if let Some(&(_, y)) = label.iter().find(|(a, _)| *a == x) {
                        return y;
                    }
                    let y = label.len() as u32;
                    label.push((x, y));
                    y
                };
                let mut out: Vec<(u32, u32)> = order
                    .iter()
                    .enumerate()
                    .map(|(pos, &i)| {
                        let (a, b) = edges[i];
                        let (a, b) = if flips >> pos & 1 == 1 { (b, a) } else { (a, b) };
                        let (x, y) = (map(a, &mut label), map(b, &mut label));
                        (x.min(y), x.max(y))
                    })
                    .collect();
                out.sort_unstable();
                if best.as_ref().is_none_or(|b| out < *b) {
                    best = Some(out);
                }
            }
            if !next_permutation(&mut order) {
                break;
            }
        }
        best.unwrap_or_default()
    }
    fn next_permutation(v: &mut [usize]) -> bool {
        let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
            return false;
        };
        let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("exists");
        v.swap(i - 1, j);
        v[i..].reverse();
        true
    }
    let mut all: BTreeSet<Vec<(u32, u32)>> = BTreeSet::new();
    all.insert(Vec::new());
    let mut layer: BTreeSet<Vec<(u32, u32)>> = all.clone();
    for _ in 0..max_edges {
        let mut next = BTreeSet::new();
        for g in &layer {
            let v = g.iter().map(|&(_, b)| b + 1).max().unwrap_or(0);
            let mut cands = Vec::new();
            for a in 0..v {
                for b in a + 1..v {
                    cands.push((a, b));
                }
                cands.push((a, v));
            }
            cands.push((v, v + 1));
            for e in cands {
                if g.contains(&e) {
                    continue;
                }
                let mut h = g.clone();
                h.push(e);
                next.insert(canonical(&h));
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all.into_iter().collect()
}

fn class_label(g: &[(u32, u32)]) -> String {
    if g.is_empty() {
        return "empty".into();
    }
    g.iter().map(|(a, b)| format!("{a}{b}")).collect::<Vec<_>>().join(",")
}

fn enumerated_count(masks: &[EdgeMask], edges: &[Edge]) -> BigUint {
    let m = EdgeMask::from_edges(edges);
    BigUint::from(masks.iter().filter(|x| x.contains_all(m)).count())
}

fn paths_for_n(n: usize, cfg: &SuiteConfig) -> CliResult<Vec<Check>> {
    let masks: Vec<EdgeMask> = cycle_masks(n, &cfg.limits)?.collect();
    let mut rng = rng(cfg.seed, n as u64);
    let mut checks = Vec::new();

    for lengths in path_patterns(n) {
        let verts = shuffled_vertices(n, &mut rng);
        let mut paths = Vec::new();
        let mut at = 0;
        for &l in &lengths {
            paths.push(verts[at..=at + l].to_vec());
            at += l + 1;
        }
        let ps = PathSystem::new(n, paths)?;
        let closed = count_cycles_containing(&ps);
        let counted = enumerated_count(&masks, &ps.edges());
        let label = lengths.iter().map(usize::to_string).collect::<Vec<_>>().join("+");
        checks.push(Check::new(
            format!("paths/path-system/n={n:02}/lengths={label}"),
            closed == counted,
            json!({"n": n, "k": ps.edge_count(), "m": ps.path_count(),
                   "closed_form": pq_int(&closed), "enumerated": pq_int(&counted)}),
        ));
    }

    for class in edge_set_classes(4) {
        let used = class.iter().map(|&(_, b)| b as usize + 1).max().unwrap_or(0);
        if used > n {
            continue;
        }
        let verts = shuffled_vertices(n, &mut rng);
        let edges: Vec<Edge> = class
            .iter()
            .map(|&(a, b)| Edge::new(verts[a as usize], verts[b as usize]).expect("distinct"))
            .collect();
        let closed = count_cycles_with_edge_set(n, &edges);
        let counted = enumerated_count(&masks, &edges);
        checks.push(Check::new(
            format!("paths/edge-set/n={n:02}/{}", class_label(&class)),
            closed == counted,
            json!({"n": n, "edges": edges.iter().map(Edge::to_string).collect::<Vec<_>>(),
                   "closed_form": pq_int(&closed), "enumerated": pq_int(&counted)}),
        ));
    }

    let total: BigUint = all_edges(n).iter().map(|e| count_cycles_with_edge_set(n, &[*e])).sum();
    let expected = BigUint::from(n) * cycle_count(n as u64);
    checks.push(Check::new(
        format!("paths/single-edge-sum/n={n:02}"),
        total == expected && BigUint::from(masks.len()) == cycle_count(n as u64),
        json!({"n": n, "sum": pq_int(&total), "expected": pq_int(&expected)}),
    ));
    Ok(checks)
}

pub fn paths_tasks(n_min: usize, n_max: usize, cfg: &SuiteConfig) -> Vec<Task> {
    (n_min..=n_max)
        .map(|n| {
            let cfg = cfg.clone();
            task(move || paths_for_n(n, &cfg))
        })
        .collect()
}

// ---------------------------------------------------------------- moment

fn e(a: Vertex, b: Vertex) -> Edge {
    Edge::new(a, b).expect("distinct vertices")
}

/// The facet generators used across suites: ones, every subtour size up to
/// symmetry, both edge bounds and one 2-matching.
pub fn generator_specs(n: usize) -> Vec<(String, FacetSpec)> {
    let mut out = vec![("ones".to_string(), FacetSpec::Ones { n })];
    for m in 2..=n / 2 {
        out.push((
            format!("subtour-m={m}"),
            FacetSpec::Subtour {
                n,
                u: (1..=m as Vertex).collect(),
            },
        ));
    }
    out.push(("edge-upper".into(), FacetSpec::EdgeUpper { n, edge: e(1, 2) }));
    out.push(("edge-lower".into(), FacetSpec::EdgeLower { n, edge: e(1, 2) }));
    if n >= 6 {
        out.push((
            "two-matching".into(),
            FacetSpec::TwoMatching {
                n,
                u: vec![1, 2, 3],
                matching: vec![e(1, 4), e(2, 5), e(3, 6)],
            },
        ));
    }
    out
}

/// Random functional with small rational coefficients, not normalized.
pub fn random_functional(n: usize, rng: &mut ChaCha8Rng) -> LinearFunctional {
    let mut coeffs = Vec::new();
    for edge in all_edges(n) {
        if rng.gen_bool(0.7) {
            coeffs.push((edge, ratio(rng.gen_range(-4..=6), rng.gen_range(1..=3))));
        }
    }
    LinearFunctional::from_parts(n, ratio(rng.gen_range(-2..=2), rng.gen_range(1..=2)), coeffs).expect("valid edges")
}

/// Random functional with average exactly 1.
pub fn random_average_one(n: usize, rng: &mut ChaCha8Rng) -> LinearFunctional {
    loop {
        let f = random_functional(n, rng);
        let avg = f.average_on_x();
        if !avg.is_zero() {
            return f.scaled(&avg.recip());
        }
    }
}

fn moment_for_n(n: usize, cfg: &SuiteConfig) -> CliResult<Vec<Check>> {
    let lim = &cfg.limits;
    let mut checks = Vec::new();
    for (name, spec) in generator_specs(n) {
        let f = spec.build()?;
        let closed = moment_matrix_closed_form_k1(&f, lim)?;
        let counted = moment_matrix_enumerated(&f, 1, lim)?;
        checks.push(Check::new(
            format!("moment/closed-vs-enumerated/n={n:02}/{name}"),
            closed == counted,
            json!({"n": n, "k": 1, "dim": closed.dim()}),
        ));
        let verdict = is_psd_exact(&closed.entries);
        checks.push(Check::new(
            format!("moment/nonnegative-is-psd/n={n:02}/{name}"),
            verdict.is_psd(),
            json!({"status": verdict.status.name(), "rank": verdict.rank}),
        ));
        let t = trace_of(&closed, &f.average_on_x())?;
        checks.push(Check::new(
            format!("moment/trace/n={n:02}/k=1/{name}"),
            t.holds() && t.trace == int(n as i64 + 1),
            json!({"trace": pq(&t.trace), "expected": pq(&t.expected)}),
        ));
    }
    if n <= 8 {
        let mut r = rng(cfg.seed, 100 + n as u64);
        let mut fs: Vec<(String, LinearFunctional)> = vec![
            ("ones".into(), make_ones(n)?),
            (
                "subtour-m=3".into(),
                FacetSpec::Subtour { n, u: vec![1, 2, 3] }.build()?,
            ),
        ];
        fs.push(("random".into(), random_average_one(n, &mut r)));
        for (name, f) in fs {
            let m = moment_matrix_enumerated(&f, 2, lim)?;
            let t = trace_of(&m, &int(1))?;
            let expected = tsppsd_core::rational::from_big(binomial(n as i64 + 2, 2).into());
            checks.push(Check::new(
                format!("moment/trace/n={n:02}/k=2/{name}"),
                t.holds() && t.trace == expected,
                json!({"trace": pq(&t.trace), "expected": pq(&expected)}),
            ));
            if n == 6 {
                let closed = moment_matrix_closed_form(&f, 2, lim)?;
                checks.push(Check::new(
                    format!("moment/closed-vs-enumerated/n={n:02}/k=2/{name}"),
                    closed == m,
                    json!({"n": n, "k": 2, "dim": m.dim()}),
                ));
            }
        }
    }
    Ok(checks)
}

fn random_trace_checks(count: usize, cfg: &SuiteConfig) -> CliResult<Vec<Check>> {
    let mut r = rng(cfg.seed, 200);
    let mut checks = Vec::new();
    for i in 0..count {
        let n = 6 + i % 3;
        let k = 1 + i % 2;
        let f = random_functional(n, &mut r);
        let avg = f.average_on_x();
        let cycles_avg = {
            let mut acc = Rational::zero();
            let mut cnt = 0i64;
            for x in cycle_masks(n, &cfg.limits)? {
                acc += f.evaluate_mask(x);
                cnt += 1;
            }
            acc / int(cnt)
        };
        let m = if k == 1 {
            moment_matrix_closed_form_k1(&f, &cfg.limits)?
        } else {
            moment_matrix_enumerated(&f, k, &cfg.limits)?
        };
        let t = trace_of(&m, &avg)?;
        checks.push(Check::new(
            format!("moment/trace-unnormalized/{i:02}"),
            t.holds() && avg == cycles_avg,
            json!({"n": n, "k": k, "average": pq(&avg), "trace": pq(&t.trace), "expected": pq(&t.expected)}),
        ));
    }
    Ok(checks)
}

fn star_kernel_check(n: usize, cfg: &SuiteConfig) -> CliResult<Vec<Check>> {
    let mut r = rng(cfg.seed, 300 + n as u64);
    let f = random_functional(n, &mut r);
    let m = moment_matrix_closed_form_k1(&f, &cfg.limits)?;
    let ok = (1..=n as Vertex).all(|i| m.entries.mul_vec(&star_vector(n, i)).iter().all(Zero::is_zero));
    Ok(vec![Check::new(
        format!("moment/star-kernel/n={n:02}"),
        ok,
        json!({"n": n, "dim": m.dim()}),
    )])
}

fn rank_check(n: usize, cfg: &SuiteConfig) -> CliResult<Vec<Check>> {
    let m = moment_matrix_enumerated(&make_ones(n)?, 2, &cfg.limits)?;
    let v = is_psd_exact(&m.entries);
    let cycles = cycle_count(n as u64);
    let rank = v.rank.unwrap_or(usize::MAX);
    Ok(vec![Check::new(
        format!("moment/rank-at-most-cycles/n={n:02}/k=2"),
        v.is_psd() && BigUint::from(rank) <= cycles,
        json!({"rank": rank, "cycles": pq_int(&cycles), "dim": m.dim()}),
    )])
}

pub fn moment_tasks(n_min: usize, n_max: usize, cfg: &SuiteConfig) -> Vec<Task> {
    let mut tasks: Vec<Task> = (n_min..=n_max)
        .map(|n| {
            let cfg = cfg.clone();
            task(move || moment_for_n(n, &cfg))
        })
        .collect();
    let c = cfg.clone();
    tasks.push(task(move || random_trace_checks(20, &c)));
    for n in 5..=(2 * n_max).max(16) {
        let c = cfg.clone();
        tasks.push(task(move || star_kernel_check(n, &c)));
    }
    for n in [5usize, 6] {
        let c = cfg.clone();
        tasks.push(task(move || rank_check(n, &c)));
    }
    tasks
}

// ---------------------------------------------------------- certificates

fn certificate_check(id: String, spec: FacetSpec, lim: &Limits) -> CliResult<Check> {
    let f = spec.build()?;
    let p = boundary_certificate(&spec)?;
    let q = quadratic_form_value(&f, &p, lim)?;
    Ok(Check::new(
        id,
        q.is_zero(),
        json!({"certificate": p.label(), "degree": p.degree(), "q": pq(&q)}),
    ))
}

fn certificates_for_n(n: usize, cfg: &SuiteConfig) -> CliResult<Vec<Check>> {
    let lim = &cfg.limits;
    let mut checks = Vec::new();
    for edge in all_edges(n) {
        checks.push(certificate_check(
            format!("certificates/edge-upper/n={n:02}/{edge}"),
            FacetSpec::EdgeUpper { n, edge },
            lim,
        )?);
        checks.push(certificate_check(
            format!("certificates/edge-lower/n={n:02}/{edge}"),
            FacetSpec::EdgeLower { n, edge },
            lim,
        )?);
    }
    for m in 2..=n / 2 {
        checks.push(certificate_check(
            format!("certificates/subtour/n={n:02}/m={m}"),
            FacetSpec::Subtour {
                n,
                u: (1..=m as Vertex).collect(),
            },
            lim,
        )?);
    }
    if n >= 6 {
        // Every matching from U = {1,2,3} into the outside vertices.
        let outside: Vec<Vertex> = (4..=n as Vertex).collect();
        for &a in &outside {
            for &b in &outside {
                for &c in &outside {
                    if a == b || b == c || a == c {
                        continue;
                    }
                    checks.push(certificate_check(
                        format!("certificates/two-matching/n={n:02}/m=3/F=1-{a},2-{b},3-{c}"),
                        FacetSpec::TwoMatching {
                            n,
                            u: vec![1, 2, 3],
                            matching: vec![e(1, a), e(2, b), e(3, c)],
                        },
                        lim,
                    )?);
                }
            }
        }
    }
    if n >= 8 {
        checks.push(certificate_check(
            format!("certificates/two-matching/n={n:02}/m=4/F=1-5,2-6,3-7"),
            FacetSpec::TwoMatching {
                n,
                u: vec![1, 2, 3, 4],
                matching: vec![e(1, 5), e(2, 6), e(3, 7)],
            },
            lim,
        )?);
    }
    let ones = make_ones(n)?;
    let q = quadratic_form_value(&ones, &CertificatePolynomial::monomial(n, &[e(1, 2)]), lim)?;
    checks.push(Check::new(
        format!("certificates/negative-control/n={n:02}/ones-x12"),
        q == ratio(2, n as i64 - 1)
            && !verify_certificate(&ones, &CertificatePolynomial::monomial(n, &[e(1, 2)]), lim)?,
        json!({"q": pq(&q)}),
    ));
    Ok(checks)
}

pub fn certificate_tasks(n_min: usize, n_max: usize, cfg: &SuiteConfig) -> Vec<Task> {
    (n_min..=n_max)
        .map(|n| {
            let cfg = cfg.clone();
            task(move || certificates_for_n(n, &cfg))
        })
        .collect()
}

// --------------------------------------------------------------- spectra

fn eigenpair_checks(n: usize, m: usize, a: i64, cfg: &SuiteConfig) -> CliResult<Vec<Check>> {
    let r = verify_eigenpairs_exact(n, m, &int(a), &cfg.limits)?;
    let families: Vec<Value> = r
        .families
        .iter()
        .map(|f| {
            json!({"label": f.label, "eigenvalue": pq(&f.eigenvalue), "multiplicity": f.multiplicity,
                   "vectors": f.vectors, "rank": f.rank, "eigen_ok": f.eigen_ok})
        })
        .collect();
    Ok(vec![Check::new(
        format!("spectra/eigenpairs/n={n:02}/m={m:02}/a={a}"),
        r.passed(),
        json!({
            "families": families,
            "union_rank": r.union_rank,
            "multiplicity_sum": r.multiplicity_sum,
            "trace": pq(&r.trace),
            "trace_ok": r.trace_ok,
            "trace_square_ok": r.trace_square_ok,
            "d_negative": r.residual.d_negative,
            "lambda_plus": r.residual.lambda_plus.map(float),
            "lambda_minus": r.residual.lambda_minus.map(float),
            "numeric_delta": r.numeric_delta.map(float),
        }),
    )])
}

fn numeric_residual_check(n: usize, m: usize, a: i64, cfg: &SuiteConfig) -> CliResult<Vec<Check>> {
    let delta = numeric_spectrum_delta(n, m, &Weight::Rational(int(a)), &cfg.limits)?;
    Ok(vec![Check::new(
        format!("spectra/numeric-residual/n={n:02}/m={m:02}/a={a}"),
        delta.is_some_and(|d| d <= SPECTRUM_TOL),
        json!({"delta": delta.map(float), "tolerance": SPECTRUM_TOL}),
    )])
}

fn sqrt_n_check(n: usize, cfg: &SuiteConfig) -> CliResult<Vec<Check>> {
    let r = sqrt_n_nonpositivity(n, &cfg.limits)?;
    Ok(r.rows
        .iter()
        .map(|row| {
            Check::new(
                format!("spectra/sqrt-n/n={n:02}/m={:02}", row.m),
                row.passed(),
                json!({"lambda_minus": row.lambda_minus.map(float), "exact_nonpositive": row.exact_nonpositive,
                       "numeric_lambda_minus": float(row.numeric_lambda_minus),
                       "numeric_min": float(row.numeric_min), "numeric_delta": float(row.numeric_delta)}),
            )
        })
        .collect())
}

fn ones_check(n: usize, cfg: &SuiteConfig) -> CliResult<Vec<Check>> {
    let r = ones_spectrum(n, &cfg.limits)?;
    Ok(vec![Check::new(
        format!("spectra/ones/n={n:02}"),
        r.passed() && r.trace == int(n as i64 + 1) && r.four_cycle_rank == n * (n - 3) / 2,
        json!({"tabled": pq(&r.tabled_value), "trace": pq(&r.trace), "four_cycle_rank": r.four_cycle_rank,
               "residual": pq(&r.residual_exact), "extra": r.extra.iter().map(|x| float(*x)).collect::<Vec<_>>()}),
    )])
}

pub fn spectra_tasks(n_min: usize, n_max: usize, cfg: &SuiteConfig) -> Vec<Task> {
    let mut tasks: Vec<Task> = Vec::new();
    for n in n_min..=n_max {
        for m in 3..=n / 2 {
            for a in [0i64, 1, 5] {
                let c = cfg.clone();
                tasks.push(task(move || eigenpair_checks(n, m, a, &c)));
            }
        }
    }
    for n in n_max + 1..=n_max + 4 {
        for m in 3..=n / 2 {
            for a in [0i64, 1, 5] {
                let c = cfg.clone();
                tasks.push(task(move || numeric_residual_check(n, m, a, &c)));
            }
        }
    }
    for n in 6..=(2 * n_max).max(16) {
        let c = cfg.clone();
        tasks.push(task(move || sqrt_n_check(n, &c)));
    }
    for n in 5..=n_max {
        let c = cfg.clone();
        tasks.push(task(move || ones_check(n, &c)));
    }
    for n in 6..=n_max {
        let c = cfg.clone();
        tasks.push(task(move || {
            let r = pair_subtour_kernel(n, &c.limits)?;
            Ok(vec![Check::new(
                format!("spectra/pair-subtour-kernel/n={n:02}"),
                r.passed(),
                json!({"row_vanishes": r.row_vanishes, "kernel_rank": r.kernel_rank}),
            )])
        }));
    }
    tasks.push(task(|| {
        let mut checks = Vec::new();
        for n in 6..=40usize {
            let ok = (3..=n / 2).all(|m| row4_lemma(n, m) == row4_theorem(n, m));
            checks.push(Check::new(
                format!("spectra/row4-identity/n={n:02}"),
                ok,
                json!({"n": n}),
            ));
        }
        Ok(checks)
    }));
    tasks
}

// ---------------------------------------------------------------- bounds

fn oracle_check(n: usize, k: usize, y: &HamiltonianCycle, id: String, lim: &Limits) -> CliResult<Check> {
    let (b, c) = counts(n, k)?;
    let v = oracle_values(n, k, y, lim)?;
    let pair = v.two_valued();
    let bound = lemma_bound(&b.clone().into(), &c.clone().into(), n)?;
    let closed = proposition_bound(n, k)?;
    let ok = pair.as_ref() == Some(&(b.clone(), c.clone())) && bound == closed;
    let label = if n.is_multiple_of(2) {
        ["eq_even1", "eq_even2"]
    } else {
        ["eq_odd1", "eq_odd2"]
    };
    Ok(Check::new(
        id,
        ok,
        json!({
            label[0]: pq_int(&b),
            label[1]: pq_int(&c),
            "oracle_off_cycle": v.off_cycle.iter().map(pq_int).collect::<Vec<_>>(),
            "oracle_on_cycle": v.on_cycle.iter().map(pq_int).collect::<Vec<_>>(),
            "bound": pq(&bound),
            "closed_form": pq(&closed),
        }),
    ))
}

fn random_cycle(n: usize, rng: &mut ChaCha8Rng) -> HamiltonianCycle {
    HamiltonianCycle::from_order(&shuffled_vertices(n, rng)).expect("permutation")
}

fn membership_consistency(n: usize, cfg: &SuiteConfig) -> CliResult<Vec<Check>> {
    let lim = &cfg.limits;
    let mut r = rng(cfg.seed, 400 + n as u64);
    let ones = make_ones(n)?;
    let floor = proposition_bound(n, 1)?;
    let cycles = enumerate_cycles(n, lim)?;
    let mut checks = Vec::new();
    for trial in 0..3 {
        let h = random_functional(n, &mut r);
        let g = tsppsd_core::functionals::combine(&int(1), &h, &-h.average_on_x(), &ones)?;
        let at = |t: &Rational| tsppsd_core::functionals::combine(&int(1), &ones, t, &g);
        let passes = |t: &Rational| -> CliResult<bool> { Ok(membership_p1(&at(t)?, Mode::Exact, lim)?.is_psd()) };
        // Largest passing step along g, to a binary precision of 2^-10.
        let (mut lo, mut hi) = (Rational::zero(), Rational::one());
        while passes(&hi)? && hi < int(1 << 12) {
            lo = hi.clone();
            hi *= int(2);
        }
        for _ in 0..10 {
            let mid = (&lo + &hi) / int(2);
            if passes(&mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let f = at(&lo)?;
        let min = cycles.iter().map(|y| f.evaluate(y)).min().expect("cycles exist");
        checks.push(Check::new(
            format!("bounds/membership-consistency/n={n:02}/{trial}"),
            min >= floor,
            json!({"step": pq(&lo), "min_value": pq(&min), "bound": pq(&floor)}),
        ));
    }
    Ok(checks)
}

fn equation_one(n: usize, cfg: &SuiteConfig) -> CliResult<Vec<Check>> {
    let mut r = rng(cfg.seed, 500 + n as u64);
    let cycles = enumerate_cycles(n, &cfg.limits)?;
    let mut checks = Vec::new();
    for trial in 0..3 {
        let f = random_average_one(n, &mut r);
        let ok = cycles.iter().all(|y| equation_one_holds(&f, y));
        checks.push(Check::new(
            format!("bounds/equation-one/n={n:02}/{trial}"),
            ok,
            json!({"n": n, "cycles": cycles.len()}),
        ));
    }
    Ok(checks)
}

pub fn bounds_tasks(n_min: usize, n_max: usize, cfg: &SuiteConfig) -> Vec<Task> {
    let mut tasks: Vec<Task> = Vec::new();
    for n in n_min..=n_max {
        for k in 1..=n / 2 {
            let c = cfg.clone();
            tasks.push(task(move || {
                let y = HamiltonianCycle::canonical(n)?;
                Ok(vec![oracle_check(
                    n,
                    k,
                    &y,
                    format!("bounds/oracle/n={n:02}/k={k:02}"),
                    &c.limits,
                )?])
            }));
        }
    }
    for (n, k) in [(7usize, 2usize), (8, 2)] {
        if n > n_max {
            continue;
        }
        let c = cfg.clone();
        tasks.push(task(move || {
            let mut r = rng(c.seed, 600 + n as u64);
            (0..5)
                .map(|t| {
                    let y = random_cycle(n, &mut r);
                    oracle_check(
                        n,
                        k,
                        &y,
                        format!("bounds/oracle-random-cycle/n={n:02}/k={k:02}/{t}"),
                        &c.limits,
                    )
                })
                .collect()
        }));
    }
    tasks.push(task(|| {
        let mut checks = Vec::new();
        for n in 6..=60usize {
            let ok = (1..=n / 2).all(|k| bound_report(n, k).is_ok_and(|r| r.bounds_agree()));
            checks.push(Check::new(
                format!("bounds/lemma-equals-closed-form/n={n:02}"),
                ok,
                json!({"n": n}),
            ));
        }
        let k1 = (4..=60usize).all(|n| proposition_bound(n, 1).is_ok_and(|b| b == int(1 - n as i64)));
        checks.push(Check::new("bounds/k1-bound-is-1-n".into(), k1, json!({"n_max": 60})));
        Ok(checks)
    }));
    tasks.push(task(|| theorem1_grid(9, 200)));
    for n in 5..=n_max.min(8) {
        let c = cfg.clone();
        tasks.push(task(move || equation_one(n, &c)));
        let c = cfg.clone();
        tasks.push(task(move || membership_consistency(n, &c)));
    }
    tasks
}

/// `|α_k| <= 10/n` on the grid, one check per `n`.
pub fn theorem1_grid(n_min: usize, n_max: usize) -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    for n in n_min..=n_max {
        let mut worst = Rational::zero();
        let mut ok = true;
        for k in 1..=n / 2 {
            let r = theorem1_constants(n, k)?;
            ok &= r.alpha_within() && r.bounds_agree();
            if r.alpha_k.abs() > worst {
                worst = r.alpha_k.abs();
            }
        }
        checks.push(Check::new(
            format!("bounds/theorem1/n={n:03}"),
            ok,
            json!({"max_abs_alpha": pq(&worst), "ten_over_n": to_pq(&ratio(10, n as i64))}),
        ));
    }
    Ok(checks)
}

// -------------------------------------------------------------- zero-one

/// Random nonempty subset of `{0,1}^d` with a random affine function.
pub fn random_zero_one_instance(d: usize, rng: &mut ChaCha8Rng) -> (GroundSet, AffineFunction) {
    let mut points: Vec<Vec<u8>> = (0..1u32 << d)
        .filter(|_| rng.gen_bool(0.6))
        .map(|bits| (0..d).map(|i| (bits >> i & 1) as u8).collect())
        .collect();
    if points.is_empty() {
        points.push(vec![0; d]);
    }
    let ground = GroundSet::zero_one(d, &points).expect("distinct 0/1 points");
    let f = AffineFunction {
        constant: ratio(rng.gen_range(-3..=4), rng.gen_range(1..=2)),
        coeffs: (0..d)
            .map(|_| ratio(rng.gen_range(-3..=3), rng.gen_range(1..=2)))
            .collect(),
    };
    (ground, f)
}

/// One collapse trial: rejection with `q_f(p_y) = f(y)/|X|`, or membership
/// of a nonnegative `f` in `P_d`.
pub fn zero_one_trial(ground: &GroundSet, f: &AffineFunction, lim: &Limits) -> CliResult<(bool, Value)> {
    let values = f.values_on(ground);
    let d = ground.dim();
    let moment = moment_matrix_ground_set(ground, &values, d, lim)?;
    match zero_one_collapse_check(ground, f)? {
        CollapseVerdict::Rejected {
            y,
            certificate,
            f_y,
            q_value,
        } => {
            let expected = &f_y / int(ground.len() as i64);
            let p = zero_one_certificate(&y, ground)?;
            let coords = moment
                .coordinates(&p)
                .ok_or_else(|| CliError::Usage("certificate outside basis".into()))?;
            let via_matrix = moment.entries.quad_form(&coords);
            let ok = q_value == expected && via_matrix == q_value && q_value.is_negative();
            Ok((
                ok,
                json!({"rejected": true, "certificate": certificate.label(), "f_y": pq(&f_y),
                       "q": pq(&q_value), "expected": pq(&expected)}),
            ))
        }
        CollapseVerdict::InQ { min_value } => {
            let v = is_psd_exact(&moment.entries);
            Ok((
                v.is_psd(),
                json!({"rejected": false, "min_value": pq(&min_value), "psd": v.is_psd()}),
            ))
        }
    }
}

pub fn zero_one_tasks(d_max: usize, trials: usize, cfg: &SuiteConfig) -> Vec<Task> {
    (1..=d_max)
        .map(|d| {
            let c = cfg.clone();
            task(move || {
                let mut r = rng(c.seed, 700 + d as u64);
                let mut checks = Vec::new();
                for t in 0..trials {
                    let (ground, f) = random_zero_one_instance(d, &mut r);
                    let (ok, detail) = zero_one_trial(&ground, &f, &c.limits)?;
                    checks.push(Check::new(format!("zero-one/d={d}/{t:03}"), ok, detail));
                }
                Ok(checks)
            })
        })
        .collect()
}
