//! Argument parsing and the subcommands.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use num_traits::{Signed, Zero};
use serde_json::{json, Map, Value};
use tsppsd_core::bounds::{bound_report, oracle_values, BoundReport, Parity};
use tsppsd_core::combinatorics::cycle_count;
use tsppsd_core::cycles::{
    classify_edges, containment_probability, count_cycles_with_edge_set, cycles, parse_edge_list, Edge, EdgeMask,
    EdgeSetShape, HamiltonianCycle, Vertex,
};
use tsppsd_core::functionals::FacetSpec;
use tsppsd_core::moment::{moment_matrix_closed_form, moment_matrix_enumerated, quadratic_form_value};
use tsppsd_core::psd::{boundary_certificate, membership_p1, membership_pk_enumerated, Mode};
use tsppsd_core::rational::parse;
use tsppsd_core::spectra::{
    closed_form_spectrum, numeric_spectrum_delta, sqrt_n_nonpositivity, verify_eigenpairs_exact, Weight,
};
use tsppsd_core::Limits;

use crate::error::{CliError, CliResult, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};
use crate::format::{
    certificate_json, float, matrix_csv, matrix_json, pq, pq_int, render_json, surd_json, verdict_json, write_output,
};
use crate::specfile::{facet_to_json, read_facet};
use crate::suites::{run_suite, Suite, SuiteConfig};

/// Environment variable overriding the cycle enumeration cap.
pub const MAX_CYCLES_ENV: &str = "TSPPSD_MAX_CYCLES";

#[derive(Debug, Parser)]
#[command(
    name = "tsppsd",
    version,
    about = "Semidefinite relaxations of the symmetric TSP polytope, in exact arithmetic"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Output path, `-` for standard output.
    #[arg(long, global = true, default_value = "-")]
    pub out: String,
    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest number of Hamiltonian cycles to enumerate.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_cycles: Option<u64>,
    /// Largest moment matrix dimension to assemble.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_matrix_dim: Option<u64>,
    /// Largest matrix dimension for the exact PSD decision.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_exact_dim: Option<u64>,
    /// Progress notes on standard error.
    #[arg(short, long, global = true)]
    pub verbose: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate Hamiltonian cycles or count those through given edges.
    Cycles {
        #[arg(long)]
        n: usize,
        /// Print only the counts.
        #[arg(long)]
        count_only: bool,
        /// Comma-separated `u-v` edges the cycles must contain.
        #[arg(long)]
        contains: Option<String>,
    },
    /// Build a moment matrix.
    Matrix {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Functional specification file (JSON).
        #[arg(long)]
        func: PathBuf,
        #[arg(long, value_enum, default_value_t = MatrixMethod::ClosedForm)]
        method: MatrixMethod,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Decide membership of a functional in `P_k`.
    Membership {
        #[arg(long)]
        func: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Exact rational LDLᵀ only.
        #[arg(long, conflicts_with = "float")]
        exact: bool,
        /// Floating-point eigenvalues only.
        #[arg(long)]
        float: bool,
    },
    /// Check the boundary certificate of a facet functional.
    Certify {
        #[arg(long, value_enum)]
        facet: FacetKind,
        #[arg(long)]
        n: usize,
        /// Vertex set, comma-separated.
        #[arg(long)]
        u: Option<String>,
        /// Edge `u-v` for the edge bounds.
        #[arg(long)]
        edge: Option<String>,
        /// Matching edges for the 2-matching facet.
        #[arg(long)]
        matching: Option<String>,
    },
    /// Closed-form spectrum of `a·A_U + (1-a)·A_1`.
    Spectrum {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Rational weight or `sqrt-n`.
        #[arg(long, default_value = "1")]
        a: String,
        /// Cross-check against the assembled matrix.
        #[arg(long)]
        verify: bool,
    },
    /// Metric constants `a_k` and their oracles.
    Bounds {
        #[arg(long, required_unless_present = "grid")]
        n: Option<usize>,
        #[arg(long, required_unless_present = "grid")]
        k: Option<usize>,
        /// Compare against the brute-force count over cycles.
        #[arg(long, conflicts_with = "grid")]
        oracle: bool,
        /// CSV over `9 <= n <= n-max` and every `k`.
        #[arg(long)]
        grid: bool,
        #[arg(long, default_value_t = 200, requires = "grid")]
        n_max: usize,
    },
    /// Run verification suites.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        /// Upper end of the suite's main grid.
        #[arg(long)]
        n_max: Option<usize>,
        /// Record wall time in the report.
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MatrixMethod {
    ClosedForm,
    Enumerate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FacetKind {
    Subtour,
    EdgeUpper,
    EdgeLower,
    TwoMatching,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Paths,
    Moment,
    Certificates,
    Spectra,
    Bounds,
    ZeroOne,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Paths => Suite::Paths,
            SuiteArg::Moment => Suite::Moment,
            SuiteArg::Certificates => Suite::Certificates,
            SuiteArg::Spectra => Suite::Spectra,
            SuiteArg::Bounds => Suite::Bounds,
            SuiteArg::ZeroOne => Suite::ZeroOne,
            SuiteArg::All => Suite::All,
        }
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, CliError::Usage(_)) {
                eprintln!("{}", Cli::command().render_usage());
            }
            e.exit_code()
        }
    }
}

fn limits(g: &GlobalArgs) -> CliResult<Limits> {
    let mut lim = Limits::default();
    if let Ok(v) = std::env::var(MAX_CYCLES_ENV) {
        lim.max_cycles = v
            .trim()
            .parse::<u64>()
            .ok()
            .filter(|x| *x > 0)
            .ok_or_else(|| CliError::Usage(format!("{MAX_CYCLES_ENV} must be a positive integer, got {v:?}")))?;
    }
    if let Some(v) = g.max_cycles {
        lim.max_cycles = v;
    }
    if let Some(v) = g.max_matrix_dim {
        lim.max_matrix_dim = v as usize;
    }
    if let Some(v) = g.max_exact_dim {
        lim.max_exact_dim = v as usize;
    }
    Ok(lim)
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn edges_arg(s: &str) -> CliResult<Vec<Edge>> {
    parse_edge_list(s).map_err(|e| usage(e.to_string()))
}

fn vertices_arg(s: &str) -> CliResult<Vec<Vertex>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<Vertex>()
                .map_err(|_| usage(format!("bad vertex {x:?}")))
        })
        .collect()
}

fn status(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_FAILURE
    }
}

pub fn execute(cli: &Cli) -> CliResult<i32> {
    let g = &cli.global;
    let lim = limits(g)?;
    match &cli.command {
        Command::Cycles {
            n,
            count_only,
            contains,
        } => cmd_cycles(g, &lim, *n, *count_only, contains.as_deref()),
        Command::Matrix {
            n,
            k,
            func,
            method,
            format,
        } => cmd_matrix(g, &lim, *n, *k, func, *method, *format),
        Command::Membership { func, k, exact, float } => {
            let mode = match (exact, float) {
                (true, _) => Mode::Exact,
                (_, true) => Mode::Float,
                _ => Mode::Auto,
            };
            cmd_membership(g, &lim, func, *k, mode)
        }
        Command::Certify {
            facet,
            n,
            u,
            edge,
            matching,
        } => cmd_certify(g, &lim, *facet, *n, u.as_deref(), edge.as_deref(), matching.as_deref()),
        Command::Spectrum { n, m, a, verify } => cmd_spectrum(g, &lim, *n, *m, a, *verify),
        Command::Bounds {
            n,
            k,
            oracle,
            grid,
            n_max,
        } => {
            if *grid {
                cmd_bounds_grid(g, *n_max)
            } else {
                let (n, k) = (n.expect("required by clap"), k.expect("required by clap"));
                cmd_bounds(g, &lim, n, k, *oracle)
            }
        }
        Command::Verify { suite, n_max, timings } => cmd_verify(g, &lim, (*suite).into(), *n_max, *timings),
    }
}

fn cmd_cycles(g: &GlobalArgs, lim: &Limits, n: usize, count_only: bool, contains: Option<&str>) -> CliResult<i32> {
    if n < 3 {
        return Err(usage("cycles need n >= 3"));
    }
    let edges = contains.map(edges_arg).transpose()?.unwrap_or_default();
    if let Some(e) = edges.iter().find(|e| !e.is_valid_for(n)) {
        return Err(usage(format!("edge {e} outside K_{n}")));
    }
    let mut out = Map::new();
    out.insert("n".into(), json!(n));
    out.insert("total".into(), pq_int(&cycle_count(n as u64)));
    let closed = count_cycles_with_edge_set(n, &edges);
    if contains.is_some() {
        out.insert(
            "contains".into(),
            json!(edges.iter().map(Edge::to_string).collect::<Vec<_>>()),
        );
        let shape = classify_edges(n, &edges);
        out.insert(
            "shape".into(),
            match shape {
                EdgeSetShape::Paths { edges, paths } => json!({"edges": edges, "paths": paths}),
                EdgeSetShape::Tour => json!("tour"),
                EdgeSetShape::Infeasible => json!("infeasible"),
            },
        );
        out.insert("count".into(), pq_int(&closed));
        out.insert("probability".into(), pq(&containment_probability(n, shape)));
    }
    let mut ok = true;
    if !count_only {
        let want = EdgeMask::from_edges(&edges);
        let listed: Vec<HamiltonianCycle> = cycles(n, lim)?
            .filter(|c| c.mask().is_none_or(|m| m.contains_all(want)) && edges.iter().all(|e| c.contains(*e)))
            .collect();
        ok = num_bigint::BigUint::from(listed.len()) == closed;
        out.insert("enumerated".into(), pq_int(&listed.len().into()));
        out.insert("matches".into(), json!(ok));
        out.insert(
            "cycles".into(),
            json!(listed.iter().map(ToString::to_string).collect::<Vec<_>>()),
        );
    } else if contains.is_none() {
        out.insert("count".into(), pq_int(&closed));
    }
    write_output(&g.out, &render_json(&Value::Object(out)))?;
    Ok(status(ok))
}

fn load_facet(path: &Path, n: Option<usize>) -> CliResult<FacetSpec> {
    let spec = read_facet(path)?;
    if let (Some(want), Some(have)) = (n, spec.n()) {
        if want != have {
            return Err(usage(format!("--n {want} disagrees with the functional on K_{have}")));
        }
    }
    Ok(spec)
}

fn cmd_matrix(
    g: &GlobalArgs,
    lim: &Limits,
    n: Option<usize>,
    k: usize,
    func: &Path,
    method: MatrixMethod,
    format: OutputFormat,
) -> CliResult<i32> {
    let f = load_facet(func, n)?.build()?;
    let m = match method {
        MatrixMethod::ClosedForm => moment_matrix_closed_form(&f, k, lim)?,
        MatrixMethod::Enumerate => moment_matrix_enumerated(&f, k, lim)?,
    };
    let text = match format {
        OutputFormat::Json => render_json(&matrix_json(&m)),
        OutputFormat::Csv => matrix_csv(&m),
    };
    write_output(&g.out, &text)?;
    Ok(EXIT_OK)
}

fn cmd_membership(g: &GlobalArgs, lim: &Limits, func: &Path, k: usize, mode: Mode) -> CliResult<i32> {
    let spec = load_facet(func, None)?;
    let f = spec.build()?;
    let verdict = if k == 1 {
        membership_p1(&f, mode, lim)?
    } else {
        membership_pk_enumerated(&f, k, mode, lim)?
    };
    let mut out = Map::new();
    out.insert("n".into(), json!(f.n()));
    out.insert("k".into(), json!(k));
    out.insert("functional".into(), facet_to_json(&spec));
    out.insert("verdict".into(), verdict_json(&verdict));
    write_output(&g.out, &render_json(&Value::Object(out)))?;
    Ok(status(verdict.is_psd()))
}

fn cmd_certify(
    g: &GlobalArgs,
    lim: &Limits,
    facet: FacetKind,
    n: usize,
    u: Option<&str>,
    edge: Option<&str>,
    matching: Option<&str>,
) -> CliResult<i32> {
    fn need<'a>(v: Option<&'a str>, flag: &str) -> CliResult<&'a str> {
        v.ok_or_else(|| usage(format!("--facet needs --{flag}")))
    }
    let single_edge = |s: &str| -> CliResult<Edge> {
        match edges_arg(s)?.as_slice() {
            [e] => Ok(*e),
            _ => Err(usage("--edge takes exactly one edge")),
        }
    };
    let spec = match facet {
        FacetKind::Subtour => FacetSpec::Subtour {
            n,
            u: vertices_arg(need(u, "u")?)?,
        },
        FacetKind::EdgeUpper => FacetSpec::EdgeUpper {
            n,
            edge: single_edge(need(edge, "edge")?)?,
        },
        FacetKind::EdgeLower => FacetSpec::EdgeLower {
            n,
            edge: single_edge(need(edge, "edge")?)?,
        },
        FacetKind::TwoMatching => FacetSpec::TwoMatching {
            n,
            u: vertices_arg(need(u, "u")?)?,
            matching: edges_arg(need(matching, "matching")?)?,
        },
    };
    let f = spec.build()?;
    let p = boundary_certificate(&spec)?;
    let q = quadratic_form_value(&f, &p, lim)?;
    let verified = q.is_zero();
    let out = json!({
        "functional": facet_to_json(&spec),
        "certificate": certificate_json(&p),
        "q": pq(&q),
        "verified": verified,
    });
    write_output(&g.out, &render_json(&out))?;
    Ok(status(verified))
}

fn weight_arg(a: &str) -> CliResult<Weight> {
    if a == "sqrt-n" {
        return Ok(Weight::SqrtN);
    }
    parse(a)
        .map(Weight::Rational)
        .map_err(|_| usage(format!("--a takes a rational or sqrt-n, got {a:?}")))
}

fn cmd_spectrum(g: &GlobalArgs, lim: &Limits, n: usize, m: usize, a: &str, verify: bool) -> CliResult<i32> {
    let weight = weight_arg(a)?;
    let report = closed_form_spectrum(n, m, &weight)?;
    let families: Vec<Value> = report
        .families
        .iter()
        .map(|f| {
            let value = match &weight {
                Weight::Rational(a) => pq(&f.value(a)),
                Weight::SqrtN => float(f.value_weight(&weight, n)),
            };
            json!({"label": f.label, "eigenvalue": value, "mu": pq(&f.mu), "ones": pq(&f.ones),
                   "multiplicity": f.multiplicity})
        })
        .collect();
    let r = &report.residual;
    let mut out = Map::new();
    out.insert("n".into(), json!(n));
    out.insert("m".into(), json!(m));
    out.insert("a".into(), json!(weight.label()));
    out.insert("families".into(), Value::Array(families));
    out.insert(
        "residual".into(),
        json!({
            "c": surd_json(&r.c),
            "d": surd_json(&r.d),
            "denominator": format!("{}/1", r.denominator),
            "d_negative": r.d_negative,
            "lambda_plus": r.lambda_plus.map(float),
            "lambda_minus": r.lambda_minus.map(float),
            "lambda_minus_nonpositive": r.minus_nonpositive(),
        }),
    );
    out.insert("multiplicity_total".into(), json!(report.multiplicity_total));
    out.insert("expected_total".into(), json!(n * (n - 1) / 2 + 1));
    let mut ok = true;
    if verify {
        let mut v = Map::new();
        match &weight {
            Weight::Rational(a) => {
                let e = verify_eigenpairs_exact(n, m, a, lim)?;
                ok = e.passed();
                v.insert(
                    "families".into(),
                    Value::Array(
                        e.families
                            .iter()
                            .map(|f| json!({"label": f.label, "vectors": f.vectors, "rank": f.rank, "eigen_ok": f.eigen_ok}))
                            .collect(),
                    ),
                );
                v.insert("union_rank".into(), json!(e.union_rank));
                v.insert("trace_ok".into(), json!(e.trace_ok));
                v.insert("trace_square_ok".into(), json!(e.trace_square_ok));
                v.insert("numeric_delta".into(), e.numeric_delta.map_or(Value::Null, float));
            }
            Weight::SqrtN => {
                let s = sqrt_n_nonpositivity(n, lim)?;
                let row = s.rows.iter().find(|r| r.m == m).expect("m in range");
                ok = row.passed();
                v.insert("numeric_lambda_minus".into(), float(row.numeric_lambda_minus));
                v.insert("numeric_min".into(), float(row.numeric_min));
                v.insert("numeric_delta".into(), float(row.numeric_delta));
                v.insert("exact_nonpositive".into(), json!(row.exact_nonpositive));
                let delta = numeric_spectrum_delta(n, m, &weight, lim)?;
                v.insert("spectrum_delta".into(), delta.map_or(Value::Null, float));
            }
        }
        v.insert("passed".into(), json!(ok));
        out.insert("verification".into(), Value::Object(v));
    }
    write_output(&g.out, &render_json(&Value::Object(out)))?;
    Ok(status(ok))
}

fn count_labels(parity: Parity) -> [&'static str; 2] {
    match parity {
        Parity::Even => ["eq_even1", "eq_even2"],
        Parity::Odd => ["eq_odd1", "eq_odd2"],
    }
}

fn bound_json(r: &BoundReport) -> Map<String, Value> {
    let [l1, l2] = count_labels(r.parity);
    let mut out = Map::new();
    out.insert("a_k".into(), pq(&r.a_k));
    out.insert("alpha_k".into(), pq(&r.alpha_k));
    out.insert("n".into(), json!(r.n));
    out.insert("k".into(), json!(r.k));
    out.insert("parity".into(), json!(r.parity.name()));
    out.insert("b_k".into(), pq_int(&r.b));
    out.insert("c_k".into(), pq_int(&r.c));
    out.insert(l1.into(), pq_int(&r.b));
    out.insert(l2.into(), pq_int(&r.c));
    out.insert("bound".into(), pq(&r.bound));
    out.insert("closed_form".into(), pq(&r.closed_form));
    out.insert("bounds_agree".into(), json!(r.bounds_agree()));
    out
}

fn cmd_bounds(g: &GlobalArgs, lim: &Limits, n: usize, k: usize, oracle: bool) -> CliResult<i32> {
    let r = bound_report(n, k)?;
    let mut out = bound_json(&r);
    let mut ok = r.bounds_agree();
    if oracle {
        let y = HamiltonianCycle::canonical(n)?;
        let v = oracle_values(n, k, &y, lim)?;
        let matches = v.two_valued() == Some((r.b.clone(), r.c.clone()));
        ok &= matches;
        out.insert(
            "oracle".into(),
            json!({
                "cycle": y.to_string(),
                "off_cycle": v.off_cycle.iter().map(pq_int).collect::<Vec<_>>(),
                "on_cycle": v.on_cycle.iter().map(pq_int).collect::<Vec<_>>(),
                "matches": matches,
            }),
        );
    }
    write_output(&g.out, &render_json(&Value::Object(out)))?;
    Ok(status(ok))
}

fn cmd_bounds_grid(g: &GlobalArgs, n_max: usize) -> CliResult<i32> {
    use tsppsd_core::rational::{ratio, to_pq};
    let mut csv = String::from("n,k,eq_even1,eq_even2,eq_odd1,eq_odd2,bound,a_k,alpha_k,ten_over_n,within\n");
    let mut ok = true;
    for n in 9..=n_max {
        for k in 1..=n / 2 {
            let r = bound_report(n, k)?;
            let ten = ratio(10, n as i64);
            let within = r.alpha_k.abs() <= ten && r.bounds_agree();
            ok &= within;
            let (b, c) = (format!("{}/1", r.b), format!("{}/1", r.c));
            let counts = match r.parity {
                Parity::Even => format!("{b},{c},,"),
                Parity::Odd => format!(",,{b},{c}"),
            };
            csv.push_str(&format!(
                "{n},{k},{counts},{},{},{},{},{within}\n",
                to_pq(&r.bound),
                to_pq(&r.a_k),
                to_pq(&r.alpha_k),
                to_pq(&ten)
            ));
        }
    }
    write_output(&g.out, &csv)?;
    Ok(status(ok))
}

fn cmd_verify(g: &GlobalArgs, lim: &Limits, suite: Suite, n_max: Option<usize>, timings: bool) -> CliResult<i32> {
    let cfg = SuiteConfig {
        n_max,
        seed: g.seed,
        limits: *lim,
        timings,
    };
    let reports = run_suite(suite, &cfg)?;
    let total: usize = reports.iter().map(|r| r.checks.len()).sum();
    let failed: usize = reports.iter().map(|r| r.failures().count()).sum();
    if g.verbose {
        for r in &reports {
            eprintln!(
                "{}: {} checks, {} failed",
                r.suite,
                r.checks.len(),
                r.failures().count()
            );
        }
    }
    let out = json!({
        "suite": suite.name(),
        "seed": g.seed,
        "total": total,
        "failed": failed,
        "suites": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
    });
    write_output(&g.out, &render_json(&out))?;
    Ok(status(failed == 0))
}
