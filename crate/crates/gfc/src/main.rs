//! Command-line interface: slice construction, cohomology, matrix export,
//! factorization, generating functions, and the verification suites.
//!
//! Results go to stdout and are byte-identical across runs and thread
//! counts; diagnostics and timings go to stderr. Exit codes: 0 success,
//! 2 usage error, 3 resource budget exceeded, 4 verification failure.
//! GFC_THREADS bounds worker parallelism (all cores when absent).

use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use gfc::characteristic::{factorize, metoki_experiment};
use gfc::complex::{build_slice, BuildOptions, Variant};
use gfc::genfun::{complex_euler_series, perchik_full_series, perchik_series, stabilization_report};
use gfc::linalg::rat_str;
use gfc::verify::{run_suite, SUITES};
use gfc::GfcError;

#[derive(Parser)]
#[command(name = "gfc", version, about = "Exact Gel'fand-Fuks cohomology of formal Hamiltonian vector fields on the plane")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format for results on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Cap on the largest wedge-monomial space built.
    #[arg(long, global = true, default_value_t = 200_000)]
    budget_dim: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algebra {
    /// Hamiltonians of degree ≥ 1 (slots 1, 3, 4, …).
    Ham,
    /// Hamiltonians of degree ≥ 2 (slots 3, 4, …).
    Ham0,
}

impl Algebra {
    fn variant(self) -> Variant {
        match self {
            Algebra::Ham => Variant::Ham,
            Algebra::Ham0 => Variant::Ham0,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EulerMethod {
    Product,
    Complex,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Per-degree cochain dimensions (and profile multiplicities) of one
    /// weight slice.
    Dims {
        #[arg(long)]
        algebra: Algebra,
        #[arg(long)]
        weight: i64,
        /// Overrides the variant's default degree cap.
        #[arg(long)]
        max_degree: Option<usize>,
        /// Also print per-profile invariant multiplicities (human/csv).
        #[arg(long)]
        profiles: bool,
    },
    /// Per-degree Betti numbers of one weight slice.
    Cohomology {
        #[arg(long)]
        algebra: Algebra,
        #[arg(long)]
        weight: i64,
    },
    /// Export one coboundary matrix in the text format
    /// ("rows cols", then "i j p/q" per nonzero entry, 0-based).
    Matrix {
        #[arg(long)]
        algebra: Algebra,
        #[arg(long)]
        weight: i64,
        /// Source degree d of the coboundary Cᵈ → C^{d+1}.
        #[arg(long)]
        degree: usize,
    },
    /// Factorization certificate: η, GKF = η∧ω, and all checks.
    Factorize {
        /// Also run the opt-in weight-16/weight-14 experiment.
        #[arg(long)]
        metoki: bool,
    },
    /// Euler-characteristic generating functions.
    Euler {
        /// Number of coordinate pairs (the product formula supports any n;
        /// the chain-level oracle and the full series are built for n = 1).
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long)]
        tmax: i64,
        #[arg(long, value_enum, default_value_t = EulerMethod::Product)]
        method: EulerMethod,
        /// Which series: ham0 (weights ≥ 0) or ham (includes t^−2).
        #[arg(long, value_enum, default_value_t = Algebra::Ham0)]
        algebra: Algebra,
    },
    /// Run a verification suite; exits 4 on any failing check.
    Verify {
        #[arg(long)]
        suite: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let opts = BuildOptions { budget_dim: cli.budget_dim, max_degree: None };
    let result = match cli.command {
        Command::Dims { algebra, weight, max_degree, profiles } => {
            cmd_dims(algebra, weight, max_degree, profiles, cli.format, &opts)
        }
        Command::Cohomology { algebra, weight } => cmd_cohomology(algebra, weight, cli.format, &opts),
        Command::Matrix { algebra, weight, degree } => cmd_matrix(algebra, weight, degree, cli.format, &opts),
        Command::Factorize { metoki } => cmd_factorize(metoki, cli.format, &opts),
        Command::Euler { n, tmax, method, algebra } => cmd_euler(n, tmax, method, algebra, cli.format, &opts),
        Command::Verify { suite } => cmd_verify(&suite, cli.format, &opts),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                GfcError::BudgetExceeded { .. } => ExitCode::from(3),
                GfcError::Unsupported(_) | GfcError::DimensionMismatch(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn configure_threads() {
    if let Ok(value) = std::env::var("GFC_THREADS") {
        if let Ok(threads) = value.parse::<usize>() {
            if threads >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
            }
        }
    }
}

fn cmd_dims(
    algebra: Algebra,
    weight: i64,
    max_degree: Option<usize>,
    profiles: bool,
    format: Format,
    opts: &BuildOptions,
) -> gfc::Result<ExitCode> {
    let opts = BuildOptions { max_degree, ..*opts };
    let start = Instant::now();
    let slice = build_slice(algebra.variant(), weight, &opts)?;
    eprintln!("built {} weight {} in {}ms", slice.variant.name(), weight, start.elapsed().as_millis());
    match format {
        Format::Human => {
            let line = (0..=slice.max_degree)
                .filter(|&d| slice.dim(d) > 0)
                .map(|d| format!("{}:{}", d, slice.dim(d)))
                .collect::<Vec<_>>()
                .join(" ");
            if !line.is_empty() {
                println!("{line}");
            }
            if profiles {
                for d in 0..=slice.max_degree {
                    let named: Vec<String> = slice
                        .profile_dims(d)
                        .into_iter()
                        .filter(|(_, dim)| *dim > 0)
                        .map(|(p, dim)| format!("{p}:{dim}"))
                        .collect();
                    if !named.is_empty() {
                        println!("{d}: {}", named.join(" "));
                    }
                }
            }
        }
        Format::Json => println!("{}", serde_json::to_string_pretty(&slice.to_json()).unwrap()),
        Format::Csv => {
            if profiles {
                println!("degree,profile,dim");
                for d in 0..=slice.max_degree {
                    for (p, dim) in slice.profile_dims(d) {
                        if dim > 0 {
                            println!("{d},{p},{dim}");
                        }
                    }
                }
            } else {
                println!("degree,dim");
                for d in 0..=slice.max_degree {
                    if slice.dim(d) > 0 {
                        println!("{},{}", d, slice.dim(d));
                    }
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_cohomology(algebra: Algebra, weight: i64, format: Format, opts: &BuildOptions) -> gfc::Result<ExitCode> {
    let start = Instant::now();
    let slice = build_slice(algebra.variant(), weight, opts)?;
    let betti = slice.cohomology_dims();
    eprintln!("cohomology of {} weight {} in {}ms", slice.variant.name(), weight, start.elapsed().as_millis());
    match format {
        Format::Human => {
            let line = betti.iter().map(|(d, b)| format!("{d}:{b}")).collect::<Vec<_>>().join(" ");
            if !line.is_empty() {
                println!("{line}");
            }
        }
        Format::Json => {
            let entries: Vec<serde_json::Value> = betti
                .iter()
                .map(|(d, b)| serde_json::json!({ "degree": d, "dim": b }))
                .collect();
            let json = serde_json::json!({
                "variant": slice.variant.name(),
                "weight": weight,
                "betti": entries,
            });
            println!("{}", serde_json::to_string_pretty(&json).unwrap());
        }
        Format::Csv => {
            println!("degree,betti");
            for (d, b) in &betti {
                println!("{d},{b}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_matrix(algebra: Algebra, weight: i64, degree: usize, format: Format, opts: &BuildOptions) -> gfc::Result<ExitCode> {
    let slice = build_slice(algebra.variant(), weight, opts)?;
    let Some(matrix) = slice.coboundary(degree) else {
        return Err(GfcError::DimensionMismatch(format!(
            "no coboundary from degree {degree}: slice stops at degree {}",
            slice.max_degree
        )));
    };
    match format {
        Format::Human | Format::Csv => print!("{}", matrix.to_text()),
        Format::Json => {
            let entries: Vec<serde_json::Value> = matrix
                .iter()
                .map(|(i, j, v)| serde_json::json!([i, j, rat_str(v)]))
                .collect();
            let json = serde_json::json!({
                "rows": matrix.rows(),
                "cols": matrix.cols(),
                "entries": entries,
            });
            println!("{}", serde_json::to_string_pretty(&json).unwrap());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_factorize(metoki: bool, format: Format, opts: &BuildOptions) -> gfc::Result<ExitCode> {
    let start = Instant::now();
    let report = factorize(opts)?;
    eprintln!("factorization pipeline in {}ms", start.elapsed().as_millis());
    let metoki_report = if metoki {
        let start = Instant::now();
        let rep = metoki_experiment(opts)?;
        eprintln!("weight-16/14 experiment in {}ms", start.elapsed().as_millis());
        Some(rep)
    } else {
        None
    };
    match format {
        Format::Json => {
            let mut json = report.to_json();
            if let Some(m) = &metoki_report {
                json["metoki_experiment"] = serde_json::to_value(m).unwrap();
            }
            println!("{}", serde_json::to_string_pretty(&json).unwrap());
        }
        Format::Human | Format::Csv => {
            let mut out = String::new();
            let _ = writeln!(out, "eta: degree {}, weight {}", report.eta.cochain.degree, report.eta.cochain.weight);
            let support: Vec<String> = report.eta_support.iter().map(|p| p.to_string()).collect();
            let _ = writeln!(out, "eta support: {}", support.join(" "));
            let _ = writeln!(out, "gkf: degree {}, weight {}", report.gkf.cochain.degree, report.gkf.cochain.weight);
            let _ = writeln!(out, "closed: {}", report.closed);
            let _ = writeln!(out, "non_exact: {}", report.non_exact);
            let _ = writeln!(out, "chain_map: {}", report.chain_map);
            let _ = writeln!(out, "injective: {}", report.injective);
            let _ = writeln!(out, "iso: {}", report.iso);
            let _ = writeln!(out, "gamma1_wedge_omega_spans_p1: {}", report.gamma1_maps_to_p1);
            let _ = writeln!(out, "omega_line: {}", report.omega_line);
            if let Some(obstruction) = &report.support_obstruction {
                let _ = writeln!(out, "support_obstruction: {obstruction}");
            }
            if let Some(m) = &metoki_report {
                let _ = writeln!(out, "metoki: source_betti {}, target_betti {}, induced_rank {}, factors {}",
                    m.source_betti, m.target_betti, m.induced_rank_degree7, m.factors_through_wedge_omega);
            }
            print!("{out}");
        }
    }
    if report.all_pass() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("factorization checks failed");
        Ok(ExitCode::from(4))
    }
}

fn cmd_euler(
    n: usize,
    tmax: i64,
    method: EulerMethod,
    algebra: Algebra,
    format: Format,
    opts: &BuildOptions,
) -> gfc::Result<ExitCode> {
    let product = |n: usize| match algebra {
        Algebra::Ham0 => perchik_series(n, tmax),
        Algebra::Ham => perchik_full_series(n, tmax),
    };
    let complex = || {
        if n != 1 {
            return Err(GfcError::Unsupported(
                "the chain-level oracle is built for n = 1".into(),
            ));
        }
        complex_euler_series(algebra.variant(), tmax, opts)
    };

    let (series, matches) = match method {
        EulerMethod::Product => (product(n)?, None),
        EulerMethod::Complex => (complex()?, None),
        EulerMethod::Both => {
            let p = product(n)?;
            let c = complex()?;
            let matches = p.agrees_with(&c);
            (p, Some(matches))
        }
    };

    // ranks 1..=n side by side once the product formula leaves n = 1
    let stabilization = if n >= 2 && method != EulerMethod::Complex && algebra == Algebra::Ham0 {
        let ranks: Vec<usize> = (1..=n).collect();
        Some(stabilization_report(&ranks, tmax)?)
    } else {
        None
    };

    match format {
        Format::Human => {
            println!("{}", series.to_polynomial_string());
            if let Some(m) = matches {
                println!("match={m}");
            }
            if let Some(st) = &stabilization {
                for (e, values, stable) in &st.rows {
                    let rendered: Vec<String> = values.iter().map(rat_str).collect();
                    println!("t^{e}: {} stable={stable}", rendered.join(" "));
                }
            }
        }
        Format::Json => {
            let mut json = series.to_json();
            if let Some(m) = matches {
                json["match"] = serde_json::Value::Bool(m);
            }
            if let Some(st) = &stabilization {
                json["stabilization"] = st.to_json();
            }
            println!("{}", serde_json::to_string_pretty(&json).unwrap());
        }
        Format::Csv => {
            println!("exp,value");
            for (e, v) in series.terms() {
                println!("{e},{}", rat_str(v));
            }
        }
    }
    if matches == Some(false) {
        eprintln!("product and chain-level series disagree");
        return Ok(ExitCode::from(4));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(suite: &str, format: Format, opts: &BuildOptions) -> gfc::Result<ExitCode> {
    if !SUITES.contains(&suite) {
        return Err(GfcError::Unsupported(format!(
            "unknown suite {suite}; choose one of {}",
            SUITES.join(", ")
        )));
    }
    let start = Instant::now();
    let reports = run_suite(suite, opts)?;
    match format {
        Format::Human => {
            for rep in &reports {
                let tag = if rep.pass { "PASS" } else { "FAIL" };
                println!(
                    "[{tag}] {}/{} expected={} computed={}",
                    rep.suite, rep.name, rep.expected, rep.computed
                );
            }
        }
        Format::Json => {
            let json: Vec<serde_json::Value> = reports.iter().map(|r| r.to_json()).collect();
            println!("{}", serde_json::to_string_pretty(&json).unwrap());
        }
        Format::Csv => {
            println!("suite,name,pass");
            for rep in &reports {
                println!("{},{},{}", rep.suite, rep.name, rep.pass);
            }
        }
    }
    let failures = reports.iter().filter(|r| !r.pass).count();
    eprintln!(
        "suite {suite}: {} checks, {failures} failures, {}ms",
        reports.len(),
        start.elapsed().as_millis()
    );
    if failures > 0 {
        Ok(ExitCode::from(4))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}
