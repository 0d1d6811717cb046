//! Command-line driver for the voronoi-strata experiments.
//!
//! One binary, six subcommands: `sample-knots` (random-knot census),
//! `euler-density` (closed-form expected χ density, optionally cross-checked
//! by Monte Carlo), `percolation-sweep` (homological percolation event
//! frequencies over a probability grid), `realize-link` (tile diagram →
//! boundary-sphere coloring), `genus-search` (annealed spanning-surface
//! search in the 4-ball), and `validate` (manifold fuzzer for color classes).
//!
//! Every output file starts with a record/comment carrying the fully
//! resolved configuration, and identical inputs produce byte-identical
//! outputs regardless of `--threads`. Exit codes: 0 success, 1 domain error,
//! 2 usage error.

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use voronoi_strata::coloring::{load_coloring, random_coloring, save_coloring, ColorSet};
use voronoi_strata::diagram::classify;
use voronoi_strata::ec;
use voronoi_strata::genus;
use voronoi_strata::homology;
use voronoi_strata::knots;
use voronoi_strata::lattice::{Family, GridComplex};
use voronoi_strata::rng::derive_seed;
use voronoi_strata::stratum::{validate_manifold, StratumComplex};
use voronoi_strata::tiles;
use voronoi_strata::{Error, Result};

#[derive(Parser)]
#[command(
    name = "strata",
    about = "Random submanifolds as Voronoi color classes: experiments and searches",
    version
)]
struct Cli {
    /// Worker threads (0 = all available). Output bytes do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Allow drawing the seed from system entropy when --seed is omitted.
    #[arg(long, global = true, default_value_t = false)]
    nondeterministic: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample random knots on the beach-ball cube and tally the census.
    SampleKnots(SampleKnotsArgs),
    /// Closed-form expected Euler-characteristic density (exact), with an
    /// optional Monte-Carlo cross-check.
    EulerDensity(EulerDensityArgs),
    /// Empirical homological-percolation event frequencies over a
    /// probability grid on the torus.
    PercolationSweep(PercolationSweepArgs),
    /// Realize a tile-diagram link as a coloring of the boundary 3-sphere.
    RealizeLink(RealizeLinkArgs),
    /// Simulated-annealing search for a low-genus spanning surface.
    GenusSearch(GenusSearchArgs),
    /// Manifold fuzzer: random colorings, every color class checked.
    Validate(ValidateArgs),
}

#[derive(Args, Serialize)]
struct SampleKnotsArgs {
    /// Cube size n.
    #[arg(long)]
    n: usize,
    /// Number of independent trials.
    #[arg(long)]
    trials: u64,
    #[arg(long)]
    seed: Option<u64>,
    /// Per-trial JSONL output (defaults to stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Census summary CSV (key, count, rate per knot type).
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct EulerDensityArgs {
    /// Ambient dimension d (torus T^d).
    #[arg(long)]
    d: usize,
    /// Number of colors.
    #[arg(long)]
    k: usize,
    /// Comma-separated color probabilities, summing to 1.
    #[arg(long)]
    probs: String,
    /// Comma-separated colors of the class, e.g. `0` or `0,2`.
    #[arg(long)]
    colorset: String,
    /// Torus size for the optional Monte-Carlo cross-check.
    #[arg(long, default_value_t = 0)]
    mc_n: usize,
    /// Monte-Carlo trials (0 disables the cross-check).
    #[arg(long, default_value_t = 0)]
    mc_trials: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// CSV output (defaults to stdout summary only).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct PercolationSweepArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// Comma-separated colors of the class under study.
    #[arg(long)]
    colorset: String,
    /// Homology degree i.
    #[arg(long)]
    i: usize,
    /// Probability grid: rows separated by `;`, entries by `,`.
    #[arg(long)]
    grid: String,
    #[arg(long)]
    trials: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// CSV output (defaults to stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct RealizeLinkArgs {
    /// Tile diagram text file.
    #[arg(long)]
    diagram: PathBuf,
    /// Barycentric-refinement level applied to the boundary coloring.
    #[arg(long, default_value_t = 1)]
    refine: usize,
    /// Output directory (boundary coloring + JSON report).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Serialize)]
struct GenusSearchArgs {
    /// Boundary coloring file (family=sphere, d=3).
    #[arg(long)]
    boundary: PathBuf,
    #[arg(long, default_value_t = 100_000)]
    iters: usize,
    #[arg(long, default_value_t = 1)]
    restarts: usize,
    #[arg(long, default_value_t = 1.0)]
    t0: f64,
    /// Cooling factor per step (default: final temperature ≈ 1e-3).
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    w_genus: f64,
    #[arg(long, default_value_t = 0.25)]
    w_closed: f64,
    /// Full-recompute checkpoint period.
    #[arg(long, default_value_t = 1000)]
    period: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (best coloring, certificate JSON, trace CSV).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Serialize)]
struct ValidateArgs {
    /// Grid family: torus | ball | sphere.
    #[arg(long)]
    family: String,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    trials: u64,
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        // Parallelism affects wall time only; all reductions are
        // deterministic in trial order.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    let result = match cli.command {
        Command::SampleKnots(a) => sample_knots(a, cli.nondeterministic),
        Command::EulerDensity(a) => euler_density(a, cli.nondeterministic),
        Command::PercolationSweep(a) => percolation_sweep(a, cli.nondeterministic),
        Command::RealizeLink(a) => realize_link(a),
        Command::GenusSearch(a) => genus_search(a, cli.nondeterministic),
        Command::Validate(a) => validate(a, cli.nondeterministic),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

/// Resolves the seed: explicit flag, else the fixed default 1, unless the
/// caller opted into entropy with --nondeterministic.
fn resolve_seed(seed: Option<u64>, nondeterministic: bool) -> u64 {
    match seed {
        Some(s) => s,
        None if nondeterministic => std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_nanos() as u64)
            .unwrap_or(1),
        None => 1,
    }
}

fn parse_probs(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("bad probability `{t}`")))
        })
        .collect()
}

fn parse_colorset(s: &str, k: usize) -> Result<ColorSet> {
    let mut colors = Vec::new();
    for t in s.split(',') {
        let c: u8 = t
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad color `{t}`")))?;
        if c as usize >= k {
            return Err(Error::InvalidInput(format!("color {c} out of range for k={k}")));
        }
        colors.push(c);
    }
    if colors.is_empty() {
        return Err(Error::InvalidInput("empty colorset".into()));
    }
    Ok(ColorSet::from_colors(&colors))
}

fn writer(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(std::io::stdout())),
    })
}

/// The resolved-config header: a JSON object on the first line (JSONL) or a
/// `#`-prefixed comment (CSV).
fn config_json<T: Serialize>(subcommand: &str, args: &T, seed: u64) -> String {
    let mut v = serde_json::to_value(args).expect("flags serialize");
    v["subcommand"] = serde_json::Value::String(subcommand.into());
    v["seed"] = serde_json::Value::from(seed);
    serde_json::to_string(&v).expect("config serializes")
}

// ---------------------------------------------------------------------------
// sample-knots
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct TrialRecord<'a> {
    trial: u64,
    det: u64,
    alexander: Option<&'a voronoi_strata::diagram::LaurentPoly>,
    knot: Option<&'a str>,
    crossings_after_reduction: u32,
    components: u32,
}

fn sample_knots(args: SampleKnotsArgs, nondet: bool) -> Result<()> {
    let seed = resolve_seed(args.seed, nondet);
    let header = config_json("sample-knots", &args, seed);
    let mut out = writer(args.out.as_deref())?;
    writeln!(out, "{{\"record\":\"config\",\"config\":{header}}}")?;

    use rayon::prelude::*;
    let chunk = 4096u64;
    let mut census = knots::Census {
        n: args.n,
        trials: args.trials,
        seed,
        unknots: 0,
        counts: Default::default(),
    };
    let mut written = 0u64;
    while written < args.trials {
        let hi = (written + chunk).min(args.trials);
        let outcomes: Vec<knots::TrialOutcome> = (written..hi)
            .into_par_iter()
            .map_init(
                || knots::KnotSampler::new(args.n).expect("validated n"),
                |sampler, t| sampler.sample(derive_seed(seed, t)).expect("valid input"),
            )
            .collect();
        for (off, o) in outcomes.iter().enumerate() {
            let knot = match &o.alexander {
                Some(a) => classify(o.det, a),
                None => Some("0_1"),
            };
            if o.det == 1 {
                census.unknots += 1;
            } else {
                let key = knots::CensusKey {
                    det: o.det,
                    alexander: o.alexander.clone().expect("nontrivial det implies Δ"),
                };
                *census.counts.entry(key).or_insert(0) += 1;
            }
            let rec = TrialRecord {
                trial: written + off as u64,
                det: o.det,
                alexander: o.alexander.as_ref(),
                knot,
                crossings_after_reduction: o.crossings_after_reduction,
                components: o.components,
            };
            writeln!(out, "{}", serde_json::to_string(&rec).expect("record serializes"))?;
        }
        written = hi;
    }
    out.flush()?;

    if let Some(summary) = &args.summary {
        let mut w = BufWriter::new(File::create(summary)?);
        writeln!(w, "# config: {header}")?;
        writeln!(w, "n,trials,knot,det,alexander,count,rate")?;
        writeln!(
            w,
            "{},{},0_1,1,,{},{}",
            census.n,
            census.trials,
            census.unknots,
            census.unknots as f64 / census.trials as f64
        )?;
        for (key, count) in &census.counts {
            writeln!(
                w,
                "{},{},{},{},{:?},{},{}",
                census.n,
                census.trials,
                key.name().unwrap_or("unmatched"),
                key.det,
                key.alexander,
                count,
                *count as f64 / census.trials as f64
            )?;
        }
        w.flush()?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// euler-density
// ---------------------------------------------------------------------------

fn euler_density(args: EulerDensityArgs, nondet: bool) -> Result<()> {
    let seed = resolve_seed(args.seed, nondet);
    let probs = parse_probs(&args.probs)?;
    let colorset = parse_colorset(&args.colorset, args.k)?;
    let query = ec::DensityQuery::from_f64(args.d, args.k, colorset, &probs)?;
    let theory = ec::expected_density(&query)?;
    println!("{}", theory.to_f64());

    let mc = if args.mc_trials > 0 {
        if args.mc_n == 0 {
            return Err(Error::InvalidInput("--mc-trials needs --mc-n".into()));
        }
        let g = GridComplex::build(Family::Torus, args.d, args.mc_n)?;
        Some(ec::monte_carlo_density(&g, &probs, colorset, args.mc_trials, seed)?)
    } else {
        None
    };
    if let Some((mean, stderr)) = mc {
        println!("mc: {mean} ± {stderr}");
    }

    if let Some(path) = &args.out {
        let mut w = BufWriter::new(File::create(path)?);
        writeln!(w, "# config: {}", config_json("euler-density", &args, seed))?;
        writeln!(w, "d,k,colorset,probs,theory_value,mc_mean,mc_stderr,trials,n")?;
        let (mean, stderr) = mc.map(|(a, b)| (a.to_string(), b.to_string())).unwrap_or_default();
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            args.d,
            args.k,
            args.colorset.replace(',', "+"),
            args.probs.replace(',', "+"),
            theory.to_f64(),
            mean,
            stderr,
            args.mc_trials,
            args.mc_n
        )?;
        w.flush()?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// percolation-sweep
// ---------------------------------------------------------------------------

fn percolation_sweep(args: PercolationSweepArgs, nondet: bool) -> Result<()> {
    let seed = resolve_seed(args.seed, nondet);
    let colorset = parse_colorset(&args.colorset, args.k)?;
    let grid: Vec<Vec<f64>> =
        args.grid.split(';').map(parse_probs).collect::<Result<_>>()?;
    let g = GridComplex::build(Family::Torus, args.d, args.n)?;
    let points =
        homology::percolation_sweep(&g, args.k, colorset, args.i, &grid, args.trials, seed)?;
    let mut w = writer(args.out.as_deref())?;
    writeln!(w, "# config: {}", config_json("percolation-sweep", &args, seed))?;
    writeln!(w, "probs,trials,p_a,p_e,mean_rank_image,ec_density")?;
    for p in points {
        let probs = p
            .probs
            .iter()
            .map(f64::to_string)
            .collect::<Vec<_>>()
            .join("+");
        writeln!(
            w,
            "{},{},{},{},{},{}",
            probs, p.trials, p.p_a, p.p_e, p.mean_rank_image, p.ec_density
        )?;
    }
    w.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// realize-link
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct RealizeReport {
    n: usize,
    refine: usize,
    diagram_components: usize,
    diagram_crossings: usize,
    diagram_det: Option<u64>,
    diagram_alexander: Option<voronoi_strata::diagram::LaurentPoly>,
    diagram_writhe: Option<i64>,
    extracted_components: usize,
    extracted_det: Option<u64>,
    extracted_alexander: Option<voronoi_strata::diagram::LaurentPoly>,
    matches: bool,
    mismatches: Vec<String>,
}

fn realize_link(args: RealizeLinkArgs) -> Result<()> {
    let text = std::fs::read_to_string(&args.diagram)?;
    let diagram = tiles::parse_tile_diagram(&text)?;
    let inv = tiles::diagram_invariants(&diagram)?;
    let mut bc = tiles::realize_diagram(&diagram)?;
    if args.refine > 1 {
        bc = tiles::refine(&bc, args.refine)?;
    }
    let expect = tiles::Expectation {
        components: inv.components,
        det: inv.det,
        alexander: inv.alexander.clone(),
    };
    let report = tiles::verify_realization(&bc, &expect)?;

    std::fs::create_dir_all(&args.out)?;
    save_coloring(&args.out.join("boundary.coloring"), &bc.coloring)?;
    let full = RealizeReport {
        n: bc.n(),
        refine: args.refine,
        diagram_components: inv.components,
        diagram_crossings: inv.crossings,
        diagram_det: inv.det,
        diagram_alexander: inv.alexander,
        diagram_writhe: inv.writhe,
        extracted_components: report.components,
        extracted_det: report.det,
        extracted_alexander: report.alexander,
        matches: report.matches,
        mismatches: report.mismatches,
    };
    let f = File::create(args.out.join("report.json"))?;
    serde_json::to_writer_pretty(BufWriter::new(f), &full)
        .map_err(|e| Error::Internal(format!("report serialization: {e}")))?;
    println!(
        "realized n={} components={} det={:?} matches={}",
        full.n, full.extracted_components, full.extracted_det, full.matches
    );
    if !full.matches {
        return Err(Error::Internal(format!(
            "realization mismatch: {:?}",
            full.mismatches
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// genus-search
// ---------------------------------------------------------------------------

fn genus_search(args: GenusSearchArgs, nondet: bool) -> Result<()> {
    let seed = resolve_seed(args.seed, nondet);
    let (g, coloring) = load_coloring(&args.boundary)?;
    if g.family != Family::Sphere || g.d != 3 {
        return Err(Error::InvalidInput(
            "boundary coloring must be on the sphere family with d=3".into(),
        ));
    }
    let boundary = tiles::BoundaryColoring { complex: g, coloring };
    let cfg = genus::AnnealConfig {
        iterations: args.iters,
        t0: args.t0,
        gamma: args.gamma,
        w_genus: args.w_genus,
        w_closed: args.w_closed,
        full_recompute_period: args.period,
        seed,
        restarts: args.restarts,
    };
    let outcome = genus::run_search(&boundary, &cfg)?;

    std::fs::create_dir_all(&args.out)?;
    let ball = GridComplex::build(Family::Ball, 4, outcome.n)?;
    let best = voronoi_strata::coloring::Coloring::new(&ball, 3, outcome.best.best_colors.clone())?;
    save_coloring(&args.out.join("best.coloring"), &best)?;

    let certificate = genus::genus_upper_bound_certificate(&ball, &best)?;
    if certificate.genus != outcome.best.best_genus {
        return Err(Error::Internal(format!(
            "certificate genus {} disagrees with search best {}",
            certificate.genus, outcome.best.best_genus
        )));
    }
    let f = File::create(args.out.join("certificate.json"))?;
    serde_json::to_writer_pretty(BufWriter::new(f), &certificate)
        .map_err(|e| Error::Internal(format!("certificate serialization: {e}")))?;

    let mut w = BufWriter::new(File::create(args.out.join("trace.csv"))?);
    writeln!(w, "# config: {}", config_json("genus-search", &args, seed))?;
    writeln!(w, "iteration,temperature,objective,best")?;
    for p in &outcome.best.trace {
        writeln!(w, "{},{},{},{}", p.iteration, p.temperature, p.objective, p.best_objective)?;
    }
    w.flush()?;
    println!(
        "best genus {} (objective {:.4}, chain seed {}, found at iteration {}); certificate genus {}",
        outcome.best.best_genus,
        outcome.best.best_objective,
        outcome.best.seed,
        outcome.best.best_iteration,
        certificate.genus
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

fn validate(args: ValidateArgs, nondet: bool) -> Result<()> {
    let seed = resolve_seed(args.seed, nondet);
    let family = match args.family.as_str() {
        "torus" => Family::Torus,
        "ball" => Family::Ball,
        "sphere" => Family::Sphere,
        other => return Err(Error::InvalidInput(format!("unknown family `{other}`"))),
    };
    let g = GridComplex::build(family, args.d, args.n)?;
    let probs = vec![1.0 / args.k as f64; args.k];
    let mut failures = 0u64;
    for t in 0..args.trials {
        let c = random_coloring(&g, &probs, derive_seed(seed, t))?;
        for mask in 1u32..(1 << args.k) {
            let stratum = StratumComplex::build(&g, &c, ColorSet(mask))?;
            let report = validate_manifold(&stratum);
            if !report.ok() {
                failures += 1;
                eprintln!(
                    "trial {t} colorset {mask:#b}: {} offending vertices",
                    report.offenders.len()
                );
            }
        }
    }
    println!(
        "validated {} colorings × {} colorsets: {} failures",
        args.trials,
        (1 << args.k) - 1,
        failures
    );
    if failures > 0 {
        return Err(Error::Internal(format!("{failures} manifold violations")));
    }
    Ok(())
}
