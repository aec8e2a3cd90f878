mod config;

use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use marginal_core::analysis::{ConvergenceReport, ScheduleEntry, StudyOptions, DEFAULT_EVAL_GRID};
use marginal_core::{
    approximate, compare_grid_vs_lattice, convergence_study, evaluate, projection_profile, sup_error, Algorithm,
    PartitionSmoother, PointSet, PointSetSpec, ProductDistribution,
};

use config::{parse_algorithm, parse_count, parse_descriptor, parse_list, parse_pair, parse_seeds, parse_smoother};
use config::{ConfigError, FileConfig};

const DEFAULT_PARTITIONS: usize = 8;

#[derive(Parser)]
#[command(name = "marginal", version, about = "Approximate one-dimensional marginals from grid, lattice and random evaluations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a point set and print its per-axis projection profile.
    Points {
        #[command(flatten)]
        points: PointArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Fit the marginal polynomials of a distribution on one point set.
    Approx {
        #[command(flatten)]
        points: PointArgs,
        #[command(flatten)]
        fit: FitArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Also write the evaluation matrix to psi.csv.
        #[arg(long)]
        psi: bool,
    },
    /// Error study over a schedule of point sets.
    Converge {
        /// Comma-separated descriptors: grid:n, korobov:N[:alpha],
        /// maximal:l:r, random:N[:seed], rank1:N:z1;z2
        #[arg(long)]
        schedule: Option<String>,
        #[command(flatten)]
        fit: FitArgs,
        #[command(flatten)]
        study: StudyArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Grid (Algorithm I) against lattice (Algorithm II) at comparable sizes.
    Compare {
        /// Comma-separated GRID_N/DESCRIPTOR pairs, e.g. 6/korobov:1024
        #[arg(long)]
        pairs: Option<String>,
        #[command(flatten)]
        fit: FitArgs,
        #[command(flatten)]
        study: StudyArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args)]
struct PointArgs {
    /// Regular grid with n points per axis.
    #[arg(long, value_name = "n", conflicts_with_all = ["korobov", "maximal", "random"])]
    grid: Option<usize>,
    /// Korobov lattice with N points (`32` or `N=32`).
    #[arg(long, value_name = "N", value_parser = parse_count, conflicts_with_all = ["maximal", "random"])]
    korobov: Option<u64>,
    /// Maximal-rank lattice with N = l r^s points.
    #[arg(long, num_args = 2, value_names = ["l", "r"], conflicts_with = "random")]
    maximal: Option<Vec<u64>>,
    /// N seeded pseudo-random points.
    #[arg(long, value_name = "N")]
    random: Option<usize>,
    /// Korobov multiplier.
    #[arg(long, requires = "korobov", conflicts_with = "auto_alpha")]
    alpha: Option<u64>,
    /// Search the Korobov multiplier (the default when --alpha is absent).
    #[arg(long, requires = "korobov")]
    auto_alpha: bool,
    /// Generating vector for --maximal, e.g. 1,3,5.
    #[arg(long, requires = "maximal")]
    z: Option<String>,
}

#[derive(Args)]
struct FitArgs {
    /// Distribution file: a TOML list of `[[factor]]` tables.
    #[arg(long)]
    dist: Option<PathBuf>,
    /// auto, I or II.
    #[arg(long)]
    algorithm: Option<String>,
    /// Partition count n for Algorithm II.
    #[arg(long)]
    partitions: Option<usize>,
    /// Algorithm II smoother: ls, bin-left or bin-mid.
    #[arg(long)]
    smoother: Option<String>,
    /// Size of the equidistant error/evaluation grid.
    #[arg(long)]
    eval_grid: Option<usize>,
}

#[derive(Args)]
struct StudyArgs {
    /// Seeds averaged over for random point sets: `1..20` or `1,2,3`.
    #[arg(long)]
    seeds: Option<String>,
    /// Exit with status 4 when errors fail to decrease along the schedule.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct CommonArgs {
    /// Configuration file (TOML). Command-line flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Dimension s.
    #[arg(long)]
    dims: Option<usize>,
    /// Seed for random point sets.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker thread cap; results do not depend on it.
    #[arg(long)]
    threads: Option<usize>,
}

enum Failure {
    Config(String),
    Numerical(String),
    Trend(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.0)
    }
}

impl From<marginal_core::Error> for Failure {
    fn from(e: marginal_core::Error) -> Self {
        use marginal_core::Error::*;
        match e {
            Argument(_) | Capacity(_) | Parse(_) | Io(_) => Failure::Config(e.to_string()),
            NonFinite { .. } | EmptyPartition { .. } | FullyProjectionRegular { .. } | Singular(_) => {
                Failure::Numerical(e.to_string())
            }
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure::Config(format!("{}: {e}", path.display()))
}

/// Settings shared by every command after merging flags over the config file.
struct Resolved {
    file: FileConfig,
    dims: Option<usize>,
    seed: u64,
    out: PathBuf,
}

fn resolve_common(common: &CommonArgs) -> Result<Resolved, Failure> {
    let file = match &common.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let threads = common.threads.or(file.threads);
    if let Some(t) = threads {
        if t == 0 {
            return Err(Failure::Config("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Failure::Config(format!("thread pool: {e}")))?;
    }
    Ok(Resolved {
        dims: common.dims.or(file.dims),
        seed: common.seed.or(file.seed).unwrap_or(0),
        out: common.out.clone().or(file.out.clone()).unwrap_or_else(|| PathBuf::from(".")),
        file,
    })
}

fn point_spec(args: &PointArgs, r: &Resolved) -> Result<PointSetSpec, Failure> {
    let spec = if let Some(n) = args.grid {
        PointSetSpec::Grid { n }
    } else if let Some(n) = args.korobov {
        PointSetSpec::Korobov {
            n_points: n,
            alpha: args.alpha,
        }
    } else if let Some(lr) = &args.maximal {
        PointSetSpec::MaximalRank {
            l: lr[0],
            r: lr[1],
            z: args.z.as_deref().map(parse_list).transpose()?,
        }
    } else if let Some(n) = args.random {
        PointSetSpec::Random {
            n_points: n,
            seed: r.seed,
        }
    } else if let Some(spec) = &r.file.points {
        spec.clone()
    } else {
        return Err(Failure::Config(
            "no point set given: use --grid, --korobov, --maximal or --random".into(),
        ));
    };
    Ok(spec)
}

fn load_dist(flag: &Option<PathBuf>, r: &Resolved) -> Result<ProductDistribution, Failure> {
    let path = flag
        .clone()
        .or(r.file.dist.clone())
        .ok_or_else(|| Failure::Config("--dist is required".into()))?;
    let text = fs::read_to_string(&path).map_err(|e| io_err(&path, e))?;
    let dist = ProductDistribution::from_toml(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    if let Some(s) = r.dims {
        if s != dist.dim() {
            return Err(Failure::Config(format!(
                "--dims {s} disagrees with {} ({} factors)",
                path.display(),
                dist.dim()
            )));
        }
    }
    Ok(dist)
}

struct Fit {
    partitions: usize,
    smoother: PartitionSmoother,
    algorithm: Algorithm,
    eval_grid: usize,
}

fn resolve_fit(fit: &FitArgs, r: &Resolved) -> Result<Fit, Failure> {
    let partitions = fit.partitions.or(r.file.partitions).unwrap_or(DEFAULT_PARTITIONS);
    if partitions == 0 {
        return Err(Failure::Config("--partitions must be positive".into()));
    }
    let smoother = match fit.smoother.as_deref().or(r.file.smoother.as_deref()) {
        Some(s) => parse_smoother(s)?,
        None => PartitionSmoother::default(),
    };
    let name = fit.algorithm.as_deref().or(r.file.algorithm.as_deref()).unwrap_or("auto");
    let eval_grid = fit.eval_grid.or(r.file.eval_grid).unwrap_or(DEFAULT_EVAL_GRID);
    if eval_grid < 2 {
        return Err(Failure::Config("--eval-grid must be at least 2".into()));
    }
    Ok(Fit {
        partitions,
        smoother,
        algorithm: parse_algorithm(name, partitions, smoother)?,
        eval_grid,
    })
}

fn create_out(dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| io_err(path, e))
}

fn with_writer(path: &Path, f: impl FnOnce(&mut BufWriter<fs::File>) -> marginal_core::Result<()>) -> Result<(), Failure> {
    let file = fs::File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(file);
    f(&mut w)?;
    std::io::Write::flush(&mut w).map_err(|e| io_err(path, e))
}

fn print_profiles(ps: &PointSet) -> Result<(), Failure> {
    println!("{} N={} s={}", ps.kind().name(), ps.len(), ps.dim());
    for j in 0..ps.dim() {
        let p = projection_profile(ps, j)?;
        let m = match p.uniform_multiplicity() {
            Some(m) => m.to_string(),
            None => {
                let lo = p.multiplicities.iter().min().unwrap();
                let hi = p.multiplicities.iter().max().unwrap();
                format!("{lo}..{hi}")
            }
        };
        println!(
            "axis {}: n={} m={} fully_projection_regular={}",
            j + 1,
            p.node_count(),
            m,
            p.fully_projection_regular
        );
    }
    Ok(())
}

fn cmd_points(points: &PointArgs, common: &CommonArgs) -> Result<(), Failure> {
    let r = resolve_common(common)?;
    let spec = point_spec(points, &r)?;
    let s = r.dims.ok_or_else(|| Failure::Config("--dims is required".into()))?;
    let ps = spec.build(s)?;
    create_out(&r.out)?;
    with_writer(&r.out.join("points.csv"), |w| ps.write_csv(w))?;
    if ps.rational().is_some() {
        with_writer(&r.out.join("points_rational.csv"), |w| ps.write_rational_csv(w).map(|_| ()))?;
    }
    print_profiles(&ps)
}

fn cmd_approx(points: &PointArgs, fit: &FitArgs, common: &CommonArgs, psi: bool) -> Result<(), Failure> {
    let r = resolve_common(common)?;
    let spec = point_spec(points, &r)?;
    let dist = load_dist(&fit.dist, &r)?;
    let fit = resolve_fit(fit, &r)?;
    let ps = spec.build(dist.dim())?;
    let es = evaluate(dist.joint_density(), &ps, None)?;
    let (polys, used_alg_i) = approximate(&es, fit.algorithm)?;
    create_out(&r.out)?;
    if psi || r.file.psi.unwrap_or(false) {
        with_writer(&r.out.join("psi.csv"), |w| es.write_csv(w))?;
    }
    println!(
        "{} N={} s={} algorithm={}",
        ps.kind().name(),
        ps.len(),
        ps.dim(),
        if used_alg_i { "I" } else { "II" }
    );
    for (j, poly) in polys.iter().enumerate() {
        let truth = dist.true_marginal(j);
        write_file(&r.out.join(format!("marginal_{}.json", j + 1)), &(poly.to_json() + "\n"))?;
        write_file(
            &r.out.join(format!("marginal_{}.csv", j + 1)),
            &poly.to_csv(fit.eval_grid, Some(&truth)),
        )?;
        let e = sup_error(poly, &truth, fit.eval_grid)?;
        println!(
            "axis {}: degree={} sup_error={} l2_error={}",
            j + 1,
            poly.degree(),
            marginal_core::g17(e.sup_error),
            marginal_core::g17(e.l2_error)
        );
    }
    Ok(())
}

fn study_options(study: &StudyArgs, fit: &Fit, r: &Resolved) -> Result<StudyOptions, Failure> {
    let seeds = match &study.seeds {
        Some(s) => parse_seeds(s)?,
        None => r.file.seeds.clone().unwrap_or_default(),
    };
    Ok(StudyOptions {
        eval_grid: fit.eval_grid,
        seeds,
        threads: None,
    })
}

fn print_report(label: &str, rep: &ConvergenceReport) {
    for row in &rep.rows {
        let errs: Vec<String> = row.axes.iter().map(|a| format!("{:.3e}", a.report.sup_error)).collect();
        println!(
            "{label}{} N={} n={} m={} algorithm={} sup_error=[{}]",
            row.kind,
            row.n_points,
            row.n,
            row.m,
            row.algorithm,
            errs.join(", ")
        );
    }
    let flags: Vec<&str> = rep.trend_ok.iter().map(|&t| if t { "ok" } else { "FAIL" }).collect();
    println!("{label}trend per axis: [{}]", flags.join(", "));
}

fn cmd_converge(
    schedule: &Option<String>,
    fit: &FitArgs,
    study: &StudyArgs,
    common: &CommonArgs,
) -> Result<(), Failure> {
    let r = resolve_common(common)?;
    let dist = load_dist(&fit.dist, &r)?;
    let fit = resolve_fit(fit, &r)?;
    let specs: Vec<PointSetSpec> = match schedule {
        Some(s) => s
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| parse_descriptor(t, r.seed))
            .collect::<Result<_, _>>()?,
        None => r.file.schedule.clone().unwrap_or_default(),
    };
    if specs.is_empty() {
        return Err(Failure::Config("schedule is empty: pass --schedule or set `schedule` in the config".into()));
    }
    let entries: Vec<ScheduleEntry> = specs
        .into_iter()
        .map(|points| ScheduleEntry {
            points,
            algorithm: fit.algorithm,
        })
        .collect();
    let opts = study_options(study, &fit, &r)?;
    let rep = convergence_study(&dist, &entries, &opts)?;
    create_out(&r.out)?;
    with_writer(&r.out.join("report.csv"), |w| rep.write_csv(w))?;
    write_file(&r.out.join("report.json"), &(rep.to_json() + "\n"))?;
    print_report("", &rep);
    if (study.strict || r.file.strict.unwrap_or(false)) && !rep.trend_holds() {
        return Err(Failure::Trend("sup error increased along the schedule".into()));
    }
    Ok(())
}

fn cmd_compare(pairs: &Option<String>, fit: &FitArgs, study: &StudyArgs, common: &CommonArgs) -> Result<(), Failure> {
    let r = resolve_common(common)?;
    let dist = load_dist(&fit.dist, &r)?;
    let fit = resolve_fit(fit, &r)?;
    let pairs = match pairs {
        Some(s) => s
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| parse_pair(t, r.seed))
            .collect::<Result<Vec<_>, _>>()?,
        None => r.file.pairs.clone().unwrap_or_default(),
    };
    if pairs.is_empty() {
        return Err(Failure::Config("no pairs: pass --pairs or set `pairs` in the config".into()));
    }
    let pairs: Vec<(usize, PointSetSpec)> = pairs.into_iter().map(|p| (p.grid, p.lattice)).collect();
    let opts = study_options(study, &fit, &r)?;
    let rep = compare_grid_vs_lattice(&dist, &pairs, fit.partitions, fit.smoother, &opts)?;
    create_out(&r.out)?;
    with_writer(&r.out.join("compare.csv"), |w| rep.write_csv(w))?;
    write_file(&r.out.join("compare.json"), &(rep.to_json() + "\n"))?;
    print_report("grid:    ", &rep.grid);
    print_report("lattice: ", &rep.lattice);
    println!("lattice below grid on every axis: {}", rep.lattice_wins());
    let strict = study.strict || r.file.strict.unwrap_or(false);
    if strict && !(rep.grid.trend_holds() && rep.lattice.trend_holds()) {
        return Err(Failure::Trend("sup error increased along the schedule".into()));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Points { points, common } => cmd_points(points, common),
        Command::Approx {
            points,
            fit,
            common,
            psi,
        } => cmd_approx(points, fit, common, *psi),
        Command::Converge {
            schedule,
            fit,
            study,
            common,
        } => cmd_converge(schedule, fit, study, common),
        Command::Compare {
            pairs,
            fit,
            study,
            common,
        } => cmd_compare(pairs, fit, study, common),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Trend(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(4)
        }
    }
}
