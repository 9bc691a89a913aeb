//! Command-line front end for the inference-cost pipeline.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use inferwatt_core::energy::{annotate_energy, annotate_energy_nearest, EfficiencySource};
use inferwatt_core::flops::{
    compound_scale_flops, normalize_flops, scale_with_exponent, FlopsConvention, ScaleFactors,
};
use inferwatt_core::forecast::{percapita_power, somatic_baseline, Scenario};
use inferwatt_core::records::{DatasetBundle, Domain, ModelRecord};
use inferwatt_core::trend::doubling_time;
use inferwatt::analysis::{analyze, DomainAnalysis, DEFAULT_KCAL_PER_DAY};
use inferwatt::fixtures;
use inferwatt::fmt::sig6;
use inferwatt::load::load_bundle;
use inferwatt::report::{gpu_table_csv, write_report};

const EXIT_VALIDATION: u8 = 1;
const EXIT_ANALYSIS: u8 = 2;

#[derive(Parser)]
#[command(
    name = "inferwatt",
    about = "Inference compute and energy trend analysis over compiled model and GPU datasets",
    version
)]
struct Cli {
    #[command(flatten)]
    data: DataArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct DataArgs {
    /// models.csv path (defaults to the bundled dataset, or $INFERWATT_DATA_DIR)
    #[arg(long, global = true)]
    models: Option<PathBuf>,
    /// gpus.csv path
    #[arg(long, global = true)]
    gpus: Option<PathBuf>,
    /// benchmarks.csv path
    #[arg(long, global = true)]
    benchmarks: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DomainArg {
    Cv,
    Nlp,
}

impl From<DomainArg> for Domain {
    fn from(d: DomainArg) -> Domain {
        match d {
            DomainArg::Cv => Domain::Cv,
            DomainArg::Nlp => Domain::Nlp,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SubsetArg {
    Frontier,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    Gflops,
    Joules,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    /// Multiply-add pair counted as one operation; value is doubled.
    MaddPair,
    /// Operations counted individually; value passes through.
    Op,
}

#[derive(Subcommand)]
enum Command {
    /// Load and validate the dataset; list every problem found.
    Validate,
    /// Write figure series and a summary for one domain.
    Report {
        #[arg(long, value_enum)]
        domain: DomainArg,
        /// Output directory.
        #[arg(long, default_value = "report")]
        out: PathBuf,
    },
    /// Scaling-law FLOPs estimation from ratios or resolutions.
    EstimateFlops {
        /// Base GFLOPs of the reference variant.
        #[arg(long)]
        base: f64,
        /// Depth ratio (with --w and --r).
        #[arg(long, requires = "w", requires = "r")]
        d: Option<f64>,
        /// Width ratio.
        #[arg(long)]
        w: Option<f64>,
        /// Resolution ratio.
        #[arg(long)]
        r: Option<f64>,
        /// Resolution pair BASE:TARGET for quadratic scaling.
        #[arg(long, conflicts_with = "d")]
        res: Option<String>,
        /// Growth exponent for --res (default 2).
        #[arg(long, requires = "res")]
        exponent: Option<f64>,
        /// Counting convention of --base.
        #[arg(long, value_enum)]
        convention: Option<ConventionArg>,
    },
    /// Emit the adapted GPU efficiency table as CSV.
    GpuTable {
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit an exponential trend of a metric against release date.
    Fit {
        #[arg(long, value_enum)]
        domain: DomainArg,
        #[arg(long, value_enum, default_value = "gflops")]
        metric: MetricArg,
        #[arg(long, value_enum, default_value = "frontier")]
        subset: SubsetArg,
    },
    /// List the accuracy-per-cost Pareto frontier.
    Pareto {
        #[arg(long, value_enum)]
        domain: DomainArg,
    },
    /// Per-model Joules of one forward pass.
    Energy {
        #[arg(long, value_enum)]
        domain: DomainArg,
        /// Use the launch-date-nearest GPU point instead of the fitted trend.
        #[arg(long)]
        nearest_gpu: bool,
    },
    /// Baseline crossings and per-capita scenarios.
    Forecast {
        #[arg(long, value_enum)]
        domain: DomainArg,
        #[arg(long, value_enum, default_value = "frontier")]
        subset: SubsetArg,
        /// Inferences per capita per second for the scenario line.
        #[arg(long, default_value_t = 1.0)]
        rate: f64,
        #[arg(long, default_value_t = 1)]
        population: u64,
    },
}

fn load(data: &DataArgs) -> Result<DatasetBundle, ExitCode> {
    let result = match (&data.models, &data.gpus, &data.benchmarks) {
        (Some(m), Some(g), Some(b)) => load_bundle(m, g, b),
        (None, None, None) => fixtures::default_bundle(),
        _ => {
            eprintln!("pass all of --models, --gpus and --benchmarks, or none");
            return Err(ExitCode::from(EXIT_VALIDATION));
        }
    };
    result.map_err(|errors| {
        for e in &errors {
            eprintln!("{e}");
        }
        ExitCode::from(EXIT_VALIDATION)
    })
}

fn analyzed(bundle: &DatasetBundle, domain: Domain) -> Result<DomainAnalysis, ExitCode> {
    analyze(bundle, domain).map_err(|e| {
        eprintln!("{e}");
        ExitCode::from(EXIT_ANALYSIS)
    })
}

fn run_validate(data: &DataArgs) -> ExitCode {
    match load(data) {
        Ok(bundle) => {
            println!(
                "ok: {} models, {} gpus, {} benchmarks (schema {})",
                bundle.models.len(),
                bundle.gpus.len(),
                bundle.benchmarks.len(),
                bundle.schema_version
            );
            ExitCode::SUCCESS
        }
        Err(code) => code,
    }
}

fn run_report(data: &DataArgs, domain: Domain, out: &Path) -> ExitCode {
    let bundle = match load(data) {
        Ok(b) => b,
        Err(code) => return code,
    };
    let analysis = match analyzed(&bundle, domain) {
        Ok(a) => a,
        Err(code) => return code,
    };
    match write_report(&analysis, out) {
        Ok(paths) => {
            for p in &paths {
                println!("wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("cannot write report: {e}");
            ExitCode::from(EXIT_ANALYSIS)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn run_estimate(
    base: f64,
    d: Option<f64>,
    w: Option<f64>,
    r: Option<f64>,
    res: Option<&str>,
    exponent: Option<f64>,
    convention: Option<ConventionArg>,
) -> ExitCode {
    let normalized = match convention {
        Some(ConventionArg::MaddPair) => normalize_flops(base, FlopsConvention::MaddPairAsOne),
        Some(ConventionArg::Op) | None => normalize_flops(base, FlopsConvention::OpAsOne),
    };
    let normalized = match normalized {
        Ok(v) => v,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_ANALYSIS);
        }
    };

    let estimate = if let Some(res) = res {
        let Some((base_res, target_res)) = res
            .split_once(':')
            .and_then(|(a, b)| Some((a.parse::<f64>().ok()?, b.parse::<f64>().ok()?)))
        else {
            eprintln!("--res expects BASE:TARGET, e.g. 384:518");
            return ExitCode::from(EXIT_ANALYSIS);
        };
        let p = exponent.unwrap_or(2.0);
        println!(
            "base {} gflops, resolution {} -> {}, exponent {}",
            sig6(normalized),
            sig6(base_res),
            sig6(target_res),
            sig6(p)
        );
        scale_with_exponent(normalized, base_res, target_res, p)
    } else if let (Some(d), Some(w), Some(r)) = (d, w, r) {
        println!(
            "base {} gflops, ratios d={} w={} r={}",
            sig6(normalized),
            sig6(d),
            sig6(w),
            sig6(r)
        );
        ScaleFactors::new(d, w, r).and_then(|f| compound_scale_flops(normalized, &f))
    } else {
        eprintln!("pass either --d/--w/--r or --res BASE:TARGET");
        return ExitCode::from(EXIT_ANALYSIS);
    };

    match estimate {
        Ok(v) => {
            println!("estimate: {} gflops", inferwatt::fmt::display_gflops(v));
            println!("unrounded: {}", sig6(v));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(EXIT_ANALYSIS)
        }
    }
}

fn run_gpu_table(data: &DataArgs, out: Option<&PathBuf>) -> ExitCode {
    let bundle = match load(data) {
        Ok(b) => b,
        Err(code) => return code,
    };
    let points = match inferwatt_core::hardware::build_adapted_table(&bundle) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_ANALYSIS);
        }
    };
    let csv = gpu_table_csv(&points);
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, csv) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_ANALYSIS);
            }
            println!("wrote {}", path.display());
        }
        None => print!("{csv}"),
    }
    ExitCode::SUCCESS
}

fn run_fit(data: &DataArgs, domain: Domain, metric: MetricArg, subset: SubsetArg) -> ExitCode {
    let bundle = match load(data) {
        Ok(b) => b,
        Err(code) => return code,
    };
    let analysis = match analyzed(&bundle, domain) {
        Ok(a) => a,
        Err(code) => return code,
    };
    let fit = match (metric, subset) {
        (MetricArg::Gflops, SubsetArg::Frontier) => &analysis.gflops_frontier_fit,
        (MetricArg::Gflops, SubsetArg::All) => &analysis.gflops_all_fit,
        (MetricArg::Joules, SubsetArg::Frontier) => &analysis.joules_frontier_fit,
        (MetricArg::Joules, SubsetArg::All) => &analysis.joules_all_fit,
    };
    let Some(fit) = fit else {
        eprintln!("too few points to fit");
        return ExitCode::from(EXIT_ANALYSIS);
    };
    println!(
        "{} {} fit: slope={} per year, intercept={}, r2={}, n={}",
        fit.metric_label,
        fit.subset_label,
        sig6(fit.slope),
        sig6(fit.intercept),
        sig6(fit.r_squared),
        fit.n_points
    );
    if let Ok(d) = doubling_time(fit) {
        println!("doubling time: {} years", sig6(d));
    }
    ExitCode::SUCCESS
}

fn run_pareto(data: &DataArgs, domain: Domain) -> ExitCode {
    let bundle = match load(data) {
        Ok(b) => b,
        Err(code) => return code,
    };
    let analysis = match analyzed(&bundle, domain) {
        Ok(a) => a,
        Err(code) => return code,
    };
    for p in &analysis.pareto {
        println!("{} gflops={} score={}", p.model_name, sig6(p.x), sig6(p.y));
    }
    ExitCode::SUCCESS
}

fn model_tokens(models: &[ModelRecord], name: &str) -> Option<u32> {
    models.iter().find(|m| m.name == name).and_then(|m| m.input_tokens)
}

fn run_energy(data: &DataArgs, domain: Domain, nearest: bool) -> ExitCode {
    let bundle = match load(data) {
        Ok(b) => b,
        Err(code) => return code,
    };
    let analysis = match analyzed(&bundle, domain) {
        Ok(a) => a,
        Err(code) => return code,
    };
    let estimates = if nearest {
        let refs: Vec<&ModelRecord> = analysis.models.iter().collect();
        match annotate_energy_nearest(&refs, &analysis.efficiency_points) {
            Ok(e) => e,
            Err(e) => {
                eprintln!("{e}");
                return ExitCode::from(EXIT_ANALYSIS);
            }
        }
    } else {
        match &analysis.efficiency_fit {
            Some(fit) => {
                let refs: Vec<&ModelRecord> = analysis.models.iter().collect();
                match annotate_energy(&refs, fit, fit) {
                    Ok(e) => e,
                    Err(e) => {
                        eprintln!("{e}");
                        return ExitCode::from(EXIT_ANALYSIS);
                    }
                }
            }
            None => {
                eprintln!("too few efficiency points to fit");
                return ExitCode::from(EXIT_ANALYSIS);
            }
        }
    };
    for e in &estimates {
        let flags = match e.efficiency_source {
            EfficiencySource::TrendFit { extrapolated: true } => " [extrapolated]",
            EfficiencySource::NearestGpu => " [nearest-gpu]",
            _ => "",
        };
        let per_token = model_tokens(&analysis.models, &e.model_name)
            .map(|t| format!(" joules_per_token={}", sig6(e.joules / f64::from(t))))
            .unwrap_or_default();
        println!(
            "{}: joules={} efficiency={} gflops_per_joule{}{}",
            e.model_name,
            sig6(e.joules),
            sig6(e.efficiency_used),
            per_token,
            flags
        );
    }
    ExitCode::SUCCESS
}

fn run_forecast(data: &DataArgs, domain: Domain, subset: SubsetArg, rate: f64, population: u64) -> ExitCode {
    let bundle = match load(data) {
        Ok(b) => b,
        Err(code) => return code,
    };
    let analysis = match analyzed(&bundle, domain) {
        Ok(a) => a,
        Err(code) => return code,
    };
    let wanted = match subset {
        SubsetArg::Frontier => inferwatt_core::trend::SubsetLabel::Frontier,
        SubsetArg::All => inferwatt_core::trend::SubsetLabel::All,
    };
    let mut any = false;
    for c in analysis.crossings.iter().filter(|c| c.subset == wanted) {
        any = true;
        println!(
            "{} joules fit crosses {} baseline ({} J/s) at {} ({}){}",
            c.subset,
            c.baseline,
            sig6(c.baseline_joules_per_second),
            sig6(c.fractional_year),
            c.date,
            if c.already_past { " [already crossed]" } else { "" }
        );
    }
    if !any {
        eprintln!("no crossings: fit absent or flat");
        return ExitCode::from(EXIT_ANALYSIS);
    }

    // Scenario: the newest frontier model at the requested rate.
    if let (Some(model), Some(estimate)) = (
        analysis.frontier.last(),
        analysis.frontier.last().and_then(|m| {
            analysis.estimates.iter().find(|e| e.model_name == m.name)
        }),
    ) {
        match Scenario::new(rate, population) {
            Ok(scenario) => {
                if let Ok(power) = percapita_power(estimate.joules, &scenario) {
                    let somatic = somatic_baseline(DEFAULT_KCAL_PER_DAY)
                        .expect("positive constant")
                        .joules_per_second;
                    println!(
                        "scenario: {} at {} inferences/s per capita -> {} J/s per capita ({}% of somatic), population {} -> {} J/s total",
                        model.name,
                        sig6(rate),
                        sig6(power.per_capita_watts),
                        sig6(power.per_capita_watts / somatic * 100.0),
                        population,
                        sig6(power.aggregate_watts)
                    );
                }
            }
            Err(e) => {
                eprintln!("{e}");
                return ExitCode::from(EXIT_ANALYSIS);
            }
        }
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Validate => run_validate(&cli.data),
        Command::Report { domain, out } => run_report(&cli.data, (*domain).into(), out),
        Command::EstimateFlops {
            base,
            d,
            w,
            r,
            res,
            exponent,
            convention,
        } => run_estimate(*base, *d, *w, *r, res.as_deref(), *exponent, *convention),
        Command::GpuTable { out } => run_gpu_table(&cli.data, out.as_ref()),
        Command::Fit {
            domain,
            metric,
            subset,
        } => run_fit(&cli.data, (*domain).into(), *metric, *subset),
        Command::Pareto { domain } => run_pareto(&cli.data, (*domain).into()),
        Command::Energy { domain, nearest_gpu } => run_energy(&cli.data, (*domain).into(), *nearest_gpu),
        Command::Forecast {
            domain,
            subset,
            rate,
            population,
        } => run_forecast(&cli.data, (*domain).into(), *subset, *rate, *population),
    }
}
