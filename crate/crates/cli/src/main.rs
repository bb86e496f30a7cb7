//! Command-line surface tying the curvature laboratory into reproducible
//! experiments: formula verification, profile building, delta-scaling
//! studies, biquotient reports, Cheeger demos and glue checks.
//!
//! Every run emits a JSON report {version, command, config, results,
//! timings}; reports are byte-identical for identical configs (timings go to
//! stderr so the reproducibility contract holds for the artifact itself).

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use cohomlab::builder::{build_disc_profile, glue_check, ols_fit, scaling_sweep};
use cohomlab::catalog;
use cohomlab::cheeger::cheeger_family_scan;
use cohomlab::profile::interior_grid;
use cohomlab::quotient::positive_point_search;
use cohomlab::verify::formula_cross_check;
use cohomlab::{Cohom1Metric, Scenario, WarpProfile};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "cohomlab",
    version,
    about = "curvature laboratory for cohomogeneity-one metrics and quotients"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Scenario name from the catalog, or a path to a scenario JSON file.
    #[arg(long, default_value = "so4-stiefel")]
    scenario: String,
    /// Alias of --scenario.
    #[arg(long)]
    example: Option<String>,
    /// Path to a user-supplied scenario JSON file (overrides --scenario).
    #[arg(long)]
    scenario_file: Option<PathBuf>,
    /// RNG seed; identical seeds give byte-identical reports.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Total sample budget for sweeps.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// Assertion tolerance override.
    #[arg(long)]
    tol: Option<f64>,
    /// Output path for the JSON report; derived CSVs sit next to it.
    #[arg(long, default_value = "cohomlab-report.json")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Cross-validate the curvature formulas against the independent oracles.
    VerifyCurvature(Common),
    /// Build a disc profile and emit its sample table and serialized pieces.
    BuildProfile {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1e-4)]
        delta: f64,
        #[arg(long, default_value_t = 1.0)]
        c0: f64,
        /// Concavity exponent C (at least 9).
        #[arg(long = "bigc", default_value_t = 9)]
        c_exp: usize,
    },
    /// Delta-scaling study: radius and almost-nonnegativity product slopes.
    Scaling {
        #[command(flatten)]
        common: Common,
        /// Range spec "start:end:logstepN" or a comma list.
        #[arg(long, default_value = "1e-8:1e-2:logstep7")]
        deltas: String,
        #[arg(long, default_value_t = 1.0)]
        c0: f64,
        #[arg(long = "bigc", default_value_t = 9)]
        c_exp: usize,
    },
    /// Torus rank, flat-direction rate, and a Ricci-positivity witness.
    Biquotient {
        #[command(flatten)]
        common: Common,
        /// Number of seeded identity-component sample points.
        #[arg(long, default_value_t = 200)]
        grid: usize,
    },
    /// Cheeger family scan: min sec and diameter across a delta ladder.
    CheegerDemo {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "1:9.5e-7:logstep11")]
        deltas: String,
    },
    /// Glue two built discs and bound curvature of the doubled metric.
    Glue {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1e-4)]
        delta: f64,
        #[arg(long, default_value_t = 1.0)]
        c0: f64,
        #[arg(long = "bigc", default_value_t = 9)]
        c_exp: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let outcome = run(cli);
    let elapsed = started.elapsed();
    eprintln!("wall time: {:.3}s", elapsed.as_secs_f64());
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn load(common: &Common) -> Result<Scenario, String> {
    if let Some(file) = &common.scenario_file {
        let text = std::fs::read_to_string(file).map_err(|e| e.to_string())?;
        let doc: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        return catalog::scenario_from_json(&doc).map_err(|e| e.to_string());
    }
    let name = common.example.as_deref().unwrap_or(&common.scenario);
    if Path::new(name).exists() {
        let text = std::fs::read_to_string(name).map_err(|e| e.to_string())?;
        let doc: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        return catalog::scenario_from_json(&doc).map_err(|e| e.to_string());
    }
    catalog::load_scenario::<f64>(name).map_err(|e| e.to_string())
}

fn write_report(
    out: &Path,
    command: &str,
    config: serde_json::Value,
    results: serde_json::Value,
) -> Result<(), String> {
    let report = serde_json::json!({
        "version": VERSION,
        "command": command,
        "config": config,
        "results": results,
        "timings": serde_json::Value::Null,
    });
    let text = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
    std::fs::write(out, text.as_bytes()).map_err(|e| e.to_string())?;
    println!("{}", out.display());
    Ok(())
}

fn csv_path(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("report");
    out.with_file_name(format!("{stem}-{suffix}.csv"))
}

fn write_csv(path: &Path, header: &str, rows: &[String]) -> Result<(), String> {
    let mut file = std::fs::File::create(path).map_err(|e| e.to_string())?;
    writeln!(file, "{header}").map_err(|e| e.to_string())?;
    for row in rows {
        writeln!(file, "{row}").map_err(|e| e.to_string())?;
    }
    Ok(())
}

/// "start:end:logstepN" (N log-spaced points, inclusive) or a comma list.
fn parse_deltas(spec: &str) -> Result<Vec<f64>, String> {
    if let Some((head, step)) = spec.rsplit_once(":logstep") {
        let n: usize = step.parse().map_err(|_| format!("bad logstep count in `{spec}`"))?;
        let (a, b) = head
            .split_once(':')
            .ok_or_else(|| format!("bad range spec `{spec}`"))?;
        let a: f64 = a.parse().map_err(|_| format!("bad range start in `{spec}`"))?;
        let b: f64 = b.parse().map_err(|_| format!("bad range end in `{spec}`"))?;
        if !(a > 0.0 && b > 0.0) || n < 2 {
            return Err(format!("log range needs positive endpoints and >= 2 points: `{spec}`"));
        }
        let (la, lb) = (a.ln(), b.ln());
        return Ok((0..n)
            .map(|i| (la + (lb - la) * i as f64 / (n - 1) as f64).exp())
            .collect());
    }
    spec.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| format!("bad delta `{s}`")))
        .collect()
}

fn run(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::VerifyCurvature(common) => {
            let scenario = load(&common)?;
            let tol_oracle = common.tol.unwrap_or(1e-8);
            let metric = scenario.default_metric().map_err(|e| e.to_string())?;
            let report = formula_cross_check(&metric, common.samples, common.seed)
                .map_err(|e| e.to_string())?;
            let two_block = scenario
                .two_block_metric()
                .ok()
                .map(|m| formula_cross_check(&m, common.samples, common.seed))
                .transpose()
                .map_err(|e| e.to_string())?;
            let pass = report.max_rel_oracle <= tol_oracle
                && two_block.as_ref().map_or(true, |r| {
                    r.max_rel_oracle <= tol_oracle && r.max_rel_two_block <= 1e-10
                });
            // Lower-bound certificate with a slack histogram when the
            // scenario supports the normalized two-block shape.
            let bound_report = scenario
                .two_block_metric()
                .ok()
                .map(|m| {
                    let plan = cohomlab::SamplingPlan {
                        t_points: 32,
                        pairs_per_t: (common.samples / 32 / 5).max(8),
                        seed: common.seed,
                        ..Default::default()
                    };
                    m.sec_lower_bound_check(&plan)
                })
                .transpose()
                .map_err(|e| e.to_string())?
                .map(|mut r| {
                    let csv = csv_path(&common.out, "slack");
                    let rows: Vec<String> = r
                        .slack_histogram
                        .iter()
                        .map(|(edge, count)| format!("{edge},{count}"))
                        .collect();
                    write_csv(&csv, "slack_bin_upper_edge,count", &rows)?;
                    r.example = scenario.name.to_string();
                    r.slack_histogram_csv_path = Some(csv.display().to_string());
                    Ok::<_, String>(r)
                })
                .transpose()?;
            let results = serde_json::json!({
                "scenario": scenario.name,
                "nSamples": report.n_samples,
                "maxRelOracle": report.max_rel_oracle,
                "maxRelAbc": report.max_rel_abc,
                "maxRelSymmetry": report.max_rel_symmetry,
                "twoBlock": two_block.as_ref().map(|r| serde_json::json!({
                    "nSamples": r.n_samples,
                    "maxRelOracle": r.max_rel_oracle,
                    "maxRelTwoBlock": r.max_rel_two_block,
                })),
                "lowerBoundReport": bound_report,
                "pass": pass,
            });
            if !pass {
                eprintln!(
                    "verify-curvature failed: maxRelOracle = {:e}, worst witness {:?}",
                    report.max_rel_oracle, report.worst
                );
            }
            write_report(&common.out, "verify-curvature", config_json(&common, &[]), results)?;
            Ok(pass)
        }
        Command::BuildProfile { common, delta, c0, c_exp } => {
            let disc = build_disc_profile(delta, c0, c_exp).map_err(|e| e.to_string())?;
            disc.validate().map_err(|e| e.to_string())?;
            let grid = interior_grid(1.0, disc.r, 512);
            let rows: Vec<String> = grid
                .iter()
                .map(|&t| {
                    let j = disc.profile.eval(t).expect("grid in domain");
                    let margin = -(c_exp as f64 * j.df * j.df + j.f * j.ddf);
                    format!("{t},{},{},{},{margin}", j.f, j.df, j.ddf)
                })
                .collect();
            let csv = csv_path(&common.out, "profile");
            write_csv(&csv, "t,f,f_prime,f_double_prime,ineq_margin", &rows)?;
            let results = serde_json::json!({
                "delta": delta,
                "c0": c0,
                "C": c_exp,
                "r0": disc.r0,
                "r": disc.r,
                "plateauStart": disc.plateau_start,
                "profile": disc.profile.to_json(),
                "csv": csv.display().to_string(),
            });
            write_report(
                &common.out,
                "build-profile",
                config_json(
                    &common,
                    &[
                        ("delta", delta.into()),
                        ("c0", c0.into()),
                        ("C", (c_exp as u64).into()),
                    ],
                ),
                results,
            )?;
            Ok(true)
        }
        Command::Scaling { common, deltas, c0, c_exp } => {
            let scenario = load(&common)?;
            let deltas_v = parse_deltas(&deltas)?;
            let plan = cohomlab::SamplingPlan {
                t_points: 16,
                pairs_per_t: (common.samples / 16 / 5).max(8),
                seed: common.seed,
                ..Default::default()
            };
            let rows = scaling_sweep(&scenario, &deltas_v, c0, c_exp, &plan)
                .map_err(|e| e.to_string())?;
            let csv_rows: Vec<String> = rows
                .iter()
                .map(|(r, _)| {
                    format!(
                        "{},{},{},{},{},{}",
                        r.delta, r.r0, r.r, r.min_sec, r.diam_est, r.product
                    )
                })
                .collect();
            let csv = csv_path(&common.out, "scaling");
            write_csv(&csv, "delta,r0,r,min_sec,diam_est,product", &csv_rows)?;
            let fit = |sel: &dyn Fn(&cohomlab::builder::ScalingRow) -> f64| -> (f64, f64, f64) {
                let pts: Vec<(f64, f64)> =
                    rows.iter().map(|(r, _)| (r.delta.ln(), sel(r).abs().ln())).collect();
                ols_fit(&pts)
            };
            let (slope_r0, _, res_r0) = fit(&|r| r.r0);
            let (slope_r, _, res_r) = fit(&|r| r.r);
            let (slope_product, _, res_p) = fit(&|r| r.product);
            let pass =
                (-0.1867..=-0.1467).contains(&slope_r0) && (0.62..=0.72).contains(&slope_product);
            let results = serde_json::json!({
                "scenario": scenario.name,
                "slopeR0": slope_r0,
                "slopeR": slope_r,
                "slopeProduct": slope_product,
                "residuals": {"r0": res_r0, "r": res_r, "product": res_p},
                "csv": csv.display().to_string(),
                "pass": pass,
            });
            if !pass {
                eprintln!(
                    "scaling failed: slopeR0 = {slope_r0:.4} (target -1/6), \
                     slopeProduct = {slope_product:.4} (target 2/3)"
                );
            }
            write_report(
                &common.out,
                "scaling",
                config_json(
                    &common,
                    &[
                        ("deltas", deltas.clone().into()),
                        ("c0", c0.into()),
                        ("C", (c_exp as u64).into()),
                    ],
                ),
                results,
            )?;
            Ok(pass)
        }
        Command::Biquotient { common, grid } => {
            let scenario = load(&common)?;
            let ctx = scenario
                .quotient
                .as_ref()
                .ok_or("scenario carries no quotient context")?
                .with_samples(grid, common.seed)
                .map_err(|e| e.to_string())?;
            let torus_rank = ctx.torus_rank().map_err(|e| e.to_string())?;
            let mut flat_free = 0usize;
            for p in ctx.sample_points() {
                if ctx.flat_directions(p).map_err(|e| e.to_string())?.is_empty() {
                    flat_free += 1;
                }
            }
            let rate = flat_free as f64 / ctx.sample_points().len() as f64;
            // Ricci-positivity witness over a built profile when the scenario
            // has the two-block shape.
            let witness = if scenario.decomposition.num_m_blocks() == 2
                && scenario.decomposition.prefix_is_subalgebra(1)
                && !scenario.decomposition.block(1).is_empty()
            {
                let disc = build_disc_profile(1e-4, 1.0, 9).map_err(|e| e.to_string())?;
                let metric = Cohom1Metric::two_block(
                    scenario.decomposition.clone(),
                    (1.0, disc.r),
                    disc.profile.clone(),
                )
                .map_err(|e| e.to_string())?;
                let t_grid = interior_grid(disc.r0 + 0.05, disc.plateau_start - 0.05, 8);
                positive_point_search(&metric, &ctx, &t_grid, 16, common.seed)
                    .map_err(|e| e.to_string())?
                    .map(|w| {
                        serde_json::json!({
                            "pointIndex": w.point_index,
                            "t": w.t,
                            "minBound": w.min_bound,
                        })
                    })
            } else {
                None
            };
            let results = serde_json::json!({
                "torusRank": torus_rank,
                "flatDirectionRate": rate,
                "ricciPositiveWitness": witness,
            });
            write_report(
                &common.out,
                "biquotient",
                config_json(&common, &[("grid", (grid as u64).into())]),
                results,
            )?;
            Ok(true)
        }
        Command::CheegerDemo { common, deltas } => {
            let scenario = load(&common)?;
            let deltas_v = parse_deltas(&deltas)?;
            // Demo metric: constant stretched weights with somewhere-negative
            // curvature before deformation.
            let (lo, hi) = (0.0, 2.0);
            let profiles: Vec<WarpProfile> = (0..scenario.decomposition.num_m_blocks())
                .map(|i| {
                    let v = if i == 0 { 3.0 } else { 0.5 };
                    WarpProfile::constant(lo, hi, v)
                })
                .collect::<Result<_, _>>()
                .map_err(|e: cohomlab::Error| e.to_string())?;
            let metric = Cohom1Metric::new(scenario.decomposition.clone(), (lo, hi), profiles)
                .map_err(|e| e.to_string())?;
            let plan = cohomlab::SamplingPlan {
                t_points: 8,
                pairs_per_t: (common.samples / 8 / 5).max(16),
                seed: common.seed,
                ..Default::default()
            };
            let rows = cheeger_family_scan(&metric, &deltas_v, &scenario.slice_constants, &plan)
                .map_err(|e| e.to_string())?;
            let csv_rows: Vec<String> = rows
                .iter()
                .map(|(r, _)| format!("{},{},{},{}", r.delta, r.min_sec, r.diam_est, r.product))
                .collect();
            let csv = csv_path(&common.out, "cheeger");
            write_csv(&csv, "delta,min_sec,diam_est,product", &csv_rows)?;
            // Trend: the negative part of the product must be nondecreasing
            // toward zero as delta decreases.
            let neg: Vec<f64> = rows.iter().map(|(r, _)| r.product.min(0.0)).collect();
            let pass = neg.windows(2).all(|w| w[1] >= w[0] - 1e-12);
            let results = serde_json::json!({
                "scenario": scenario.name,
                "rows": rows.iter().map(|(r, _)| serde_json::json!({
                    "delta": r.delta, "minSec": r.min_sec,
                    "diamEst": r.diam_est, "product": r.product,
                })).collect::<Vec<_>>(),
                "negativePartNondecreasing": pass,
                "csv": csv.display().to_string(),
            });
            if !pass {
                eprintln!("cheeger-demo failed: product trend not nondecreasing toward zero");
            }
            write_report(
                &common.out,
                "cheeger-demo",
                config_json(&common, &[("deltas", deltas.clone().into())]),
                results,
            )?;
            Ok(pass)
        }
        Command::Glue { common, delta, c0, c_exp } => {
            let scenario = load(&common)?;
            let disc = build_disc_profile(delta, c0, c_exp).map_err(|e| e.to_string())?;
            let plan = cohomlab::SamplingPlan {
                t_points: 16,
                pairs_per_t: (common.samples / 16 / 5).max(8),
                seed: common.seed,
                ..Default::default()
            };
            let glue = glue_check(&disc, &disc, &scenario, &plan).map_err(|e| e.to_string())?;
            let pass = glue.min_sec >= -delta * (1.0 + 1e-6) && glue.min_ricci_bound >= -1e-10;
            let results = serde_json::json!({
                "scenario": scenario.name,
                "boundaryMismatch": glue.boundary_mismatch,
                "minSec": glue.min_sec,
                "minRicciBound": glue.min_ricci_bound,
                "diamFull": glue.diam_full,
                "diamEst": glue.diam_est,
                "secLowerBound": glue.sec_lower_bound,
                "product": glue.product,
                "pass": pass,
            });
            if !pass {
                eprintln!(
                    "glue failed: minSec = {:e} (allowed >= {:e}), minRicci = {:e}; witness {:?}",
                    glue.min_sec,
                    -delta * (1.0 + 1e-6),
                    glue.min_ricci_bound,
                    glue.report.min_sec_witness
                );
            }
            write_report(
                &common.out,
                "glue",
                config_json(
                    &common,
                    &[
                        ("delta", delta.into()),
                        ("c0", c0.into()),
                        ("C", (c_exp as u64).into()),
                    ],
                ),
                results,
            )?;
            Ok(pass)
        }
    }
}

fn config_json(common: &Common, extra: &[(&str, serde_json::Value)]) -> serde_json::Value {
    let mut map = serde_json::Map::new();
    map.insert("scenario".into(), common.scenario.clone().into());
    if let Some(example) = &common.example {
        map.insert("example".into(), example.clone().into());
    }
    map.insert("seed".into(), common.seed.into());
    map.insert("samples".into(), (common.samples as u64).into());
    if let Some(tol) = common.tol {
        map.insert("tol".into(), tol.into());
    }
    map.insert("out".into(), common.out.display().to_string().into());
    for (k, v) in extra {
        map.insert((*k).to_string(), v.clone());
    }
    serde_json::Value::Object(map)
}
