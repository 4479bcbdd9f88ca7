use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use ksil_core::io::LabelColumn;
use ksil_core::{
    approximation_battery, auto_tune_p, evaluate_approximations, exact_silhouette,
    generate_synthetic, run_comparison_protocol, run_kmeans, run_ksil, tune_neighborhood,
    AlgorithmSpec, ApproxEvalRow, BaselineWeighting, Dataset, Error, InitMethod, IterationRecord,
    KsilConfig, ProtocolConfig, RunResult, Sensitivity, SyntheticSpec, Termination, DEFAULT_H_GRID,
    DEFAULT_MAX_ITER, DEFAULT_TAU,
};

use crate::output;
use crate::{
    ApproxEvalArgs, BenchArgs, CliAlgo, ClusterArgs, CmdError, CmdResult, GenDataArgs, InputArgs,
    SweepPArgs,
};

/// Full exact aggregates are recomputed for reports up to this size.
const EXACT_REPORT_CAP: usize = 20_000;

fn load_input(input: &InputArgs, seed: u64) -> Result<Dataset, CmdError> {
    let data = match (&input.input, &input.family) {
        (Some(path), None) => {
            let label = input.label_column.as_deref().map(LabelColumn::parse);
            ksil_core::io::load_csv(path, input.has_header, label.as_ref())?
        }
        (None, Some(family)) => {
            generate_synthetic(&SyntheticSpec::for_family(family.to_family(), seed))?
        }
        _ => {
            return Err(CmdError::Usage(
                "give exactly one of --input or --family".into(),
            ))
        }
    };
    if input.standardize {
        Ok(ksil_core::standardize(&data)?)
    } else {
        Ok(data)
    }
}

#[derive(Serialize)]
struct ExactAggregates {
    micro: f64,
    macro_avg: f64,
    combined: f64,
}

#[derive(Serialize)]
struct ClusterReport<'a> {
    dataset: &'a str,
    n: usize,
    dim: usize,
    algorithm: String,
    k: usize,
    seed: u64,
    objective: &'static str,
    best_objective: f64,
    iterations_run: usize,
    terminated_by: &'static str,
    tuned_sensitivity: Option<f64>,
    tuned_neighbors: Option<usize>,
    cluster_sizes: Vec<usize>,
    exact: Option<ExactAggregates>,
    trace: &'a [IterationRecord],
}

fn termination_label(t: Termination) -> &'static str {
    match t {
        Termination::Threshold => "threshold",
        Termination::MaxIter => "max_iter",
    }
}

pub fn cluster(args: ClusterArgs) -> CmdResult {
    let data = load_input(&args.input, args.seed)?;
    let objective = args.ksil.objective();
    let mut tuned_sensitivity = None;
    let mut tuned_neighbors = None;
    let (label, run): (String, RunResult) = match args.algo {
        CliAlgo::Ksil => {
            let mut cfg = KsilConfig::new(args.k)
                .with_seed(args.seed)
                .with_objective(objective)
                .with_scheme(args.ksil.scheme.to_scheme())
                .with_sensitivity(args.ksil.sensitivity());
            cfg.approximate = args.ksil.approx;
            cfg.sample_size = args.ksil.sample_size;
            cfg.tau = args.ksil.tau;
            cfg.max_iter = args.ksil.max_iter;
            let run = if matches!(cfg.sensitivity, Sensitivity::Auto(_)) {
                let (best_p, run) = auto_tune_p(&data, &cfg)?;
                tuned_sensitivity = Some(best_p);
                run
            } else {
                run_ksil(&data, &cfg)?
            };
            let scheme = args.ksil.scheme.to_scheme().label();
            (format!("ksil({scheme})"), run)
        }
        CliAlgo::Kmeans => {
            let run = run_kmeans(
                &data,
                args.k,
                InitMethod::KMeansPlusPlus,
                objective,
                args.ksil.tau,
                args.ksil.max_iter,
                args.seed,
            )?;
            ("kmeans".into(), run)
        }
        CliAlgo::Density | CliAlgo::Lof => {
            let weighting = if args.algo == CliAlgo::Density {
                BaselineWeighting::Density
            } else {
                BaselineWeighting::Lof
            };
            let (h, run) = tune_neighborhood(
                &data,
                args.k,
                weighting,
                objective,
                &DEFAULT_H_GRID,
                InitMethod::KMeansPlusPlus,
                args.ksil.tau,
                args.ksil.max_iter,
                args.seed,
            )?;
            tuned_neighbors = Some(h);
            let name = if args.algo == CliAlgo::Density {
                "density"
            } else {
                "lof"
            };
            (format!("{name}(h={h})"), run)
        }
    };

    let exact = if data.n() <= EXACT_REPORT_CAP {
        let all: Vec<usize> = (0..data.n()).collect();
        let report = exact_silhouette(&data, &run.best_partition, &all)?;
        Some(ExactAggregates {
            micro: report.micro,
            macro_avg: report.macro_avg,
            combined: args.ksil.alpha * report.micro + (1.0 - args.ksil.alpha) * report.macro_avg,
        })
    } else {
        None
    };

    println!(
        "dataset: {} (n={}, d={})",
        data.name(),
        data.n(),
        data.dim()
    );
    println!("algorithm: {label}  k: {}  seed: {}", args.k, args.seed);
    if let Some(p) = tuned_sensitivity {
        println!("auto-tuned sensitivity p: {p}");
    }
    println!(
        "best objective ({}): {:.6}",
        objective.label(),
        run.best_objective
    );
    println!(
        "iterations: {} (stopped by {})",
        run.iterations_run,
        termination_label(run.terminated_by)
    );
    if let Some(ref ex) = exact {
        println!(
            "exact silhouette: S_M = {:.6}, S_m = {:.6}, combined = {:.6}",
            ex.macro_avg, ex.micro, ex.combined
        );
    }
    println!("cluster sizes: {:?}", run.best_partition.cluster_sizes());

    if let Some(dir) = &args.output {
        std::fs::create_dir_all(dir).map_err(Error::Io)?;
        output::write_labels_csv(&dir.join("labels.csv"), &run.best_partition.assignments)?;
        output::write_centroids_csv(&dir.join("centroids.csv"), &run.best_partition.centroids)?;
        let report = ClusterReport {
            dataset: data.name(),
            n: data.n(),
            dim: data.dim(),
            algorithm: label,
            k: args.k,
            seed: args.seed,
            objective: objective.label(),
            best_objective: run.best_objective,
            iterations_run: run.iterations_run,
            terminated_by: termination_label(run.terminated_by),
            tuned_sensitivity,
            tuned_neighbors,
            cluster_sizes: run.best_partition.cluster_sizes(),
            exact,
            trace: &run.trace,
        };
        write_json(&dir.join("report.json"), &report)?;
        println!(
            "wrote labels.csv, centroids.csv, report.json to {}",
            dir.display()
        );
    }
    Ok(())
}

fn parse_k_range(s: &str) -> Result<Vec<usize>, CmdError> {
    let parts: Vec<&str> = s.split("..").collect();
    let bad = || CmdError::Usage(format!("cannot parse k range \"{s}\"; expected A..B"));
    if parts.len() != 2 {
        return Err(bad());
    }
    let a: usize = parts[0].trim().parse().map_err(|_| bad())?;
    let b: usize = parts[1].trim().parse().map_err(|_| bad())?;
    if a < 2 || b < a {
        return Err(CmdError::Usage(format!(
            "k range {a}..{b} must satisfy 2 <= A <= B"
        )));
    }
    Ok((a..=b).collect())
}

pub fn bench(args: BenchArgs) -> CmdResult {
    let data = load_input(&args.input, args.seed)?;
    let k_values = parse_k_range(&args.k_range)?;
    let objective = args.ksil.objective();
    let gt_k = args.gt_k.or_else(|| data.label_count());
    if args.algo.is_empty() {
        return Err(CmdError::Usage("at least one --algo is required".into()));
    }
    // Sensitivity default for the protocol is auto-tuning.
    let sensitivity = if args.ksil.p.is_some() {
        args.ksil.sensitivity()
    } else {
        Sensitivity::Auto(ksil_core::DEFAULT_P_GRID.to_vec())
    };
    // Neighborhood sizes are tuned once per weighting, on the reference k.
    let reference_k = gt_k
        .filter(|k| k_values.contains(k))
        .unwrap_or(k_values[k_values.len() / 2]);
    let mut algorithms = Vec::new();
    for algo in &args.algo {
        algorithms.push(match algo {
            CliAlgo::Ksil => AlgorithmSpec::Ksil {
                scheme: args.ksil.scheme.to_scheme(),
                sensitivity: sensitivity.clone(),
                approximate: args.ksil.approx,
                sample_size: args.ksil.sample_size,
            },
            CliAlgo::Kmeans => AlgorithmSpec::KMeans,
            CliAlgo::Density => {
                let (h, _) = tune_neighborhood(
                    &data,
                    reference_k,
                    BaselineWeighting::Density,
                    objective,
                    &DEFAULT_H_GRID,
                    InitMethod::KMeansPlusPlus,
                    args.ksil.tau,
                    args.ksil.max_iter,
                    args.seed,
                )?;
                AlgorithmSpec::Density { h }
            }
            CliAlgo::Lof => {
                let (h, _) = tune_neighborhood(
                    &data,
                    reference_k,
                    BaselineWeighting::Lof,
                    objective,
                    &DEFAULT_H_GRID,
                    InitMethod::KMeansPlusPlus,
                    args.ksil.tau,
                    args.ksil.max_iter,
                    args.seed,
                )?;
                AlgorithmSpec::Lof { h }
            }
        });
    }
    let cfg = ProtocolConfig {
        k_values,
        trials: args.trials,
        objective,
        algorithms,
        ground_truth_k: gt_k,
        init: InitMethod::KMeansPlusPlus,
        tau: args.ksil.tau,
        max_iter: args.ksil.max_iter,
        seed: args.seed,
        alternative: if args.two_sided {
            ksil_core::Alternative::TwoSided
        } else {
            ksil_core::Alternative::Greater
        },
    };
    let report = run_comparison_protocol(&data, &cfg)?;
    print!("{}", output::render_bench_report(&report));
    if let Some(path) = &args.output {
        write_json(path, &report)?;
        println!("wrote report to {}", path.display());
    }
    Ok(())
}

pub fn approx_eval(args: ApproxEvalArgs) -> CmdResult {
    let rows: Vec<ApproxEvalRow> = if let Some(path) = &args.input {
        let label = args.label_column.as_deref().map(LabelColumn::parse);
        let data = ksil_core::io::load_csv(path, args.has_header, label.as_ref())?;
        let k = args
            .k
            .or_else(|| data.label_count())
            .ok_or_else(|| CmdError::Usage("--k is required without a label column".into()))?;
        vec![evaluate_approximations(
            &data,
            k,
            InitMethod::KMeansPlusPlus,
            DEFAULT_TAU,
            DEFAULT_MAX_ITER,
            args.seed,
        )?]
    } else {
        approximation_battery(args.seed)
            .into_iter()
            .map(|(spec, k)| {
                let data = generate_synthetic(&spec)?;
                evaluate_approximations(
                    &data,
                    k,
                    InitMethod::KMeansPlusPlus,
                    DEFAULT_TAU,
                    DEFAULT_MAX_ITER,
                    spec.seed,
                )
            })
            .collect::<Result<_, _>>()?
    };
    print!("{}", output::render_approx_table(&rows));
    if let Some(path) = &args.output {
        output::write_approx_csv(path, &rows)?;
        println!("wrote table to {}", path.display());
    }
    Ok(())
}

pub fn gen_data(args: GenDataArgs) -> CmdResult {
    let spec = match args.family {
        crate::CliFamily::Blobs => SyntheticSpec::blobs(
            args.n,
            args.d,
            args.k,
            args.sigma,
            args.noise_fraction,
            args.seed,
        ),
        other => SyntheticSpec::for_family(other.to_family(), args.seed),
    };
    let data = generate_synthetic(&spec)?;
    ksil_core::io::write_dataset_csv(&data, &args.output)?;
    println!(
        "wrote {} (n={}, d={}, classes={})",
        args.output.display(),
        data.n(),
        data.dim(),
        data.label_count().unwrap_or(0)
    );
    Ok(())
}

pub fn sweep_p(args: SweepPArgs) -> CmdResult {
    let data = load_input(&args.input, args.seed)?;
    let k = args
        .k
        .or_else(|| {
            args.input
                .family
                .map(|f| SyntheticSpec::for_family(f.to_family(), args.seed).ground_truth_k())
        })
        .or_else(|| data.label_count())
        .ok_or_else(|| CmdError::Usage("--k is required for unlabeled inputs".into()))?;
    let objective = args.objective.to_objective(args.alpha);
    let file = File::create(&args.output).map_err(Error::Io)?;
    let mut w = BufWriter::new(file);
    writeln!(w, "p,scheme,objective_value").map_err(Error::Io)?;
    for scheme in [
        ksil_core::WeightScheme::Power,
        ksil_core::WeightScheme::Exponential,
    ] {
        for &p in ksil_core::DEFAULT_P_GRID.iter() {
            let mut cfg = KsilConfig::new(k)
                .with_seed(args.seed)
                .with_objective(objective)
                .with_scheme(scheme)
                .with_sensitivity(Sensitivity::Fixed(p));
            cfg.approximate = args.approx;
            cfg.tau = args.tau;
            cfg.max_iter = args.max_iter;
            let run = run_ksil(&data, &cfg)?;
            writeln!(w, "{p},{},{}", scheme.label(), run.best_objective).map_err(Error::Io)?;
            println!(
                "p = {p:>4}  scheme = {:<5}  {} objective = {:.6}",
                scheme.label(),
                objective.label(),
                run.best_objective
            );
        }
    }
    w.flush().map_err(Error::Io)?;
    println!("wrote sweep data to {}", args.output.display());
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CmdError> {
    let json = serde_json::to_string_pretty(value)
        .map_err(|e| CmdError::Data(Error::InvalidConfig(format!("serialization: {e}"))))?;
    let mut file = File::create(path).map_err(Error::Io)?;
    file.write_all(json.as_bytes()).map_err(Error::Io)?;
    file.write_all(b"\n").map_err(Error::Io)?;
    Ok(())
}
