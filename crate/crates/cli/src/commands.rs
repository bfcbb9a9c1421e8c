//! Subcommand implementations. Each returns its outputs as text so callers
//! (the binary, tests) decide where bytes go.

use std::path::{Path, PathBuf};

use bsi_core::{
    all_baselines, best_of_restarts, build_allocation_dataset, evaluate_partition,
    reversal_bsi_closed_form, reversal_bsi_numeric, sample_mixture, AllocationScenario,
    ClusteringResult, Distribution, GaussScenario, GeometricMeasure, KMeansConfig, LabeledDataset,
    Objective,
};
use serde_json::{json, Map, Value};

use crate::error::CliError;
use crate::io::{dataset_csv, fmt17, read_table, ColumnRef};
use crate::report::{baselines_value, partition_section, partition_warnings, render, Format, SCHEMA_VERSION};

/// Options shared by every subcommand.
#[derive(Debug, Clone, Default)]
pub struct Global {
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

/// What a command produced.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Output {
    /// Main result: written to `--out`, or stdout.
    pub primary: String,
    /// Secondary files (labels, point clouds).
    pub files: Vec<(PathBuf, String)>,
    /// Human-readable notes for stderr.
    pub diagnostics: Vec<String>,
}

impl Output {
    /// Writes the primary output to `out` (or stdout) and every secondary file.
    pub fn emit(&self, out: Option<&Path>) -> Result<(), CliError> {
        let write = |p: &Path, s: &str| {
            std::fs::write(p, s).map_err(|e| CliError::Output(format!("{}: {e}", p.display())))
        };
        match out {
            Some(p) => write(p, &self.primary)?,
            None => print!("{}", self.primary),
        }
        for (p, s) in &self.files {
            write(p, s)?;
        }
        for d in &self.diagnostics {
            eprintln!("{d}");
        }
        Ok(())
    }
}

/// `<out stem>.<suffix>` next to `out`, if there is an `out`.
fn sibling(out: Option<&Path>, suffix: &str) -> Option<PathBuf> {
    let out = out?;
    let stem = out.file_stem()?.to_string_lossy().into_owned();
    Some(out.with_file_name(format!("{stem}.{suffix}")))
}

fn header(command: &str, g: &Global, config: Value) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    m.insert("command".into(), json!(command));
    m.insert("seed".into(), json!(g.seed));
    m.insert("config".into(), config);
    m
}

fn measure_name(m: GeometricMeasure) -> &'static str {
    match m {
        GeometricMeasure::Spread => "spread",
        GeometricMeasure::Volume => "volume",
    }
}

fn objective_name(o: Objective) -> &'static str {
    match o {
        Objective::MaxBsi => "bsi",
        Objective::MinInertia => "inertia",
    }
}

/// Baselines as a report value; failures become warnings rather than errors.
fn try_baselines(ds: &LabeledDataset, warnings: &mut Vec<String>) -> Value {
    match all_baselines(ds) {
        Ok(b) => {
            if b.calinski_harabasz.is_infinite() {
                warnings.push("calinski_harabasz is infinite (zero within-cluster dispersion); reported as null".into());
            }
            if b.davies_bouldin.is_infinite() {
                warnings.push("davies_bouldin is infinite (coincident centroids); reported as null".into());
            }
            baselines_value(&b)
        }
        Err(e) => {
            warnings.push(format!("baselines unavailable: {e}"));
            Value::Null
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScoreArgs {
    pub input: PathBuf,
    pub label_column: ColumnRef,
    pub exclude: Vec<String>,
    pub measure: GeometricMeasure,
    pub with_baselines: bool,
}

/// Index of a labelled CSV.
pub fn score(args: &ScoreArgs, g: &Global) -> Result<Output, CliError> {
    let table = read_table(&args.input, Some(&args.label_column), &args.exclude)?;
    let ds = table.labeled()?;
    let names = &table.labels.as_ref().expect("label column requested").1;
    let eval = evaluate_partition(&ds, args.measure)?;
    let mut warnings = partition_warnings(&eval, ds.d());

    let mut m = header(
        "score",
        g,
        json!({
            "input": args.input.display().to_string(),
            "label_column": args.label_column.describe(),
            "exclude": args.exclude,
            "measure": measure_name(args.measure),
            "with_baselines": args.with_baselines,
        }),
    );
    m.insert("dataset".into(), json!({"n": ds.n(), "d": ds.d(), "k": ds.k(), "features": table.feature_names}));
    m.insert("label_mapping".into(), label_mapping(names));
    m.extend(partition_section(&eval, Some(names)));
    let baselines = if args.with_baselines { try_baselines(&ds, &mut warnings) } else { Value::Null };
    m.insert("baselines".into(), baselines);
    m.insert("warnings".into(), json!(warnings));
    Ok(Output {
        primary: render(Value::Object(m), g.format),
        diagnostics: warnings.iter().map(|w| format!("warning: {w}")).collect(),
        ..Default::default()
    })
}

fn label_mapping(names: &[String]) -> Value {
    Value::Array(
        names
            .iter()
            .enumerate()
            .map(|(i, n)| json!({"cluster_id": i + 1, "label": n}))
            .collect(),
    )
}

#[derive(Debug, Clone)]
pub struct KMeansArgs {
    pub input: PathBuf,
    pub k: usize,
    pub restarts: usize,
    pub objective: Objective,
    pub measure: GeometricMeasure,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub exclude: Vec<String>,
    /// Held out of the features and scored as a reference partition.
    pub label_column: Option<ColumnRef>,
    pub with_baselines: bool,
    pub labels_out: Option<PathBuf>,
}

fn clustering_value(best: &ClusteringResult, objective: Objective, restarts: usize) -> Value {
    json!({
        "objective": objective_name(objective),
        "restarts": restarts,
        "restart_index": best.restart_index,
        "inertia": best.inertia,
        "iterations_used": best.iterations_used,
        "singleton_repairs": best.singleton_repairs,
        "cluster_sizes": best.cluster_sizes(),
        "centroids": best.centroids.rows().map(|r| r.to_vec()).collect::<Vec<_>>(),
    })
}

/// K-means on a CSV, scored by the index.
pub fn kmeans(args: &KMeansArgs, g: &Global) -> Result<Output, CliError> {
    let table = read_table(&args.input, args.label_column.as_ref(), &args.exclude)?;
    let cfg = KMeansConfig::new(args.k)
        .restarts(args.restarts)
        .seed(g.seed)
        .max_iterations(args.max_iterations)
        .tolerance(args.tolerance)
        .measure(args.measure);
    let best = best_of_restarts(&table.points, &cfg, args.objective)?;
    let ds = best.labeled(&table.points)?;
    let eval = evaluate_partition(&ds, args.measure)?;
    let mut warnings = partition_warnings(&eval, ds.d());
    if best.iterations_used >= args.max_iterations {
        warnings.push(format!("winning restart hit max_iterations = {}", args.max_iterations));
    }

    let mut m = header(
        "kmeans",
        g,
        json!({
            "input": args.input.display().to_string(),
            "k": args.k,
            "restarts": args.restarts,
            "objective": objective_name(args.objective),
            "measure": measure_name(args.measure),
            "max_iterations": args.max_iterations,
            "tolerance": args.tolerance,
            "exclude": args.exclude,
            "label_column": args.label_column.as_ref().map(ColumnRef::describe),
            "with_baselines": args.with_baselines,
        }),
    );
    m.insert("dataset".into(), json!({"n": ds.n(), "d": ds.d(), "k": ds.k(), "features": table.feature_names}));
    m.extend(partition_section(&eval, None));
    m.insert("clustering".into(), clustering_value(&best, args.objective, args.restarts));
    let baselines = if args.with_baselines { try_baselines(&ds, &mut warnings) } else { Value::Null };
    m.insert("baselines".into(), baselines);
    let reference = match &table.labels {
        Some((ids, names)) => {
            let truth = LabeledDataset::new(table.points.clone(), ids.clone(), names.len())?;
            let r = evaluate_partition(&truth, args.measure)?;
            json!({"label_mapping": label_mapping(names), "bsi": r.report})
        }
        None => Value::Null,
    };
    m.insert("reference".into(), reference);
    m.insert("warnings".into(), json!(warnings));

    let labels_path = args.labels_out.clone().or_else(|| sibling(g.out.as_deref(), "labels.csv"));
    let mut out = Output {
        primary: render(Value::Object(m), g.format),
        diagnostics: warnings.iter().map(|w| format!("warning: {w}")).collect(),
        ..Default::default()
    };
    if let Some(p) = labels_path {
        let mut s = String::from("row,cluster\n");
        for (i, a) in best.assignments.iter().enumerate() {
            s.push_str(&format!("{},{}\n", i + 1, a + 1));
        }
        out.files.push((p, s));
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct SweepArgs {
    pub population: Vec<f64>,
    pub beta_min: f64,
    pub beta_max: f64,
    pub steps: usize,
    pub n: usize,
    pub dim: usize,
    pub measure: GeometricMeasure,
}

/// One row of a beta sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub beta: f64,
    pub r: Vec<f64>,
    /// `(bsi, jsd_bits)`, or the reason the row failed.
    pub result: Result<(f64, f64), String>,
}

pub fn grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..steps)
            .map(|i| if i == steps - 1 { hi } else { lo + (hi - lo) * i as f64 / (steps - 1) as f64 })
            .collect(),
    }
}

/// Evaluates every grid point. Per-point failures are recorded, not raised.
pub fn sweep_rows(args: &SweepArgs, seed: u64) -> Result<Vec<SweepRow>, CliError> {
    let population = Distribution::new(args.population.clone())?;
    if args.steps < 2 {
        return Err(CliError::input("steps must be at least 2"));
    }
    if !(-1.0..=1.0).contains(&args.beta_min) || !(-1.0..=1.0).contains(&args.beta_max) || args.beta_min > args.beta_max {
        return Err(CliError::input("need -1 <= beta_min <= beta_max <= 1"));
    }
    Ok(grid(args.beta_min, args.beta_max, args.steps)
        .into_iter()
        .map(|beta| {
            let r = bsi_core::allocation_vector(&population, beta).unwrap_or_default();
            let result = AllocationScenario::new(population.clone(), beta, args.n, args.dim, seed)
                .and_then(|s| build_allocation_dataset(&s))
                .and_then(|ds| evaluate_partition(&ds, args.measure))
                .map(|e| (e.report.bsi, e.report.jsd_bits))
                .map_err(|e| e.to_string());
            SweepRow { beta, r, result }
        })
        .collect())
}

/// BSI as a function of allocation skew.
pub fn sweep_beta(args: &SweepArgs, g: &Global) -> Result<Output, CliError> {
    let rows = sweep_rows(args, g.seed)?;
    let k = args.population.len();
    let diagnostics: Vec<String> = rows
        .iter()
        .filter_map(|r| r.result.as_ref().err().map(|e| format!("beta = {}: {e}", fmt17(r.beta))))
        .collect();
    if rows.iter().all(|r| r.result.is_err()) {
        return Err(CliError::Degenerate(format!("every sweep point failed; first: {}", diagnostics[0])));
    }
    let primary = match g.format {
        Format::Csv => {
            let mut s = String::from("beta,bsi,jsd_bits");
            (1..=k).for_each(|i| s.push_str(&format!(",r_{i}")));
            s.push('\n');
            for row in &rows {
                let (b, j) = match &row.result {
                    Ok((b, j)) => (fmt17(*b), fmt17(*j)),
                    Err(_) => (String::new(), String::new()),
                };
                let rs: Vec<String> = row.r.iter().map(|v| fmt17(*v)).collect();
                s.push_str(&format!("{},{b},{j},{}\n", fmt17(row.beta), rs.join(",")));
            }
            s
        }
        Format::Json => {
            let mut m = header(
                "sweep-beta",
                g,
                json!({
                    "population": args.population,
                    "beta_min": args.beta_min,
                    "beta_max": args.beta_max,
                    "steps": args.steps,
                    "n": args.n,
                    "dim": args.dim,
                    "measure": measure_name(args.measure),
                }),
            );
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| match &r.result {
                    Ok((b, j)) => json!({"beta": r.beta, "bsi": b, "jsd_bits": j, "r": r.r}),
                    Err(e) => json!({"beta": r.beta, "bsi": null, "jsd_bits": null, "r": r.r, "error": e}),
                })
                .collect();
            m.insert("rows".into(), Value::Array(rows));
            m.insert("warnings".into(), json!(diagnostics));
            render(Value::Object(m), Format::Json)
        }
    };
    Ok(Output {
        primary,
        diagnostics: diagnostics.into_iter().map(|d| format!("warning: {d}")).collect(),
        ..Default::default()
    })
}

/// `(alpha, closed form, numeric)` on an evenly spaced grid over `[0, 1]`.
pub fn reversal_rows(steps: usize) -> Result<Vec<(f64, f64, f64)>, CliError> {
    if steps < 2 {
        return Err(CliError::input("steps must be at least 2"));
    }
    grid(0.0, 1.0, steps)
        .into_iter()
        .map(|a| Ok((a, reversal_bsi_closed_form(a)?, reversal_bsi_numeric(a)?.bsi)))
        .collect()
}

/// The two-state reversal curve, analytic against numeric.
pub fn reversal_curve(steps: usize, g: &Global) -> Result<Output, CliError> {
    let rows = reversal_rows(steps)?;
    let max_diff = rows.iter().map(|(_, a, n)| (a - n).abs()).fold(0.0, f64::max);
    let primary = match g.format {
        Format::Csv => {
            let mut s = String::from("alpha,bsi_analytic,bsi_numeric\n");
            for (a, x, y) in &rows {
                s.push_str(&format!("{},{},{}\n", fmt17(*a), fmt17(*x), fmt17(*y)));
            }
            s.push_str(&format!("max_abs_diff,{},\n", fmt17(max_diff)));
            s
        }
        Format::Json => {
            let mut m = header("reversal-curve", g, json!({"steps": steps}));
            m.insert(
                "rows".into(),
                Value::Array(
                    rows.iter()
                        .map(|(a, x, y)| json!({"alpha": a, "bsi_analytic": x, "bsi_numeric": y}))
                        .collect(),
                ),
            );
            m.insert("max_abs_diff".into(), json!(max_diff));
            render(Value::Object(m), Format::Json)
        }
    };
    Ok(Output { primary, ..Default::default() })
}

#[derive(Debug, Clone)]
pub struct GaussArgs {
    pub scenario: GaussScenario,
    pub n: usize,
    pub k: usize,
    pub restarts: usize,
    pub objective: Objective,
    pub measure: GeometricMeasure,
    pub with_baselines: bool,
    pub points_out: Option<PathBuf>,
}

pub fn scenario_name(s: GaussScenario) -> &'static str {
    match s {
        GaussScenario::Balanced => "balanced",
        GaussScenario::Imbalanced => "imbalanced",
        GaussScenario::Overlapping => "overlapping",
    }
}

/// Samples a canonical mixture, clusters it and scores both partitions.
pub fn gauss_demo(args: &GaussArgs, g: &Global) -> Result<Output, CliError> {
    let spec = args.scenario.spec(args.n, g.seed);
    let truth = sample_mixture(&spec)?;
    let cfg = KMeansConfig::new(args.k).restarts(args.restarts).seed(g.seed).measure(args.measure);
    let best = best_of_restarts(truth.points(), &cfg, args.objective)?;
    let ds = best.labeled(truth.points())?;
    let eval = evaluate_partition(&ds, args.measure)?;
    let reference = evaluate_partition(&truth, args.measure)?;
    let mut warnings = partition_warnings(&eval, ds.d());

    let mut m = header(
        "gauss-demo",
        g,
        json!({
            "scenario": scenario_name(args.scenario),
            "n": args.n,
            "k": args.k,
            "restarts": args.restarts,
            "objective": objective_name(args.objective),
            "measure": measure_name(args.measure),
            "with_baselines": args.with_baselines,
            "mixture": spec.components,
        }),
    );
    m.insert("dataset".into(), json!({"n": ds.n(), "d": ds.d(), "k": ds.k()}));
    m.extend(partition_section(&eval, None));
    m.insert("clustering".into(), clustering_value(&best, args.objective, args.restarts));
    let baselines = if args.with_baselines { try_baselines(&ds, &mut warnings) } else { Value::Null };
    m.insert("baselines".into(), baselines);
    m.insert("reference".into(), json!({"bsi": reference.report}));
    m.insert("warnings".into(), json!(warnings));

    let mut out = Output {
        primary: render(Value::Object(m), g.format),
        diagnostics: warnings.iter().map(|w| format!("warning: {w}")).collect(),
        ..Default::default()
    };
    if let Some(p) = args.points_out.clone().or_else(|| sibling(g.out.as_deref(), "points.csv")) {
        let csv = dataset_csv(truth.points(), &[("component", truth.labels()), ("cluster", &best.assignments)]);
        out.files.push((p, csv));
    }
    Ok(out)
}
