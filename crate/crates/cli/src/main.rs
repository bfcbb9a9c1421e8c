use std::path::PathBuf;
use std::process::ExitCode;

use bsi_cli::commands::{self, GaussArgs, Global, KMeansArgs, ScoreArgs, SweepArgs};
use bsi_cli::{CliError, ColumnRef, Format};
use bsi_core::{GaussScenario, GeometricMeasure, Objective};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bsi", version, about = "Boltzmann-Shannon Index for clustered data")]
struct Cli {
    /// Seed for every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the main result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureArg {
    Spread,
    Volume,
}

impl From<MeasureArg> for GeometricMeasure {
    fn from(m: MeasureArg) -> Self {
        match m {
            MeasureArg::Spread => GeometricMeasure::Spread,
            MeasureArg::Volume => GeometricMeasure::Volume,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Bsi,
    Inertia,
}

impl From<ObjectiveArg> for Objective {
    fn from(o: ObjectiveArg) -> Self {
        match o {
            ObjectiveArg::Bsi => Objective::MaxBsi,
            ObjectiveArg::Inertia => Objective::MinInertia,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioArg {
    Balanced,
    Imbalanced,
    Overlapping,
}

#[derive(Subcommand)]
enum Command {
    /// Score a labelled CSV.
    Score {
        input: PathBuf,
        /// Label column, by header name or 0-based index (default: last column).
        #[arg(long)]
        label_column: Option<ColumnRef>,
        /// Columns to ignore (repeatable).
        #[arg(long)]
        exclude: Vec<String>,
        #[arg(long, value_enum, default_value_t = MeasureArg::Spread)]
        measure: MeasureArg,
        #[arg(long)]
        with_baselines: bool,
    },
    /// Cluster an unlabelled CSV with K-means and score the result.
    Kmeans {
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 200)]
        restarts: usize,
        #[arg(long, value_enum, default_value_t = ObjectiveArg::Bsi)]
        objective: ObjectiveArg,
        #[arg(long, value_enum, default_value_t = MeasureArg::Spread)]
        measure: MeasureArg,
        #[arg(long, default_value_t = 300)]
        max_iterations: usize,
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
        /// Columns to ignore (repeatable).
        #[arg(long)]
        exclude: Vec<String>,
        /// Reference labels: excluded from the features, scored for comparison.
        #[arg(long)]
        label_column: Option<ColumnRef>,
        #[arg(long)]
        with_baselines: bool,
        /// Cluster assignments CSV (default: `<out stem>.labels.csv` when --out is set).
        #[arg(long)]
        labels_out: Option<PathBuf>,
    },
    /// Sweep the allocation skew beta over synthetic groups.
    SweepBeta {
        /// Population shares, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = [0.950, 0.049, 0.001])]
        population: Vec<f64>,
        #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
        beta_min: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        beta_max: f64,
        #[arg(long, default_value_t = 41)]
        steps: usize,
        #[arg(long, default_value_t = 500_000)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, value_enum, default_value_t = MeasureArg::Spread)]
        measure: MeasureArg,
    },
    /// Two-state reversal curve, closed form against numeric.
    ReversalCurve {
        #[arg(long, default_value_t = 201)]
        steps: usize,
    },
    /// Sample a canonical Gaussian mixture, cluster and score it.
    GaussDemo {
        #[arg(long, value_enum, default_value_t = ScenarioArg::Balanced)]
        scenario: ScenarioArg,
        #[arg(long, default_value_t = 900)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[arg(long, value_enum, default_value_t = ObjectiveArg::Bsi)]
        objective: ObjectiveArg,
        #[arg(long, value_enum, default_value_t = MeasureArg::Spread)]
        measure: MeasureArg,
        #[arg(long)]
        with_baselines: bool,
        /// Point cloud CSV (default: `<out stem>.points.csv` when --out is set).
        #[arg(long)]
        points_out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let g = Global {
        seed: cli.seed,
        out: cli.out,
        format: match cli.format {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        },
    };
    let output = match cli.command {
        Command::Score { input, label_column, exclude, measure, with_baselines } => commands::score(
            &ScoreArgs {
                input,
                label_column: label_column.unwrap_or(ColumnRef::Last),
                exclude,
                measure: measure.into(),
                with_baselines,
            },
            &g,
        )?,
        Command::Kmeans {
            input,
            k,
            restarts,
            objective,
            measure,
            max_iterations,
            tolerance,
            exclude,
            label_column,
            with_baselines,
            labels_out,
        } => commands::kmeans(
            &KMeansArgs {
                input,
                k,
                restarts,
                objective: objective.into(),
                measure: measure.into(),
                max_iterations,
                tolerance,
                exclude,
                label_column,
                with_baselines,
                labels_out,
            },
            &g,
        )?,
        Command::SweepBeta { population, beta_min, beta_max, steps, n, dim, measure } => commands::sweep_beta(
            &SweepArgs { population, beta_min, beta_max, steps, n, dim, measure: measure.into() },
            &g,
        )?,
        Command::ReversalCurve { steps } => commands::reversal_curve(steps, &g)?,
        Command::GaussDemo { scenario, n, k, restarts, objective, measure, with_baselines, points_out } => {
            commands::gauss_demo(
                &GaussArgs {
                    scenario: match scenario {
                        ScenarioArg::Balanced => GaussScenario::Balanced,
                        ScenarioArg::Imbalanced => GaussScenario::Imbalanced,
                        ScenarioArg::Overlapping => GaussScenario::Overlapping,
                    },
                    n,
                    k,
                    restarts,
                    objective: objective.into(),
                    measure: measure.into(),
                    with_baselines,
                    points_out,
                },
                &g,
            )?
        }
    };
    output.emit(g.out.as_deref())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
