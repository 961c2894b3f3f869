//! Subcommand definitions and their implementations.

use std::path::{Path as FsPath, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use sectorplan::{load_scenario, save_scenario, PlannerKind, Scenario, ScenarioKind, ScenarioParams};

use crate::campaign::{run_campaign, summarize, summary_csv, summary_table, CampaignSpec, CellSpec};
use crate::error::CliError;
use crate::records::to_csv;
use crate::result_file::ResultFile;
use crate::settings::{run_to_outcome, PlannerTuning};
use crate::svg::{render_svg, SvgOptions};

/// How a command finished when it did not fail outright.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    NoPathFound,
}

#[derive(Debug, Parser)]
#[command(
    name = "sectorplan",
    version,
    about = "Sampling-based 2D path planning: RRT* and angle-bounded directed RRT*"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a seeded scenario file.
    GenScenario(GenScenarioArgs),
    /// Plan on a scenario file and write a result file.
    Plan(PlanArgs),
    /// Run paired benchmark trials and write CSV.
    Bench(BenchArgs),
    /// Draw a stored result as SVG.
    Render(RenderArgs),
}

fn parse_generated_kind(s: &str) -> Result<ScenarioKind, String> {
    match s.parse::<ScenarioKind>() {
        Ok(k) if k != ScenarioKind::Custom => Ok(k),
        _ => Err(format!("expected one of S1, S2, S3, S4, S5, S6, got {s:?}")),
    }
}

#[derive(Debug, Args)]
pub struct MapArgs {
    #[arg(long, default_value_t = ScenarioParams::default().width)]
    pub width: f64,
    #[arg(long, default_value_t = ScenarioParams::default().height)]
    pub height: f64,
    #[arg(long, default_value_t = ScenarioParams::default().obstacle_radius)]
    pub obstacle_radius: f64,
}

impl MapArgs {
    pub fn params(&self) -> ScenarioParams {
        ScenarioParams {
            width: self.width,
            height: self.height,
            obstacle_radius: self.obstacle_radius,
        }
    }
}

#[derive(Debug, Args)]
pub struct GenScenarioArgs {
    /// Obstacle layout, S1..S6.
    #[arg(long, value_parser = parse_generated_kind)]
    pub kind: ScenarioKind,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Override the kind's obstacle count (the file is then tagged custom).
    #[arg(long)]
    pub obstacles: Option<usize>,
    #[command(flatten)]
    pub map: MapArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlannerChoice {
    RrtStar,
    AdRrtStar,
    Both,
}

impl PlannerChoice {
    fn planners(self) -> Vec<PlannerKind> {
        match self {
            PlannerChoice::RrtStar => vec![PlannerKind::RrtStar],
            PlannerChoice::AdRrtStar => vec![PlannerKind::AdRrtStar],
            PlannerChoice::Both => vec![PlannerKind::RrtStar, PlannerKind::AdRrtStar],
        }
    }
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[arg(long)]
    pub scenario: PathBuf,
    #[arg(long, value_enum, default_value_t = PlannerChoice::AdRrtStar)]
    pub planner: PlannerChoice,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Result file. With `--planner both` the planner name is appended to
    /// the file stem.
    #[arg(long, default_value = "result.json")]
    pub out: PathBuf,
    /// Also write an SVG drawing (same naming rule as `--out`).
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Store wall time in the result file (makes it run-dependent).
    #[arg(long)]
    pub record_elapsed: bool,
    #[command(flatten)]
    pub tuning: PlannerTuning,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Comma-separated cells: a kind, optionally with an obstacle count (S4:100).
    #[arg(long, value_delimiter = ',', default_value = "S1,S2,S3,S4,S5,S6")]
    pub cells: Vec<CellSpec>,
    #[arg(long, default_value_t = 20)]
    pub trials: u64,
    /// Trial t uses seed base_seed + t for both the scenario and the planners.
    #[arg(long, default_value_t = 0)]
    pub base_seed: u64,
    /// Worker threads.
    #[arg(long, env = "SECTORPLAN_THREADS")]
    pub threads: Option<usize>,
    /// Per-run CSV.
    #[arg(long, default_value = "bench.csv")]
    pub out: PathBuf,
    /// Per-cell medians as CSV.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    #[command(flatten)]
    pub map: MapArgs,
    #[command(flatten)]
    pub tuning: PlannerTuning,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long)]
    pub result: PathBuf,
    #[arg(long)]
    pub scenario: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Pixel size of the longer map side.
    #[arg(long, default_value_t = 800.0)]
    pub size: f64,
    #[arg(long)]
    pub hide_tree: bool,
}

fn write_file(path: &FsPath, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// `dir/stem.ext` becomes `dir/stem-<planner>.ext`.
pub fn suffixed(path: &FsPath, planner: PlannerKind) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}-{planner}.{}", ext.to_string_lossy()),
        None => format!("{stem}-{planner}"),
    };
    path.with_file_name(name)
}

pub fn gen_scenario(args: &GenScenarioArgs) -> Result<Outcome, CliError> {
    let params = args.map.params();
    let cell = CellSpec {
        distribution: args.kind,
        obstacle_count: args
            .obstacles
            .unwrap_or_else(|| CellSpec::named(args.kind).obstacle_count),
    };
    let s = cell.scenario(args.seed, params)?;
    save_scenario(&s, &args.out)?;
    println!(
        "kind={} obstacles={} seed={} file={}",
        s.kind(),
        s.obstacles().len(),
        s.seed(),
        args.out.display()
    );
    Ok(Outcome::Success)
}

pub fn plan(args: &PlanArgs) -> Result<Outcome, CliError> {
    let scenario = load_scenario(&args.scenario)?;
    let planners = args.planner.planners();
    let multiple = planners.len() > 1;
    let mut outcome = Outcome::Success;
    for planner in planners {
        let settings = args.tuning.settings(planner, &scenario, args.seed);
        let result = run_to_outcome(&settings, &scenario)?;
        let file = ResultFile::new(&result, &scenario, &settings, args.record_elapsed);
        let out = if multiple {
            suffixed(&args.out, planner)
        } else {
            args.out.clone()
        };
        write_file(&out, &file.to_json())?;
        if let Some(svg) = &args.svg {
            let svg_out = if multiple { suffixed(svg, planner) } else { svg.clone() };
            write_file(&svg_out, &render_svg(&result, &scenario, &SvgOptions::default())?)?;
        }
        let cost = |c: Option<f64>| c.map_or_else(|| "-".to_string(), |c| format!("{c:.3}"));
        println!(
            "planner={} success={} nodes={} total_cost={} average_cost={} elapsed_s={:.3} result={}",
            planner,
            result.success(),
            result.metrics.node_count,
            cost(result.metrics.total_path_cost),
            cost(result.metrics.average_path_cost),
            result.metrics.elapsed.as_secs_f64(),
            out.display()
        );
        if !result.success() {
            outcome = Outcome::NoPathFound;
        }
    }
    Ok(outcome)
}

pub fn bench(args: &BenchArgs) -> Result<Outcome, CliError> {
    let spec = CampaignSpec {
        cells: args.cells.clone(),
        trials: args.trials,
        base_seed: args.base_seed,
        params: args.map.params(),
        tuning: args.tuning.clone(),
        threads: args.threads,
    };
    let records = run_campaign(&spec)?;
    write_file(&args.out, &to_csv(&records))?;
    let summary = summarize(&records);
    if let Some(path) = &args.summary {
        write_file(path, &summary_csv(&summary))?;
    }
    print!("{}", summary_table(&summary));
    Ok(Outcome::Success)
}

/// Re-runs the recorded configuration to recover the tree, checks it
/// reproduces the stored path, then draws it.
pub fn render(args: &RenderArgs) -> Result<Outcome, CliError> {
    let file = ResultFile::load(&args.result)?;
    let scenario: Scenario = load_scenario(&args.scenario)?;
    let digest = scenario.digest();
    if digest != file.scenario_digest {
        return Err(CliError::DigestMismatch {
            result: file.scenario_digest,
            scenario: digest,
        });
    }
    let result = run_to_outcome(&file.config, &scenario)?;
    let stored = result.path.as_ref().map(|p| p.waypoints().to_vec());
    if stored != file.path {
        return Err(CliError::NotReproduced);
    }
    let opts = SvgOptions {
        size: args.size,
        show_tree: !args.hide_tree,
        show_sector: true,
    };
    write_file(&args.out, &render_svg(&result, &scenario, &opts)?)?;
    println!("rendered {} to {}", args.result.display(), args.out.display());
    Ok(Outcome::Success)
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::GenScenario(a) => gen_scenario(a),
        Command::Plan(a) => plan(a),
        Command::Bench(a) => bench(a),
        Command::Render(a) => render(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suffix_naming() {
        assert_eq!(
            suffixed(FsPath::new("out/r.json"), PlannerKind::AdRrtStar),
            PathBuf::from("out/r-ad_rrt_star.json")
        );
        assert_eq!(
            suffixed(FsPath::new("r"), PlannerKind::RrtStar),
            PathBuf::from("r-rrt_star")
        );
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
