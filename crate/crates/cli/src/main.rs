//! `slidearea` command-line driver.

mod billiard;
mod report;
mod scenario;
mod solve;
mod special;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::scenario::GaugeDesc;

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or input files.
    Input(String),
}

impl From<slidearea::Error> for CliError {
    fn from(e: slidearea::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

/// Output of a subcommand: the JSON report and whether its checks passed.
pub struct Outcome {
    pub json: String,
    pub failure: Option<String>,
}

impl Outcome {
    pub fn ok(json: String) -> Self {
        Self { json, failure: None }
    }

    pub fn checked(json: String, pass: bool, what: &str) -> Self {
        Self { json, failure: (!pass).then(|| what.to_string()) }
    }
}

#[derive(Parser)]
#[command(name = "slidearea", version, about = "Critical polygons of the signed area for vertices sliding on curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for critical polygons and classify them by Morse index.
    FindCritical {
        scenario: PathBuf,
        #[arg(long, value_enum)]
        gauge: Option<GaugeDesc>,
        #[arg(long)]
        starts: Option<usize>,
        #[command(flatten)]
        out: OutFiles,
    },
    /// Criticality verdicts for one configuration.
    Check {
        scenario: PathBuf,
        /// Comma-separated parameters, one per vertex.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        config: Vec<f64>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Run a built-in special-case verification.
    Special {
        #[arg(value_enum)]
        case: special::Case,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Iterate a billiard map on the first curve of the scenario.
    Billiard {
        scenario: PathBuf,
        #[arg(long, value_enum)]
        map: MapArg,
        /// Two boundary parameters, or an exterior point for the outer map.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1, required = true)]
        start: Vec<f64>,
        #[arg(long)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = SideArg::Left)]
        side: SideArg,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Search for closed billiard orbits of a given period and winding.
    ClosedOrbits {
        scenario: PathBuf,
        #[arg(long, value_enum)]
        map: MapArg,
        #[arg(long)]
        period: usize,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        winding: i64,
        #[arg(long, default_value_t = 16)]
        grid: usize,
        #[arg(long, value_enum, default_value_t = SideArg::Left)]
        side: SideArg,
    },
    /// Index-changing deformations of a critical polygon.
    Deform(DeformArgs),
}

#[derive(Args)]
struct OutFiles {
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
pub struct DeformArgs {
    pub scenario: PathBuf,
    #[arg(long, value_enum)]
    pub op: DeformOp,
    /// Starting critical configuration; defaults to the first Morse critical polygon found.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub config: Option<Vec<f64>>,
    /// Vertex (zero based) to deform.
    #[arg(long, default_value_t = 0)]
    pub at: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub radius: Option<f64>,
    /// Translation radius for morsify.
    #[arg(long, default_value_t = 0.05)]
    pub rho: f64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DeformOp {
    Zigzag,
    GrowTangent,
    GrowCentered,
    Morsify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MapArg {
    InnerArea,
    Perimeter,
    OuterArea,
}

impl From<MapArg> for slidearea::billiards::MapKind {
    fn from(m: MapArg) -> Self {
        use slidearea::billiards::MapKind;
        match m {
            MapArg::InnerArea => MapKind::InnerArea,
            MapArg::Perimeter => MapKind::Perimeter,
            MapArg::OuterArea => MapKind::OuterArea,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

impl From<SideArg> for slidearea::billiards::Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Left => slidearea::billiards::Side::Left,
            SideArg::Right => slidearea::billiards::Side::Right,
        }
    }
}

fn dispatch(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::FindCritical { scenario, gauge, starts, out } => {
            solve::find_critical(&scenario, gauge, starts, out.json.as_deref(), out.svg.as_deref())
        }
        Command::Check { scenario, config, tol } => solve::check(&scenario, &config, tol),
        Command::Special { case, seed } => special::run(case, seed),
        Command::Billiard { scenario, map, start, steps, side, csv, svg } => {
            billiard::run(&scenario, map, &start, steps, side, csv.as_deref(), svg.as_deref())
        }
        Command::ClosedOrbits { scenario, map, period, winding, grid, side } => {
            billiard::closed_orbits(&scenario, map, period, winding, grid, side)
        }
        Command::Deform(args) => solve::deform(&args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli) {
        Ok(out) => {
            print!("{}", out.json);
            match out.failure {
                None => ExitCode::SUCCESS,
                Some(msg) => {
                    eprintln!("slidearea: verification failed: {msg}");
                    ExitCode::from(2)
                }
            }
        }
        Err(CliError::Input(msg)) => {
            eprintln!("slidearea: {msg}");
            ExitCode::from(1)
        }
    }
}
