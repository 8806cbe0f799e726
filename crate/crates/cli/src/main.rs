use std::fmt;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod args;
mod commands;
mod config;
mod figures;
mod output;
mod plot;
mod scenario;
mod solve;

/// Bad flags, config files or sweep definitions. Exits with code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Parser, Debug)]
#[command(name = "vaxgame", version, about = "Influencer-driven vaccination: equilibria, incentives and figure data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evolutionarily stable states and the eradication threshold of the public.
    AnalyzeEss(commands::EssCmd),
    /// Equilibrium vaccination of influencers under a fixed incentive.
    SolveInfluencerGame(commands::GameCmd),
    /// Leader's cheapest incentive meeting a failure budget.
    OptimizeLeader(commands::LeaderCmd),
    /// Population trajectory from the mean-field ODE and/or the jump process.
    Simulate(commands::SimulateCmd),
    /// Regenerate the data behind one of the numerical figures.
    ReproduceFig(figures::FigCmd),
    /// Run a sweep described by a scenario file.
    RunScenario(scenario::ScenarioCmd),
}

/// Exit code for an error chain: 2 for invalid input, 3 when influencers cannot
/// make eradication stable, 1 otherwise.
fn exit_code(err: &anyhow::Error) -> u8 {
    use vaxgame_core::Error as E;
    for cause in err.chain() {
        if cause.is::<UsageError>() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<E>() {
            return match e {
                E::InsufficientInfluence => 3,
                E::InvalidParameter(_) | E::NotAdmissible | E::NoInterventionNeeded | E::Domain(_) => 2,
                _ => 1,
            };
        }
    }
    1
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::AnalyzeEss(c) => commands::analyze_ess(c),
        Command::SolveInfluencerGame(c) => commands::solve_game(c),
        Command::OptimizeLeader(c) => commands::optimize_leader(c),
        Command::Simulate(c) => commands::simulate(c),
        Command::ReproduceFig(c) => figures::reproduce(c),
        Command::RunScenario(c) => scenario::run(c),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
