use clap::Parser;

use pepgrad::args::{Cli, Command};
use pepgrad::commands;

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Bound(args) => commands::cmd_bound(args),
        Command::PepSolve(args) => commands::cmd_pep_solve(args),
        Command::Certify(args) => commands::cmd_certify(args),
        Command::Tight(args) => commands::cmd_tight(args),
        Command::Sweep(args) => commands::cmd_sweep(args),
        Command::CheckInterp(args) => commands::cmd_check_interp(args),
    };
    if let Err(err) = result {
        eprintln!("{err}");
        std::process::exit(err.exit_code());
    }
}
