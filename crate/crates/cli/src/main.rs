mod args;
mod commands;

use clap::Parser;

use args::{Cli, Command};

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate(a) => commands::validate(a),
        Command::Schedule(a) => commands::schedule(a),
        Command::Insert(a) => commands::insert(a),
        Command::Report(a) => commands::report(a),
        Command::Replay(a) => commands::replay_fixture(a),
        Command::Export(a) => commands::export(a),
        Command::Serve(a) => commands::serve(a),
    };
    if let Err(e) = result {
        eprintln!("{}", e.to_json());
        std::process::exit(e.exit_code());
    }
}
