use std::process::ExitCode;

use clap::Parser;

use refloom::cli::{self, CliConfig};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let config = CliConfig::parse();
    let code = cli::run(&config, &mut std::io::stderr().lock());
    ExitCode::from(code)
}
