use clap::Parser;
use ship_cli::Cli;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("SHIP_LOG", "warn")).init();
    if let Err(e) = ship_cli::run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
