use clap::Parser;

fn main() {
    let cli = efcce_cli::Cli::parse();
    if let Err(e) = cli.validate() {
        e.exit();
    }
    std::process::exit(efcce_cli::run(&cli));
}
