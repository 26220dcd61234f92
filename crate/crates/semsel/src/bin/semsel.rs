use clap::Parser;

fn main() {
    let cli = semsel::cli::Cli::parse();
    std::process::exit(cli.execute());
}
