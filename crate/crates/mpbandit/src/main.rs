use clap::Parser;

fn main() {
    let cli = mpbandit::cli::Cli::parse();
    std::process::exit(mpbandit::cli::run(cli));
}
