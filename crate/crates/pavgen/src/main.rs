use clap::Parser;

fn main() {
    let cli = pavgen::cli::Cli::parse();
    std::process::exit(pavgen::cli::run(cli));
}
