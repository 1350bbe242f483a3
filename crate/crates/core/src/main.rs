use clap::Parser;

fn main() {
    let cli = subshift::cli::Cli::parse();
    std::process::exit(subshift::cli::run(cli));
}
