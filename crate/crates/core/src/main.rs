use clap::Parser;

fn main() {
    let args = qplancherel::cli::Args::parse();
    std::process::exit(qplancherel::cli::run(args));
}
