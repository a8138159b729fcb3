use clap::Parser;

fn main() {
    let cli = qvlens_cli::Cli::parse();
    std::process::exit(qvlens_cli::run(&cli));
}
