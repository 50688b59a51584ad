use clap::Parser;

fn main() {
    let cli = eulerlab_cli::Cli::parse();
    std::process::exit(eulerlab_cli::run(&cli));
}
