use clap::Parser;

fn main() {
    std::process::exit(hamnf_cli::run(hamnf_cli::Cli::parse()));
}
