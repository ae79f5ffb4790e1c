use clap::Parser;

fn main() {
    env_logger::init();
    let code = kconvex_cli::run(kconvex_cli::Cli::parse());
    std::process::exit(code.as_i32());
}
