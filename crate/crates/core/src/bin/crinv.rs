use clap::Parser;

fn main() {
    let cli = crinv::cli::Cli::parse();
    let code = crinv::cli::main_with(cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
