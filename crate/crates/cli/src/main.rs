use clap::Parser;

fn main() {
    let cli = cvres_cli::Cli::parse();
    let code = cvres_cli::main_with(&cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
