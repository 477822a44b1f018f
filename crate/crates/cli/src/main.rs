use clap::Parser;

fn main() {
    let cli = bigs_cli::Cli::parse();
    let code = match bigs_cli::execute(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            bigs_cli::exit_code(&err)
        }
    };
    std::process::exit(code);
}
