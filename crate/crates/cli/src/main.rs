fn main() {
    let stdout = std::io::stdout();
    let code = mdm_cli::run_from(std::env::args_os(), &mut stdout.lock());
    std::process::exit(code);
}
