fn main() {
    let stdin = std::io::stdin();
    let mut input = stdin.lock();
    let code = systole_cli::run(std::env::args_os(), &mut input, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
