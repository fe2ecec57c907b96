fn main() {
    let code = kreinlab::cli::run(std::env::args().skip(1));
    std::process::exit(code);
}
