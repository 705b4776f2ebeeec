fn main() {
    std::process::exit(mixspin::cli::run(std::env::args_os()));
}
