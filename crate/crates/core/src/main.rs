fn main() {
    std::process::exit(kkdisp::cli::run(std::env::args_os()));
}
