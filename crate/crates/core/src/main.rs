fn main() {
    std::process::exit(zenscope::cli::run_from(std::env::args_os()));
}
