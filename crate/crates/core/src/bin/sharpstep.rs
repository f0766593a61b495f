fn main() {
    std::process::exit(sharpstep::cli::run(std::env::args_os()));
}
