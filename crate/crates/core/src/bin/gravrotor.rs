fn main() {
    std::process::exit(gravrotor::cli::run(std::env::args_os()));
}
