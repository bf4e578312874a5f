fn main() {
    std::process::exit(phasekit::cli::run(std::env::args_os()));
}
