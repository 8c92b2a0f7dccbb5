fn main() {
    std::process::exit(twistkit::cli::run(std::env::args_os()));
}
