fn main() {
    std::process::exit(borcherds::cli::run(std::env::args_os()));
}
