fn main() {
    std::process::exit(mlineq::cli::run(std::env::args_os()));
}
