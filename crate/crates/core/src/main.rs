fn main() {
    std::process::exit(olsconv::cli::run(std::env::args_os()));
}
