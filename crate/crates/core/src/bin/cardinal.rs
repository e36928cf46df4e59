fn main() {
    std::process::exit(cardinal::cli::dispatch(std::env::args_os().skip(1)));
}
