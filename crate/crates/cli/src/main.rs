fn main() {
    std::process::exit(freetwist_cli::dispatch(std::env::args_os()));
}
