fn main() {
    std::process::exit(tnf::cli::dispatch(std::env::args_os()));
}
