fn main() {
    std::process::exit(graphseq::cli::run(std::env::args_os()));
}
