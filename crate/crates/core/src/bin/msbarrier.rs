fn main() {
    std::process::exit(multistep_barrier::cli::run(std::env::args_os()));
}
