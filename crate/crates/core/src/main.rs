fn main() {
    std::process::exit(mtp_prover::cli::run(std::env::args_os()));
}
