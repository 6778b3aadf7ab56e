fn main() {
    std::process::exit(seqwit::cli::main_with(std::env::args_os()));
}
