fn main() {
    std::process::exit(frlp_cli::run(std::env::args_os()));
}
