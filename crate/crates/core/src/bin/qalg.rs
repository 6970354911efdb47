fn main() {
    std::process::exit(qubit_algebras::cli::run(std::env::args_os()));
}
