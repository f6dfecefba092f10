fn main() {
    std::process::exit(jacobi_spectra::cli::main_with_args(std::env::args_os()));
}
