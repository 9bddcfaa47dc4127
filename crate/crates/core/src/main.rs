fn main() {
    std::process::exit(bohr_lab::cli::main_with_args(std::env::args_os()));
}
