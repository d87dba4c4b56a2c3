fn main() {
    std::process::exit(torus_srb::cli::main_with_args(std::env::args_os()));
}
