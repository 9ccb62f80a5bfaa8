fn main() {
    std::process::exit(knotfoam_cli::main_with_args(std::env::args()));
}
