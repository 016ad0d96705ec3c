fn main() {
    std::process::exit(plankton_dynamics::cli::run());
}
