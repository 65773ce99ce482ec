fn main() {
    std::process::exit(cheb_core::cli::run());
}
