fn main() {
    std::process::exit(heisengauss::cli::run());
}
