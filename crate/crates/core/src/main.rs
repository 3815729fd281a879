fn main() {
    std::process::exit(hpint::cli::main_with_env());
}
