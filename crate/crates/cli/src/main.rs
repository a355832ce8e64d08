fn main() {
    std::process::exit(armik_cli::main_exit());
}
