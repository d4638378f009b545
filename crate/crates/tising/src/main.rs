fn main() {
    std::process::exit(tising::cli::main_entry());
}
