fn main() {
    std::process::exit(coherence_roof::cli::main_entry());
}
