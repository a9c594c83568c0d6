fn main() {
    std::process::exit(bubbletree::cli::main());
}
