fn main() {
    std::process::exit(treegram::cli::run());
}
