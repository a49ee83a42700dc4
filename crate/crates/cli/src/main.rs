fn main() {
    std::process::exit(mstsense_cli::run());
}
