fn main() {
    std::process::exit(twolevel_charger::cli::run(std::env::args()));
}
